#include "ellround/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ellround {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tableau rows 0..m-1 are constraints, row m is the objective (reduced costs), last column is rhs.
struct Tableau {
    Matrix t;
    std::vector<Eigen::Index> basis;
};

// Runs Bland's-rule pivots on the columns allowed by `allowed`; false if unbounded.
bool run_simplex(Tableau& tab, const std::vector<bool>& allowed, double tol) {
    const Eigen::Index m = static_cast<Eigen::Index>(tab.basis.size());
    const Eigen::Index ncols = tab.t.cols() - 1;
    for (int iter = 0; iter < 50000; ++iter) {
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < ncols; ++j) {
            if (allowed[j] && tab.t(m, j) < -tol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return true;
        Eigen::Index leave = -1;
        double best = kInf;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double a = tab.t(i, enter);
            if (a > tol) {
                const double ratio = tab.t(i, ncols) / a;
                if (ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 && leave >= 0 && tab.basis[i] < tab.basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return false;
        tab.t.row(leave) /= tab.t(leave, enter);
        for (Eigen::Index i = 0; i <= m; ++i) {
            if (i != leave && tab.t(i, enter) != 0.0) tab.t.row(i) -= tab.t(i, enter) * tab.t.row(leave);
        }
        tab.basis[leave] = enter;
    }
    throw std::runtime_error("solve_lp: iteration limit");
}

Vector random_unit(std::mt19937_64& rng, Eigen::Index k) { return detail::random_unit<double>(rng, k); }

}  // namespace

LpResult solve_lp(const Matrix& a, const Vector& b, const Vector& c, double tol) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (b.size() != m || c.size() != n) throw std::invalid_argument("solve_lp: dimension mismatch");
    if (!a.allFinite() || !b.allFinite() || !c.allFinite()) throw std::invalid_argument("solve_lp: non-finite input");

    Tableau tab;
    tab.t = Matrix::Zero(m + 1, n + m + 1);
    tab.basis.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double sign = b(i) < 0 ? -1.0 : 1.0;
        tab.t.row(i).head(n) = sign * a.row(i);
        tab.t(i, n + i) = 1.0;
        tab.t(i, n + m) = sign * b(i);
        tab.basis[i] = n + i;
    }
    // Phase 1: minimize the sum of artificials.
    for (Eigen::Index i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
    for (Eigen::Index i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
    std::vector<bool> allowed(n + m, true);
    run_simplex(tab, allowed, tol);
    LpResult res;
    const double phase1 = -tab.t(m, n + m);
    const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
    if (phase1 > tol * bscale) {
        res.status = LpStatus::infeasible;
        res.objective = phase1;
        return res;
    }
    // Drive artificials out of the basis where possible.
    for (Eigen::Index i = 0; i < m; ++i) {
        if (tab.basis[i] < n) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(tab.t(i, j)) > tol) {
                tab.t.row(i) /= tab.t(i, j);
                for (Eigen::Index r = 0; r <= m; ++r) {
                    if (r != i && tab.t(r, j) != 0.0) tab.t.row(r) -= tab.t(r, j) * tab.t.row(i);
                }
                tab.basis[i] = j;
                break;
            }
        }
    }
    // Phase 2 objective row.
    tab.t.row(m).setZero();
    tab.t.row(m).head(n) = c.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index j = tab.basis[i];
        if (j < n && c(j) != 0.0) tab.t.row(m) -= c(j) * tab.t.row(i);
    }
    for (Eigen::Index j = n; j < n + m; ++j) allowed[j] = false;
    const bool bounded = run_simplex(tab, allowed, tol);
    res.x = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (tab.basis[i] < n) res.x(tab.basis[i]) = tab.t(i, n + m);
    }
    res.objective = c.dot(res.x);
    res.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
    return res;
}

bool hull_membership(const PointList& points, const Vector& x, double tol) {
    if (points.empty()) throw std::invalid_argument("hull_membership: no points");
    const Eigen::Index d = x.size();
    if (!x.allFinite()) throw std::invalid_argument("hull_membership: non-finite query");
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    double scale = 0;
    for (const Vector& p : points) {
        if (p.size() != d) throw std::invalid_argument("hull_membership: dimension mismatch");
        if (!p.allFinite()) throw std::invalid_argument("hull_membership: non-finite point");
        scale = std::max(scale, (p - x).norm());
    }
    if (scale == 0) return true;
    Matrix a(d + 1, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        a.col(j).head(d) = (points[j] - x) / scale;
        a(d, j) = 1.0;
    }
    Vector b = Vector::Zero(d + 1);
    b(d) = 1.0;
    const LpResult r = solve_lp(a, b, Vector::Zero(n), tol);
    return r.status != LpStatus::infeasible;
}

double hull_support(const HullSpec& h, const Vector& u) {
    if (h.points.empty() && h.ellipsoids.empty()) throw std::invalid_argument("hull_support: empty spec");
    double best = -kInf;
    for (const Vector& p : h.points) best = std::max(best, p.dot(u));
    for (const auto& e : h.ellipsoids) {
        double v = e.body.center().dot(u);
        if (e.body.rank() > 0) v += e.alpha * e.body.semiaxes().cwiseProduct(e.body.axes().transpose() * u).norm();
        best = std::max(best, v);
    }
    return best;
}

StepCertificate check_monotone_step(const State& prev, const State& next, const Vector& z, double tol) {
    const Eigen::Index d = next.outer.dim();
    if (prev.outer.dim() != d || z.size() != d) throw std::invalid_argument("check_monotone_step: dimension mismatch");
    StepCertificate cert;
    const Eigen::Index m = next.dim();

    // Outer inclusion and coverage of z.
    const ContainmentResult<double> cont = containment_check(next.outer, prev.outer, tol);
    const double zm = membership(next.outer, z, kSpanTolerance);
    cert.outer_margin = std::min(-cont.excess, -zm);
    if (!std::isfinite(cert.outer_margin)) cert.outer_margin = -kInf;
    cert.outer_ok = cert.outer_margin >= -tol;
    if (!cert.outer_ok) {
        if (cont.violating_direction && -cont.excess < -tol) {
            cert.violating_direction = cont.violating_direction;
        } else {
            Vector dir = z - next.center();
            cert.violating_direction = dir.norm() > 0 ? Vector(dir.normalized()) : Vector(Vector::Unit(d, 0));
        }
    }

    if (m == 0) {
        // A single point: inner body is the point itself.
        const bool same = (next.center() - z).norm() <= tol * std::max(1.0, z.norm()) ||
                          (next.center() - prev.center()).norm() <= tol * std::max(1.0, z.norm());
        cert.inner_ok = same;
        cert.inner_exact = true;
        cert.slice_margin = cert.sampled_margin = same ? 0.0 : -kInf;
        cert.worst_margin = std::min(cert.outer_margin, cert.slice_margin);
        if (!same && !cert.violating_direction) cert.violating_direction = Vector::Unit(d, 0);
        return cert;
    }

    // Normalized coordinates: next outer -> unit ball of R^m.
    const Matrix& vn = next.outer.axes();
    const Vector inv = next.outer.semiaxes().cwiseInverse();
    auto to_local = [&](const Vector& x) { return Vector(inv.asDiagonal() * (vn.transpose() * (x - next.center()))); };
    const double scale = std::max({1.0, (z - next.center()).norm(), next.outer.semiaxes().maxCoeff()});
    auto off_next_span = [&](const Vector& x) {
        Vector r = x - next.center();
        for (int pass = 0; pass < 2; ++pass) r -= vn * (vn.transpose() * r);
        return r.norm();
    };
    bool prev_axes_inside = true;
    for (Eigen::Index j = 0; j < prev.dim(); ++j) {
        Vector r = prev.outer.axes().col(j);
        r -= vn * (vn.transpose() * r);
        prev_axes_inside = prev_axes_inside && r.norm() <= 1e-6;
    }
    if (!prev_axes_inside || off_next_span(z) > 1e-6 * scale || off_next_span(prev.center()) > 1e-6 * scale) {
        throw std::invalid_argument("check_monotone_step: span mismatch");
    }
    const Vector zh = to_local(z);
    const Vector cp = to_local(prev.center());
    Matrix mp(m, prev.dim());
    if (prev.dim() > 0) mp = inv.asDiagonal() * (vn.transpose() * prev.outer.shape_map());
    const double ap = prev.alpha;
    const double an = next.alpha;

    auto margin = [&](const Vector& u) {
        double h_prev = cp.dot(u);
        if (prev.dim() > 0) h_prev += ap * (mp.transpose() * u).norm();
        return std::max(h_prev, zh.dot(u)) - an * u.norm();
    };

    // Slice plane: axis from prev center to z, plus one orthogonal direction.
    Vector e = zh - cp;
    if (e.norm() == 0) e = Vector::Unit(m, 0);
    e.normalize();
    Vector f = Vector::Zero(m);
    if (m > 1) {
        const Matrix pm = mp * mp.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> es(pm);
        double best = -1;
        for (Eigen::Index i = 0; i < m; ++i) {
            Vector cand = es.eigenvectors().col(i) - e.dot(es.eigenvectors().col(i)) * e;
            if (cand.norm() > best) {
                best = cand.norm();
                f = cand;
            }
        }
        if (best < 1e-8) {
            Vector cand = Vector::Unit(m, std::abs(e(0)) < 0.9 ? 0 : 1);
            f = cand - e.dot(cand) * e;
        }
        f.normalize();
    }
    double slice = kInf;
    Vector slice_arg = e;
    if (m == 1) {
        for (double s : {1.0, -1.0}) {
            const double v = margin(s * e);
            if (v < slice) {
                slice = v;
                slice_arg = s * e;
            }
        }
    } else {
        const int samples = 2048;
        const double two_pi = 2 * std::acos(-1.0);
        auto at = [&](double th) { return Vector(std::cos(th) * e + std::sin(th) * f); };
        double best_th = 0;
        for (int i = 0; i < samples; ++i) {
            const double th = two_pi * i / samples;
            const double v = margin(at(th));
            if (v < slice) {
                slice = v;
                best_th = th;
            }
        }
        double lo = best_th - two_pi / samples, hi = best_th + two_pi / samples;
        const double g = (std::sqrt(5.0) - 1) / 2;
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = margin(at(x1)), f2 = margin(at(x2));
        for (int it = 0; it < 80; ++it) {
            if (f1 < f2) {
                hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = margin(at(x1));
            } else {
                lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = margin(at(x2));
            }
        }
        for (double th : {x1, x2, best_th}) {
            const double v = margin(at(th));
            if (v <= slice) {
                slice = v;
                slice_arg = at(th);
            }
        }
    }

    double sampled = kInf;
    Vector sampled_arg = e;
    std::mt19937_64 rng(detail::kSamplingSeed + 17);
    for (int i = 0; i < 4096; ++i) {
        const Vector u = random_unit(rng, m);
        const double v = margin(u);
        if (v < sampled) {
            sampled = v;
            sampled_arg = u;
        }
    }

    // Rotational symmetry about the e axis through prev center (next center is the origin).
    bool symmetric = (cp - cp.dot(e) * e).norm() <= 1e-9;
    if (symmetric && m > 1 && prev.dim() > 0) {
        const Matrix pm = mp * mp.transpose();
        const double lam = e.dot(pm * e);
        const Matrix rest = pm - lam * e * e.transpose();
        const double mu = rest.trace() / static_cast<double>(m - 1);
        const Matrix resid = rest - mu * (Matrix::Identity(m, m) - e * e.transpose());
        symmetric = resid.norm() <= 1e-8 * std::max(pm.norm(), 1e-300);
    }
    cert.inner_exact = symmetric;
    cert.slice_margin = slice;
    cert.sampled_margin = sampled;
    const double inner_margin = std::min(slice, sampled);
    cert.inner_ok = inner_margin >= -tol;
    if (!cert.inner_ok && !cert.violating_direction) {
        const Vector arg = slice <= sampled ? slice_arg : sampled_arg;
        cert.violating_direction = Vector((vn * (inv.asDiagonal() * arg)).normalized());
    }
    cert.worst_margin = std::min(cert.outer_margin, inner_margin);
    return cert;
}

Ellipsoid<double> mvee_khachiyan(const PointList& points, double eps) {
    if (points.empty()) throw std::invalid_argument("mvee_khachiyan: no points");
    if (!(eps > 0 && eps < 0.5)) throw std::invalid_argument("mvee_khachiyan: eps must lie in (0, 0.5)");
    const Eigen::Index d = points.front().size();
    const Eigen::Index n = static_cast<Eigen::Index>(points.size());
    Vector mean = Vector::Zero(d);
    for (const Vector& p : points) mean += p;
    mean /= static_cast<double>(n);
    Matrix centered(d, n);
    for (Eigen::Index j = 0; j < n; ++j) centered.col(j) = points[j] - mean;
    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
    const Vector sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    Eigen::Index k = 0;
    while (k < sv.size() && sv(k) > 1e-10 * std::max(top, 1e-300)) ++k;
    if (k == 0) return Ellipsoid<double>::point(mean);
    const Matrix basis = svd.matrixU().leftCols(k);
    const Matrix local = basis.transpose() * centered;  // k x n

    Matrix q(k + 1, n);
    q.topRows(k) = local;
    q.row(k).setOnes();
    Vector u = Vector::Constant(n, 1.0 / static_cast<double>(n));
    const double kk = static_cast<double>(k);
    for (int iter = 0; iter < 100000; ++iter) {
        const Matrix x = q * u.asDiagonal() * q.transpose();
        const Eigen::LLT<Matrix> llt(x);
        const Matrix sol = llt.solve(q);
        Vector mvals(n);
        for (Eigen::Index j = 0; j < n; ++j) mvals(j) = q.col(j).dot(sol.col(j));
        Eigen::Index j = 0;
        const double mx = mvals.maxCoeff(&j);
        if (mx <= (1 + eps) * (kk + 1)) break;
        const double step = (mx - kk - 1) / ((kk + 1) * (mx - 1));
        u *= (1 - step);
        u(j) += step;
    }
    const Vector c = local * u;
    const Matrix cov = local * u.asDiagonal() * local.transpose() - c * c.transpose();
    // Ellipsoid {x : (x - c)^T (cov k)^{-1} (x - c) <= 1}, inflated so every point is inside.
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov * kk);
    Vector semi = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix ax = es.eigenvectors();
    double worst = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Vector y = ax.transpose() * (local.col(j) - c);
        worst = std::max(worst, y.cwiseQuotient(semi).norm());
    }
    semi *= std::max(worst, 1.0);
    const Matrix axes = (basis * ax).rowwise().reverse();
    return Ellipsoid<double>(mean + basis * c, axes, semi.reverse());
}

double gram_log_det(const PointList& rows) {
    if (rows.empty()) return 0.0;
    const Eigen::Index d = rows.front().size();
    Matrix mt(d, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) mt.col(static_cast<Eigen::Index>(i)) = rows[i];
    Eigen::HouseholderQR<Matrix> qr(mt);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    double acc = 0;
    for (Eigen::Index i = 0; i < mt.cols(); ++i) {
        const double v = std::abs(r(i, i));
        if (!(v > 0)) throw std::invalid_argument("gram_log_det: rows are linearly dependent");
        acc += std::log(v);
    }
    return acc;
}

double gram_log_det_sequential(const PointList& rows) {
    std::vector<Vector> basis;
    double acc = 0;
    for (const Vector& r : rows) {
        Vector v = r;
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& b : basis) v -= b.dot(v) * b;
        }
        const double n = v.norm();
        if (!(n > 0)) throw std::invalid_argument("gram_log_det_sequential: rows are linearly dependent");
        acc += std::log(n);
        basis.push_back(v / n);
    }
    return acc;
}

namespace {

// Hyperplane through d affinely independent points (as columns relative to the first).
std::optional<Halfspace> plane_through(const std::vector<const Vector*>& pts) {
    const Eigen::Index d = pts.front()->size();
    Matrix diffs(static_cast<Eigen::Index>(pts.size()) - 1, d);
    for (std::size_t i = 1; i < pts.size(); ++i) diffs.row(static_cast<Eigen::Index>(i) - 1) = (*pts[i] - *pts[0]).transpose();
    Eigen::FullPivLU<Matrix> lu(diffs);
    const Matrix ker = lu.kernel();
    if (ker.cols() != 1) return std::nullopt;
    Vector n = ker.col(0);
    if (!(n.norm() > 0)) return std::nullopt;
    n.normalize();
    return Halfspace{n, n.dot(*pts[0])};
}

}  // namespace

std::vector<Halfspace> hull_facets(const PointList& points) {
    if (points.empty()) throw std::invalid_argument("hull_facets: no points");
    const Eigen::Index d = points.front().size();
    if (d < 1 || d > 3) throw std::invalid_argument("hull_facets: only 1 <= d <= 3");
    const std::size_t n = points.size();
    double scale = 0;
    for (const Vector& p : points) scale = std::max(scale, (p - points.front()).norm());
    const double tol = 1e-10 * std::max(scale, 1.0);
    std::vector<Halfspace> out;
    auto consider = [&](const std::vector<const Vector*>& sel) {
        auto hp = plane_through(sel);
        if (!hp) return;
        int above = 0, below = 0;
        for (const Vector& p : points) {
            const double s = hp->normal.dot(p) - hp->offset;
            if (s > tol) ++above;
            if (s < -tol) ++below;
        }
        if (above > 0 && below > 0) return;
        if (above == 0 && below == 0) return;
        if (above > 0) {
            hp->normal = -hp->normal;
            hp->offset = -hp->offset;
        }
        for (const Halfspace& h : out) {
            if ((h.normal - hp->normal).norm() < 1e-9 && std::abs(h.offset - hp->offset) < tol) return;
        }
        out.push_back(*hp);
    };
    if (d == 1) {
        double lo = kInf, hi = -kInf;
        for (const Vector& p : points) { lo = std::min(lo, p(0)); hi = std::max(hi, p(0)); }
        out.push_back({Vector::Constant(1, 1.0), hi});
        out.push_back({Vector::Constant(1, -1.0), -lo});
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (d == 2) {
                consider({&points[i], &points[j]});
                continue;
            }
            for (std::size_t k = j + 1; k < n; ++k) consider({&points[i], &points[j], &points[k]});
        }
    }
    return out;
}

std::vector<Halfspace> simplex_facets(const PointList& vertices) {
    const Eigen::Index d = vertices.front().size();
    if (static_cast<Eigen::Index>(vertices.size()) != d + 1) throw std::invalid_argument("simplex_facets: need d + 1 vertices");
    std::vector<Halfspace> out;
    for (std::size_t skip = 0; skip < vertices.size(); ++skip) {
        std::vector<const Vector*> sel;
        for (std::size_t i = 0; i < vertices.size(); ++i) if (i != skip) sel.push_back(&vertices[i]);
        auto hp = plane_through(sel);
        if (!hp) throw std::invalid_argument("simplex_facets: degenerate simplex");
        if (hp->normal.dot(vertices[skip]) > hp->offset) {
            hp->normal = -hp->normal;
            hp->offset = -hp->offset;
        }
        out.push_back(*hp);
    }
    return out;
}

double max_inner_scale(const Ellipsoid<double>& e, const std::vector<Halfspace>& facets) {
    double s = kInf;
    for (const Halfspace& h : facets) {
        const double room = h.offset - h.normal.dot(e.center());
        const double reach = e.rank() > 0 ? e.semiaxes().cwiseProduct(e.axes().transpose() * h.normal).norm() : 0.0;
        if (reach > 0) s = std::min(s, room / reach);
        else if (room < 0) return 0.0;
    }
    return s;
}

BallFit inradius_exact(const PointList& points) {
    const std::vector<Halfspace> facets = hull_facets(points);
    const Eigen::Index d = points.front().size();
    const Eigen::Index f = static_cast<Eigen::Index>(facets.size());
    // Variables: x+ (d), x- (d), r, slacks (f). Minimize -r.
    const Eigen::Index n = 2 * d + 1 + f;
    Matrix a = Matrix::Zero(f, n);
    Vector b(f);
    for (Eigen::Index i = 0; i < f; ++i) {
        a.row(i).head(d) = facets[i].normal.transpose();
        a.row(i).segment(d, d) = -facets[i].normal.transpose();
        a(i, 2 * d) = 1.0;
        a(i, 2 * d + 1 + i) = 1.0;
        b(i) = facets[i].offset;
    }
    Vector c = Vector::Zero(n);
    c(2 * d) = -1.0;
    const LpResult r = solve_lp(a, b, c);
    if (r.status != LpStatus::optimal) throw std::runtime_error("inradius_exact: LP failed");
    return BallFit{Vector(r.x.head(d) - r.x.segment(d, d)), r.x(2 * d)};
}

BallFit circumradius_exact(const PointList& points) {
    if (points.empty()) throw std::invalid_argument("circumradius_exact: no points");
    const Eigen::Index d = points.front().size();
    const std::size_t n = points.size();
    BallFit best{points.front(), kInf};
    std::vector<std::size_t> idx;
    auto evaluate = [&]() {
        // Circumcenter of the chosen points within their affine hull.
        const Vector& p0 = points[idx[0]];
        const Eigen::Index k = static_cast<Eigen::Index>(idx.size()) - 1;
        Vector center = p0;
        if (k > 0) {
            Matrix a(k, d);
            Vector rhs(k);
            for (Eigen::Index i = 0; i < k; ++i) {
                const Vector di = points[idx[i + 1]] - p0;
                a.row(i) = di.transpose();
                rhs(i) = 0.5 * di.squaredNorm();
            }
            const Matrix g = a * a.transpose();
            Eigen::FullPivLU<Matrix> lu(g);
            if (lu.rank() < k) return;
            center = p0 + a.transpose() * lu.solve(rhs);
        }
        double r = 0;
        for (std::size_t i : idx) r = std::max(r, (points[i] - center).norm());
        if (r >= best.radius) return;
        for (const Vector& p : points) {
            if ((p - center).norm() > r * (1 + 1e-12) + 1e-15) return;
        }
        best = BallFit{center, r};
    };
    const std::size_t max_support = static_cast<std::size_t>(d) + 1;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (!idx.empty()) evaluate();
        if (idx.size() == max_support) return;
        for (std::size_t i = start; i < n; ++i) {
            idx.push_back(i);
            rec(i + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return best;
}

std::array<double, 6> fit_conic(const std::array<Eigen::Vector2d, 5>& pts) {
    Eigen::Matrix<double, 5, 6> a;
    for (int i = 0; i < 5; ++i) {
        const double x = pts[i](0), y = pts[i](1);
        a.row(i) << x * x, x * y, y * y, x, y, 1.0;
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 6>> svd(a, Eigen::ComputeFullV);
    const Eigen::Matrix<double, 6, 1> v = svd.matrixV().col(5);
    return {v(0), v(1), v(2), v(3), v(4), v(5)};
}

std::optional<Ellipsoid<double>> conic_to_ellipse(const std::array<double, 6>& q) {
    Eigen::Matrix2d m;
    m << q[0], q[1] / 2, q[1] / 2, q[2];
    const Eigen::Vector2d lin(q[3], q[4]);
    if (m.determinant() <= 0) return std::nullopt;
    const Eigen::Vector2d center = -0.5 * m.inverse() * lin;
    const double k = center.dot(m * center) - q[5];  // (x-c)^T M (x-c) = k
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m / k);
    if (es.eigenvalues().minCoeff() <= 0) return std::nullopt;
    const Eigen::Vector2d semi = es.eigenvalues().cwiseInverse().cwiseSqrt();
    // eigenvalues ascending -> semiaxes descending already
    return Ellipsoid<double>(Vector(center), Matrix(es.eigenvectors()), Vector(semi));
}

}  // namespace ellround
