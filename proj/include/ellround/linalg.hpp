#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ellround {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kOrthoTolerance = 1e-10;

// M = left_axes * diag(singular_values) * right_axes^T, singular values descending.
template <typename Scalar>
struct SvdFactor {
    Mat<Scalar> left_axes;
    Vec<Scalar> singular_values;
    Mat<Scalar> right_axes;

    Mat<Scalar> reconstruct() const {
        return left_axes * singular_values.asDiagonal() * right_axes.transpose();
    }
};

// Frobenius deviation of Q^T Q from the identity.
template <typename Derived>
typename Derived::Scalar gram_deviation(const Eigen::MatrixBase<Derived>& q) {
    using Scalar = typename Derived::Scalar;
    if (q.cols() == 0) return Scalar(0);
    Mat<Scalar> g = q.transpose() * q;
    g.diagonal().array() -= Scalar(1);
    return g.norm();
}

// One modified Gram-Schmidt pass over the columns, in place.
template <typename Scalar>
void reorthonormalize(Mat<Scalar>& q) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
        }
        Scalar n = q.col(j).norm();
        if (!(n > Scalar(0))) throw std::runtime_error("reorthonormalize: rank loss");
        q.col(j) /= n;
    }
}

template <typename Scalar>
void orthonormalize_if_drifted(Mat<Scalar>& q, Scalar tol = Scalar(kOrthoTolerance)) {
    if (gram_deviation(q) > tol) reorthonormalize(q);
}

template <typename Derived>
Mat<typename Derived::Scalar> orthonormal_completion(const Eigen::MatrixBase<Derived>& w_in) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index d = w_in.size();
    const Scalar n = w_in.norm();
    if (d == 0 || !(n > Scalar(0))) throw std::invalid_argument("degenerate direction");
    if (std::abs(n - Scalar(1)) > Scalar(1e-8)) {
        throw std::invalid_argument("orthonormal_completion: direction is not unit length");
    }
    Vec<Scalar> w = w_in / n;
    // Householder reflector sending e1 to -w (w1 >= 0) or +w (w1 < 0).
    Vec<Scalar> v = w;
    const bool flip = w(0) >= Scalar(0);
    v(0) += flip ? Scalar(1) : Scalar(-1);
    if (!flip) v = -v;
    Mat<Scalar> frame = Mat<Scalar>::Identity(d, d);
    const Scalar vv = v.squaredNorm();
    if (vv > Scalar(0)) frame.noalias() -= (Scalar(2) / vv) * v * v.transpose();
    frame.col(0) = w;
    return frame;
}

template <typename Derived>
SvdFactor<typename Derived::Scalar> svd_recompute(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    if (!m.allFinite()) throw std::invalid_argument("svd_recompute: non-finite entries");
    SvdFactor<Scalar> f;
    if (m.rows() <= 16 && m.cols() <= 16) {
        Eigen::JacobiSVD<Mat<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        f.left_axes = svd.matrixU();
        f.singular_values = svd.singularValues();
        f.right_axes = svd.matrixV();
    } else {
        Eigen::BDCSVD<Mat<Scalar>> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        f.left_axes = svd.matrixU();
        f.singular_values = svd.singularValues();
        f.right_axes = svd.matrixV();
    }
    return f;
}

// Eigen-decomposition of diag(D) + rho * z z^T; values ascending, vectors as columns
// in the index basis of D.
template <typename Scalar>
struct SymmetricEigen {
    Vec<Scalar> values;
    Mat<Scalar> vectors;
};

namespace detail {

// Roots of 1/rho + sum z_j^2 / (d_j - lambda) for rho > 0, d strictly ascending,
// z_j != 0. Each root is stored as d[origin] + shift for accurate differences.
template <typename Scalar>
struct SecularRoots {
    std::vector<Eigen::Index> origin;
    std::vector<Scalar> shift;
};

template <typename Scalar>
SecularRoots<Scalar> solve_secular(const Vec<Scalar>& d, const Vec<Scalar>& z, Scalar rho) {
    const Eigen::Index m = d.size();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    const Scalar inv_rho = Scalar(1) / rho;
    const Scalar zz = z.squaredNorm();
    SecularRoots<Scalar> out;
    out.origin.resize(m);
    out.shift.resize(m);
    Vec<Scalar> delta(m);

    for (Eigen::Index i = 0; i < m; ++i) {
        const bool last = (i == m - 1);
        Eigen::Index org = i;
        Scalar lo, hi;
        if (last) {
            lo = Scalar(0);
            hi = rho * zz;
        } else {
            const Scalar half = (d(i + 1) - d(i)) / 2;
            Scalar fmid = inv_rho;
            for (Eigen::Index j = 0; j < m; ++j) fmid += z(j) * z(j) / ((d(j) - d(i)) - half);
            if (fmid >= Scalar(0)) {
                lo = Scalar(0);
                hi = half;
            } else {
                org = i + 1;
                lo = -((d(i + 1) - d(i)) - half);
                hi = Scalar(0);
            }
        }
        for (Eigen::Index j = 0; j < m; ++j) delta(j) = d(j) - d(org);

        Scalar mu = (lo + hi) / 2;
        for (int iter = 0; iter < 200; ++iter) {
            Scalar psi = 0, dpsi = 0, phi = 0, dphi = 0;
            for (Eigen::Index j = 0; j <= i; ++j) {
                const Scalar t = z(j) / (delta(j) - mu);
                psi += z(j) * t;
                dpsi += t * t;
            }
            for (Eigen::Index j = i + 1; j < m; ++j) {
                const Scalar t = z(j) / (delta(j) - mu);
                phi += z(j) * t;
                dphi += t * t;
            }
            const Scalar f = inv_rho + psi + phi;
            const Scalar scale = inv_rho + std::abs(psi) + std::abs(phi);
            if (std::abs(f) <= Scalar(4) * eps * Scalar(m) * scale) break;
            if (f < 0) lo = mu; else hi = mu;
            if (hi - lo <= Scalar(2) * eps * std::max(std::abs(lo), std::abs(hi))) break;

            Scalar next = std::numeric_limits<Scalar>::quiet_NaN();
            const Scalar dlo = delta(i) - mu;
            if (last) {
                const Scalar cst = inv_rho + psi - dpsi * dlo;
                const Scalar s = dpsi * dlo * dlo;
                if (cst > 0) next = mu + dlo + s / cst;
            } else {
                const Scalar dhi = delta(i + 1) - mu;
                const Scalar qa = inv_rho + psi - dpsi * dlo + phi - dphi * dhi;
                const Scalar qb = -(qa * (dlo + dhi) + dpsi * dlo * dlo + dphi * dhi * dhi);
                const Scalar qc = dlo * dhi * f;
                const Scalar disc = qb * qb - 4 * qa * qc;
                if (disc >= 0) {
                    const Scalar sq = std::sqrt(disc);
                    const Scalar q = -(qb + (qb >= 0 ? sq : -sq)) / 2;
                    Scalar r1 = std::numeric_limits<Scalar>::quiet_NaN();
                    Scalar r2 = std::numeric_limits<Scalar>::quiet_NaN();
                    if (qa != 0) r1 = q / qa;
                    if (q != 0) r2 = qc / q;
                    if (mu + r1 > lo && mu + r1 < hi) next = mu + r1;
                    else if (mu + r2 > lo && mu + r2 < hi) next = mu + r2;
                }
            }
            if (!(next > lo && next < hi) || next == mu) next = (lo + hi) / 2;
            mu = next;
        }
        out.origin[i] = org;
        out.shift[i] = mu;
    }
    return out;
}

template <typename Scalar>
SymmetricEigen<Scalar> rank_one_eigen_positive(const Vec<Scalar>& diag, Scalar rho, const Vec<Scalar>& z) {
    const Eigen::Index k = diag.size();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    SymmetricEigen<Scalar> out;

    std::vector<Eigen::Index> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) { return diag(a) < diag(b); });

    const Scalar znorm = z.norm();
    if (k == 0 || !(rho > 0) || !(znorm > 0)) {
        out.values.resize(k);
        out.vectors = Mat<Scalar>::Zero(k, k);
        for (Eigen::Index j = 0; j < k; ++j) {
            out.values(j) = diag(perm[j]);
            out.vectors(perm[j], j) = Scalar(1);
        }
        return out;
    }

    Vec<Scalar> d(k), zn(k);
    Mat<Scalar> basis = Mat<Scalar>::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        d(j) = diag(perm[j]);
        zn(j) = z(perm[j]) / znorm;
        basis(perm[j], j) = Scalar(1);
    }
    const Scalar rho_n = rho * znorm * znorm;
    const Scalar tol = Scalar(8) * eps * std::max(d.cwiseAbs().maxCoeff(), rho_n);

    std::vector<bool> deflated(k, false);
    for (Eigen::Index j = 0; j < k; ++j) {
        if (rho_n * std::abs(zn(j)) <= tol) {
            deflated[j] = true;
            zn(j) = 0;
        }
    }
    // Merge near-equal poles with a Givens rotation that moves the weight into the later index.
    Eigen::Index prev = -1;
    for (Eigen::Index j = 0; j < k; ++j) {
        if (deflated[j]) continue;
        if (prev >= 0) {
            const Scalar r = std::hypot(zn(prev), zn(j));
            const Scalar c = zn(j) / r;
            const Scalar s = zn(prev) / r;
            if (std::abs((d(j) - d(prev)) * c * s) <= tol) {
                const Scalar dp = c * c * d(prev) + s * s * d(j);
                const Scalar dj = s * s * d(prev) + c * c * d(j);
                Vec<Scalar> gp = c * basis.col(prev) - s * basis.col(j);
                Vec<Scalar> gj = s * basis.col(prev) + c * basis.col(j);
                basis.col(prev) = gp;
                basis.col(j) = gj;
                d(prev) = dp;
                d(j) = dj;
                zn(prev) = 0;
                zn(j) = r;
                deflated[prev] = true;
            }
        }
        prev = j;
    }

    std::vector<Eigen::Index> live;
    for (Eigen::Index j = 0; j < k; ++j) if (!deflated[j]) live.push_back(j);
    const Eigen::Index m = static_cast<Eigen::Index>(live.size());

    std::vector<std::pair<Scalar, Vec<Scalar>>> pairs;
    pairs.reserve(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        if (deflated[j]) pairs.emplace_back(d(j), basis.col(j));
    }

    if (m > 0) {
        Vec<Scalar> dl(m), zl(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            dl(j) = d(live[j]);
            zl(j) = zn(live[j]);
        }
        const SecularRoots<Scalar> roots = solve_secular<Scalar>(dl, zl, rho_n);
        auto gap = [&](Eigen::Index i, Eigen::Index j) {  // lambda_i - dl_j
            return (dl(roots.origin[i]) - dl(j)) + roots.shift[i];
        };
        // Recompute z so the computed roots are exact eigenvalues of a nearby problem.
        Vec<Scalar> zh(m);
        for (Eigen::Index j = 0; j < m; ++j) {
            Scalar p = gap(m - 1, j) / rho_n;
            for (Eigen::Index i = 0; i < j; ++i) p *= gap(i, j) / (dl(i) - dl(j));
            for (Eigen::Index i = j; i < m - 1; ++i) p *= gap(i, j) / (dl(i + 1) - dl(j));
            zh(j) = std::copysign(std::sqrt(std::max(p, Scalar(0))), zl(j));
        }
        Mat<Scalar> local(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            for (Eigen::Index j = 0; j < m; ++j) local(j, i) = zh(j) / (-gap(i, j));
            local.col(i).normalize();
        }
        Mat<Scalar> live_basis(k, m);
        for (Eigen::Index j = 0; j < m; ++j) live_basis.col(j) = basis.col(live[j]);
        Mat<Scalar> vecs = live_basis * local;
        for (Eigen::Index i = 0; i < m; ++i) {
            pairs.emplace_back(dl(roots.origin[i]) + roots.shift[i], vecs.col(i));
        }
    }

    std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.values.resize(k);
    out.vectors.resize(k, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        out.values(j) = pairs[j].first;
        out.vectors.col(j) = pairs[j].second;
    }
    return out;
}

}  // namespace detail

template <typename Scalar>
SymmetricEigen<Scalar> symmetric_rank_one_eigen(const Vec<Scalar>& diag, Scalar rho, const Vec<Scalar>& z) {
    if (diag.size() != z.size()) throw std::invalid_argument("symmetric_rank_one_eigen: size mismatch");
    if (rho >= Scalar(0)) return detail::rank_one_eigen_positive<Scalar>(diag, rho, z);
    // diag + rho zz^T = -((-diag) + |rho| zz^T)
    SymmetricEigen<Scalar> flipped = detail::rank_one_eigen_positive<Scalar>(-diag, -rho, z);
    SymmetricEigen<Scalar> out;
    out.values = -flipped.values.reverse();
    out.vectors = flipped.vectors.rowwise().reverse();
    return out;
}

// SVD of f.reconstruct() + y1 y2^T for square factors. The left side follows from two
// symmetric rank-one eigen updates of M M^T; right axes are recovered as M'^T u / sigma.
template <typename Scalar>
SvdFactor<Scalar> svd_rank_one_update(const SvdFactor<Scalar>& f, const Vec<Scalar>& y1, const Vec<Scalar>& y2) {
    const Eigen::Index d = f.singular_values.size();
    if (f.left_axes.rows() != d || f.left_axes.cols() != d || f.right_axes.rows() != d ||
        f.right_axes.cols() != d || y1.size() != d || y2.size() != d) {
        throw std::invalid_argument("svd_rank_one_update: dimension mismatch");
    }
    if (!(y1.allFinite() && y2.allFinite())) throw std::invalid_argument("svd_rank_one_update: non-finite update");
    if (y1.norm() == Scalar(0) || y2.norm() == Scalar(0)) return f;

    const Vec<Scalar> p = f.left_axes * f.singular_values.cwiseProduct(f.right_axes.transpose() * y2);
    const Scalar beta = y2.squaredNorm();
    const Scalar root = std::sqrt(beta * beta + 4);
    const Scalar mu_pos = (beta + root) / 2;
    const Scalar mu_neg = -2 / (beta + root);
    auto direction = [&](Scalar mu) {
        return Vec<Scalar>((p + mu * y1) / std::sqrt(1 + mu * mu));
    };
    const Vec<Scalar> g_pos = f.left_axes.transpose() * direction(mu_pos);
    const Vec<Scalar> g_neg = f.left_axes.transpose() * direction(mu_neg);

    const SymmetricEigen<Scalar> first =
        symmetric_rank_one_eigen<Scalar>(f.singular_values.cwiseAbs2(), mu_pos, g_pos);
    const SymmetricEigen<Scalar> second =
        symmetric_rank_one_eigen<Scalar>(first.values, mu_neg, Vec<Scalar>(first.vectors.transpose() * g_neg));

    Mat<Scalar> left = f.left_axes * (first.vectors * second.vectors).rowwise().reverse();
    orthonormalize_if_drifted(left);

    const Mat<Scalar> updated = f.reconstruct() + y1 * y2.transpose();
    const Mat<Scalar> proj = updated.transpose() * left;
    Vec<Scalar> sigma(d);
    for (Eigen::Index i = 0; i < d; ++i) sigma(i) = proj.col(i).norm();

    std::vector<Eigen::Index> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return sigma(a) > sigma(b); });

    SvdFactor<Scalar> out;
    out.left_axes.resize(d, d);
    out.singular_values.resize(d);
    out.right_axes = Mat<Scalar>::Zero(d, d);
    const Scalar smax = sigma.maxCoeff();
    const Scalar floor = Scalar(d) * std::numeric_limits<Scalar>::epsilon() * smax;
    Eigen::Index filled = 0;
    for (Eigen::Index r = 0; r < d; ++r) {
        const Eigen::Index i = order[r];
        out.left_axes.col(r) = left.col(i);
        out.singular_values(r) = sigma(i);
        if (sigma(i) > floor) {
            out.right_axes.col(r) = proj.col(i) / sigma(i);
            ++filled;
        }
    }
    // Modified Gram-Schmidt on the recovered right axes, completing null directions.
    Eigen::Index candidate = 0;
    for (Eigen::Index r = 0; r < d; ++r) {
        Vec<Scalar> v = out.right_axes.col(r);
        bool have = r < filled;
        for (int attempt = 0; attempt < 2 * d + 2; ++attempt) {
            if (!have) {
                v = Vec<Scalar>::Unit(d, candidate % d);
                ++candidate;
            }
            for (Eigen::Index i = 0; i < r; ++i) v -= out.right_axes.col(i).dot(v) * out.right_axes.col(i);
            const Scalar n = v.norm();
            if (n > (have ? Scalar(1e-3) : Scalar(0.5))) {
                out.right_axes.col(r) = v / n;
                break;
            }
            have = false;
        }
    }

    const Scalar scale = std::max(updated.norm(), std::numeric_limits<Scalar>::min());
    const Scalar residual = (out.reconstruct() - updated).norm();
    if (!(residual <= Scalar(1e-8) * scale) || gram_deviation(out.left_axes) > Scalar(kOrthoTolerance) ||
        gram_deviation(out.right_axes) > Scalar(kOrthoTolerance)) {
        throw std::runtime_error("svd update failed; fall back to recompute");
    }
    return out;
}

}  // namespace ellround
