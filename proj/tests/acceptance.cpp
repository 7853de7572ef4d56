// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include "ellround/adversary.hpp"
#include "ellround/cli.hpp"
#include "ellround/coreset.hpp"
#include "ellround/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace ellround;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %2d %s: %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void guarded(int id, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, false, std::string("exception: ") + e.what());
    }
}

PointList generated(cli::Generator kind, Eigen::Index d, std::size_t n, std::uint64_t seed, long lattice_n = 10) {
    cli::GeneratorSpec s;
    s.kind = kind;
    s.d = d;
    s.n = n;
    s.seed = seed;
    s.lattice_n = lattice_n;
    return cli::generate(s);
}

// Cross-polytope at distance r0 sqrt(d) contains the seed ball c0 + r0 B, then a ball stream of
// radius `spread` with the two antipodes +-spread e1 mixed in, so the half-diameter is `spread`.
PointList seeded_stream(Eigen::Index d, double r0, double spread, std::size_t n, std::uint64_t seed) {
    PointList out;
    const double reach = r0 * std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i < d; ++i) {
        out.push_back(reach * Vector::Unit(d, i));
        out.push_back(-reach * Vector::Unit(d, i));
    }
    PointList body = generated(cli::Generator::ball, d, n, seed);
    for (Vector& p : body) p *= spread;
    body.push_back(spread * Vector::Unit(d, 0));
    body.push_back(-spread * Vector::Unit(d, 0));
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::shuffle(body.begin(), body.end(), rng);
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

double half_diameter(const PointList& pts) {
    double best = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).squaredNorm());
    return 0.5 * std::sqrt(best);
}

void criterion_1() {
    const auto t0 = Clock::now();
    const cli::Generator kinds[] = {cli::Generator::ball, cli::Generator::gaussian, cli::Generator::lattice};
    std::size_t checked = 0, bad = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 50; ++i) {
        const Eigen::Index d = 2 + i % 5;
        const PointList pts = generated(kinds[i % 3], d, 200, 1000 + i, 10);
        RunOptions opts;
        opts.path = i % 2 ? SvdPath::rank_one : SvdPath::recompute;
        opts.observer = [&](const StepRecord& r, const State& before, const State& after, const Vector& z) {
            if (r.kind != StepKind::regular && r.kind != StepKind::irregular) return;
            const StepCertificate c = check_monotone_step(before, after, z);
            ++checked;
            worst = std::min(worst, c.worst_margin);
            if (!c.outer_ok || !c.inner_ok || c.worst_margin < -1e-7) ++bad;
        };
        run_fully_online(pts, opts);
    }
    const double secs = seconds_since(t0);
    report(1, bad == 0 && secs <= 120,
           std::to_string(checked) + " committed steps over 50 streams, " + std::to_string(bad) +
               " failing, worst margin " + fmt("%.3g", worst) + ", " + fmt("%.1f", secs) + " s");
}

void criterion_2() {
    std::size_t samples = 0, inner_fail = 0, outer_fail = 0, streams = 0;
    double worst_outer = -std::numeric_limits<double>::infinity();
    for (Eigen::Index d = 2; d <= 6; ++d) {
        for (double spread : {3.0, 10.0, 100.0}) {
            const PointList pts = seeded_stream(d, 1.0, spread, 200, 77 + d);
            const auto [s, rep] = run_seeded(pts, Vector::Zero(d), 1.0);
            ++streams;
            for (const Vector& p : pts) {
                const double m = membership(s.outer, p, kSpanTolerance);
                worst_outer = std::max(worst_outer, m);
                if (m > 1e-7) ++outer_fail;
            }
            // The cross-polytope prefix already contains the seed ball, so the point hull is the
            // augmented hull.
            std::mt19937_64 rng(d * 131 + static_cast<std::uint64_t>(spread));
            std::normal_distribution<double> nrm;
            const Matrix m = s.alpha * s.outer.shape_map();
            for (int k = 0; k < 500; ++k) {
                Vector g(s.dim());
                for (Eigen::Index j = 0; j < g.size(); ++j) g(j) = nrm(rng);
                const Vector y = s.center() + m * g.normalized();
                ++samples;
                if (!hull_membership(pts, y)) ++inner_fail;
            }
        }
    }
    report(2, inner_fail == 0 && outer_fail == 0,
           std::to_string(streams) + " seeded streams, " + std::to_string(samples - inner_fail) + "/" +
               std::to_string(samples) + " inner samples in hull, worst outer point margin " + fmt("%.3g", worst_outer));
}

void criterion_3() {
    std::size_t regular = 0, bad = 0;
    double worst_evo = std::numeric_limits<double>::infinity();
    double worst_split = std::numeric_limits<double>::infinity();
    double worst_vol = std::numeric_limits<double>::infinity();
    for (Eigen::Index d = 2; d <= 6; ++d) {
        for (double spread : {10.0, 100.0, 1000.0}) {
            const PointList pts = seeded_stream(d, 1.0, spread, 400, 300 + d);
            RunOptions opts;
            opts.observer = [&](const StepRecord& r, const State&, const State&, const Vector&) {
                if (r.kind != StepKind::regular) return;
                ++regular;
                const double dinv = 1 / r.alpha - 1 / r.alpha_before;
                const double dvol = r.log_volume - r.log_volume_before;
                const double evo = 2 * dvol + 1e-9 - dinv;
                const double split = 1e-9 * std::max(1.0, 1 / r.alpha) - std::abs(dinv - 2 * r.gamma);
                const double vol = dvol - (r.gamma - 1e-9);
                worst_evo = std::min(worst_evo, evo);
                worst_split = std::min(worst_split, split);
                worst_vol = std::min(worst_vol, vol);
                if (evo < 0 || split < 0 || vol < 0) ++bad;
            };
            run_seeded(pts, Vector::Zero(d), 1.0, opts);
        }
    }
    report(3, bad == 0 && regular > 0,
           std::to_string(regular) + " regular Phase-II steps, " + std::to_string(bad) + " failing; min slacks: evolution " +
               fmt("%.3g", worst_evo) + ", dA = 2 gamma " + fmt("%.3g", worst_split) + ", dlogvol >= gamma " +
               fmt("%.3g", worst_vol));
}

void criterion_4() {
    std::size_t cells = 0, bad = 0, phase_two = 0;
    double worst_ratio = 0;
    for (Eigen::Index d = 2; d <= 6; ++d) {
        for (double ratio : {3.0, 10.0, 100.0}) {
            for (std::uint64_t seed = 0; seed < 3; ++seed) {
                const PointList pts = seeded_stream(d, 1.0, ratio, 300, 500 + 7 * d + seed);
                const auto [s, rep] = run_seeded(pts, Vector::Zero(d), 1.0);
                const double big_r = half_diameter(pts);
                const double dd = static_cast<double>(d);
                const double bound = rep.phase_two_start ? 8 * dd * (std::log(dd) + std::log(big_r)) : 2 * big_r;
                ++cells;
                phase_two += rep.phase_two_start > 0;
                worst_ratio = std::max(worst_ratio, rep.final_alpha_inv / bound);
                if (rep.final_alpha_inv > bound) ++bad;
            }
        }
    }
    report(4, bad == 0,
           std::to_string(cells) + " runs (" + std::to_string(phase_two) + " entered Phase II), max (1/alpha)/bound " +
               fmt("%.4f", worst_ratio));
}

void criterion_5() {
    double worst_radius = 0, worst_offset = 0, worst_inv = 0;
    std::size_t cases = 0;
    for (Eigen::Index d = 2; d <= 6; ++d) {
        for (double alpha : {1.0, 0.5, 1.0 / 3, 0.1, 0.01}) {
            for (SvdPath path : {SvdPath::recompute, SvdPath::rank_one}) {
                State s;
                s.outer = Ellipsoid<double>(Vector::Zero(d), Matrix::Identity(d, d - 1), Vector::Ones(d - 1));
                s.alpha = alpha;
                s.path = path;
                const double root = std::sqrt(1 + 2 * alpha);
                const Vector z = root * Vector::Unit(d, d - 1);
                const State n = irregular_update(s, z);
                const double radius = (1 + alpha) / root;
                worst_radius = std::max(worst_radius, (n.outer.semiaxes().array() - radius).abs().maxCoeff());
                Vector offset = Vector::Zero(d);
                offset(d - 1) = alpha / root;
                worst_offset = std::max(worst_offset, (n.center() - offset).cwiseAbs().maxCoeff());
                worst_inv = std::max(worst_inv, std::abs(1 / n.alpha - 1 / s.alpha - 1));
                ++cases;
            }
        }
    }
    report(5, worst_radius <= 1e-12 && worst_offset <= 1e-12 && worst_inv <= 1e-12,
           std::to_string(cases) + " canonical cases, max errors: radius " + fmt("%.2g", worst_radius) + ", offset " +
               fmt("%.2g", worst_offset) + ", d(1/alpha) - 1 " + fmt("%.2g", worst_inv));
}

void criterion_6() {
    double worst_c = 0;
    std::string worst_cell;
    for (Eigen::Index d = 2; d <= 5; ++d) {
        for (long big_n : {10L, 1000L}) {
            const PointList pts = generated(cli::Generator::lattice, d, 2000, 900 + d, big_n);
            const auto [s, rep] = run_fully_online(pts);
            const double dd = static_cast<double>(d);
            const double c = rep.final_alpha_inv / (dd * std::log(dd * static_cast<double>(big_n)));
            if (c > worst_c) {
                worst_c = c;
                worst_cell = "d=" + std::to_string(d) + " N=" + std::to_string(big_n);
            }
        }
    }
    report(6, worst_c <= 64, "C = " + fmt("%.4f", worst_c) + " (at " + worst_cell + "), tripwire 64");
}

void criterion_7() {
    std::size_t runs = 0, size_bad = 0, replay_bad = 0, margin_bad = 0;
    double worst_size_ratio = 0, worst_margin = -std::numeric_limits<double>::infinity();
    for (Eigen::Index d = 2; d <= 6; ++d) {
        for (cli::Generator g : {cli::Generator::ball, cli::Generator::gaussian}) {
            const PointList pts = generated(g, d, 600, 1200 + d);
            const auto [tr, rep] = run_coreset(pts);
            ++runs;
            const double dd = static_cast<double>(d);
            const double budget = dd * std::log(tr.driver->outer.semiaxes().maxCoeff() / tr.full_dim_min_semiaxis) + dd + 2;
            worst_size_ratio = std::max(worst_size_ratio, static_cast<double>(tr.selected.size()) / budget);
            if (static_cast<double>(tr.selected.size()) > budget) ++size_bad;

            PointList sub;
            for (std::size_t t : tr.selected) sub.push_back(pts[t - 1]);
            const auto [tr2, rep2] = run_coreset(sub);
            const State& a = *tr.driver;
            const State& b = *tr2.driver;
            if (!(a.center() == b.center() && a.outer.axes() == b.outer.axes() &&
                  a.outer.semiaxes() == b.outer.semiaxes() && a.alpha == b.alpha)) {
                ++replay_bad;
            }

            const Ellipsoid<double> grown = a.outer.scaled(2 * std::exp(1.0) + 1);
            std::size_t next = 0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (next < tr.selected.size() && tr.selected[next] == i + 1) {
                    ++next;
                    continue;
                }
                const double m = membership(grown, pts[i], kSpanTolerance);
                worst_margin = std::max(worst_margin, m);
                if (m > 1e-7) ++margin_bad;
            }
        }
    }
    report(7, size_bad == 0 && replay_bad == 0 && margin_bad == 0,
           std::to_string(runs) + " streams, max |S|/budget " + fmt("%.3f", worst_size_ratio) + ", replay mismatches " +
               std::to_string(replay_bad) + ", worst unselected (2e+1) margin " + fmt("%.3g", worst_margin));
}

void criterion_8() {
    std::size_t runs = 0, bad = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double worst_steps = 0, worst_p_slack = std::numeric_limits<double>::infinity();
    for (Eigen::Index d = 2; d <= 5; ++d) {
        for (double big_r : {8.0, 32.0}) {
            const AdversaryTrace tr = run_adversary(library_rule, d, big_r);
            ++runs;
            const double dd = static_cast<double>(d);
            const double cap = std::ceil(6 * dd * std::log(big_r));
            const double p_slack = tr.steps.back().p - (dd * std::log(big_r / 2) - 1e-6);
            worst_steps = std::max(worst_steps, static_cast<double>(tr.phase_two_steps) / cap);
            worst_p_slack = std::min(worst_p_slack, p_slack);
            min_ratio = std::min(min_ratio, tr.min_step_ratio);
            if (static_cast<double>(tr.phase_two_steps) > cap || p_slack < 0 || !(tr.min_step_ratio > 0)) ++bad;
        }
    }
    report(8, bad == 0,
           std::to_string(runs) + " adversary runs, max Phase-II steps/cap " + fmt("%.3f", worst_steps) +
               ", min P_T slack " + fmt("%.3g", worst_p_slack) + ", min dA/dP " + fmt("%.4g", min_ratio));
}

void criterion_9() {
    const auto t0 = Clock::now();
    const std::vector<InequalityResult> res = inequality_suite(100);
    const double secs = seconds_since(t0);
    double worst = std::numeric_limits<double>::infinity();
    std::string worst_id;
    std::size_t min_points = std::numeric_limits<std::size_t>::max();
    for (const InequalityResult& r : res) {
        if (r.worst_slack < worst) {
            worst = r.worst_slack;
            worst_id = r.id;
        }
        min_points = std::min(min_points, r.points);
    }
    report(9, worst >= -1e-12 && min_points >= 10000 && secs <= 30,
           std::to_string(res.size()) + " inequalities, min slack " + fmt("%.3g", worst) + " (" + worst_id +
               "), min grid points " + std::to_string(min_points) + ", " + fmt("%.2f", secs) + " s");
}

double time_rank_one_updates(Eigen::Index d, int updates) {
    std::mt19937_64 rng(4242 + d);
    std::normal_distribution<double> nrm;
    State s;
    s.outer = Ellipsoid<double>::ball(Vector::Zero(d), 1.0);
    s.alpha = 0.5;
    s.path = SvdPath::rank_one;
    double elapsed = 0;
    for (int i = 0; i < updates; ++i) {
        Vector g(d);
        for (Eigen::Index j = 0; j < d; ++j) g(j) = nrm(rng);
        const Vector z = s.center() + s.outer.shape_map() * (1.2 * g.normalized());
        const auto t0 = Clock::now();
        s = full_update(s, z);
        elapsed += seconds_since(t0);
    }
    return elapsed / updates;
}

void criterion_10() {
    time_rank_one_updates(128, 20);  // warm caches
    const double t128 = time_rank_one_updates(128, 1000);
    const double t256 = time_rank_one_updates(256, 1000);
    const double ratio = t256 / t128;
    report(10, ratio <= 8,
           "per update " + fmt("%.3g", t128 * 1e3) + " ms at d=128, " + fmt("%.3g", t256 * 1e3) + " ms at d=256, ratio " +
               fmt("%.2f", ratio));
}

void criterion_11() {
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    std::size_t bad = 0;
    for (Eigen::Index d = 2; d <= 6; ++d) {
        const PointList v = simplex_vertices(d);
        const Ellipsoid<double> e = mvee_khachiyan(v, 1e-4);
        const double factor = 1 / max_inner_scale(e, simplex_facets(v));
        const double rel = factor / static_cast<double>(d);
        lo = std::min(lo, rel);
        hi = std::max(hi, rel);
        if (rel < 0.95 || rel > 1.05) ++bad;
    }
    report(11, bad == 0, "John factor / d in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "] for d = 2..6");
}

}  // namespace

int main() {
    guarded(1, criterion_1);
    guarded(2, criterion_2);
    guarded(3, criterion_3);
    guarded(4, criterion_4);
    guarded(5, criterion_5);
    guarded(6, criterion_6);
    guarded(7, criterion_7);
    guarded(8, criterion_8);
    guarded(9, criterion_9);
    guarded(10, criterion_10);
    guarded(11, criterion_11);
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
