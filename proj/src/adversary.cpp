#include "ellround/adversary.hpp"

#include "ellround/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ellround {

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

std::vector<std::uint64_t> first_primes(std::size_t k) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; out.size() < k; ++n) {
        bool prime = true;
        for (std::uint64_t p : out) {
            if (p * p > n) break;
            if (n % p == 0) { prime = false; break; }
        }
        if (prime) out.push_back(n);
    }
    return out;
}

// Halton point pushed through Box-Muller, normalized.
Vector halton_direction(std::uint64_t index, const std::vector<std::uint64_t>& primes, Eigen::Index k) {
    const double two_pi = 2 * std::acos(-1.0);
    Vector g(k);
    for (Eigen::Index j = 0; j < k; j += 2) {
        const double u1 = std::max(radical_inverse(index, primes[j]), 1e-300);
        const double u2 = radical_inverse(index, primes[j + 1]);
        const double r = std::sqrt(-2 * std::log(u1));
        g(j) = r * std::cos(two_pi * u2);
        if (j + 1 < k) g(j + 1) = r * std::sin(two_pi * u2);
    }
    const double n = g.norm();
    if (n == 0) return Vector::Unit(k, 0);
    return g / n;
}

}  // namespace

PointList simplex_vertices(Eigen::Index d) {
    if (d < 2) throw std::invalid_argument("simplex_vertices: d must be at least 2");
    // Inradius-1 simplex in R^d: apex d e1, the rest at x1 = -1 over a (d-1)-simplex of circumradius sqrt(d^2 - 1).
    PointList base;
    if (d == 2) {
        base = {Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
    } else {
        const PointList lower = simplex_vertices(d - 1);
        const double scale = 1.0 / static_cast<double>(d - 1);  // circumradius d-1 -> unit
        for (const Vector& v : lower) base.push_back(v * scale);
    }
    const double spread = std::sqrt(static_cast<double>(d * d - 1));
    PointList out;
    Vector apex = Vector::Zero(d);
    apex(0) = static_cast<double>(d);
    out.push_back(apex);
    for (const Vector& b : base) {
        Vector v(d);
        v(0) = -1.0;
        v.tail(d - 1) = spread * b;
        out.push_back(v);
    }
    return out;
}

std::optional<Vector> shell_point(const State& s, double radius) {
    const Eigen::Index k = s.dim();
    if (k == 0) return std::nullopt;
    const Vector& c = s.center();
    const Matrix& v = s.outer.axes();
    const Vector& sig = s.outer.semiaxes();

    std::vector<std::pair<double, Vector>> cands;
    for (Eigen::Index i = 0; i < k; ++i) {
        for (double sign : {1.0, -1.0}) {
            Vector p = c + sign * 2 * sig(i) * v.col(i);
            cands.emplace_back(p.norm(), std::move(p));
        }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    if (cands.front().first <= radius) return cands.front().second;

    const std::vector<std::uint64_t> primes = first_primes(static_cast<std::size_t>(k + 1));
    double best = std::numeric_limits<double>::infinity();
    Vector arg;
    for (std::uint64_t i = 1; i <= 4096; ++i) {
        const Vector u = halton_direction(i, primes, k);
        Vector p = c + 2 * v * sig.cwiseProduct(u);
        const double n = p.norm();
        if (n < best) {
            best = n;
            arg = std::move(p);
        }
    }
    if (best <= radius) return arg;
    return std::nullopt;
}

State library_rule(const State& s, const Vector& z, StepInfo<double>* info) {
    State clamped = s;
    clamped.alpha = std::min(clamped.alpha, 0.5);
    return full_update(clamped, z, info);
}

AdversaryTrace run_adversary(const UpdateRuleFn& rule, Eigen::Index d, double radius, const AdversaryOptions& opts) {
    if (!(radius >= 1) || !std::isfinite(radius)) throw std::invalid_argument("run_adversary: R must be at least 1");
    AdversaryTrace trace;
    trace.d = d;
    trace.radius = radius;
    trace.min_step_ratio = std::numeric_limits<double>::infinity();

    State s;
    s.outer = Ellipsoid<double>::ball(Vector::Zero(d), 1.0);
    s.alpha = 1;
    s.phase = Phase::full;

    std::size_t t = 0;
    auto feed = [&](const Vector& z, int phase) {
        ++t;
        StepInfo<double> info;
        State next = rule(s, z, &info);
        if (opts.check_every > 0 && t % opts.check_every == 0) {
            const StepCertificate cert = check_monotone_step(s, next, z, opts.check_tolerance);
            ++trace.checked_steps;
            if (!cert.outer_ok || !cert.inner_ok) throw std::runtime_error("non-monotone rule");
        }
        AdversaryStep rec;
        rec.t = t;
        rec.phase = phase;
        rec.kind = info.kind;
        rec.a = 1.0 / next.alpha;
        rec.p = log_volume(next.outer);
        if (phase == 2) {
            const double a_prev = 1.0 / s.alpha;
            const double dp = rec.p - log_volume(s.outer);
            if (a_prev >= static_cast<double>(d) && dp > 0) {
                trace.min_step_ratio = std::min(trace.min_step_ratio, (rec.a - a_prev) / dp);
            }
        }
        trace.points.push_back(z);
        trace.steps.push_back(rec);
        s = std::move(next);
    };

    for (const Vector& v : simplex_vertices(d)) feed(v, 1);

    const double gate = static_cast<double>(d) * std::log(radius / 2);
    const std::size_t guard = 1000 + static_cast<std::size_t>(100.0 * static_cast<double>(d) * std::max(1.0, std::log(radius)));
    while (log_volume(s.outer) <= gate) {
        const std::optional<Vector> z = shell_point(s, radius);
        if (!z) {
            trace.stop_reason = StopReason::shell_empty;
            return trace;
        }
        feed(*z, 2);
        if (++trace.phase_two_steps > guard) throw std::runtime_error("run_adversary: iteration guard exceeded");
    }
    trace.stop_reason = StopReason::volume_reached;
    return trace;
}

}  // namespace ellround
