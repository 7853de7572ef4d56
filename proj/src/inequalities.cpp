#include "ellround/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace ellround {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double scaled_slack(double lhs, double rhs) {
    return (rhs - lhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    std::vector<double> out = linspace(std::log(lo), std::log(hi), n);
    for (double& v : out) v = std::exp(v);
    out.front() = lo;
    out.back() = hi;
    return out;
}

class Tracker {
public:
    explicit Tracker(std::string id) { r_.id = std::move(id); r_.worst_slack = kInf; }
    void add(double slack, std::vector<double> at) {
        ++r_.points;
        if (slack < r_.worst_slack) {
            r_.worst_slack = slack;
            r_.argmin = std::move(at);
        }
    }
    InequalityResult result() const { return r_; }

private:
    InequalityResult r_;
};

// Parameters of the update written to avoid cancellation at small gamma.
struct Stable {
    double gamma, alpha, a, alpha_next, b, b_minus_one, a_minus_b, c;
};

Stable stable_params(double gamma, double alpha) {
    Stable s{};
    s.gamma = gamma;
    s.alpha = alpha;
    s.a = std::exp(gamma);
    s.alpha_next = 1.0 / (1.0 / alpha + 2 * gamma);
    s.b_minus_one = gamma * alpha * s.alpha_next;  // (alpha - alpha') / 2
    s.b = 1 + s.b_minus_one;
    s.a_minus_b = std::expm1(gamma) - s.b_minus_one;
    s.c = s.alpha_next * (std::expm1(gamma) - 2 * gamma * alpha);
    return s;
}

}  // namespace

double lb_max_inner_scale(double a, double b, double c, double alpha) {
    // Support of conv(alpha B u {2 e1}) at angle t is max(alpha, 2 cos t); the candidate
    // inner body c e1 + s diag(a, b) B has support c cos t + s sqrt(a^2 cos^2 t + b^2 sin^2 t).
    auto ratio = [&](double t) {
        const double ct = std::cos(t), st = std::sin(t);
        return (std::max(alpha, 2 * ct) - c * ct) / std::sqrt(a * a * ct * ct + b * b * st * st);
    };
    const double pi = std::acos(-1.0);
    const int samples = 1024;
    double best = kInf;
    double best_t = 0;
    for (int i = 0; i <= samples; ++i) {
        const double t = pi * i / samples;
        const double v = ratio(t);
        if (v < best) {
            best = v;
            best_t = t;
        }
    }
    for (double t : {0.0, pi / 2, pi, std::acos(std::min(1.0, alpha / 2))}) best = std::min(best, ratio(t));
    double lo = std::max(0.0, best_t - pi / samples), hi = std::min(pi, best_t + pi / samples);
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = ratio(x1), f2 = ratio(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = ratio(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = ratio(x2);
        }
    }
    return std::min({best, f1, f2});
}

namespace {

// Unit circle inside c e1 + diag(a, b) B and 2 e1 covered.
bool lb_outer_feasible(double a, double b, double c) {
    if (c + a < 2 || c > a - 1) return false;
    auto f = [&](double x) { return (x - c) * (x - c) / (a * a) + (1 - x * x) / (b * b); };
    double worst = std::max(f(-1.0), f(1.0));
    const double curv = 1 / (a * a) - 1 / (b * b);
    if (curv < 0) {
        const double x = (c / (a * a)) / curv;
        if (x > -1 && x < 1) worst = std::max(worst, f(x));
    }
    return worst <= 1 + 1e-12;
}

}  // namespace

LbGridReport lb_reduced_grid(int density) {
    if (density < 2) throw std::invalid_argument("lb_reduced_grid: density must be at least 2");
    const std::size_t n = static_cast<std::size_t>(density);
    LbGridReport rep;
    rep.worst_inner_width = rep.worst_inner_tangent = rep.worst_inner_reach = rep.worst_outer_reach = kInf;
    rep.min_ratio = rep.constant_found = kInf;
    const auto as = logspace(1.5, 50, n);
    const auto bs = logspace(1, 50, n);
    const auto big_as = logspace(1, 200, n);
    for (double a : as) {
        for (double b : bs) {
            const double c_lo = 2 - a, c_hi = a - 1;
            for (double c : linspace(c_lo, c_hi, n)) {
                if (!lb_outer_feasible(a, b, c)) continue;
                for (double big_a : big_as) {
                    const double alpha = 1 / big_a;
                    const double s = lb_max_inner_scale(a, b, c, alpha);
                    if (!(s > 0)) continue;
                    ++rep.feasible_points;
                    rep.worst_inner_width = std::min(rep.worst_inner_width, scaled_slack(s * b, alpha));
                    const double tan_phi = (alpha / 2) / std::sqrt(1 - alpha * alpha / 4);
                    rep.worst_inner_tangent = std::min(rep.worst_inner_tangent, scaled_slack(s * b, (2 - c) * tan_phi));
                    rep.worst_inner_reach = std::min(rep.worst_inner_reach, scaled_slack(s * a - alpha, c));
                    rep.worst_outer_reach = std::min(rep.worst_outer_reach, scaled_slack(2.0, c + a));
                    const double next_a = 1 / s;
                    for (int d = 2; d <= 8; ++d) {
                        if (next_a < d) continue;
                        const double dp = std::log(a) + (d - 1) * std::log(b);
                        const double ratio = (next_a - big_a) / dp;
                        rep.min_ratio = std::min(rep.min_ratio, ratio);
                        if (ratio < big_a / (10.0 * d)) rep.constant_found = std::min(rep.constant_found, ratio);
                    }
                }
            }
        }
    }
    return rep;
}

std::vector<InequalityResult> inequality_suite(int grid_density) {
    if (grid_density < 10) throw std::invalid_argument("inequality_suite: grid_density must be at least 10");
    const std::size_t n = static_cast<std::size_t>(grid_density);
    const std::size_t n1 = n * n;
    std::vector<InequalityResult> out;

    {
        Tracker t1("exp_ge_linear"), t2("exp_ge_quadratic");
        for (double x : linspace(-10, 10, n1)) t1.add(scaled_slack(1 + x, std::exp(x)), {x});
        t1.add(scaled_slack(1.0, std::exp(0.0)), {0.0});
        for (double x : linspace(0, 10, n1)) t2.add(scaled_slack(1 + x + x * x / 2, std::exp(x)), {x});
        out.push_back(t1.result());
        out.push_back(t2.result());
    }
    {
        Tracker t("exp_le_cubic");
        for (double x : linspace(0, 4.0 / 3.0, n1)) t.add(scaled_slack(std::exp(x), 1 + x + x * x / 2 + x * x * x / 4), {x});
        out.push_back(t.result());
    }
    {
        Tracker t("outer_gamma_ratio");
        for (double g : logspace(1e-6, 10, n1)) {
            const double num = std::expm1(g) * std::expm1(g);
            const double den = std::expm1(2 * g) - g / 2 - g * g / 16;
            t.add(scaled_slack(num / den, 1.5 * g), {g});
        }
        out.push_back(t.result());
    }

    Tracker oi1("b_growth_le_quarter_gamma"), oi2("a_ge_b"), oi3("outer_gap_ratio"), oi4("b_sq_growth");
    Tracker po("outer_cover"), pim("inner_cover");
    Tracker up1("alpha_step_identity"), up2("b_ge_one"), up3("c_nonnegative"), up4("inner_reach");
    for (double g : logspace(1e-6, 10, n)) {
        for (double al : logspace(1e-4, 0.5, n)) {
            const Stable s = stable_params(g, al);
            const std::vector<double> at{g, al};
            const double a_plus_b = s.a + s.b;
            const double a2_b2 = s.a_minus_b * a_plus_b;
            oi1.add(scaled_slack(s.b_minus_one, g / 4), at);
            oi2.add(scaled_slack(0.0, s.a_minus_b), at);
            oi3.add(scaled_slack(std::expm1(g) * std::expm1(g) / a2_b2, 1.0), at);
            oi4.add(scaled_slack(2 * s.b_minus_one, s.b_minus_one * (s.b + 1)), at);  // b^2 - 1 >= alpha - alpha'
            const double b2_1 = s.b_minus_one * (s.b + 1);
            po.add(scaled_slack(s.c * s.c, b2_1 / (s.b * s.b) * a2_b2), at);
            const double ratio = s.alpha / s.alpha_next;
            pim.add(scaled_slack(s.b * s.b * (1 + s.alpha_next - 2 * s.alpha / s.a), ratio * ratio * (1 - s.alpha_next)), at);
            const double inv_next = 1 / s.alpha_next;
            const double inv_expected = 1 / s.alpha + 2 * g;
            up1.add(-std::abs(inv_next - inv_expected) / std::max(1.0, inv_expected), at);
            up2.add(scaled_slack(1.0, s.b), at);
            up3.add(scaled_slack(0.0, s.c), at);
            up4.add(scaled_slack(s.alpha, s.c + s.alpha_next * s.a), at);
        }
    }
    for (const Tracker* t : {&oi1, &oi2, &oi3, &oi4, &po, &pim, &up1, &up2, &up3, &up4}) out.push_back(t->result());

    // Four axes, roughly a quarter of the cells feasible: 1.5 sqrt(n) per axis keeps at least n^2 feasible points.
    const int lb_density = std::max(10, static_cast<int>(std::ceil(1.5 * std::sqrt(static_cast<double>(grid_density)))));
    const LbGridReport lb = lb_reduced_grid(lb_density);
    const std::size_t lb_points = lb.feasible_points;
    out.push_back(InequalityResult{"lb_inner_width", lb.worst_inner_width, {}, lb_points});
    out.push_back(InequalityResult{"lb_inner_tangent", lb.worst_inner_tangent, {}, lb_points});
    out.push_back(InequalityResult{"lb_inner_reach", lb.worst_inner_reach, {}, lb_points});
    out.push_back(InequalityResult{"lb_outer_reach", lb.worst_outer_reach, {}, lb_points});
    out.push_back(InequalityResult{"lb_potential_ratio", lb.constant_found > 0 ? 0.0 : lb.constant_found, {lb.constant_found, lb.min_ratio}, lb_points});
    return out;
}

}  // namespace ellround
