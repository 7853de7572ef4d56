#include "ellround/streaming.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ellround {

namespace {

void require_finite(const Vector& z, std::size_t t, Eigen::Index d) {
    if (z.size() != d) {
        throw std::invalid_argument("point " + std::to_string(t) + ": expected dimension " + std::to_string(d));
    }
    if (!z.allFinite()) throw std::invalid_argument("point " + std::to_string(t) + ": non-finite coordinate");
}

class Recorder {
public:
    Recorder(RunReport& report, const RunOptions& opts) : report_(report), opts_(opts) {}

    void record(std::size_t t, StepKind kind, double gamma, const State& before, const State& after,
                const Vector& z) {
        StepRecord r;
        r.t = t;
        r.kind = kind;
        r.alpha = after.alpha;
        r.log_volume = log_volume(after.outer);
        r.gamma = gamma;
        r.alpha_before = before.alpha;
        r.log_volume_before = log_volume(before.outer);
        report_.steps.push_back(r);
        if (kind == StepKind::regular) report_.sum_regular_two_gamma += 2 * gamma;
        if (kind == StepKind::irregular) ++report_.irregular_count;
        track_aspect(after);
        if (opts_.observer) opts_.observer(r, before, after, z);
    }

    void track_aspect(const State& s) {
        if (s.dim() == 0) return;
        const double inner_radius = s.alpha * s.outer.semiaxes().minCoeff();
        min_inner_ = std::min(min_inner_, inner_radius);
        report_.aspect_surrogate = std::max(report_.aspect_surrogate, s.outer.semiaxes().maxCoeff() / min_inner_);
    }

private:
    RunReport& report_;
    const RunOptions& opts_;
    double min_inner_ = std::numeric_limits<double>::infinity();
};

}  // namespace

double seeded_gate_factor(Eigen::Index d) {
    return static_cast<double>(d) * std::log(static_cast<double>(d));
}

double seeded_phase_two_alpha(Eigen::Index d) {
    return std::min(0.5, 1.0 / seeded_gate_factor(d));
}

std::pair<State, RunReport> run_seeded(std::span<const Vector> stream, const Vector& c0, double r0,
                                       const RunOptions& opts) {
    const Eigen::Index d = c0.size();
    if (d < 2) throw std::invalid_argument("run_seeded: dimension must be at least 2");
    if (!(r0 > 0) || !std::isfinite(r0)) throw std::invalid_argument("run_seeded: r0 must be positive");
    if (!c0.allFinite()) throw std::invalid_argument("run_seeded: non-finite center");

    State s;
    s.outer = Ellipsoid<double>::ball(c0, r0);
    s.alpha = 1;
    s.phase = Phase::local_ball;
    s.r0_ball = r0;
    s.path = opts.path;

    RunReport report;
    Recorder rec(report, opts);
    rec.track_aspect(s);
    const double gate = r0 * seeded_gate_factor(d);
    double radius = r0;

    for (std::size_t i = 0; i < stream.size(); ++i) {
        const std::size_t t = i + 1;
        const Vector& z = stream[i];
        require_finite(z, t, d);
        const State before = s;
        if (s.phase == Phase::local_ball) {
            const double dist = (z - c0).norm();
            if (dist <= gate) {
                if (dist > radius) {
                    radius = dist;
                    s.outer = Ellipsoid<double>::ball(c0, radius);
                    s.alpha = r0 / radius;
                    rec.record(t, StepKind::local, 0, before, s, z);
                } else {
                    rec.record(t, StepKind::skip, 0, before, s, z);
                }
                continue;
            }
            s.outer = Ellipsoid<double>::ball(c0, gate);
            s.alpha = seeded_phase_two_alpha(d);
            s.phase = Phase::full;
            report.phase_two_start = t;
        }
        const State pre = s;
        StepInfo<double> info;
        s = full_update(pre, z, &info);
        rec.record(t, info.kind, info.gamma, pre, s, z);
    }
    report.final_alpha_inv = 1.0 / s.alpha;
    return {s, report};
}

State online_step(const std::optional<State>& state, const Vector& z, StepInfo<double>* info, SvdPath path) {
    if (!state) {
        State s;
        s.outer = Ellipsoid<double>::point(z);
        s.alpha = 1;
        s.phase = Phase::full;
        s.path = path;
        if (info) {
            *info = StepInfo<double>{};
            info->kind = StepKind::init;
        }
        return s;
    }
    if (is_off_span(*state, z)) return irregular_update(*state, z, info);
    return full_update(*state, z, info);
}

std::pair<State, RunReport> run_fully_online(std::span<const Vector> stream, const RunOptions& opts) {
    RunReport report;
    Recorder rec(report, opts);
    std::optional<State> s;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const std::size_t t = i + 1;
        const Vector& z = stream[i];
        require_finite(z, t, s ? s->outer.dim() : z.size());
        StepInfo<double> info;
        State next = online_step(s, z, &info, opts.path);
        rec.record(t, info.kind, info.gamma, s ? *s : next, next, z);
        s = std::move(next);
    }
    if (!s) throw std::invalid_argument("run_fully_online: empty stream");
    report.final_alpha_inv = 1.0 / s->alpha;
    return {*s, report};
}

}  // namespace ellround
