#include "ellround/coreset.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace ellround {

CoresetStepResult coreset_step(CoresetTrace& trace, std::size_t t, const Vector& z) {
    if (!z.allFinite()) throw std::invalid_argument("point " + std::to_string(t) + ": non-finite coordinate");
    if (trace.driver && z.size() != trace.driver->outer.dim()) {
        throw std::invalid_argument("point " + std::to_string(t) + ": dimension mismatch");
    }
    CoresetStepResult res;
    StepInfo<double> info;
    State tentative = online_step(trace.driver, z, &info, trace.path);
    res.kind = info.kind;
    res.gamma = info.gamma;
    if (info.kind == StepKind::skip) return res;

    const bool grows = !trace.driver || tentative.dim() > trace.driver->dim();
    if (trace.driver) res.log_volume_gain = log_volume(tentative.outer) - log_volume(trace.driver->outer);
    if (grows) {
        res.selected = true;
        trace.reasons.push_back(SelectionReason::dim_growth);
    } else if (res.log_volume_gain >= 1.0 - kVolumeJumpTieTolerance) {
        res.selected = true;
        trace.reasons.push_back(SelectionReason::volume_jump);
    }
    if (!res.selected) {
        res.kind = StepKind::skip;
        return res;
    }
    trace.selected.push_back(t);
    trace.driver = std::move(tentative);
    if (grows && trace.driver->dim() == trace.driver->outer.dim() && trace.full_dim_step == 0) {
        trace.full_dim_step = t;
        trace.full_dim_min_semiaxis = trace.driver->outer.semiaxes().minCoeff();
    }
    return res;
}

std::pair<CoresetTrace, RunReport> run_coreset(std::span<const Vector> stream, const RunOptions& opts) {
    CoresetTrace trace;
    trace.path = opts.path;
    RunReport report;
    double min_inner = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const std::size_t t = i + 1;
        const std::optional<State> before = trace.driver;
        const CoresetStepResult r = coreset_step(trace, t, stream[i]);
        StepRecord rec;
        rec.t = t;
        rec.kind = r.kind;
        rec.alpha = trace.driver->alpha;
        rec.log_volume = log_volume(trace.driver->outer);
        rec.gamma = r.selected ? r.gamma : 0.0;
        rec.alpha_before = before ? before->alpha : rec.alpha;
        rec.log_volume_before = before ? log_volume(before->outer) : rec.log_volume;
        if (rec.kind == StepKind::regular) report.sum_regular_two_gamma += 2 * rec.gamma;
        if (rec.kind == StepKind::irregular) ++report.irregular_count;
        report.steps.push_back(rec);
        if (const State& s = *trace.driver; s.dim() > 0) {
            min_inner = std::min(min_inner, s.alpha * s.outer.semiaxes().minCoeff());
            report.aspect_surrogate = std::max(report.aspect_surrogate, s.outer.semiaxes().maxCoeff() / min_inner);
        }
        if (opts.observer) opts.observer(rec, before ? *before : *trace.driver, *trace.driver, stream[i]);
    }
    if (!trace.driver) throw std::invalid_argument("run_coreset: empty stream");
    report.final_alpha_inv = 1.0 / trace.driver->alpha;
    return {std::move(trace), report};
}

}  // namespace ellround
