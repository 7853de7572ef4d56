#pragma once

#include "ellround/streaming.hpp"

namespace ellround {

enum class SelectionReason { dim_growth, volume_jump };

inline const char* to_string(SelectionReason r) {
    return r == SelectionReason::dim_growth ? "dim_growth" : "volume_jump";
}

inline constexpr double kVolumeJumpTieTolerance = 1e-12;

struct CoresetTrace {
    std::vector<std::size_t> selected;  // 1-based stream indices, increasing
    std::vector<SelectionReason> reasons;
    std::optional<State> driver;
    SvdPath path = SvdPath::recompute;
    // Rank-d bookkeeping for the volume ledger: semiaxis minimum when full dimension was first reached.
    std::size_t full_dim_step = 0;
    double full_dim_min_semiaxis = 0;
};

struct CoresetStepResult {
    bool selected = false;
    StepKind kind = StepKind::skip;
    double gamma = 0;
    double log_volume_gain = 0;
};

// Tentative update; commits and appends t only on dimension growth or a volume jump of at least e.
CoresetStepResult coreset_step(CoresetTrace& trace, std::size_t t, const Vector& z);

std::pair<CoresetTrace, RunReport> run_coreset(std::span<const Vector> stream, const RunOptions& opts = {});

}  // namespace ellround
