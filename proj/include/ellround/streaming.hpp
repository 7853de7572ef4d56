#pragma once

#include "ellround/update_rule.hpp"

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ellround {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using PointList = std::vector<Vector>;
using State = RoundingState<double>;

struct StepRecord {
    std::size_t t = 0;  // 1-based stream index
    StepKind kind = StepKind::skip;
    double alpha = 1;
    double log_volume = 0;
    double gamma = 0;
    // State right before this step's update; differs from the previous record only at the
    // seeded Phase-II transition.
    double alpha_before = 1;
    double log_volume_before = 0;
};

struct RunReport {
    std::vector<StepRecord> steps;
    double final_alpha_inv = 1;
    double aspect_surrogate = 0;
    double sum_regular_two_gamma = 0;
    std::size_t irregular_count = 0;
    std::size_t phase_two_start = 0;  // seeded mode: index of the trigger point, 0 if never
};

// Called after every step with the states before and after it.
using StepObserver = std::function<void(const StepRecord&, const State& before, const State& after, const Vector& z)>;

struct RunOptions {
    SvdPath path = SvdPath::recompute;
    StepObserver observer;
};

double seeded_gate_factor(Eigen::Index d);
double seeded_phase_two_alpha(Eigen::Index d);

std::pair<State, RunReport> run_seeded(std::span<const Vector> stream, const Vector& c0, double r0,
                                       const RunOptions& opts = {});

std::pair<State, RunReport> run_fully_online(std::span<const Vector> stream, const RunOptions& opts = {});

// One online step (init on the first point when `state` is empty).
State online_step(const std::optional<State>& state, const Vector& z, StepInfo<double>* info, SvdPath path);

}  // namespace ellround
