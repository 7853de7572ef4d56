#pragma once

#include "ellround/streaming.hpp"

#include <string>

namespace ellround {

// A monotone update rule: consumes a state and a point, returns the next state.
using UpdateRuleFn = std::function<State(const State&, const Vector&, StepInfo<double>*)>;

enum class StopReason { volume_reached, shell_empty };

inline const char* to_string(StopReason r) {
    return r == StopReason::volume_reached ? "volume_reached" : "shell_empty";
}

struct AdversaryStep {
    std::size_t t = 0;
    int phase = 1;
    StepKind kind = StepKind::skip;
    double a = 1;  // 1 / alpha
    double p = 0;  // log(vol E / vol B)
};

struct AdversaryTrace {
    Eigen::Index d = 0;
    double radius = 1;
    PointList points;
    std::vector<AdversaryStep> steps;
    StopReason stop_reason = StopReason::volume_reached;
    std::size_t phase_two_steps = 0;
    // Minimum dA/dP over Phase-II steps taken from A >= d; +inf if there were none.
    double min_step_ratio = 0;
    std::size_t checked_steps = 0;
};

struct AdversaryOptions {
    // Run the monotone-step oracle every k steps; 0 disables.
    std::size_t check_every = 1;
    double check_tolerance = 1e-7;
};

// Vertices of the regular simplex circumscribing the unit ball (inradius 1, circumradius d).
PointList simplex_vertices(Eigen::Index d);

// A point on the boundary of c + 2E with norm at most `radius`, if one is found.
std::optional<Vector> shell_point(const State& s, double radius);

// The library update rule, with alpha clamped to 1/2 before the step.
State library_rule(const State& s, const Vector& z, StepInfo<double>* info);

AdversaryTrace run_adversary(const UpdateRuleFn& rule, Eigen::Index d, double radius,
                             const AdversaryOptions& opts = {});

}  // namespace ellround
