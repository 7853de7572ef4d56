#pragma once

#include "ellround/streaming.hpp"

#include <array>
#include <string>

namespace ellround {

struct HullSpec {
    PointList points;
    std::vector<ScaledEllipsoid<double>> ellipsoids;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Vector x;
    double objective = 0;
};

inline constexpr double kLpTolerance = 1e-9;

// min c^T x  s.t.  A x = b, x >= 0; dense two-phase simplex with Bland's rule.
LpResult solve_lp(const Matrix& a, const Vector& b, const Vector& c, double tol = kLpTolerance);

bool hull_membership(const PointList& points, const Vector& x, double tol = kLpTolerance);

double hull_support(const HullSpec& h, const Vector& u);

struct StepCertificate {
    bool outer_ok = true;
    bool inner_ok = true;
    double worst_margin = 0;
    std::optional<Vector> violating_direction;
    // True when the configuration is a body of revolution about the prev-center -> z axis,
    // so the slice verdict is exact; false means the inner verdict is probabilistic.
    bool inner_exact = false;
    double outer_margin = 0;
    double slice_margin = 0;
    double sampled_margin = 0;
};

inline constexpr double kStepTolerance = 1e-7;

// Margins are measured after mapping next's outer body to the unit ball; positive is safe.
StepCertificate check_monotone_step(const State& prev, const State& next, const Vector& z,
                                    double tol = kStepTolerance);

Ellipsoid<double> mvee_khachiyan(const PointList& points, double eps);

// 0.5 log det(M M^T) for the rows of M, via QR.
double gram_log_det(const PointList& rows);
// Same quantity from successive Gram-Schmidt residual norms.
double gram_log_det_sequential(const PointList& rows);

struct Halfspace {
    Vector normal;  // unit outward normal
    double offset;  // normal . x <= offset
};

// Facets of a full-dimensional hull, d <= 3 (brute force).
std::vector<Halfspace> hull_facets(const PointList& points);
// Facets of a simplex given by d + 1 affinely independent points.
std::vector<Halfspace> simplex_facets(const PointList& vertices);
// Largest s with center + s (E - center) inside every halfspace.
double max_inner_scale(const Ellipsoid<double>& e, const std::vector<Halfspace>& facets);

struct BallFit {
    Vector center;
    double radius = 0;
};

// Chebyshev ball of the hull (facet enumeration + LP), d <= 3.
BallFit inradius_exact(const PointList& points);
// Smallest enclosing ball by exhaustive support-set search; small instances only.
BallFit circumradius_exact(const PointList& points);

// Conic A x^2 + B xy + C y^2 + D x + E y + F = 0 through five points.
std::array<double, 6> fit_conic(const std::array<Eigen::Vector2d, 5>& pts);
std::optional<Ellipsoid<double>> conic_to_ellipse(const std::array<double, 6>& q);

struct InequalityResult {
    std::string id;
    double worst_slack = 0;
    std::vector<double> argmin;
    std::size_t points = 0;
};

struct LbGridReport {
    std::size_t feasible_points = 0;
    double worst_inner_width = 0;       // alpha' b <= alpha
    double worst_inner_tangent = 0;  // alpha' b <= (2 - c) tan(asin(alpha / 2))
    double worst_inner_reach = 0;       // c >= alpha' a - alpha
    double worst_outer_reach = 0;     // c + a >= 2
    double min_ratio = 0;        // min dA/dP over the grid
    double constant_found = 0;   // min dA/dP over points below A/(10 d); +inf if none
};

// Reduced two-dimensional lower-bound configuration: previous outer B, inner alpha B,
// point 2 e1, next outer c e1 + diag(a, b) B, largest feasible inner scale.
double lb_max_inner_scale(double a, double b, double c, double alpha);
LbGridReport lb_reduced_grid(int density);

std::vector<InequalityResult> inequality_suite(int grid_density);

}  // namespace ellround
