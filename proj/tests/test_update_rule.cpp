#include "ellround/oracle.hpp"
#include "ellround/update_rule.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

namespace ellround::test {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace {

State ball_state(Eigen::Index d, double alpha, SvdPath path = SvdPath::recompute) {
    State s;
    s.outer = Ellipsoid<double>::ball(Vec::Zero(d), 1);
    s.alpha = alpha;
    s.path = path;
    return s;
}

}  // namespace

TEST(ComputeParams, NoOp) {
    const auto p = compute_params(0.0, 0.3);
    EXPECT_DOUBLE_EQ(p.a, 1.0);
    EXPECT_DOUBLE_EQ(p.b, 1.0);
    EXPECT_DOUBLE_EQ(p.c, 0.0);
    EXPECT_DOUBLE_EQ(p.alpha_next, 0.3);
}

TEST(ComputeParams, UnitGammaHalfAlpha) {
    const auto p = compute_params(1.0, 0.5);
    EXPECT_DOUBLE_EQ(p.alpha_next, 0.25);
    EXPECT_NEAR(p.a, 2.718281828459045, 1e-15);
    EXPECT_DOUBLE_EQ(p.b, 1.125);
    EXPECT_NEAR(p.c, 0.17957045711476133, 1e-15);
}

TEST(ComputeParams, Preconditions) {
    EXPECT_THROW(compute_params(0.1, 0.6), std::invalid_argument);
    EXPECT_THROW(compute_params(-0.1, 0.3), std::invalid_argument);
    EXPECT_THROW(compute_params(0.1, 0.0), std::invalid_argument);
}

TEST(ComputeParams, InvariantsOnGrid) {
    for (int i = 0; i <= 100; ++i) {
        const double g = 5.0 * i / 100;
        for (int j = 1; j <= 100; ++j) {
            const double alpha = 0.5 * j / 100;
            const auto p = compute_params(g, alpha);
            EXPECT_NEAR(1 / p.alpha_next - 1 / alpha, 2 * g, 1e-9 * (1 + 1 / alpha));
            EXPECT_GE(p.b, 1.0);
            EXPECT_GE(p.c, -1e-15);
            EXPECT_GE(p.c + p.alpha_next * p.a, alpha * (1 - 1e-14));
        }
    }
}

TEST(SolveGamma, NearOneIsNearZero) {
    EXPECT_LE(solve_gamma(1 + 1e-15, 0.3), 1e-12);
}

TEST(SolveGamma, MatchesBisectionOracle) {
    // Frozen value; the bisection oracle recomputes it from the monotone map.
    const double g = solve_gamma(2.5, 0.5);
    EXPECT_NEAR(g, 0.8605949004768672, 1e-10);
    EXPECT_NEAR(g, oracle_ref::gamma_by_bisection(2.5, 0.5), 1e-10);
    const auto p = compute_params(g, 0.5);
    EXPECT_LT(std::abs(p.a + p.c - 2.5) / 2.5, 1e-10);
}

TEST(SolveGamma, Preconditions) {
    EXPECT_THROW(solve_gamma(1.0, 0.3), std::invalid_argument);
    EXPECT_THROW(solve_gamma(2.0, 0.7), std::invalid_argument);
}

TEST(SolveGamma, OverestimateContract) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lr(-12, 6), la(1e-4, 0.5);
    for (int i = 0; i < 2000; ++i) {
        const double rho = 1 + std::exp(lr(rng));
        const double alpha = la(rng);
        const double g = solve_gamma(rho, alpha);
        const double reach = 1 + reach_excess(g, alpha);
        EXPECT_GE(reach, rho);
        EXPECT_LE(reach, rho * (1 + 1e-10));
        EXPECT_NEAR(g, oracle_ref::gamma_by_bisection(rho, alpha), 1e-9 * std::max(1.0, g));
    }
}

TEST(FullUpdate, InsidePointIsIdentity) {
    const State s = ball_state(3, 0.4);
    StepInfo<double> info;
    const State n = full_update(s, Vec(0.5 * Vec::Ones(3)), &info);
    EXPECT_EQ(info.kind, StepKind::skip);
    EXPECT_EQ(n.outer.center(), s.outer.center());
    EXPECT_EQ(n.outer.semiaxes(), s.outer.semiaxes());
    EXPECT_EQ(n.alpha, s.alpha);
}

TEST(FullUpdate, PlanarExample) {
    for (SvdPath path : {SvdPath::recompute, SvdPath::rank_one}) {
        const State s = ball_state(2, 0.5, path);
        const Vec z = 2.5 * Vec::Unit(2, 0);
        StepInfo<double> info;
        const State n = full_update(s, z, &info);
        const double g = 0.8605949004768672;
        const double alpha_next = 1 / (2 + 2 * g);
        EXPECT_EQ(info.kind, StepKind::regular);
        EXPECT_NEAR(info.gamma, g, 1e-10);
        EXPECT_NEAR(n.alpha, alpha_next, 1e-12);
        // Semiaxes sorted descending: horizontal e^g, vertical b.
        EXPECT_NEAR(n.outer.semiaxes()(0), std::exp(g), 1e-9);
        EXPECT_NEAR(n.outer.semiaxes()(1), 1 + (0.5 - alpha_next) / 2, 1e-9);
        EXPECT_NEAR(std::abs(n.outer.axes()(0, 0)), 1.0, 1e-12);
        EXPECT_NEAR(n.outer.center()(0), -0.5 + alpha_next * std::exp(g), 1e-9);
        EXPECT_NEAR(n.outer.center()(1), 0.0, 1e-15);
        const auto cert = check_monotone_step(s, n, z);
        EXPECT_TRUE(cert.outer_ok);
        EXPECT_TRUE(cert.inner_ok);
        EXPECT_TRUE(cert.inner_exact);
    }
}

TEST(FullUpdate, OffSpanThrows) {
    State s;
    s.outer = Ellipsoid<double>(Vec::Zero(2), Mat::Identity(2, 1), Vec::Ones(1));
    s.alpha = 0.5;
    EXPECT_THROW(
        {
            try {
                full_update(s, Vec(Vec::Unit(2, 1)));
            } catch (const std::invalid_argument& e) {
                EXPECT_STREQ(e.what(), "irregular step required");
                throw;
            }
        },
        std::invalid_argument);
}

TEST(FullUpdate, VolumeLawAndEvolution) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const Eigen::Index d = 2 + trial % 5;
        State s;
        s.outer = Ellipsoid<double>::from_map(Vec::Zero(d), oracle_ref::random_matrix(rng, d, d) + 2 * Mat::Identity(d, d));
        s.alpha = 0.05 + 0.45 * (trial % 10) / 9.0;
        s.path = trial % 2 ? SvdPath::rank_one : SvdPath::recompute;
        const Vec z = s.outer.shape_map() * oracle_ref::unit_gaussian(rng, d) * (1.01 + 0.1 * (trial % 40));
        StepInfo<double> info;
        const State n = full_update(s, z, &info);
        ASSERT_EQ(info.kind, StepKind::regular);
        const double dvol = log_volume(n.outer) - log_volume(s.outer);
        const double dinv = 1 / n.alpha - 1 / s.alpha;
        EXPECT_GE(dvol, info.gamma - 1e-9);
        EXPECT_NEAR(dinv, 2 * info.gamma, 1e-9 * (1 + 1 / s.alpha));
        EXPECT_LE(dinv, 2 * dvol + 1e-9);
        EXPECT_LE(membership(n.outer, z, 1e-9), 1e-9);
    }
}

TEST(FullUpdate, PathsAgree) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index d = 2 + trial % 7;
        State s;
        s.outer = Ellipsoid<double>::from_map(oracle_ref::random_matrix(rng, d, 1),
                                              oracle_ref::random_matrix(rng, d, d) + 2 * Mat::Identity(d, d));
        s.alpha = 0.3;
        const Vec z = s.center() + s.outer.shape_map() * oracle_ref::unit_gaussian(rng, d) * 3.0;
        State r = s;
        r.path = SvdPath::rank_one;
        const State a = full_update(s, z), b = full_update(r, z);
        EXPECT_LT((a.outer.semiaxes() - b.outer.semiaxes()).norm(), 1e-9 * a.outer.semiaxes().norm());
        const Mat ga = a.outer.shape_map() * a.outer.shape_map().transpose();
        const Mat gb = b.outer.shape_map() * b.outer.shape_map().transpose();
        EXPECT_LT((ga - gb).norm(), 1e-9 * ga.norm());
        EXPECT_LT((a.center() - b.center()).norm(), 1e-12 * (1 + a.center().norm()));
    }
}

TEST(FullUpdate, AxesStayOrthonormalOverLongRuns) {
    std::mt19937_64 rng(97);
    for (SvdPath path : {SvdPath::recompute, SvdPath::rank_one}) {
        State s = ball_state(24, 0.5, path);
        double worst = 0;
        for (int i = 0; i < 600; ++i) {
            const Vec z = s.center() + s.outer.shape_map() * oracle_ref::unit_gaussian(rng, 24) * 1.3;
            s = full_update(s, z);
            worst = std::max(worst, gram_deviation(s.outer.axes()));
        }
        EXPECT_LE(worst, 1e-9);
    }
}

TEST(IrregularUpdate, CanonicalConfiguration) {
    for (SvdPath path : {SvdPath::recompute, SvdPath::rank_one}) {
        State s;
        s.outer = Ellipsoid<double>(Vec::Zero(2), Mat::Identity(2, 1), Vec::Ones(1));
        s.alpha = 0.5;
        s.path = path;
        const Vec z = std::sqrt(2.0) * Vec::Unit(2, 1);
        StepInfo<double> info;
        const State n = irregular_update(s, z, &info);
        EXPECT_EQ(info.kind, StepKind::irregular);
        EXPECT_EQ(n.dim(), 2);
        EXPECT_NEAR(n.outer.semiaxes()(0), 1.0606601717798212, 1e-12);
        EXPECT_NEAR(n.outer.semiaxes()(1), 1.0606601717798212, 1e-12);
        EXPECT_NEAR(n.center()(0), 0.0, 1e-15);
        EXPECT_NEAR(n.center()(1), 0.35355339059327373, 1e-12);
        EXPECT_NEAR(n.alpha, 1.0 / 3, 1e-15);
        EXPECT_NEAR(1 / n.alpha - 1 / s.alpha, 1.0, 1e-12);
    }
}

TEST(IrregularUpdate, FromPoint) {
    State s;
    s.outer = Ellipsoid<double>::point(Vec::Zero(3));
    s.alpha = 1;
    Vec q(3);
    q << 2, 0, 0;
    const State n = irregular_update(s, q);
    EXPECT_EQ(n.dim(), 1);
    EXPECT_DOUBLE_EQ(n.alpha, 0.5);
    EXPECT_LE(membership(n.outer, Vec(Vec::Zero(3)), 1e-9), 1e-12);
    EXPECT_LE(membership(n.outer, q, 1e-9), 1e-12);
}

TEST(IrregularUpdate, OnSpanThrows) {
    const State s = ball_state(2, 0.5);
    EXPECT_THROW(irregular_update(s, Vec(Vec::Unit(2, 0))), std::invalid_argument);
}

TEST(IrregularUpdate, NormalizedVolumeLaw) {
    // log vol_{k+1}(E') - log vol_k(E) >= log(|z_perp| / 2)
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index d = 4;
        const Eigen::Index k = 1 + trial % 3;
        const Mat basis = oracle_ref::random_orthogonal(rng, d).leftCols(k);
        const Mat m = oracle_ref::random_matrix(rng, k, k) + 1.5 * Mat::Identity(k, k);
        State s;
        s.outer = Ellipsoid<double>::from_map(oracle_ref::random_matrix(rng, d, 1), Mat(basis * m));
        s.alpha = 1.0 / (2 + trial % 5);
        s.path = trial % 2 ? SvdPath::rank_one : SvdPath::recompute;
        const Vec z = oracle_ref::random_matrix(rng, d, 1) * (0.1 + trial % 7);
        const double perp = off_span_residual(s.outer, z).norm();
        const State n = irregular_update(s, z);
        EXPECT_GE(log_volume(n.outer) - log_volume(s.outer), std::log(perp / 2) - 1e-9);
        EXPECT_NEAR(1 / n.alpha - 1 / s.alpha, 1.0, 1e-9);
        const auto cert = check_monotone_step(s, n, z);
        EXPECT_TRUE(cert.outer_ok) << cert.outer_margin;
        EXPECT_TRUE(cert.inner_ok) << cert.worst_margin;
    }
}

TEST(IrregularUpdate, SharedAxesDoNotShrink) {
    // Axis-aligned state; the new point is orthogonal to the span through the center.
    State s;
    Mat axes = Mat::Zero(3, 2);
    axes(0, 0) = 1;
    axes(1, 1) = 1;
    Vec semi(2);
    semi << 3, 1;
    s.outer = Ellipsoid<double>(Vec::Zero(3), axes, semi);
    s.alpha = 0.25;
    const State n = irregular_update(s, Vec(5 * Vec::Unit(3, 2)));
    std::vector<double> after(n.outer.semiaxes().data(), n.outer.semiaxes().data() + 3);
    std::sort(after.begin(), after.end(), std::greater<>());
    std::vector<double> shared;
    for (double v : after)
        if (std::abs(v - 5 * 1.25 / 1.5) > 1e-9) shared.push_back(v);
    ASSERT_EQ(shared.size(), 2U);
    EXPECT_GE(shared[0], 3.0);
    EXPECT_GE(shared[1], 1.0);
}

}  // namespace ellround::test
