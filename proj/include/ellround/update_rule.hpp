#pragma once

#include "ellround/ellipsoid.hpp"

#include <cmath>
#include <string>
#include <tuple>

namespace ellround {

inline constexpr double kSpanTolerance = 1e-8;
inline constexpr int kOrthoCheckPeriod = 32;

enum class SvdPath { recompute, rank_one };
enum class Phase { local_ball, full };
enum class StepKind { init, skip, regular, irregular, local };

inline const char* to_string(StepKind k) {
    switch (k) {
        case StepKind::init: return "init";
        case StepKind::skip: return "skip";
        case StepKind::regular: return "regular";
        case StepKind::irregular: return "irregular";
        case StepKind::local: return "local";
    }
    return "unknown";
}

// Sandwich center + alpha * E  inside  hull  inside  center + E. The span basis is E's axes.
template <typename Scalar>
struct RoundingState {
    Ellipsoid<Scalar> outer;
    Scalar alpha = Scalar(1);
    Phase phase = Phase::full;
    Scalar r0_ball = Scalar(0);
    SvdPath path = SvdPath::recompute;
    int updates_since_ortho_check = 0;

    const Vec<Scalar>& center() const { return outer.center(); }
    Eigen::Index dim() const { return outer.rank(); }
    const Mat<Scalar>& span_basis() const { return outer.axes(); }
    Ellipsoid<Scalar> inner() const { return outer.scaled(alpha); }
};

template <typename Scalar>
struct UpdateParams {
    Scalar gamma = 0;
    Scalar a = 1;
    Scalar b = 1;
    Scalar c = 0;
    Scalar alpha_next = 0;
};

template <typename Scalar>
UpdateParams<Scalar> compute_params(Scalar gamma, Scalar alpha) {
    if (!(alpha > Scalar(0) && alpha <= Scalar(0.5))) throw std::invalid_argument("compute_params: alpha must lie in (0, 1/2]");
    if (!(gamma >= Scalar(0))) throw std::invalid_argument("compute_params: gamma must be nonnegative");
    UpdateParams<Scalar> p;
    p.gamma = gamma;
    p.a = std::exp(gamma);
    p.alpha_next = Scalar(1) / (Scalar(1) / alpha + 2 * gamma);
    p.b = Scalar(1) + (alpha - p.alpha_next) / 2;
    p.c = -alpha + p.alpha_next * p.a;
    return p;
}

// a(g) + c(g) - 1 written without cancellation.
template <typename Scalar>
Scalar reach_excess(Scalar gamma, Scalar alpha) {
    const Scalar alpha_next = Scalar(1) / (Scalar(1) / alpha + 2 * gamma);
    return std::expm1(gamma) * (Scalar(1) + alpha_next) - 2 * gamma * alpha * alpha_next;
}

// Smallest bracketed gamma with a + c in [rho, rho (1 + 1e-10)].
template <typename Scalar>
Scalar solve_gamma(Scalar rho, Scalar alpha) {
    if (!(rho > Scalar(1))) throw std::invalid_argument("solve_gamma: rho must exceed 1");
    if (!(alpha > Scalar(0) && alpha <= Scalar(0.5))) throw std::invalid_argument("solve_gamma: alpha must lie in (0, 1/2]");
    const Scalar target = rho - Scalar(1);
    Scalar lo = 0;
    Scalar hi = std::log(rho) + Scalar(1);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int it = 0; it < 200; ++it) {
        if (hi - lo <= Scalar(4) * eps * hi) break;
        const Scalar mid = lo + (hi - lo) / 2;
        if (reach_excess(mid, alpha) >= target) hi = mid; else lo = mid;
    }
    const Scalar reach = Scalar(1) + reach_excess(hi, alpha);
    if (!(reach >= rho && reach <= rho * (Scalar(1) + Scalar(1e-10)))) {
        throw std::runtime_error("solve_gamma: bisection did not converge");
    }
    return hi;
}

template <typename Scalar>
struct StepInfo {
    StepKind kind = StepKind::skip;
    Scalar gamma = 0;
    Scalar rho = 0;
    UpdateParams<Scalar> params;
};

template <typename Scalar>
Scalar span_threshold(const RoundingState<Scalar>& s, const Vec<Scalar>& z) {
    return Scalar(kSpanTolerance) * std::max(Scalar(1), (z - s.center()).norm());
}

template <typename Scalar>
bool is_off_span(const RoundingState<Scalar>& s, const Vec<Scalar>& z) {
    if (s.dim() == s.outer.dim()) return false;
    return off_span_residual(s.outer, z).norm() > span_threshold(s, z);
}

namespace detail {

template <typename Scalar>
void refresh_orthonormality(RoundingState<Scalar>& s, Mat<Scalar>& axes) {
    if (++s.updates_since_ortho_check >= kOrthoCheckPeriod) {
        orthonormalize_if_drifted(axes);
        s.updates_since_ortho_check = 0;
    }
}

// Left axes and singular values of basis * k where k is square; returns (axes, semiaxes).
template <typename Scalar>
std::pair<Mat<Scalar>, Vec<Scalar>> recompute_factor(const Mat<Scalar>& basis, const Mat<Scalar>& k) {
    const SvdFactor<Scalar> f = svd_recompute(k);
    return {basis * f.left_axes, f.singular_values};
}

// Left axes and semiaxes of the map with Gram basis (diag(d) + rho z z^T) basis^T.
template <typename Scalar>
std::pair<Mat<Scalar>, Vec<Scalar>> rank_one_factor(const Mat<Scalar>& basis, const Vec<Scalar>& d, Scalar rho,
                                                    const Vec<Scalar>& z) {
    const SymmetricEigen<Scalar> e = symmetric_rank_one_eigen<Scalar>(d, rho, z);
    const Eigen::Index k = d.size();
    Vec<Scalar> semi(k);
    for (Eigen::Index i = 0; i < k; ++i) semi(i) = std::sqrt(std::max(e.values(k - 1 - i), Scalar(0)));
    Mat<Scalar> axes = basis * e.vectors.rowwise().reverse();
    return {std::move(axes), std::move(semi)};
}

}  // namespace detail

template <typename Scalar>
RoundingState<Scalar> full_update(const RoundingState<Scalar>& s, const Vec<Scalar>& z, StepInfo<Scalar>* info = nullptr) {
    if (z.size() != s.outer.dim()) throw std::invalid_argument("full_update: dimension mismatch");
    if (!z.allFinite()) throw std::invalid_argument("full_update: non-finite point");
    if (is_off_span(s, z)) throw std::invalid_argument("irregular step required");
    StepInfo<Scalar> local;
    StepInfo<Scalar>& out = info ? *info : local;
    out = StepInfo<Scalar>{};

    const Eigen::Index k = s.dim();
    const Vec<Scalar> y = z - s.center();
    const Vec<Scalar> u = k > 0 ? Vec<Scalar>((s.outer.axes().transpose() * y).cwiseQuotient(s.outer.semiaxes()))
                                : Vec<Scalar>(0);
    const Scalar rho = u.norm();
    out.rho = rho;
    if (rho <= Scalar(1)) {
        out.kind = StepKind::skip;
        return s;
    }
    if (!(s.alpha <= Scalar(0.5))) throw std::invalid_argument("full_update: alpha must be at most 1/2");

    const Scalar gamma = solve_gamma(rho, s.alpha);
    const UpdateParams<Scalar> p = compute_params(gamma, s.alpha);
    const Vec<Scalar> w = u / rho;
    const Vec<Scalar>& sigma = s.outer.semiaxes();
    const Vec<Scalar> sw = sigma.cwiseProduct(w);

    RoundingState<Scalar> next = s;
    const Vec<Scalar> center = s.center() + p.c * (s.outer.axes() * sw);
    Mat<Scalar> axes;
    Vec<Scalar> semi;
    if (s.path == SvdPath::rank_one) {
        const Scalar a_minus_b = std::expm1(gamma) - (s.alpha - p.alpha_next) / 2;
        const Scalar rho2 = a_minus_b * (p.a + p.b);
        std::tie(axes, semi) = detail::rank_one_factor<Scalar>(s.outer.axes(), Vec<Scalar>((p.b * sigma).cwiseAbs2()), rho2, sw);
    } else {
        Mat<Scalar> km = p.b * sigma.asDiagonal().toDenseMatrix();
        km.noalias() += (p.a - p.b) * sw * w.transpose();
        std::tie(axes, semi) = detail::recompute_factor<Scalar>(s.outer.axes(), km);
    }
    detail::refresh_orthonormality(next, axes);
    next.outer = Ellipsoid<Scalar>::from_orthonormal_axes(center, std::move(axes), std::move(semi));
    next.alpha = p.alpha_next;

    out.kind = StepKind::regular;
    out.gamma = gamma;
    out.params = p;
    return next;
}

template <typename Scalar>
RoundingState<Scalar> irregular_update(const RoundingState<Scalar>& s, const Vec<Scalar>& z, StepInfo<Scalar>* info = nullptr) {
    if (z.size() != s.outer.dim()) throw std::invalid_argument("irregular_update: dimension mismatch");
    if (!z.allFinite()) throw std::invalid_argument("irregular_update: non-finite point");
    if (!is_off_span(s, z)) throw std::invalid_argument("regular step required");
    if (!(s.alpha > Scalar(0) && s.alpha <= Scalar(1))) throw std::invalid_argument("irregular_update: alpha must lie in (0, 1]");

    const Eigen::Index k = s.dim();
    const Eigen::Index d = s.outer.dim();
    const Vec<Scalar> y = z - s.center();
    const Vec<Scalar> resid = off_span_residual(s.outer, z);
    const Scalar r = resid.norm();
    const Scalar alpha = s.alpha;
    const Scalar root = std::sqrt(Scalar(1) + 2 * alpha);
    const Scalar grow = (Scalar(1) + alpha) / root;

    Mat<Scalar> basis(d, k + 1);
    basis.leftCols(k) = s.outer.axes();
    basis.col(k) = resid / r;
    Vec<Scalar> yh(k + 1);
    if (k > 0) yh.head(k) = s.outer.axes().transpose() * y;
    yh(k) = r;

    Mat<Scalar> axes;
    Vec<Scalar> semi;
    if (s.path == SvdPath::rank_one) {
        Vec<Scalar> dg = Vec<Scalar>::Zero(k + 1);
        if (k > 0) dg.head(k) = (grow * s.outer.semiaxes()).cwiseAbs2();
        std::tie(axes, semi) = detail::rank_one_factor<Scalar>(basis, dg, grow * grow / (root * root), yh);
    } else {
        Mat<Scalar> km = Mat<Scalar>::Zero(k + 1, k + 1);
        if (k > 0) km.topLeftCorner(k, k) = s.outer.semiaxes().asDiagonal();
        km.col(k) = yh / root;
        km *= grow;
        std::tie(axes, semi) = detail::recompute_factor<Scalar>(basis, km);
    }
    RoundingState<Scalar> next = s;
    detail::refresh_orthonormality(next, axes);
    next.outer = Ellipsoid<Scalar>::from_orthonormal_axes(s.center() + (alpha / (Scalar(1) + 2 * alpha)) * y, std::move(axes), std::move(semi));
    next.alpha = Scalar(1) / (Scalar(1) / alpha + Scalar(1));
    if (info) {
        *info = StepInfo<Scalar>{};
        info->kind = StepKind::irregular;
        info->rho = r;
    }
    return next;
}

}  // namespace ellround
