#pragma once

#include "ellround/linalg.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace ellround {

inline constexpr double kCollapseRatio = 1e-10;
inline constexpr double kContainmentTolerance = 1e-8;
inline constexpr double kAxesDriftLimit = 1e-6;

// {center + axes * diag(semiaxes) * s : |s| <= 1}; axes is d x k with orthonormal columns.
template <typename Scalar>
class Ellipsoid {
public:
    Ellipsoid() = default;

    Ellipsoid(Vec<Scalar> center, Mat<Scalar> axes, Vec<Scalar> semiaxes)
        : center_(std::move(center)), axes_(std::move(axes)), semiaxes_(std::move(semiaxes)) {
        validate(true);
    }

    // For axes that are orthonormal by construction (products of orthonormal factors). Skips the
    // O(d k^2) Gram check; drift is handled by the periodic check in the update rules.
    static Ellipsoid from_orthonormal_axes(Vec<Scalar> center, Mat<Scalar> axes, Vec<Scalar> semiaxes) {
        Ellipsoid e;
        e.center_ = std::move(center);
        e.axes_ = std::move(axes);
        e.semiaxes_ = std::move(semiaxes);
        e.validate(false);
        return e;
    }

    static Ellipsoid ball(const Vec<Scalar>& center, Scalar radius) {
        const Eigen::Index d = center.size();
        return Ellipsoid(center, Mat<Scalar>::Identity(d, d), Vec<Scalar>::Constant(d, radius));
    }

    static Ellipsoid point(const Vec<Scalar>& center) {
        return Ellipsoid(center, Mat<Scalar>(center.size(), 0), Vec<Scalar>(0));
    }

    // Builds from an arbitrary d x k shape map L, i.e. center + L(B).
    static Ellipsoid from_map(const Vec<Scalar>& center, const Mat<Scalar>& map) {
        if (map.cols() == 0) return point(center);
        Eigen::BDCSVD<Mat<Scalar>> svd(map, Eigen::ComputeThinU);
        return Ellipsoid(center, svd.matrixU(), svd.singularValues());
    }

    const Vec<Scalar>& center() const { return center_; }
    const Mat<Scalar>& axes() const { return axes_; }
    const Vec<Scalar>& semiaxes() const { return semiaxes_; }
    Eigen::Index dim() const { return center_.size(); }
    Eigen::Index rank() const { return semiaxes_.size(); }

    Mat<Scalar> shape_map() const { return axes_ * semiaxes_.asDiagonal(); }

    Ellipsoid scaled(Scalar factor) const {
        return from_orthonormal_axes(center_, axes_, semiaxes_ * factor);
    }

    Ellipsoid translated(const Vec<Scalar>& offset) const {
        return from_orthonormal_axes(center_ + offset, axes_, semiaxes_);
    }

private:
    void validate(bool check_axes) {
        if (axes_.rows() != center_.size() || axes_.cols() != semiaxes_.size()) {
            throw std::invalid_argument("ellipsoid: inconsistent dimensions");
        }
        if (!center_.allFinite() || !axes_.allFinite() || !semiaxes_.allFinite()) {
            throw std::invalid_argument("ellipsoid: non-finite entries");
        }
        if (semiaxes_.size() == 0) return;
        if (semiaxes_.minCoeff() <= Scalar(0)) throw std::invalid_argument("ellipsoid: semiaxes must be positive");
        if (semiaxes_.minCoeff() < Scalar(kCollapseRatio) * semiaxes_.maxCoeff()) {
            throw std::invalid_argument("ellipsoid: dimension collapse");
        }
        if (!check_axes) return;
        // Rounding drift is repaired; anything larger is a caller error.
        const Scalar dev = gram_deviation(axes_);
        if (dev > Scalar(kAxesDriftLimit)) throw std::invalid_argument("ellipsoid: axes not orthonormal");
        if (dev > Scalar(kOrthoTolerance)) reorthonormalize(axes_);
    }

    Vec<Scalar> center_;
    Mat<Scalar> axes_;
    Vec<Scalar> semiaxes_;
};

template <typename Scalar>
struct ScaledEllipsoid {
    Ellipsoid<Scalar> body;
    Scalar alpha = Scalar(1);

    Ellipsoid<Scalar> materialize() const { return body.scaled(alpha); }
};

// Orthogonal residual of x - E.center off the span of E's axes.
template <typename Scalar>
Vec<Scalar> off_span_residual(const Ellipsoid<Scalar>& e, const Vec<Scalar>& x) {
    Vec<Scalar> y = x - e.center();
    if (e.rank() == 0) return y;
    for (int pass = 0; pass < 2; ++pass) y -= e.axes() * (e.axes().transpose() * y);
    return y;
}

// ||A(x - c)|| - 1; +inf when the off-span part exceeds tol * ||x - c||.
template <typename Scalar>
Scalar membership(const Ellipsoid<Scalar>& e, const Vec<Scalar>& x, Scalar tol) {
    if (x.size() != e.dim()) throw std::invalid_argument("membership: dimension mismatch");
    const Vec<Scalar> y = x - e.center();
    if (e.rank() < e.dim()) {
        const Scalar off = off_span_residual(e, x).norm();
        if (off > tol * y.norm()) return std::numeric_limits<Scalar>::infinity();
    }
    if (e.rank() == 0) return Scalar(-1);
    const Vec<Scalar> u = (e.axes().transpose() * y).cwiseQuotient(e.semiaxes());
    return u.norm() - Scalar(1);
}

template <typename Scalar>
Scalar log_volume(const Ellipsoid<Scalar>& e) {
    if (e.rank() == 0) return Scalar(0);
    return e.semiaxes().array().log().sum();
}

template <typename Scalar>
Scalar support(const Ellipsoid<Scalar>& e, const Vec<Scalar>& u) {
    if (u.size() != e.dim()) throw std::invalid_argument("support: dimension mismatch");
    Scalar h = e.center().dot(u);
    if (e.rank() > 0) h += e.semiaxes().cwiseProduct(e.axes().transpose() * u).norm();
    return h;
}

template <typename Scalar>
struct ContainmentResult {
    bool contained = false;
    // max over the inner body of the outer gauge, minus one (normalized scale).
    Scalar excess = Scalar(0);
    std::optional<Vec<Scalar>> violating_direction;
};

namespace detail {

inline constexpr std::uint64_t kSamplingSeed = 0x5eed5eedULL;

template <typename Scalar>
Vec<Scalar> random_unit(std::mt19937_64& rng, Eigen::Index k) {
    std::normal_distribution<Scalar> normal;
    Vec<Scalar> u(k);
    do {
        for (Eigen::Index i = 0; i < k; ++i) u(i) = normal(rng);
    } while (u.norm() == Scalar(0));
    return u.normalized();
}

// max over |s| <= 1 of |c + M s|, with the maximizer.
template <typename Scalar>
std::pair<Scalar, Vec<Scalar>> max_reach(const Vec<Scalar>& c, const Mat<Scalar>& m) {
    const Eigen::Index k = m.cols();
    if (k == 0) return {c.norm(), c};
    const Mat<Scalar> g = m.transpose() * m;
    const Vec<Scalar> lin = m.transpose() * c;
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig(g);
    const Vec<Scalar> mu = eig.eigenvalues();
    const Vec<Scalar> gh = eig.eigenvectors().transpose() * lin;
    const Scalar mu_max = mu.maxCoeff();
    const Scalar top_band = Scalar(1e-12) * std::max(mu_max, std::numeric_limits<Scalar>::min());

    auto norm_sq = [&](Scalar lambda, bool skip_top) {
        Scalar acc = 0;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (skip_top && mu_max - mu(i) <= top_band) continue;
            const Scalar t = gh(i) / (lambda - mu(i));
            acc += t * t;
        }
        return acc;
    };

    Scalar top_weight = 0;
    for (Eigen::Index i = 0; i < k; ++i) if (mu_max - mu(i) <= top_band) top_weight += gh(i) * gh(i);

    Vec<Scalar> sh = Vec<Scalar>::Zero(k);
    const bool hard = top_weight <= Scalar(1e-30) * std::max(lin.squaredNorm(), std::numeric_limits<Scalar>::min());
    bool solved = false;
    if (hard) {
        const Scalar h0 = norm_sq(mu_max, true);
        if (h0 <= Scalar(1)) {
            Eigen::Index top = 0;
            for (Eigen::Index i = 0; i < k; ++i) {
                if (mu_max - mu(i) <= top_band) top = i;
                else sh(i) = gh(i) / (mu_max - mu(i));
            }
            sh(top) = std::sqrt(std::max(Scalar(1) - h0, Scalar(0)));
            solved = true;
        }
    }
    if (!solved) {
        const Scalar eps = std::numeric_limits<Scalar>::epsilon();
        Scalar gap = std::max(gh.norm(), 4 * eps * std::max(mu_max, std::numeric_limits<Scalar>::min()));
        for (int it = 0; it < 4000 && norm_sq(mu_max + gap, hard) > Scalar(1); ++it) gap *= 2;
        Scalar lo = mu_max, hi = mu_max + gap;
        for (int it = 0; it < 200; ++it) {
            const Scalar mid = lo + (hi - lo) / 2;
            if (mid == lo || mid == hi) break;
            if (norm_sq(mid, hard) > Scalar(1)) lo = mid; else hi = mid;
        }
        for (Eigen::Index i = 0; i < k; ++i) {
            if (hard && mu_max - mu(i) <= top_band) continue;
            sh(i) = gh(i) / (hi - mu(i));
        }
        const Scalar n = sh.norm();
        if (n > Scalar(0)) sh /= n;
    }
    const Vec<Scalar> s = eig.eigenvectors() * sh;
    const Vec<Scalar> x = c + m * s;
    return {x.norm(), x};
}

}  // namespace detail

// Maps outer to the unit ball and maximizes the gauge over the image of inner.
template <typename Scalar>
ContainmentResult<Scalar> containment_check(const Ellipsoid<Scalar>& outer, const Ellipsoid<Scalar>& inner,
                                            Scalar tol = Scalar(kContainmentTolerance)) {
    if (outer.dim() != inner.dim()) throw std::invalid_argument("contains_ellipsoid: dimension mismatch");
    ContainmentResult<Scalar> res;
    const Vec<Scalar> dc = inner.center() - outer.center();
    const Mat<Scalar> lin = inner.shape_map();

    Scalar scale = dc.norm();
    if (inner.rank() > 0) scale = std::max(scale, inner.semiaxes().maxCoeff());
    if (outer.rank() > 0) scale = std::max(scale, outer.semiaxes().maxCoeff());
    if (outer.rank() < outer.dim()) {
        Mat<Scalar> stacked(outer.dim(), lin.cols() + 1);
        stacked << dc, lin;
        Mat<Scalar> resid = stacked;
        if (outer.rank() > 0) {
            for (int pass = 0; pass < 2; ++pass) resid -= outer.axes() * (outer.axes().transpose() * resid);
        }
        Eigen::Index worst = 0;
        const Scalar off = resid.colwise().norm().maxCoeff(&worst);
        if (off > Scalar(1e-8) * std::max(scale, std::numeric_limits<Scalar>::min())) {
            res.contained = false;
            res.excess = std::numeric_limits<Scalar>::infinity();
            res.violating_direction = resid.col(worst).normalized();
            return res;
        }
    }
    if (outer.rank() == 0) {
        res.contained = true;
        res.excess = Scalar(-1);
        return res;
    }

    const Vec<Scalar> inv = outer.semiaxes().cwiseInverse();
    const Vec<Scalar> c = inv.asDiagonal() * (outer.axes().transpose() * dc);
    const Mat<Scalar> m = inv.asDiagonal() * (outer.axes().transpose() * lin);

    auto [reach, arg] = detail::max_reach<Scalar>(c, m);

    // Sampled falsifier directions.
    std::mt19937_64 rng(detail::kSamplingSeed);
    const Eigen::Index k = outer.rank();
    for (int i = 0; i < 2048; ++i) {
        const Vec<Scalar> u = detail::random_unit<Scalar>(rng, k);
        const Scalar h = c.dot(u) + (m.transpose() * u).norm();
        if (h > reach) {
            reach = h;
            arg = u;
        }
    }
    res.excess = reach - Scalar(1);
    res.contained = res.excess <= tol;
    if (!res.contained) {
        const Scalar n = arg.norm();
        const Vec<Scalar> dir_local = n > Scalar(0) ? Vec<Scalar>(arg / n) : Vec<Scalar>(Vec<Scalar>::Unit(k, 0));
        res.violating_direction = (outer.axes() * inv.asDiagonal() * dir_local).normalized();
    }
    return res;
}

template <typename Scalar>
bool contains_ellipsoid(const Ellipsoid<Scalar>& outer, const Ellipsoid<Scalar>& inner,
                        Scalar tol = Scalar(kContainmentTolerance)) {
    return containment_check(outer, inner, tol).contained;
}

}  // namespace ellround
