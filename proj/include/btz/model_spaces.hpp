#pragma once

#include <numbers>

#include "btz/minkowski.hpp"

namespace btz {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Metric of the massive-particle model at (t, r, theta): diag(-1, 1, ((alpha / 2pi) r)^2).
Mat3 metric_massive(double alpha, const Vec3& point);

/// Metric of the BTZ model at (tau, r, theta): -2 dtau dr + dr^2 + r^2 dtheta^2.
Mat3 metric_btz(const Vec3& point);

/// Developing map of the BTZ model onto the half-space {t > x} plus the line t = x, y = 0.
template <typename Derived>
Vector3<typename Derived::Scalar> dev0(const Eigen::MatrixBase<Derived>& p)
{
    using Scalar = typename Derived::Scalar;
    const Scalar& tau = p(0);
    const Scalar& r = p(1);
    const Scalar& theta = p(2);
    const Scalar a = tau + r * theta * theta / Scalar(2);
    return Vector3<Scalar>(a, a - r, -r * theta);
}

/// Jacobian of dev0 with respect to (tau, r, theta).
Mat3 dev0_jacobian(const Vec3& p);

bool in_image_dev0(const Vec3& v, double tol = 0.0);

/// Inverse of dev0. Points of the singular line map to (tau, 0, 0).
Vec3 dev0_inverse(const Vec3& v, double tol = 0.0);

/// The BTZ isometry h_l(tau, r, theta) = (l tau - (l^2 - 1) r / (2 l), r / l, l theta), l > 0.
template <typename Derived>
Vector3<typename Derived::Scalar> h_ell(typename Derived::Scalar ell,
                                        const Eigen::MatrixBase<Derived>& p)
{
    using Scalar = typename Derived::Scalar;
    if (!(ell > Scalar(0)))
        fail(ErrorCode::InvalidInput, "h_l needs l > 0");
    if (ell == Scalar(1))
        return p;
    return Vector3<Scalar>(ell * p(0) - (ell * ell - Scalar(1)) * p(1) / (Scalar(2) * ell),
                           p(1) / ell, ell * p(2));
}

/// Point of a model space E_alpha; alpha = 0 is the BTZ model. Coordinates are (t, r, theta)
/// for alpha > 0 and (tau, r, theta) for alpha = 0.
struct ModelPoint {
    double alpha = 0.0;
    Vec3 coords = Vec3::Zero();
    bool reduced = false;
};

/// Reduces theta modulo 2 pi; singular points get theta = 0.
ModelPoint project_branched(double alpha, const Vec3& coords);

/// Isometry of E_alpha translating time by t0 and angle by theta0.
ModelPoint model_isometry(const ModelPoint& p, double t0, double theta0);

/// Developing map of E_alpha, alpha > 0, near the regular part.
Vec3 dev_massive(double alpha, const Vec3& p);

/// Holonomy of the loop around the singular line of E_alpha in the chart of its developing map.
LinearIsometry holonomy_around_axis(double alpha);

/// Parabolic element g_s fixing (1, 1, 0) with dev0(tau, r, theta + s) = g_s dev0(tau, r, theta).
LinearIsometry btz_angle_shift(double s);

/// Causal relation of two points of the BTZ model, given by (tau, r, theta). Lifts
/// theta + 2 pi k of the second point are searched for |k| <= kmax; throws SearchInconclusive
/// when a causal lift may exist beyond that range.
CausalRelation btz_causal_relation(const Vec3& p, const Vec3& q, int kmax = 8,
                                   double tol = kLightlikeTol);

}  // namespace btz
