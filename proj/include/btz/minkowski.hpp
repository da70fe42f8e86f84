#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <cmath>
#include <string>

#include "btz/errors.hpp"

namespace btz {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Coordinates are ordered (t, x, y); the metric is diag(-1, 1, 1).
template <typename Scalar = double>
Matrix3<Scalar> minkowski_metric()
{
    Matrix3<Scalar> g = Matrix3<Scalar>::Zero();
    g(0, 0) = Scalar(-1);
    g(1, 1) = Scalar(1);
    g(2, 2) = Scalar(1);
    return g;
}

template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar minkowski_inner(const Eigen::MatrixBase<DerivedU>& u,
                                          const Eigen::MatrixBase<DerivedV>& v)
{
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedU, 3);
    EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(DerivedV, 3);
    return -u(0) * v(0) + u(1) * v(1) + u(2) * v(2);
}

template <typename Derived>
typename Derived::Scalar quadratic_form(const Eigen::MatrixBase<Derived>& v)
{
    return minkowski_inner(v, v);
}

/// Vector u with <u, w> = det[w a b] for all w.
template <typename DerivedA, typename DerivedB>
Vector3<typename DerivedA::Scalar> minkowski_cross(const Eigen::MatrixBase<DerivedA>& a,
                                                   const Eigen::MatrixBase<DerivedB>& b)
{
    Vector3<typename DerivedA::Scalar> c = a.cross(b);
    c(0) = -c(0);
    return c;
}

/// Builds a vector, rejecting NaN and infinities.
Vec3 make_vector(double t, double x, double y);
void require_finite(const Vec3& v, const std::string& what);
void require_finite(const Mat3& m, const std::string& what);

enum class CausalClass {
    Zero,
    Spacelike,
    FutureTimelike,
    PastTimelike,
    FutureLightlike,
    PastLightlike,
};

const char* causal_class_name(CausalClass c);

inline constexpr double kLightlikeTol = 1e-9;
inline constexpr double kIsometryTol = 1e-9;
inline constexpr double kTraceBand = 1e-7;

/// |T(v)| <= tol * max(1, |v|^2) counts as lightlike; tol = 0 gives the exact classification.
template <typename Derived>
CausalClass causal_class(const Eigen::MatrixBase<Derived>& v,
                         typename Derived::Scalar tol = typename Derived::Scalar(kLightlikeTol))
{
    using Scalar = typename Derived::Scalar;
    const Scalar zero(0);
    if (v(0) == zero && v(1) == zero && v(2) == zero)
        return CausalClass::Zero;
    const Scalar q = quadratic_form(v);
    const Scalar n2 = v.squaredNorm();
    const Scalar scale = n2 > Scalar(1) ? n2 : Scalar(1);
    const Scalar aq = q < zero ? Scalar(-q) : q;
    if (aq <= tol * scale)
        return v(0) > zero ? CausalClass::FutureLightlike : CausalClass::PastLightlike;
    if (q > zero)
        return CausalClass::Spacelike;
    return v(0) > zero ? CausalClass::FutureTimelike : CausalClass::PastTimelike;
}

inline bool is_future_causal(CausalClass c)
{
    return c == CausalClass::FutureTimelike || c == CausalClass::FutureLightlike;
}

inline bool is_past_causal(CausalClass c)
{
    return c == CausalClass::PastTimelike || c == CausalClass::PastLightlike;
}

enum class CausalRelation {
    Equal,
    Chronological,         // p << q
    Causal,                // p <= q, not p << q
    ReverseChronological,  // q << p
    ReverseCausal,         // q <= p, not q << p
    Incomparable,
};

const char* causal_relation_name(CausalRelation r);

template <typename DerivedP, typename DerivedQ>
CausalRelation causal_relation(const Eigen::MatrixBase<DerivedP>& p,
                               const Eigen::MatrixBase<DerivedQ>& q,
                               typename DerivedP::Scalar tol = typename DerivedP::Scalar(kLightlikeTol))
{
    const Vector3<typename DerivedP::Scalar> d = q - p;
    switch (causal_class(d, tol)) {
    case CausalClass::Zero: return CausalRelation::Equal;
    case CausalClass::FutureTimelike: return CausalRelation::Chronological;
    case CausalClass::FutureLightlike: return CausalRelation::Causal;
    case CausalClass::PastTimelike: return CausalRelation::ReverseChronological;
    case CausalClass::PastLightlike: return CausalRelation::ReverseCausal;
    case CausalClass::Spacelike: break;
    }
    return CausalRelation::Incomparable;
}

inline bool precedes(CausalRelation r)
{
    return r == CausalRelation::Equal || r == CausalRelation::Chronological ||
           r == CausalRelation::Causal;
}

/// M^T G M - G, the defect of M as an isometry.
template <typename Derived>
Matrix3<typename Derived::Scalar> isometry_defect(const Eigen::MatrixBase<Derived>& m)
{
    using Scalar = typename Derived::Scalar;
    const Matrix3<Scalar> g = minkowski_metric<Scalar>();
    return m.transpose() * g * m - g;
}

/// Inverse of an element of O(1,2): G M^T G.
template <typename Derived>
Matrix3<typename Derived::Scalar> isometry_inverse(const Eigen::MatrixBase<Derived>& m)
{
    using Scalar = typename Derived::Scalar;
    const Matrix3<Scalar> g = minkowski_metric<Scalar>();
    return g * m.transpose() * g;
}

/// Element of SO_0(1,2). Construction checks M^T G M = G, det M = 1 and M(0,0) > 0.
class LinearIsometry {
public:
    LinearIsometry() : m_(Mat3::Identity()) {}
    explicit LinearIsometry(const Mat3& m, double tol = kIsometryTol);

    static LinearIsometry unchecked(const Mat3& m);
    static LinearIsometry rotation(double angle);
    /// Boost in the (t, x) plane with rapidity s.
    static LinearIsometry boost_x(double rapidity);

    const Mat3& matrix() const { return m_; }
    Vec3 operator()(const Vec3& v) const { return m_ * v; }
    LinearIsometry operator*(const LinearIsometry& other) const
    {
        return unchecked(m_ * other.m_);
    }
    LinearIsometry inverse() const { return unchecked(isometry_inverse(m_)); }

private:
    Mat3 m_;
};

enum class IsometryKind { Identity, Elliptic, Parabolic, Hyperbolic };

const char* isometry_kind_name(IsometryKind k);

struct IsometryClass {
    IsometryKind kind = IsometryKind::Identity;
    double angle = 0.0;  // rotation angle for elliptic elements, in [0, pi]
};

IsometryClass classify_isometry(const LinearIsometry& a, double tol = kIsometryTol,
                                double band = kTraceBand);

/// Future lightlike fixed direction of a parabolic element, normalized to t = 1.
Vec3 fixed_lightlike_direction(const LinearIsometry& a, double tol = kIsometryTol,
                               double band = kTraceBand);

bool is_tangent(const Vec3& tau, const Vec3& u, double tol = kIsometryTol);

/// x -> A x + a.
class AffineIsometry {
public:
    AffineIsometry() : translation_(Vec3::Zero()) {}
    AffineIsometry(const LinearIsometry& linear, const Vec3& translation);

    const LinearIsometry& linear() const { return linear_; }
    const Vec3& translation() const { return translation_; }

    Vec3 operator()(const Vec3& x) const { return linear_.matrix() * x + translation_; }
    AffineIsometry operator*(const AffineIsometry& other) const;
    AffineIsometry inverse() const;

private:
    LinearIsometry linear_;
    Vec3 translation_;
};

struct FixedLine {
    Vec3 point;      // Euclidean closest point of the line to the origin
    Vec3 direction;  // future lightlike, t = 1
};

/// Fixed line of an affine isometry with parabolic linear part.
FixedLine fixed_line(const AffineIsometry& g, double tol = kIsometryTol);

}  // namespace btz
