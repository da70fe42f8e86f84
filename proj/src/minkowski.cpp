#include "btz/minkowski.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <sstream>

namespace btz {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidVector: return "InvalidVector";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::InvalidTriangulation: return "InvalidTriangulation";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidIsometry: return "InvalidIsometry";
    case ErrorCode::NotParabolic: return "NotParabolic";
    case ErrorCode::NoFixedPoints: return "NoFixedPoints";
    case ErrorCode::AlphaZero: return "AlphaZero";
    case ErrorCode::NotInImage: return "NotInImage";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::InvalidRepresentation: return "InvalidRepresentation";
    case ErrorCode::DecorationFailure: return "DecorationFailure";
    case ErrorCode::KappaSearchExhausted: return "KappaSearchExhausted";
    case ErrorCode::NonMonotoneAngles: return "NonMonotoneAngles";
    case ErrorCode::SpearNotFound: return "SpearNotFound";
    case ErrorCode::MSearchExhausted: return "MSearchExhausted";
    case ErrorCode::OnSeam: return "OnSeam";
    case ErrorCode::NotCausal: return "NotCausal";
    case ErrorCode::Tangency: return "Tangency";
    case ErrorCode::SearchInconclusive: return "SearchInconclusive";
    case ErrorCode::DecompositionViolation: return "DecompositionViolation";
    }
    return "Unknown";
}

bool is_input_error(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidVector:
    case ErrorCode::InvalidInput:
    case ErrorCode::UnknownGenerator:
    case ErrorCode::InvalidTriangulation:
    case ErrorCode::InvalidProfile:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code)
{
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

Vec3 make_vector(double t, double x, double y)
{
    Vec3 v(t, x, y);
    require_finite(v, "vector");
    return v;
}

void require_finite(const Vec3& v, const std::string& what)
{
    if (!v.allFinite())
        fail(ErrorCode::InvalidVector, what + " has a non-finite component");
}

void require_finite(const Mat3& m, const std::string& what)
{
    if (!m.allFinite())
        fail(ErrorCode::InvalidVector, what + " has a non-finite entry");
}

const char* causal_class_name(CausalClass c)
{
    switch (c) {
    case CausalClass::Zero: return "zero";
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::FutureTimelike: return "future timelike";
    case CausalClass::PastTimelike: return "past timelike";
    case CausalClass::FutureLightlike: return "future lightlike";
    case CausalClass::PastLightlike: return "past lightlike";
    }
    return "?";
}

const char* causal_relation_name(CausalRelation r)
{
    switch (r) {
    case CausalRelation::Equal: return "equal";
    case CausalRelation::Chronological: return "chronological";
    case CausalRelation::Causal: return "causal";
    case CausalRelation::ReverseChronological: return "reverse chronological";
    case CausalRelation::ReverseCausal: return "reverse causal";
    case CausalRelation::Incomparable: return "incomparable";
    }
    return "?";
}

const char* isometry_kind_name(IsometryKind k)
{
    switch (k) {
    case IsometryKind::Identity: return "identity";
    case IsometryKind::Elliptic: return "elliptic";
    case IsometryKind::Parabolic: return "parabolic";
    case IsometryKind::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

LinearIsometry::LinearIsometry(const Mat3& m, double tol) : m_(m)
{
    require_finite(m, "isometry matrix");
    const double scale = std::max(1.0, m.squaredNorm());
    const double defect = isometry_defect(m).norm();
    if (defect > tol * scale) {
        std::ostringstream os;
        os << "matrix does not preserve the Minkowski form (defect " << defect << ")";
        fail(ErrorCode::InvalidIsometry, os.str());
    }
    if (m.determinant() < 0.0)
        fail(ErrorCode::InvalidIsometry, "determinant is -1");
    if (m(0, 0) <= 0.0)
        fail(ErrorCode::InvalidIsometry, "matrix reverses time orientation");
}

LinearIsometry LinearIsometry::unchecked(const Mat3& m)
{
    LinearIsometry a;
    a.m_ = m;
    return a;
}

LinearIsometry LinearIsometry::rotation(double angle)
{
    Mat3 m = Mat3::Identity();
    const double c = std::cos(angle), s = std::sin(angle);
    m(1, 1) = c;
    m(1, 2) = -s;
    m(2, 1) = s;
    m(2, 2) = c;
    return unchecked(m);
}

LinearIsometry LinearIsometry::boost_x(double rapidity)
{
    Mat3 m = Mat3::Identity();
    const double c = std::cosh(rapidity), s = std::sinh(rapidity);
    m(0, 0) = c;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = c;
    return unchecked(m);
}

IsometryClass classify_isometry(const LinearIsometry& a, double tol, double band)
{
    const Mat3& m = a.matrix();
    const Mat3 n = m - Mat3::Identity();
    IsometryClass out;
    if (n.norm() <= tol)
        return out;
    const double tr = m.trace();
    if (std::abs(tr - 3.0) <= band) {
        out.kind = (n * n).norm() > tol ? IsometryKind::Parabolic : IsometryKind::Identity;
        return out;
    }
    if (tr > 3.0) {
        out.kind = IsometryKind::Hyperbolic;
        return out;
    }
    out.kind = IsometryKind::Elliptic;
    out.angle = std::acos(std::clamp((tr - 1.0) / 2.0, -1.0, 1.0));
    return out;
}

Vec3 fixed_lightlike_direction(const LinearIsometry& a, double tol, double band)
{
    if (classify_isometry(a, tol, band).kind != IsometryKind::Parabolic)
        fail(ErrorCode::NotParabolic, "isometry is not parabolic");
    const Mat3 n = a.matrix() - Mat3::Identity();
    Vec3 best = Vec3::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            Vec3 c = n.row(i).transpose().cross(n.row(j).transpose());
            if (c.squaredNorm() > best.squaredNorm())
                best = c;
        }
    }
    if (best(0) == 0.0)
        fail(ErrorCode::NotParabolic, "fixed direction has no time component");
    return best / best(0);
}

bool is_tangent(const Vec3& tau, const Vec3& u, double tol)
{
    return std::abs(minkowski_inner(tau, u)) <= tol * std::max(1.0, tau.norm() * u.norm());
}

AffineIsometry::AffineIsometry(const LinearIsometry& linear, const Vec3& translation)
    : linear_(linear), translation_(translation)
{
    require_finite(translation, "translation");
}

AffineIsometry AffineIsometry::operator*(const AffineIsometry& other) const
{
    AffineIsometry out;
    out.linear_ = linear_ * other.linear_;
    out.translation_ = linear_.matrix() * other.translation_ + translation_;
    return out;
}

AffineIsometry AffineIsometry::inverse() const
{
    AffineIsometry out;
    out.linear_ = linear_.inverse();
    out.translation_ = -(out.linear_.matrix() * translation_);
    return out;
}

FixedLine fixed_line(const AffineIsometry& g, double tol)
{
    FixedLine line;
    line.direction = fixed_lightlike_direction(g.linear(), tol);
    if (!is_tangent(g.translation(), line.direction, tol))
        fail(ErrorCode::NoFixedPoints, "translation part is not tangent to the fixed direction");
    const Mat3 n = g.linear().matrix() - Mat3::Identity();
    Eigen::JacobiSVD<Mat3> svd(n, Eigen::ComputeFullU | Eigen::ComputeFullV);
    svd.setThreshold(1e-12);
    line.point = svd.solve(-g.translation());
    const double residual = (n * line.point + g.translation()).norm();
    if (residual > 1e-8 * std::max(1.0, g.translation().norm()))
        fail(ErrorCode::NoFixedPoints, "fixed-point system is inconsistent");
    return line;
}

}  // namespace btz
