#include "btz/model_spaces.hpp"

#include <algorithm>
#include <cmath>

namespace btz {

Mat3 metric_massive(double alpha, const Vec3& point)
{
    if (alpha == 0.0)
        fail(ErrorCode::AlphaZero, "use metric_btz for alpha = 0");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        fail(ErrorCode::InvalidInput, "cone angle must be positive");
    require_finite(point, "model point");
    const double s = alpha / kTwoPi * point(1);
    Mat3 g = Mat3::Zero();
    g(0, 0) = -1.0;
    g(1, 1) = 1.0;
    g(2, 2) = s * s;
    return g;
}

Mat3 metric_btz(const Vec3& point)
{
    require_finite(point, "model point");
    Mat3 g = Mat3::Zero();
    g(0, 1) = g(1, 0) = -1.0;
    g(1, 1) = 1.0;
    g(2, 2) = point(1) * point(1);
    return g;
}

Mat3 dev0_jacobian(const Vec3& p)
{
    const double r = p(1), th = p(2);
    Mat3 j;
    j << 1.0, 0.5 * th * th, r * th,
         1.0, 0.5 * th * th - 1.0, r * th,
         0.0, -th, -r;
    return j;
}

bool in_image_dev0(const Vec3& v, double tol)
{
    if (!v.allFinite())
        return false;
    const double r = v(0) - v(1);
    if (r > tol)
        return true;
    return std::abs(r) <= tol && std::abs(v(2)) <= tol;
}

Vec3 dev0_inverse(const Vec3& v, double tol)
{
    require_finite(v, "point");
    if (!in_image_dev0(v, tol))
        fail(ErrorCode::NotInImage, "point is outside the image of dev0");
    const double r = v(0) - v(1);
    if (r <= tol)
        return Vec3(v(0), 0.0, 0.0);
    const double theta = -v(2) / r;
    return Vec3(v(0) - 0.5 * r * theta * theta, r, theta);
}

ModelPoint project_branched(double alpha, const Vec3& coords)
{
    require_finite(coords, "model point");
    if (alpha < 0.0)
        fail(ErrorCode::InvalidInput, "cone angle must be non-negative");
    if (coords(1) < 0.0)
        fail(ErrorCode::InvalidInput, "radial coordinate must be non-negative");
    ModelPoint out;
    out.alpha = alpha;
    out.coords = coords;
    if (coords(1) == 0.0) {
        out.coords(2) = 0.0;
    } else {
        double th = std::fmod(coords(2), kTwoPi);
        if (th < 0.0)
            th += kTwoPi;
        if (th >= kTwoPi)
            th = 0.0;
        out.coords(2) = th;
    }
    out.reduced = true;
    return out;
}

ModelPoint model_isometry(const ModelPoint& p, double t0, double theta0)
{
    Vec3 c = p.coords;
    c(0) += t0;
    if (c(1) != 0.0)
        c(2) += theta0;
    return p.reduced ? project_branched(p.alpha, c) : ModelPoint{p.alpha, c, false};
}

Vec3 dev_massive(double alpha, const Vec3& p)
{
    const double phi = alpha / kTwoPi * p(2);
    return Vec3(p(0), p(1) * std::cos(phi), p(1) * std::sin(phi));
}

LinearIsometry btz_angle_shift(double s)
{
    // Basis l = (1,1,0), n = (0,0,-1), m = (0,-1,0): dev0 = tau l + r (m + theta n + theta^2/2 l).
    Mat3 b;
    b.col(0) = Vec3(1.0, 1.0, 0.0);
    b.col(1) = Vec3(0.0, 0.0, -1.0);
    b.col(2) = Vec3(0.0, -1.0, 0.0);
    Mat3 shift;
    shift << 1.0, s, 0.5 * s * s,
             0.0, 1.0, s,
             0.0, 0.0, 1.0;
    return LinearIsometry::unchecked(b * shift * b.inverse());
}

LinearIsometry holonomy_around_axis(double alpha)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        fail(ErrorCode::InvalidInput, "cone angle must be non-negative");
    if (alpha == 0.0)
        return btz_angle_shift(kTwoPi);
    return LinearIsometry::rotation(alpha);
}

namespace {

CausalRelation reverse(CausalRelation r)
{
    switch (r) {
    case CausalRelation::Chronological: return CausalRelation::ReverseChronological;
    case CausalRelation::Causal: return CausalRelation::ReverseCausal;
    case CausalRelation::ReverseChronological: return CausalRelation::Chronological;
    case CausalRelation::ReverseCausal: return CausalRelation::Causal;
    default: return r;
    }
}

// p regular, r_p < r_q or singular p.
CausalRelation forward_relation(const Vec3& p, const Vec3& q, int kmax, double tol)
{
    const double r1 = p(1), r2 = q(1);
    if (r1 == 0.0) {
        const double gap = 2.0 * (q(0) - p(0)) - r2;
        const double scale = std::max({1.0, std::abs(q(0)), std::abs(p(0)), r2});
        if (gap > tol * scale)
            return CausalRelation::Chronological;
        if (gap >= -tol * scale)
            return CausalRelation::Causal;
        return CausalRelation::Incomparable;
    }
    // T along the lift theta' of q is convex quadratic in theta' with vertex at theta_p.
    const double dr = r2 - r1;
    const double tmin = dr * (dr - 2.0 * (q(0) - p(0)));
    const double A = r1 * r2;
    const double halfwidth = tmin < 0.0 ? std::sqrt(-tmin / A) : 0.0;
    const double slack = 1e-6 * (1.0 + halfwidth);
    const double lo = p(2) - halfwidth - slack, hi = p(2) + halfwidth + slack;
    const long kmin_needed = static_cast<long>(std::ceil((lo - q(2)) / kTwoPi));
    const long kmax_needed = static_cast<long>(std::floor((hi - q(2)) / kTwoPi));
    const Vec3 dp = dev0(p);
    CausalRelation best = CausalRelation::Incomparable;
    bool beyond = false;
    for (long k = kmin_needed; k <= kmax_needed; ++k) {
        if (k < -kmax || k > kmax) {
            beyond = true;
            continue;
        }
        const Vec3 lift(q(0), q(1), q(2) + kTwoPi * static_cast<double>(k));
        const CausalClass c = causal_class(Vec3(dev0(lift) - dp), tol);
        if (c == CausalClass::FutureTimelike)
            return CausalRelation::Chronological;
        if (c == CausalClass::FutureLightlike)
            best = CausalRelation::Causal;
    }
    if (best == CausalRelation::Incomparable && beyond)
        fail(ErrorCode::SearchInconclusive, "causal lifts lie beyond the searched deck range");
    return best;
}

}  // namespace

CausalRelation btz_causal_relation(const Vec3& p, const Vec3& q, int kmax, double tol)
{
    require_finite(p, "BTZ point");
    require_finite(q, "BTZ point");
    if (p(1) < 0.0 || q(1) < 0.0)
        fail(ErrorCode::InvalidInput, "radial coordinate must be non-negative");
    const double r1 = p(1), r2 = q(1);
    if (r1 == 0.0 && r2 == 0.0) {
        if (p(0) == q(0))
            return CausalRelation::Equal;
        return p(0) < q(0) ? CausalRelation::Causal : CausalRelation::ReverseCausal;
    }
    if (r1 == r2) {
        double dth = std::remainder(q(2) - p(2), kTwoPi);
        if (std::abs(dth) * r1 > tol * std::max(1.0, r1))
            return CausalRelation::Incomparable;
        if (p(0) == q(0))
            return CausalRelation::Equal;
        return p(0) < q(0) ? CausalRelation::Causal : CausalRelation::ReverseCausal;
    }
    if (r1 < r2)
        return forward_relation(p, q, kmax, tol);
    return reverse(forward_relation(q, p, kmax, tol));
}

}  // namespace btz
