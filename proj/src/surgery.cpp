#include "btz/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace btz {

double BoundaryProfile::value(double theta) const
{
    double v = constant;
    for (std::size_t k = 0; k < cos.size(); ++k)
        v += cos[k] * std::cos((k + 1.0) * theta);
    for (std::size_t k = 0; k < sin.size(); ++k)
        v += sin[k] * std::sin((k + 1.0) * theta);
    return v;
}

double BoundaryProfile::derivative(double theta) const
{
    double v = 0.0;
    for (std::size_t k = 0; k < cos.size(); ++k)
        v -= (k + 1.0) * cos[k] * std::sin((k + 1.0) * theta);
    for (std::size_t k = 0; k < sin.size(); ++k)
        v += (k + 1.0) * sin[k] * std::cos((k + 1.0) * theta);
    return v;
}

double BoundaryProfile::second_derivative(double theta) const
{
    double v = 0.0;
    for (std::size_t k = 0; k < cos.size(); ++k)
        v -= (k + 1.0) * (k + 1.0) * cos[k] * std::cos((k + 1.0) * theta);
    for (std::size_t k = 0; k < sin.size(); ++k)
        v -= (k + 1.0) * (k + 1.0) * sin[k] * std::sin((k + 1.0) * theta);
    return v;
}

double BoundaryProfile::max_abs_derivative() const
{
    const std::size_t modes = std::max(cos.size(), sin.size());
    if (modes == 0)
        return 0.0;
    const int n = 256 * static_cast<int>(modes + 1);
    double best = 0.0;
    double best_theta = 0.0;
    for (int i = 0; i < n; ++i) {
        const double th = kTwoPi * i / n;
        const double d = std::abs(derivative(th));
        if (d > best) {
            best = d;
            best_theta = th;
        }
    }
    // Newton on tau'' = 0, with tau''' by central differences of tau''
    double th = best_theta;
    const double h = 1e-5;
    for (int it = 0; it < 20; ++it) {
        const double f = second_derivative(th);
        const double fp = (second_derivative(th + h) - second_derivative(th - h)) / (2.0 * h);
        if (fp == 0.0)
            break;
        const double step = f / fp;
        if (std::abs(step) > kTwoPi / n)
            break;
        th -= step;
        if (std::abs(step) < 1e-15)
            break;
    }
    return std::max(best, std::abs(derivative(th)));
}

void BoundaryProfile::check() const
{
    if (!(R > 0.0) || !std::isfinite(R))
        fail(ErrorCode::InvalidProfile, "boundary radius must be positive");
    if (!std::isfinite(constant))
        fail(ErrorCode::InvalidProfile, "non-finite coefficient");
    for (double c : cos)
        if (!std::isfinite(c))
            fail(ErrorCode::InvalidProfile, "non-finite coefficient");
    for (double s : sin)
        if (!std::isfinite(s))
            fail(ErrorCode::InvalidProfile, "non-finite coefficient");
}

const char* provenance_name(GraphProvenance p)
{
    switch (p) {
    case GraphProvenance::Complete: return "extend_complete";
    case GraphProvenance::Compact: return "extend_compact";
    case GraphProvenance::Analytic: return "analytic";
    case GraphProvenance::Grid: return "grid";
    }
    return "?";
}

SurfaceGraph SurfaceGraph::analytic(double R, JetFn jet, bool punctured)
{
    if (!(R > 0.0))
        fail(ErrorCode::InvalidProfile, "graph radius must be positive");
    SurfaceGraph g;
    g.R_ = R;
    g.provenance_ = GraphProvenance::Analytic;
    g.punctured_ = punctured;
    g.jet_ = std::move(jet);
    return g;
}

SurfaceGraph SurfaceGraph::from_grid(double R, std::vector<double> radii, int thetas,
                                     std::vector<double> values)
{
    if (!(R > 0.0))
        fail(ErrorCode::InvalidProfile, "graph radius must be positive");
    if (radii.size() < 2 || thetas < 3 || values.size() != radii.size() * thetas)
        fail(ErrorCode::InvalidInput, "grid graph needs >= 2 radii, >= 3 angles and matching values");
    if (!std::is_sorted(radii.begin(), radii.end()) || radii.front() <= 0.0 || radii.back() != R)
        fail(ErrorCode::InvalidInput, "grid radii must increase from > 0 up to R");
    auto eval = [radii, thetas, values](double r, double theta) {
        const double rr = std::clamp(r, radii.front(), radii.back());
        std::size_t i = std::upper_bound(radii.begin(), radii.end(), rr) - radii.begin();
        i = std::clamp<std::size_t>(i, 1, radii.size() - 1);
        const double s = (rr - radii[i - 1]) / (radii[i] - radii[i - 1]);
        double x = std::fmod(theta, kTwoPi);
        if (x < 0.0)
            x += kTwoPi;
        x *= thetas / kTwoPi;
        const int j0 = static_cast<int>(std::floor(x)) % thetas;
        const int j1 = (j0 + 1) % thetas;
        const double w = x - std::floor(x);
        auto at = [&](std::size_t a, int b) { return values[a * thetas + b]; };
        const double lo = (1 - w) * at(i - 1, j0) + w * at(i - 1, j1);
        const double hi = (1 - w) * at(i, j0) + w * at(i, j1);
        return (1 - s) * lo + s * hi;
    };
    SurfaceGraph g;
    g.R_ = R;
    g.provenance_ = GraphProvenance::Grid;
    g.punctured_ = true;
    g.jet_ = [eval, R](double r, double theta) {
        const double h = 1e-6 * R;
        GraphJet j;
        j.value = eval(r, theta);
        j.d_r = (eval(std::min(r + h, R), theta) - eval(r - h, theta)) / (std::min(r + h, R) - (r - h));
        j.d_theta = (eval(r, theta + 1e-6) - eval(r, theta - 1e-6)) / 2e-6;
        return j;
    };
    return g;
}

void SurfaceGraph::check_domain(double r) const
{
    if (!std::isfinite(r) || r > R_ * (1.0 + 1e-12) || r < 0.0 || (punctured_ && r == 0.0))
        fail(ErrorCode::InvalidInput, "radius outside the domain of the graph");
}

GraphJet SurfaceGraph::jet(double r, double theta) const
{
    check_domain(r);
    if (seam_ && std::abs(r - *seam_) <= 1e-12 * R_)
        fail(ErrorCode::OnSeam, "derivatives are not defined on the seam");
    return jet_(r, theta);
}

double SurfaceGraph::value(double r, double theta) const
{
    check_domain(r);
    return jet_(r, theta).value;
}

SurfaceGraph extend_complete(const BoundaryProfile& bp)
{
    bp.check();
    const double d = bp.max_abs_derivative();
    const double M = 1.0 + d * d;
    const double R = bp.R;
    SurfaceGraph g;
    g.R_ = R;
    g.provenance_ = GraphProvenance::Complete;
    g.punctured_ = true;
    g.M_ = M;
    g.jet_ = [bp, M, R](double r, double theta) {
        GraphJet j;
        j.value = bp.value(theta) + M * (1.0 / r - 1.0 / R);
        j.d_r = -M / (r * r);
        j.d_theta = bp.derivative(theta);
        return j;
    };
    return g;
}

namespace {

SurfaceGraph::JetFn compact_jet(const BoundaryProfile& bp, double M)
{
    const double R = bp.R;
    return [bp, M, R](double r, double theta) {
        GraphJet j;
        if (r <= 0.5 * R) {
            j.value = M / R;
            return j;
        }
        const double s = (2.0 * r - R) / R;
        j.value = s * s * bp.value(theta) + M * (1.0 / r - 1.0 / R);
        j.d_r = 4.0 * (2.0 * r - R) / (R * R) * bp.value(theta) - M / (r * r);
        j.d_theta = s * s * bp.derivative(theta);
        return j;
    };
}

double delta_of(const GraphJet& j, double r)
{
    const double a = j.d_theta / r;
    return 1.0 - 2.0 * j.d_r - a * a;
}

}  // namespace

SurfaceGraph extend_compact(const BoundaryProfile& bp, double margin)
{
    bp.check();
    const double d = bp.max_abs_derivative();
    double M = 1.0 + d * d;
    const double R = bp.R;
    for (int doubling = 0; doubling <= 60; ++doubling, M *= 2.0) {
        const auto jet = compact_jet(bp, M);
        bool ok = true;
        const int nr = 200, nt = 256;
        for (int i = 0; i <= nr && ok; ++i) {
            const double r = 0.5 * R + 0.5 * R * (i + 0.5) / (nr + 1);
            for (int k = 0; k < nt; ++k) {
                const double th = kTwoPi * k / nt;
                if (!(delta_of(jet(r, th), r) > margin)) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            SurfaceGraph g;
            g.R_ = R;
            g.provenance_ = GraphProvenance::Compact;
            g.punctured_ = false;
            g.M_ = M;
            g.seam_ = 0.5 * R;
            g.jet_ = jet;
            return g;
        }
    }
    fail(ErrorCode::MSearchExhausted, "no M up to 2^60 makes the compact cap spacelike");
}

double delta(const SurfaceGraph& sg, double r, double theta)
{
    if (!(r > 0.0))
        fail(ErrorCode::InvalidInput, "delta needs r > 0");
    return delta_of(sg.jet(r, theta), r);
}

Mat2 induced_metric(const SurfaceGraph& sg, double r, double theta)
{
    if (!(r > 0.0))
        fail(ErrorCode::InvalidInput, "induced metric needs r > 0");
    const GraphJet j = sg.jet(r, theta);
    const double d = delta_of(j, r);
    Mat2 g;
    g(0, 0) = d + j.d_theta * j.d_theta / (r * r);
    g(0, 1) = g(1, 0) = -j.d_theta;
    g(1, 1) = r * r;
    return g;
}

CompletenessCertificate completeness_certificate(const SurfaceGraph& sg, int angular_samples,
                                                 double margin)
{
    CompletenessCertificate cert;
    cert.C = std::numeric_limits<double>::infinity();
    constexpr int rings = 20;
    for (int k = 0; k <= rings; ++k) {
        double ring = std::numeric_limits<double>::infinity();
        const double base = sg.R() * std::ldexp(1.0, -k);
        for (double f : {0.999, 0.75}) {
            const double r = base * f;
            for (int i = 0; i < angular_samples; ++i) {
                const double th = kTwoPi * i / angular_samples;
                const double d = delta(sg, r, th);
                if (!(d > 0.0)) {
                    cert.reason = "graph is not spacelike at r = " + std::to_string(r);
                    cert.C = 0.0;
                    return cert;
                }
                ring = std::min(ring, r * std::sqrt(d));
            }
        }
        cert.ring_minima.push_back(ring);
        cert.C = std::min(cert.C, ring);
    }
    if (!(cert.C > margin)) {
        cert.reason = "r sqrt(delta) is not bounded below by the margin";
        return cert;
    }
    if (cert.ring_minima[rings] < 0.5 * cert.ring_minima[rings - 5]) {
        cert.reason = "r sqrt(delta) decays towards the puncture";
        return cert;
    }
    cert.certified = true;
    return cert;
}

DivergenceReport divergence_check(const SurfaceGraph& sg, double threshold, int angular_samples)
{
    DivergenceReport rep;
    rep.threshold = threshold;
    for (int k = 0; k <= 20; ++k) {
        const double r = sg.R() * std::ldexp(1.0, -k);
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i < angular_samples; ++i)
            m = std::min(m, sg.value(r, kTwoPi * i / angular_samples));
        rep.ring_minima.push_back(m);
    }
    rep.diverges = rep.ring_minima.back() > threshold;
    for (std::size_t k = 1; k < rep.ring_minima.size(); ++k)
        if (!(rep.ring_minima[k] > rep.ring_minima[k - 1]))
            rep.diverges = false;
    return rep;
}

void validate_causal_path(const CausalPath& path, double tol)
{
    if (path.points.empty())
        fail(ErrorCode::InvalidInput, "empty path");
    for (const auto& p : path.points) {
        require_finite(p, "path point");
        if (p(1) < 0.0)
            fail(ErrorCode::InvalidInput, "path point with negative radius");
    }
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        const Vec3 d = path.points[i + 1] - path.points[i];
        const double r = std::max(path.points[i](1), path.points[i + 1](1));
        const double q = -2.0 * d(0) * d(1) + d(1) * d(1) + r * r * d(2) * d(2);
        const double scale = std::max(1.0, d.squaredNorm() * std::max(1.0, r * r));
        if (d.norm() == 0.0)
            continue;
        if (q > tol * scale || !(d(0) > 0.0))
            fail(ErrorCode::NotCausal, "segment " + std::to_string(i) + " is not future causal");
    }
}

IntersectionResult intersection_count(const CausalPath& path, const SurfaceGraph& sg, int substeps,
                                      double tangency_tol)
{
    validate_causal_path(path);
    const double R = sg.R();
    for (const auto& p : path.points) {
        if (p(1) > R * (1.0 + 1e-12) || p(0) < 0.5 * p(1) - 0.5 * R - 1e-12)
            fail(ErrorCode::InvalidInput, "path leaves the spear");
        if (sg.punctured() && p(1) == 0.0)
            fail(ErrorCode::InvalidInput, "path meets the axis of a punctured cap");
    }
    const Vec3& end = path.points.back();
    if (!path.escapes && std::abs(end(1) - R) > 1e-12 * R)
        fail(ErrorCode::InvalidInput, "path ends inside the spear");

    auto gap = [&](const Vec3& p) { return p(0) - sg.value(std::min(p(1), R), p(2)); };
    IntersectionResult res;
    res.min_gap = std::numeric_limits<double>::infinity();
    double prev = gap(path.points.front());
    auto visit = [&](double g) {
        res.min_gap = std::min(res.min_gap, std::abs(g));
        if (std::abs(g) <= tangency_tol * std::max(1.0, std::abs(prev)))
            fail(ErrorCode::Tangency, "path touches the graph");
        if ((g > 0.0) != (prev > 0.0))
            ++res.count;
        prev = g;
    };
    visit(prev);
    for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
        for (int s = 1; s <= substeps; ++s) {
            const double w = double(s) / substeps;
            visit(gap(Vec3((1 - w) * path.points[i] + w * path.points[i + 1])));
        }
    }
    if (path.escapes) {
        if (prev < 0.0)
            ++res.count;
        res.prediction = 1;
        return res;
    }
    const Vec3 rim(sg.value(R, end(2)), R, end(2));
    res.prediction = precedes(btz_causal_relation(rim, end)) ? 1 : 0;
    return res;
}

}  // namespace btz
