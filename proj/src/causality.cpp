#include "btz/causality.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace btz {

namespace {

Vec3 developed_point(const PolyhedralSpacetime& st, const SpacetimePoint& x,
                     const AffineIsometry& frame)
{
    if (x.singular()) {
        const CuspData& c = st.complex.cusps[x.fiber];
        return frame(Vec3(c.p + (x.t + st.kappa) * c.u));
    }
    return frame(develop_blended(st.complex.simplices[x.simplex], st.kappa, x.t, x.alpha));
}

bool future_causal(const Vec3& d, double tol)
{
    return d(0) > 0.0 && quadratic_form(d) <= tol * d.squaredNorm();
}

struct Tracer {
    const PolyhedralSpacetime& st;
    std::mt19937_64 rng;
    CausalPolyline out;

    void push(const SpacetimePoint& x, const AffineIsometry& frame)
    {
        PolylinePoint pp{x, frame, developed_point(st, x, frame)};
        if (!out.points.empty()) {
            const Vec3 d = pp.developed - out.points.back().developed;
            if (!future_causal(d, 1e-9))
                out.failures.push_back("segment " + std::to_string(out.points.size() - 1) +
                                       " is not future causal");
        }
        out.points.push_back(pp);
    }

    // Moves across the edge opposite to corner k.
    void cross_edge(SpacetimePoint& x, AffineIsometry& frame, int k)
    {
        const int e = (k + 1) % 3;
        const auto& cx = st.complex;
        for (std::size_t g = 0; g < cx.gluings.size(); ++g) {
            const Gluing& gl = cx.gluings[g];
            Vec3 alpha = Vec3::Zero();
            if (gl.tri_a == x.simplex && gl.edge_a == e) {
                for (int s = 0; s < 2; ++s)
                    alpha((gl.edge_b + 1 - s) % 3) = x.alpha((gl.edge_a + s) % 3);
                x.simplex = gl.tri_b;
                frame = frame * cx.gluing_maps[g].inverse();
            } else if (gl.tri_b == x.simplex && gl.edge_b == e) {
                for (int s = 0; s < 2; ++s)
                    alpha((gl.edge_a + 1 - s) % 3) = x.alpha((gl.edge_b + s) % 3);
                x.simplex = gl.tri_a;
                frame = frame * cx.gluing_maps[g];
            } else {
                continue;
            }
            x.alpha = alpha / alpha.sum();
            ++out.chart_changes;
            return;
        }
        out.failures.push_back("edge without gluing");
    }

    // Future unit normal of the leaf through x; false if the leaf is not spacelike.
    bool leaf_normal(const Mat3& j, Vec3& normal)
    {
        const Vec3 n = minkowski_cross(Vec3(j.col(1)), Vec3(j.col(2)));
        const double q = quadratic_form(n);
        if (!(q < 0.0))
            return false;
        normal = n / std::sqrt(-q);
        if (normal(0) < 0.0)
            normal = -normal;
        return true;
    }

    Vec3 steer(const Mat3& j, const Vec3& normal, Steering steering)
    {
        if (steering == Steering::Vertical)
            return normal;
        // orthonormal spacelike basis of the leaf tangent plane
        Vec3 e1 = j.col(1);
        e1 /= std::sqrt(quadratic_form(e1));
        Vec3 e2 = Vec3(j.col(2)) - minkowski_inner(Vec3(j.col(2)), e1) * e1;
        e2 /= std::sqrt(quadratic_form(e2));
        std::uniform_real_distribution<double> angle(0.0, kTwoPi), tilt(0.0, 0.9);
        const double phi = angle(rng);
        return normal + tilt(rng) * (std::cos(phi) * e1 + std::sin(phi) * e2);
    }

    void regular_run(SpacetimePoint x, AffineIsometry frame, Steering steering, double t_end)
    {
        const double cone_margin = st.config.cone_margin;
        for (int iter = 0; iter < 200000 && x.t < t_end && out.ok(); ++iter) {
            const DecoratedSimplex& s = st.complex.simplices[x.simplex];
            const Mat3 j = blended_jacobian(s, st.kappa, x.t, x.alpha);
            if (!(j.determinant() > 0.0)) {
                out.failures.push_back("chart map is not orientation preserving");
                return;
            }
            Vec3 normal;
            if (!leaf_normal(j, normal)) {
                out.failures.push_back("leaf is not spacelike");
                return;
            }
            // on an edge the direction has to point into the simplex; resample until it does
            Vec3 d, dalpha;
            bool inward = false;
            for (int tries = 0; tries < 64 && !inward; ++tries) {
                const Vec3 v = steer(j, normal, tries == 0 ? steering : Steering::Random);
                if (!(quadratic_form(v) < -cone_margin * v.squaredNorm())) {
                    out.failures.push_back("steering direction left the cone");
                    return;
                }
                d = j.fullPivLu().solve(v);
                if (!(d(0) > 0.0)) {
                    out.failures.push_back("time function does not increase");
                    return;
                }
                dalpha = Vec3(d(1), d(2), -d(1) - d(2));
                inward = true;
                for (int k = 0; k < 3; ++k)
                    if (x.alpha(k) <= 0.0 && dalpha(k) < 0.0)
                        inward = false;
            }
            if (!inward) {
                out.failures.push_back("no causal direction into the simplex");
                return;
            }
            double h = st.config.trace_step * x.t / d(0);
            if (dalpha.norm() * h > 0.05)
                h = 0.05 / dalpha.norm();
            // halve the step until the developed secant is causal
            const Vec3 here = developed_point(st, x, frame);
            SpacetimePoint y;
            int hit = -1;
            bool accepted = false;
            for (int tries = 0; tries < 40 && !accepted; ++tries, h *= 0.5) {
                y = x;
                hit = -1;
                double hh = h;
                for (int k = 0; k < 3; ++k) {
                    if (dalpha(k) < 0.0 && x.alpha(k) + hh * dalpha(k) <= 0.0) {
                        hh = x.alpha(k) / -dalpha(k);
                        hit = k;
                    }
                }
                y.t += hh * d(0);
                y.alpha += hh * dalpha;
                if (hit >= 0) {
                    y.alpha(hit) = 0.0;
                    y.alpha = y.alpha.cwiseMax(0.0);
                    y.alpha /= y.alpha.sum();
                }
                accepted = future_causal(Vec3(developed_point(st, y, frame) - here), 0.0);
            }
            x = y;
            push(x, frame);
            if (hit >= 0)
                cross_edge(x, frame, hit);
        }
    }
};

}  // namespace

CausalPolyline trace_causal_curve(const PolyhedralSpacetime& st, const SpacetimePoint& start,
                                  Steering steering, double t_end, std::uint64_t seed)
{
    Tracer tr{st, std::mt19937_64(seed), {}};
    if (!(start.t > 0.0) || !(t_end > start.t))
        fail(ErrorCode::InvalidInput, "need 0 < t_start < t_end");
    if (!start.singular()) {
        if (start.simplex < 0 || start.simplex >= static_cast<int>(st.complex.simplices.size()))
            fail(ErrorCode::InvalidInput, "start simplex out of range");
        if ((start.alpha.array() < 0.0).any() || std::abs(start.alpha.sum() - 1.0) > 1e-12)
            fail(ErrorCode::InvalidInput, "start point needs barycentric coordinates");
        tr.push(start, AffineIsometry());
        tr.regular_run(start, AffineIsometry(), steering == Steering::Axis ? Steering::Random : steering,
                       t_end);
        return tr.out;
    }

    if (start.fiber >= static_cast<int>(st.fibers.size()))
        fail(ErrorCode::InvalidInput, "start fiber out of range");
    // follow the fiber for a while
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SpacetimePoint x = start;
    const double leave = steering == Steering::Axis
                             ? start.t + (t_end - start.t) * (0.1 + 0.3 * unit(tr.rng))
                             : start.t;
    tr.push(x, AffineIsometry());
    const int axis_steps = 8;
    for (int i = 1; i <= axis_steps && leave > start.t; ++i) {
        x.t = start.t + (leave - start.t) * i / axis_steps;
        tr.push(x, AffineIsometry());
    }
    if (x.t >= t_end || st.punctures.empty())
        return tr.out;

    // leave the fiber into the first corner of its fan
    const PunctureGeometry& pg = st.punctures[start.fiber];
    const FanEntry& f = pg.fan[0];
    const DecoratedSimplex& s = st.complex.simplices[f.simplex];
    const int k = f.corner, a = (k + 1) % 3, b = (k + 2) % 3;
    const Vec3 e = st.kappa * (s.u[a] + s.u[b] - 2.0 * s.u[k]) + s.p[a] + s.p[b] - 2.0 * s.p[k];
    const double delta = 1e-3;
    double dt = delta;
    Vec3 v;
    bool found = false;
    for (int i = 0; i < 60 && !found; ++i, dt *= 2.0) {
        v = dt * s.u[k] + delta * e;
        found = v(0) > 0.0 && quadratic_form(v) < -st.config.cone_margin * v.squaredNorm();
    }
    if (!found) {
        tr.out.failures.push_back("cannot leave the singular fiber causally");
        return tr.out;
    }
    SpacetimePoint y;
    y.simplex = f.simplex;
    y.t = x.t + dt / 2.0;
    y.alpha = Vec3::Zero();
    y.alpha(k) = 1.0 - 2.0 * delta;
    y.alpha(a) = delta;
    y.alpha(b) = delta;
    tr.push(y, f.frame);
    tr.regular_run(y, f.frame, Steering::Random, t_end);
    return tr.out;
}

BtzDecomposition btz_decomposition(const CausalPolyline& c, double tol)
{
    BtzDecomposition d;
    bool regular_seen = false;
    const PolylinePoint* last_singular = nullptr;
    for (const auto& p : c.points) {
        if (p.point.singular()) {
            if (regular_seen)
                fail(ErrorCode::DecompositionViolation, "singular point after a regular point");
            ++d.singular_points;
            last_singular = &p;
            d.split_t = p.point.t;
        } else {
            regular_seen = true;
            ++d.regular_points;
            if (last_singular &&
                !future_causal(p.developed - last_singular->developed, tol))
                fail(ErrorCode::DecompositionViolation,
                     "regular point not in the causal future of the singular part");
        }
    }
    return d;
}

CauchyTimeReport cauchy_time_report(const PolyhedralSpacetime& st, int curves,
                                    const std::vector<double>& leaves, std::uint64_t seed)
{
    CauchyTimeReport rep;
    rep.curves = curves;
    rep.leaves = leaves;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double t0 = st.config.trace_t_start, t1 = st.config.trace_t_end;
    for (double l : leaves)
        if (!(l > t0 && l < t1))
            fail(ErrorCode::InvalidInput, "leaves must lie strictly inside the traced time range");
    const int nsimp = static_cast<int>(st.complex.simplices.size());
    for (int i = 0; i < curves; ++i) {
        SpacetimePoint start;
        start.t = t0;
        Steering steering = Steering::Random;
        const bool axis = i % 10 == 9 && !st.fibers.empty() && !st.punctures.empty();
        if (axis) {
            start.fiber = static_cast<int>(rng() % st.fibers.size());
            steering = Steering::Axis;
            ++rep.axis_curves;
        } else {
            start.simplex = static_cast<int>(rng() % nsimp);
            double a = unit(rng), b = unit(rng);
            if (a > b)
                std::swap(a, b);
            start.alpha = Vec3(0.02 + 0.94 * a, 0.02 + 0.94 * (b - a), 0.02 + 0.94 * (1.0 - b));
            start.alpha /= start.alpha.sum();
        }
        const CausalPolyline c = trace_causal_curve(st, start, steering, t1, rng());
        rep.total_points += static_cast<long>(c.points.size());
        if (!c.ok()) {
            ++rep.trace_failures;
            rep.failure_messages.push_back("curve " + std::to_string(i) + ": " + c.failures.front());
            continue;
        }
        bool monotone = true;
        for (std::size_t k = 1; k < c.points.size(); ++k)
            if (!(c.points[k].point.t > c.points[k - 1].point.t))
                monotone = false;
        if (!monotone)
            ++rep.non_monotone;
        for (double l : leaves) {
            int crossings = 0;
            for (std::size_t k = 1; k < c.points.size(); ++k) {
                const double a = c.points[k - 1].point.t, b = c.points[k].point.t;
                if ((a < l && b >= l) || (a >= l && b < l))
                    ++crossings;
            }
            if (crossings != 1) {
                ++rep.leaf_crossing_failures;
                break;
            }
        }
        try {
            btz_decomposition(c);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DecompositionViolation)
                throw;
            ++rep.decomposition_violations;
        }
    }
    return rep;
}

namespace {

std::vector<AffineIsometry> short_words(const AffineRepresentation& rep)
{
    std::vector<AffineIsometry> letters;
    for (const auto& name : rep.generator_names()) {
        letters.push_back(rep.generator(name));
        letters.push_back(rep.generator(name).inverse());
    }
    std::vector<AffineIsometry> out{AffineIsometry()};
    for (const auto& a : letters) {
        out.push_back(a);
        for (const auto& b : letters)
            out.push_back(a * b);
    }
    return out;
}

// Some translate of y lies in the causal future of x (both developed with identity frames).
bool causally_before(const PolyhedralSpacetime& st, const SpacetimePoint& x,
                     const SpacetimePoint& y, const std::vector<AffineIsometry>& words,
                     Vec3* witness)
{
    if (y.t < x.t)
        return false;
    if (y.singular()) {
        if (x.singular() && x.fiber == y.fiber) {
            if (witness)
                *witness = developed_point(st, y, AffineIsometry());
            return true;
        }
        return false;
    }
    const Vec3 dx = developed_point(st, x, AffineIsometry());
    for (const auto& g : words) {
        const Vec3 dy = developed_point(st, y, g);
        if (future_causal(Vec3(dy - dx), 1e-12)) {
            if (witness)
                *witness = dy;
            return true;
        }
    }
    return false;
}

}  // namespace

DiamondSample diamond_sample(const PolyhedralSpacetime& st, const SpacetimePoint& p,
                             const SpacetimePoint& q, int budget, std::uint64_t seed)
{
    DiamondSample out;
    out.budget = budget;
    if (q.t < p.t)
        return out;
    const auto words = short_words(st.rep);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int nsimp = static_cast<int>(st.complex.simplices.size());
    bool first = true;
    for (int i = 0; i < budget; ++i) {
        SpacetimePoint x;
        x.t = p.t + (q.t - p.t) * unit(rng);
        if (i % 4 == 0 && !st.fibers.empty()) {
            x.fiber = static_cast<int>(rng() % st.fibers.size());
        } else {
            x.simplex = static_cast<int>(rng() % nsimp);
            double a = unit(rng), b = unit(rng);
            if (a > b)
                std::swap(a, b);
            x.alpha = Vec3(a, b - a, 1.0 - b);
        }
        Vec3 witness;
        if (!causally_before(st, p, x, words, &witness) || !causally_before(st, x, q, words, nullptr))
            continue;
        out.points.push_back(x);
        if (first) {
            out.t_min = out.t_max = x.t;
            out.box_min = out.box_max = witness;
            first = false;
        } else {
            out.t_min = std::min(out.t_min, x.t);
            out.t_max = std::max(out.t_max, x.t);
            out.box_min = out.box_min.cwiseMin(witness);
            out.box_max = out.box_max.cwiseMax(witness);
        }
    }
    return out;
}

}  // namespace btz
