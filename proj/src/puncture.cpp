#include <cmath>

#include "btz/spacetime.hpp"

namespace btz {

namespace {

struct Step {
    int simplex;
    int corner;
    AffineIsometry frame;
};

// Next triangle counterclockwise around the corner: across the edge from corner k + 2 to k.
Step next_in_fan(const DecoratedComplex& cx, const Step& cur)
{
    const int e = (cur.corner + 2) % 3;
    for (std::size_t g = 0; g < cx.gluings.size(); ++g) {
        const Gluing& gl = cx.gluings[g];
        if (gl.tri_a == cur.simplex && gl.edge_a == e)
            return {gl.tri_b, gl.edge_b, cur.frame * cx.gluing_maps[g].inverse()};
        if (gl.tri_b == cur.simplex && gl.edge_b == e)
            return {gl.tri_a, gl.edge_a, cur.frame * cx.gluing_maps[g]};
    }
    fail(ErrorCode::InvalidTriangulation, "edge without gluing");
}

// Spanning vector of the corner prism face from corner k towards corner j, developed.
Vec3 face_vector(const PolyhedralSpacetime& st, const FanEntry& f, int j, const Vec3& origin)
{
    const DecoratedSimplex& s = st.complex.simplices[f.simplex];
    return st.kappa * f.frame.linear()(s.u[j]) + f.frame(s.p[j]) - origin;
}

double half_plane_angle(const PunctureGeometry& pg, const Vec3& w)
{
    const Vec3 v = pg.chart(w);
    const double r = v(0) - v(1);
    if (!(r > 0.0))
        fail(ErrorCode::NonMonotoneAngles, "corner face leaves the future of the puncture line");
    return -v(2) / r;
}

double affine_gap(const AffineIsometry& a, const AffineIsometry& b)
{
    return std::max((a.linear().matrix() - b.linear().matrix()).norm(),
                    (a.translation() - b.translation()).norm());
}

}  // namespace

PunctureGeometry puncture_geometry(const PolyhedralSpacetime& st, int cusp)
{
    const DecoratedComplex& cx = st.complex;
    if (cusp < 0 || cusp >= static_cast<int>(cx.cusps.size()))
        fail(ErrorCode::InvalidInput, "no puncture with index " + std::to_string(cusp));
    const CuspData& cd = cx.cusps[cusp];
    PunctureGeometry pg;
    pg.cusp = cusp;
    pg.name = cd.name;
    pg.origin = cd.p;
    pg.chart = LinearIsometry::rotation(-std::atan2(cd.u(2), cd.u(1)));

    Step start{-1, -1, AffineIsometry()};
    for (const auto& s : cx.simplices) {
        for (int k = 0; k < 3 && start.simplex < 0; ++k) {
            if (s.cusp[k] != cusp)
                continue;
            auto w = st.tri.vertex_word.find(s.vertex[k]);
            const AffineIsometry g =
                w == st.tri.vertex_word.end() ? AffineIsometry() : evaluate_word(st.rep, w->second);
            start = {s.id, k, g.inverse()};
        }
        if (start.simplex >= 0)
            break;
    }
    if (start.simplex < 0)
        fail(ErrorCode::InvalidTriangulation, "puncture " + cd.name + " has no corner");

    std::vector<Step> steps{start};
    const int limit = 3 * static_cast<int>(cx.simplices.size());
    while (pg.r == 0) {
        steps.push_back(next_in_fan(cx, steps.back()));
        const Step& s = steps.back();
        if (s.simplex == start.simplex && s.corner == start.corner)
            pg.r = static_cast<int>(steps.size()) - 1;
        else if (static_cast<int>(steps.size()) > limit + 1)
            fail(ErrorCode::InvalidTriangulation, "corner fan of " + cd.name + " does not close");
    }
    while (static_cast<int>(steps.size()) < 2 * pg.r + 1)
        steps.push_back(next_in_fan(cx, steps.back()));

    const AffineIsometry turn = steps[pg.r].frame * start.frame.inverse();
    const double gap_plus = affine_gap(turn, cd.holonomy);
    const double gap_minus = affine_gap(turn, cd.holonomy.inverse());
    pg.period_power = gap_plus <= gap_minus ? 1 : -1;
    if (std::min(gap_plus, gap_minus) > 1e-8 * std::max(1.0, turn.linear().matrix().norm()))
        fail(ErrorCode::InvalidTriangulation, "corner fan of " + cd.name +
                                                  " does not close up to the peripheral holonomy");
    const AffineIsometry period = pg.period_power > 0 ? cd.holonomy : cd.holonomy.inverse();

    for (const auto& s : steps) {
        FanEntry f{s.simplex, s.corner, s.frame};
        pg.fan.push_back(f);
        pg.theta.push_back(half_plane_angle(pg, face_vector(st, f, (s.corner + 1) % 3, pg.origin)));
    }
    for (std::size_t n = 0; n + 1 < pg.theta.size(); ++n) {
        if (!(pg.theta[n + 1] > pg.theta[n]))
            fail(ErrorCode::NonMonotoneAngles,
                 "half-plane angles around " + cd.name + " are not increasing");
    }
    pg.Theta = pg.theta[pg.r] - pg.theta[0];
    for (int n = 0; n <= pg.r; ++n) {
        pg.period_spread =
            std::max(pg.period_spread, std::abs(pg.theta[n + pg.r] - pg.theta[n] - pg.Theta));
        const Vec3 w = face_vector(st, pg.fan[n], (pg.fan[n].corner + 1) % 3, pg.origin);
        const double moved = half_plane_angle(pg, period.linear()(w));
        pg.holonomy_residual =
            std::max(pg.holonomy_residual, std::abs(moved - pg.theta[n + pg.r]));
    }
    pg.ell = kTwoPi / pg.Theta;
    for (double th : pg.theta)
        pg.theta_normalized.push_back(pg.ell * th);
    pg.Theta_normalized = pg.theta_normalized[pg.r] - pg.theta_normalized[0];
    return pg;
}

Vec3 puncture_coordinates(const PunctureGeometry& pg, const Vec3& q)
{
    const Vec3 raw = dev0_inverse(pg.chart(Vec3(q - pg.origin)), 1e-12);
    return h_ell(pg.ell, raw);
}

Vec3 puncture_point(const PunctureGeometry& pg, const Vec3& normalized)
{
    const Vec3 raw = h_ell(1.0 / pg.ell, normalized);
    return pg.origin + pg.chart.inverse()(dev0(raw));
}

bool in_corner_fan(const PolyhedralSpacetime& st, const PunctureGeometry& pg, const Vec3& q)
{
    const Vec3 local = pg.chart(Vec3(q - pg.origin));
    if (!in_image_dev0(local, 1e-12))
        return false;
    const Vec3 raw = dev0_inverse(local, 1e-12);
    if (raw(1) == 0.0)
        return raw(0) > st.kappa;
    const CuspData& cd = st.complex.cusps[pg.cusp];
    const AffineIsometry period = pg.period_power > 0 ? cd.holonomy : cd.holonomy.inverse();
    const double turns = std::floor((raw(2) - pg.theta[0]) / pg.Theta);
    AffineIsometry shift;
    const AffineIsometry step = turns > 0 ? period.inverse() : period;
    for (int i = 0; i < std::abs(static_cast<int>(turns)); ++i)
        shift = shift * step;
    const Vec3 q0 = shift(q);
    const double th = raw(2) - turns * pg.Theta;
    for (int n = 0; n < pg.r; ++n) {
        if (th < pg.theta[n] - 1e-12 || th > pg.theta[n + 1] + 1e-12)
            continue;
        const FanEntry& f = pg.fan[n];
        if (st.missing_simplices.count(f.simplex))
            continue;
        const int k = f.corner;
        Mat3 m;
        m.col(0) = cd.u;
        m.col(1) = face_vector(st, f, (k + 1) % 3, pg.origin);
        m.col(2) = face_vector(st, f, (k + 2) % 3, pg.origin);
        const Vec3 x = m.fullPivLu().solve(Vec3(q0 - pg.origin));
        const double a = x(1), b = x(2);
        const double t = x(0) - st.kappa * (1.0 - a - b);
        if (a >= -1e-12 && b >= -1e-12 && a + b <= 1.0 / 3.0 + 1e-12 && t > 0.0)
            return true;
    }
    return false;
}

SpearDescriptor find_spear(const PolyhedralSpacetime& st, int cusp)
{
    if (cusp < 0 || cusp >= static_cast<int>(st.punctures.size()))
        fail(ErrorCode::SpearNotFound, "no puncture geometry for index " + std::to_string(cusp));
    const PunctureGeometry& pg = st.punctures[cusp];
    const RunConfig& cfg = st.config;
    SpearDescriptor sp;
    sp.cusp = cusp;
    sp.vertex_t = cfg.spear_vertex_t;
    sp.vertex_tau = pg.ell * (st.kappa + cfg.spear_vertex_t);
    sp.vertex_point = pg.origin + (st.kappa + cfg.spear_vertex_t) * st.complex.cusps[cusp].u;

    double R = cfg.spear_initial_radius;
    for (int shrink = 0; shrink <= cfg.spear_max_shrinks; ++shrink, R *= 0.5) {
        std::vector<Vec3> samples;
        for (int j = 0; j < cfg.spear_angular_samples; ++j) {
            const double th = kTwoPi * j / cfg.spear_angular_samples;
            for (int i = 1; i <= cfg.spear_radial_samples; ++i) {
                const double r = R * i / cfg.spear_radial_samples;
                samples.emplace_back(sp.vertex_tau + 0.5 * r, r, th);
            }
            for (double h : {0.25, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0})
                samples.emplace_back(sp.vertex_tau + 0.5 * R + h * R, R, th);
            for (double h : {0.0, 1.0, 8.0})
                samples.emplace_back(sp.vertex_tau + 0.25 * R + h * R, 0.5 * R, th);
        }
        bool inside = true;
        for (const auto& s : samples) {
            if (!in_corner_fan(st, pg, puncture_point(pg, s))) {
                inside = false;
                break;
            }
        }
        if (inside) {
            sp.R = R;
            sp.shrinks = shrink;
            sp.boundary_samples = static_cast<int>(samples.size());
            return sp;
        }
    }
    fail(ErrorCode::SpearNotFound, "no spear around " + pg.name + " fits in the corner fan");
}

PolyhedralSpacetime strip_btz(const PolyhedralSpacetime& st)
{
    PolyhedralSpacetime out = st;
    for (auto& f : out.fibers) {
        f.present = false;
        f.spear.reset();
    }
    return out;
}

PolyhedralSpacetime extend_btz(const PolyhedralSpacetime& st)
{
    PolyhedralSpacetime out = st;
    for (auto& f : out.fibers) {
        if (f.present)
            continue;
        try {
            f.spear = find_spear(out, f.cusp);
            f.present = true;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SpearNotFound)
                throw;
        }
    }
    return out;
}

bool same_structure(const PolyhedralSpacetime& a, const PolyhedralSpacetime& b)
{
    if (a.kappa != b.kappa || a.complex.simplices.size() != b.complex.simplices.size() ||
        a.fibers.size() != b.fibers.size() || a.missing_simplices != b.missing_simplices)
        return false;
    for (std::size_t i = 0; i < a.fibers.size(); ++i) {
        const SingularFiber& x = a.fibers[i];
        const SingularFiber& y = b.fibers[i];
        if (x.cusp != y.cusp || x.name != y.name || x.point != y.point ||
            x.direction != y.direction || x.present != y.present ||
            x.spear.has_value() != y.spear.has_value())
            return false;
        if (x.spear) {
            const SpearDescriptor& s = *x.spear;
            const SpearDescriptor& t = *y.spear;
            if (s.cusp != t.cusp || s.R != t.R || s.vertex_tau != t.vertex_tau ||
                s.vertex_point != t.vertex_point || s.vertex_t != t.vertex_t)
                return false;
        }
    }
    return true;
}

}  // namespace btz
