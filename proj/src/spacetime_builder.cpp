#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "btz/spacetime.hpp"

namespace btz {

namespace {

double min_eigenvalue(const Mat2& g)
{
    const double mean = 0.5 * (g(0, 0) + g(1, 1));
    const double half = 0.5 * (g(0, 0) - g(1, 1));
    return mean - std::hypot(half, 0.5 * (g(0, 1) + g(1, 0)));
}

Mat2 gram(const Vec3& e1, const Vec3& e2)
{
    Mat2 g;
    g(0, 0) = minkowski_inner(e1, e1);
    g(0, 1) = g(1, 0) = minkowski_inner(e1, e2);
    g(1, 1) = minkowski_inner(e2, e2);
    return g;
}

}  // namespace

Vec3 develop(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha, const Vec3& beta)
{
    Vec3 out = Vec3::Zero();
    for (int k = 0; k < 3; ++k)
        out += (t * alpha(k) + kappa * beta(k)) * s.u[k] + beta(k) * s.p[k];
    return out;
}

Vec3 develop_plain(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha)
{
    return develop(s, kappa, t, alpha, alpha);
}

Vec3 develop_blended(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha)
{
    return develop(s, kappa, t, hexagon_blend(alpha), alpha);
}

Mat3 blended_jacobian(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha)
{
    const Vec3 phi = hexagon_blend(alpha);
    const Mat32 dphi = hexagon_blend_jacobian(alpha);
    Mat3 u;
    u << s.u[0], s.u[1], s.u[2];
    Mat3 j;
    j.col(0) = u * phi;
    for (int a = 0; a < 2; ++a)
        j.col(a + 1) = t * (u * dphi.col(a)) + kappa * (s.u[a] - s.u[2]) + (s.p[a] - s.p[2]);
    return j;
}

Mat2 leaf_gram(const DecoratedSimplex& s, double t, double kappa)
{
    const double w = t + kappa;
    const Vec3 e1 = w * (s.u[1] - s.u[0]) + s.p[1] - s.p[0];
    const Vec3 e2 = w * (s.u[2] - s.u[0]) + s.p[2] - s.p[0];
    return gram(e1, e2);
}

Mat2 blended_leaf_gram(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha)
{
    const Mat3 j = blended_jacobian(s, kappa, t, alpha);
    return gram(j.col(1), j.col(2));
}

std::vector<double> leaf_sample_times(const RunConfig& cfg)
{
    std::vector<double> ts;
    if (cfg.t_samples == 1)
        return {std::sqrt(cfg.t_min * cfg.t_max)};
    const double ratio = std::log(cfg.t_max / cfg.t_min);
    for (int i = 0; i < cfg.t_samples; ++i)
        ts.push_back(cfg.t_min * std::exp(ratio * i / (cfg.t_samples - 1)));
    return ts;
}

CertificationRecord certify_kappa(const DecoratedComplex& cx, double kappa, const RunConfig& cfg)
{
    CertificationRecord rec;
    rec.kappa = kappa;
    rec.t_min = cfg.t_min;
    rec.t_max = cfg.t_max;
    rec.t_samples = cfg.t_samples;
    rec.grid_n = cfg.grid_n;
    rec.margin = cfg.cert_margin;
    constexpr double inf = std::numeric_limits<double>::infinity();
    rec.min_jacobian_det = inf;
    rec.min_gram_eigenvalue = inf;
    rec.min_blended_gram_eigenvalue = inf;
    const auto grid = barycentric_grid(cfg.grid_n);
    for (double t : leaf_sample_times(cfg)) {
        for (const auto& s : cx.simplices) {
            rec.min_gram_eigenvalue =
                std::min(rec.min_gram_eigenvalue, min_eigenvalue(leaf_gram(s, t, kappa)));
            for (const auto& alpha : grid) {
                const Mat3 j = blended_jacobian(s, kappa, t, alpha);
                rec.min_jacobian_det = std::min(rec.min_jacobian_det, j.determinant());
                rec.min_blended_gram_eigenvalue =
                    std::min(rec.min_blended_gram_eigenvalue,
                             min_eigenvalue(gram(j.col(1), j.col(2))));
                ++rec.samples;
            }
        }
    }
    rec.passed = rec.min_jacobian_det > rec.margin && rec.min_gram_eigenvalue > rec.margin &&
                 rec.min_blended_gram_eigenvalue > rec.margin;
    return rec;
}

CertificationRecord choose_kappa(const DecoratedComplex& cx, const RunConfig& cfg)
{
    double kappa = cfg.kappa0;
    if (kappa <= 0.0) {
        double pmax = 0.0;
        for (const auto& s : cx.simplices)
            for (const auto& p : s.p)
                pmax = std::max(pmax, p.norm());
        kappa = 1.0 + pmax;
    }
    for (int d = 0; d <= cfg.max_doublings; ++d) {
        CertificationRecord rec = certify_kappa(cx, kappa, cfg);
        rec.doublings = d;
        if (rec.passed)
            return rec;
        kappa *= 2.0;
    }
    fail(ErrorCode::KappaSearchExhausted,
         "no kappa up to " + std::to_string(kappa / 2.0) + " passed the sampled certificate");
}

PolyhedralSpacetime assemble_spacetime(const AffineRepresentation& rep,
                                       const IdealTriangulation& tri, double kappa,
                                       const RunConfig& cfg)
{
    require_admissible(rep);
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        fail(ErrorCode::InvalidInput, "kappa must be positive");
    PolyhedralSpacetime st;
    st.rep = rep;
    st.tri = tri;
    st.config = cfg;
    st.complex = decorate(rep, tri);
    st.kappa = kappa;
    st.certificate = certify_kappa(st.complex, kappa, cfg);
    for (std::size_t c = 0; c < st.complex.cusps.size(); ++c) {
        const CuspData& cusp = st.complex.cusps[c];
        SingularFiber fiber;
        fiber.cusp = static_cast<int>(c);
        fiber.name = cusp.name;
        fiber.point = cusp.p;
        fiber.direction = cusp.u;
        fiber.present = false;
        st.fibers.push_back(fiber);
    }
    if (st.certificate.passed) {
        for (std::size_t c = 0; c < st.complex.cusps.size(); ++c)
            st.punctures.push_back(puncture_geometry(st, static_cast<int>(c)));
        st = extend_btz(st);
    }
    return st;
}

PolyhedralSpacetime build_spacetime(const AffineRepresentation& rep, const IdealTriangulation& tri,
                                    const RunConfig& cfg)
{
    require_admissible(rep);
    const DecoratedComplex cx = decorate(rep, tri);
    const CertificationRecord rec = choose_kappa(cx, cfg);
    PolyhedralSpacetime st = assemble_spacetime(rep, tri, rec.kappa, cfg);
    st.certificate.doublings = rec.doublings;
    return st;
}

double equivariance_residual(const PolyhedralSpacetime& st, int samples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto& cx = st.complex;
    if (cx.gluings.empty())
        return 0.0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const std::size_t g = static_cast<std::size_t>(i) % cx.gluings.size();
        const Gluing& gl = cx.gluings[g];
        const double t = st.config.t_min * std::pow(st.config.t_max / st.config.t_min, unit(rng));
        const double s = unit(rng);
        Vec3 alpha_a = Vec3::Zero(), alpha_b = Vec3::Zero();
        alpha_a((gl.edge_a + 0) % 3) = 1.0 - s;
        alpha_a((gl.edge_a + 1) % 3) = s;
        alpha_b((gl.edge_b + 1) % 3) = 1.0 - s;
        alpha_b((gl.edge_b + 0) % 3) = s;
        const Vec3 qa = cx.gluing_maps[g](develop_blended(cx.simplices[gl.tri_a], st.kappa, t, alpha_a));
        const Vec3 qb = develop_blended(cx.simplices[gl.tri_b], st.kappa, t, alpha_b);
        worst = std::max(worst, (qa - qb).norm());
    }
    return worst;
}

}  // namespace btz
