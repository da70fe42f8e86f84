#include <sstream>

#include <gtest/gtest.h>

#include "btz/json_io.hpp"

using namespace btz;

namespace {

PolyhedralSpacetime build(const std::string& name, bool nonzero, RunConfig cfg = {})
{
    const BuiltinExample ex = builtin_example(name, nonzero);
    return build_spacetime(ex.rep, ex.tri, cfg);
}

}  // namespace

TEST(SpacetimeBuilder, CertifiesAllExamples)
{
    for (const auto& name : builtin_names()) {
        for (bool nonzero : {false, true}) {
            const PolyhedralSpacetime st = build(name, nonzero);
            const CertificationRecord& c = st.certificate;
            EXPECT_TRUE(c.passed) << name;
            EXPECT_GE(c.samples, 10000);
            EXPECT_GT(c.min_jacobian_det, 1e-6);
            EXPECT_GT(c.min_gram_eigenvalue, 1e-6);
            EXPECT_GT(c.min_blended_gram_eigenvalue, 1e-6);
            EXPECT_LE(equivariance_residual(st, 200, 7), 1e-8);
        }
    }
}

TEST(SpacetimeBuilder, FrozenKappa)
{
    // values recorded from the reference build; the zero cocycles start at 1 and pass at once
    EXPECT_EQ(build("gamma2", false).kappa, 1.0);
    EXPECT_EQ(build("torus", false).kappa, 1.0);
    EXPECT_NEAR(build("gamma2", true).kappa, 2.4882876066137229, 1e-12);
    EXPECT_NEAR(build("torus", true).kappa, 2.0451219337412407, 1e-12);
}

TEST(SpacetimeBuilder, SearchExhaustion)
{
    RunConfig cfg;
    cfg.kappa0 = 1e-3;
    cfg.max_doublings = 0;
    try {
        build("gamma2", true, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::KappaSearchExhausted);
    }
    cfg.max_doublings = 40;
    const PolyhedralSpacetime st = build("gamma2", true, cfg);
    EXPECT_GT(st.certificate.doublings, 0);
    EXPECT_TRUE(st.certificate.passed);
}

TEST(SpacetimeBuilder, SmallKappaFailsCertification)
{
    const BuiltinExample ex = builtin_example("gamma2", true);
    const DecoratedComplex cx = decorate(ex.rep, ex.tri);
    EXPECT_FALSE(certify_kappa(cx, 0.05, RunConfig{}).passed);
}

TEST(SpacetimeBuilder, DevelopedMapsAgree)
{
    const PolyhedralSpacetime st = build("torus", true);
    const DecoratedSimplex& s = st.complex.simplices[0];
    // on a corner plateau the blended map is affine in (t, alpha)
    const Vec3 a(0.8, 0.15, 0.05);
    const Vec3 expected = 1.3 * s.u[0] + develop_plain(s, st.kappa, 0.0, a);
    EXPECT_LT((develop_blended(s, st.kappa, 1.3, a) - expected).norm(), 1e-12);
    // Jacobian against finite differences
    const Vec3 b(0.4, 0.35, 0.25);
    const Mat3 j = blended_jacobian(s, st.kappa, 1.1, b);
    const double h = 1e-6;
    const Vec3 dt = (develop_blended(s, st.kappa, 1.1 + h, b) - develop_blended(s, st.kappa, 1.1 - h, b)) / (2 * h);
    const Vec3 da = (develop_blended(s, st.kappa, 1.1, Vec3(b + Vec3(h, 0, -h))) -
                     develop_blended(s, st.kappa, 1.1, Vec3(b - Vec3(h, 0, -h)))) / (2 * h);
    EXPECT_LT((dt - j.col(0)).norm(), 1e-7);
    EXPECT_LT((da - j.col(1)).norm(), 1e-7);
}

TEST(SpacetimeBuilder, DeterministicBundles)
{
    const std::string a = dump17(bundle_to_json(build("gamma2", true)));
    const std::string b = dump17(bundle_to_json(build("gamma2", true)));
    EXPECT_EQ(a, b);
    const PolyhedralSpacetime back = bundle_from_json(parse_json(a));
    EXPECT_EQ(dump17(bundle_to_json(back)), a);
}

TEST(SpacetimeBuilder, StripAndExtend)
{
    for (const auto& name : builtin_names()) {
        const PolyhedralSpacetime st = build(name, true);
        const PolyhedralSpacetime stripped = strip_btz(st);
        for (const auto& f : stripped.fibers)
            EXPECT_FALSE(f.present);
        EXPECT_FALSE(same_structure(st, stripped));
        const PolyhedralSpacetime back = extend_btz(stripped);
        EXPECT_TRUE(same_structure(st, back));
        EXPECT_EQ(back.kappa, st.kappa);
    }
}

TEST(SpacetimeBuilder, MeshCounts)
{
    const PolyhedralSpacetime st = build("gamma2", false);
    const int res = 4;
    const std::string obj = export_mesh(st, {0.5, 1.0}, res, MeshFormat::Obj);
    int v = 0, f = 0;
    std::istringstream in(obj);
    std::string line;
    while (std::getline(in, line)) {
        v += line.rfind("v ", 0) == 0;
        f += line.rfind("f ", 0) == 0;
    }
    const int simplices = static_cast<int>(st.complex.simplices.size());
    EXPECT_EQ(v, 2 * simplices * (res + 1) * (res + 2) / 2);
    EXPECT_EQ(f, 2 * simplices * res * res);
    const Json mesh = parse_json(export_mesh(st, {0.5}, res, MeshFormat::Json));
    EXPECT_EQ(mesh["leaves"].size(), 1u);
    EXPECT_THROW(export_mesh(st, {}, res, MeshFormat::Obj), Error);
}
