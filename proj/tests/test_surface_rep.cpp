#include <random>

#include <gtest/gtest.h>

#include "btz/surface_rep.hpp"

using namespace btz;

namespace {

Mat2 random_sl2(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2, 2);
    Mat2 m;
    do {
        m << u(rng), u(rng), u(rng), u(rng);
    } while (std::abs(m.determinant()) < 0.2);
    if (m.determinant() < 0)
        m.col(0) *= -1;
    return m / std::sqrt(m.determinant());
}

}  // namespace

TEST(SurfaceRep, Sl2IsAHomomorphism)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 300; ++i) {
        const Mat2 a = random_sl2(rng), b = random_sl2(rng);
        const Mat3 lhs = sl2_to_so12(a * b).matrix();
        const Mat3 rhs = sl2_to_so12(a).matrix() * sl2_to_so12(b).matrix();
        EXPECT_LT((lhs - rhs).norm(), 1e-9 * (1 + lhs.norm()));
        EXPECT_LT(isometry_defect(lhs).norm(), 1e-9 * (1 + lhs.squaredNorm()));
        EXPECT_LT((sl2_to_so12(Mat2(-a)).matrix() - sl2_to_so12(a).matrix()).norm(), 1e-12 * lhs.norm());
    }
    Mat2 bad;
    bad << 2, 0, 0, 1;
    EXPECT_THROW(sl2_to_so12(bad), Error);
}

TEST(SurfaceRep, AlgebraRoundTrip)
{
    const Vec3 v(0.3, -1.2, 2.5);
    EXPECT_LT((sl2_algebra_to_vector(vector_to_sl2_algebra(v)) - v).norm(), 1e-15);
    // determinant of the matrix is the quadratic form
    EXPECT_NEAR(vector_to_sl2_algebra(v).determinant(), -quadratic_form(v), 1e-14);
}

TEST(SurfaceRep, BoundaryPointsAreLightlike)
{
    EXPECT_EQ(boundary_to_lightlike({0.0, true}), Vec3(1, 0, 1));
    EXPECT_LT((boundary_to_lightlike({0.0, false}) - Vec3(1, 0, -1)).norm(), 1e-15);
    EXPECT_LT((boundary_to_lightlike({1.0, false}) - Vec3(1, 1, 0)).norm(), 1e-15);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> x(-5, 5);
    for (int i = 0; i < 300; ++i) {
        const BoundaryPoint p{x(rng), false};
        EXPECT_NEAR(quadratic_form(boundary_to_lightlike(p)), 0.0, 1e-14);
        // equivariance up to scale
        const Mat2 m = random_sl2(rng);
        const Vec3 a = sl2_to_so12(m)(boundary_to_lightlike(p));
        const Vec3 b = boundary_to_lightlike(mobius(m, p));
        EXPECT_LT((a / a(0) - b).norm(), 1e-8);
    }
}

TEST(SurfaceRep, Words)
{
    const Word w = parse_word("a1 b1^-1 c2");
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[1].generator, "b1");
    EXPECT_EQ(w[1].power, -1);
    EXPECT_EQ(format_word(w), "a1 b1^-1 c2");
    EXPECT_EQ(format_word(inverse_word(w)), "c2^-1 b1 a1^-1");
    EXPECT_EQ(format_word(parse_word("a1⁻¹")), "a1^-1");
    EXPECT_TRUE(parse_word("").empty());
    EXPECT_THROW(parse_word("a1^x"), Error);
}

TEST(SurfaceRep, Gamma2IsAdmissible)
{
    for (bool nonzero : {false, true}) {
        const BuiltinExample ex = builtin_example("gamma2", nonzero);
        const AdmissibilityReport r = validate_admissible(ex.rep);
        EXPECT_TRUE(r.admissible);
        EXPECT_LT(r.relator_residual, 1e-9);
        EXPECT_EQ(r.discreteness, Discreteness::CertifiedByConstruction);
        ASSERT_EQ(r.peripherals.size(), 3u);
        for (const auto& p : r.peripherals) {
            EXPECT_TRUE(p.parabolic);
            EXPECT_TRUE(p.tangent);
            EXPECT_GT(p.square_norm, 1e-6);
            EXPECT_LT(p.cube_norm, 1e-8);
        }
    }
}

TEST(SurfaceRep, TorusIsAdmissible)
{
    for (bool nonzero : {false, true}) {
        const BuiltinExample ex = builtin_example("torus", nonzero);
        const AdmissibilityReport r = validate_admissible(ex.rep);
        EXPECT_TRUE(r.admissible);
        ASSERT_EQ(r.peripherals.size(), 1u);
        EXPECT_TRUE(r.peripherals[0].parabolic);
    }
}

TEST(SurfaceRep, NonTangentTranslationIsRejected)
{
    BuiltinExample ex = builtin_example("gamma2");
    const AffineIsometry c1 = ex.rep.generator("c1");
    ex.rep.generators["c1"] = AffineIsometry(c1.linear(), Vec3(0, 0, 1));
    ex.rep.generators.erase("c3");
    complete_from_relator(ex.rep);
    const AdmissibilityReport r = validate_admissible(ex.rep);
    EXPECT_FALSE(r.admissible);
    EXPECT_FALSE(r.peripherals[0].tangent);
    EXPECT_THROW(require_admissible(ex.rep), Error);
}

TEST(SurfaceRep, CoboundaryIsConjugation)
{
    // tau(g) = v - A v gives rho(g) = T_v A T_-v
    const BuiltinExample ex = builtin_example("torus");
    const Vec3 v(0.4, -0.1, 0.7);
    std::map<std::string, Vec3> tangents;
    for (const auto& name : {"a1", "b1"}) {
        const LinearIsometry& a = ex.rep.generator(name).linear();
        tangents[name] = v - a(v);
    }
    const AffineRepresentation rep = cocycle_from_tangent_vector(ex.rep, tangents);
    EXPECT_TRUE(validate_admissible(rep).admissible);
    const AffineIsometry shift(LinearIsometry(), v);
    for (const auto& word : {"a1 b1", "b1^-1 a1 a1", "c1"}) {
        const Word w = parse_word(word);
        const AffineIsometry lhs = evaluate_word(rep, w);
        const AffineIsometry rhs = shift * evaluate_word(ex.rep, w) * shift.inverse();
        EXPECT_LT((lhs.translation() - rhs.translation()).norm(), 1e-10);
        EXPECT_LT((lhs.linear().matrix() - rhs.linear().matrix()).norm(), 1e-10);
    }
}

TEST(SurfaceRep, DecorationIsEquivariant)
{
    for (const auto& name : builtin_names()) {
        for (bool nonzero : {false, true}) {
            const BuiltinExample ex = builtin_example(name, nonzero);
            const DecoratedComplex cx = decorate(ex.rep, ex.tri);
            EXPECT_LT(cx.gluing_residual, 1e-12);
            for (const auto& s : cx.simplices) {
                for (int k = 0; k < 3; ++k) {
                    EXPECT_NEAR(quadratic_form(s.u[k]), 0.0, 1e-12);
                    EXPECT_GT(s.u[k](0), 0.0);
                }
            }
            for (const auto& c : cx.cusps) {
                EXPECT_LT((c.holonomy(c.p) - c.p).norm(), 1e-10);
                EXPECT_LT((c.holonomy.linear()(c.u) - c.u).norm(), 1e-10);
            }
        }
    }
}

TEST(SurfaceRep, IncompleteTriangulationIsRejected)
{
    BuiltinExample ex = builtin_example("gamma2");
    ex.tri.gluings.pop_back();
    try {
        decorate(ex.rep, ex.tri);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidTriangulation);
    }
    EXPECT_THROW(builtin_example("klein"), Error);
}
