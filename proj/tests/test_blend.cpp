#include <random>

#include <gtest/gtest.h>

#include "btz/spacetime.hpp"

using namespace btz;

namespace {

Vec3 random_barycentric(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0, 1);
    double a = u(rng), b = u(rng);
    if (a > b)
        std::swap(a, b);
    return Vec3(a, b - a, 1 - b);
}

DecoratedSimplex symmetric_simplex()
{
    DecoratedSimplex s;
    for (int k = 0; k < 3; ++k) {
        const double a = kTwoPi * k / 3;
        s.u[k] = Vec3(1, std::cos(a), std::sin(a));
        s.p[k] = Vec3::Zero();
    }
    return s;
}

}  // namespace

TEST(Blend, PartitionOfUnity)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const Vec3 a = random_barycentric(rng);
        const Vec3 phi = hexagon_blend(a);
        EXPECT_NEAR(phi.sum(), 1.0, 1e-14);
        EXPECT_GE(phi.minCoeff(), 0.0);
        // permutation symmetry
        const Vec3 rot = hexagon_blend(Vec3(a(1), a(2), a(0)));
        EXPECT_LT((rot - Vec3(phi(1), phi(2), phi(0))).norm(), 1e-14);
    }
}

TEST(Blend, PlateauAtCorners)
{
    EXPECT_EQ(hexagon_blend(Vec3(1, 0, 0)), Vec3(1, 0, 0));
    EXPECT_EQ(hexagon_blend(Vec3(0.7, 0.2, 0.1)), Vec3(1, 0, 0));
    EXPECT_EQ(hexagon_blend(Vec3(0.1, 0.1, 0.8)), Vec3(0, 0, 1));
    const Vec3 c = hexagon_blend(Vec3::Constant(1.0 / 3.0));
    EXPECT_NEAR(c(0), 1.0 / 3.0, 1e-15);
    // on an edge the opposite corner has no weight
    EXPECT_EQ(hexagon_blend(Vec3(0.5, 0.5, 0))(2), 0.0);
}

TEST(Blend, JacobianMatchesFiniteDifferences)
{
    std::mt19937_64 rng(2);
    const double h = 1e-6;
    for (int i = 0; i < 500; ++i) {
        Vec3 a = random_barycentric(rng);
        if (a.minCoeff() < 2 * h)
            continue;
        const Mat32 j = hexagon_blend_jacobian(a);
        // columns: moving along e_1 - e_3 and e_2 - e_3
        for (int c = 0; c < 2; ++c) {
            Vec3 d = Vec3::Zero();
            d(c) = h;
            d(2) = -h;
            const Vec3 fd = (hexagon_blend(a + d) - hexagon_blend(a - d)) / (2 * h);
            EXPECT_LT((fd - j.col(c)).norm(), 1e-6);
        }
    }
}

TEST(Blend, GridAvoidsSeams)
{
    for (int n : {1, 4, 15}) {
        const auto g = barycentric_grid(n);
        EXPECT_EQ(static_cast<int>(g.size()), n * n);
        for (const auto& a : g) {
            EXPECT_NEAR(a.sum(), 1.0, 1e-14);
            EXPECT_GT(a.minCoeff(), 0.0);
        }
    }
}

TEST(Blend, GramOfSymmetricTriple)
{
    const DecoratedSimplex s = symmetric_simplex();
    Mat2 expected;
    expected << 3, 1.5, 1.5, 3;
    const Mat2 g = leaf_gram(s, 0.5, 0.5);
    EXPECT_LT((g - expected).cwiseAbs().maxCoeff(), 1e-14);
    // independent inner products of the edge vectors
    const Vec3 e1 = s.u[1] - s.u[0], e2 = s.u[2] - s.u[0];
    EXPECT_NEAR(minkowski_inner(e1, e1), 3.0, 1e-15);
    EXPECT_NEAR(minkowski_inner(e1, e2), 1.5, 1e-15);
    // scales with (t + kappa)^2
    EXPECT_LT((leaf_gram(s, 1.5, 0.5) - 4 * expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Blend, BlendedLeafIsSpacelikeForSymmetricTriple)
{
    const DecoratedSimplex s = symmetric_simplex();
    for (const auto& a : barycentric_grid(15)) {
        const Mat2 g = blended_leaf_gram(s, 1.0, 1.0, a);
        EXPECT_GT(g.determinant(), 0.0);
        EXPECT_GT(g.trace(), 0.0);
        EXPECT_GT(blended_jacobian(s, 1.0, 1.0, a).determinant(), 0.0);
    }
}
