#include "btz/surface_rep.hpp"

namespace btz {

namespace {

Mat2 mat2(double a, double b, double c, double d)
{
    Mat2 m;
    m << a, b, c, d;
    return m;
}

AffineRepresentation linear_rep(int genus, int punctures, const std::map<std::string, Mat2>& sl2,
                                const std::string& name)
{
    AffineRepresentation rep;
    rep.genus = genus;
    rep.punctures = punctures;
    rep.sl2 = sl2;
    rep.certificate = "builtin:" + name;
    for (const auto& [gen, m] : sl2)
        rep.generators[gen] = AffineIsometry(sl2_to_so12(m), Vec3::Zero());
    complete_from_relator(rep);
    return rep;
}

// Two triangles (-1, 0, inf) and (0, 1, inf) sharing the diagonal [0, inf].
IdealTriangulation two_triangles()
{
    IdealTriangulation tri;
    tri.triangles = {{"m1", "z", "inf"}, {"z", "p1", "inf"}};
    tri.positions = {{"m1", BoundaryPoint::at(-1.0)},
                     {"z", BoundaryPoint::at(0.0)},
                     {"p1", BoundaryPoint::at(1.0)},
                     {"inf", BoundaryPoint::infinity()}};
    tri.gluings.push_back({0, 1, 1, 2, {}});
    return tri;
}

BuiltinExample gamma2(bool nonzero)
{
    BuiltinExample ex;
    ex.name = "gamma2";
    // c1 fixes infinity, c2 fixes 0, c3 = (c1 c2)^-1 fixes 1
    AffineRepresentation lin =
        linear_rep(0, 3, {{"c1", mat2(1, 2, 0, 1)}, {"c2", mat2(1, 0, -2, 1)}}, ex.name);
    if (nonzero) {
        // coboundary v - A v of a fixed vector v
        const Vec3 v(0.5, 0.8, -0.3);
        std::map<std::string, Vec3> tangents;
        for (const auto& name : {"c1", "c2"})
            tangents[name] = v - lin.generator(name).linear()(v);
        ex.rep = cocycle_from_tangent_vector(lin, tangents);
    } else {
        ex.rep = lin;
    }
    ex.tri = two_triangles();
    ex.tri.vertex_class = {{"m1", "c3"}, {"z", "c2"}, {"p1", "c3"}, {"inf", "c1"}};
    ex.tri.vertex_word = {{"m1", parse_word("c1^-1")}, {"z", {}}, {"p1", {}}, {"inf", {}}};
    ex.tri.gluings.push_back({0, 2, 1, 1, parse_word("c1")});
    ex.tri.gluings.push_back({1, 0, 0, 0, parse_word("c2")});
    return ex;
}

BuiltinExample torus(bool nonzero)
{
    BuiltinExample ex;
    ex.name = "torus";
    AffineRepresentation lin =
        linear_rep(1, 1, {{"a1", mat2(1, 1, 1, 2)}, {"b1", mat2(1, -1, -1, 2)}}, ex.name);
    if (nonzero) {
        // tau(a1) fixed, tau(b1) = beta w with beta chosen so that tau(c1) is tangent
        const Vec3 ta(0.3, -0.2, 0.45);
        const Vec3 w(0.1, 0.35, -0.25);
        const Vec3 u = fixed_lightlike_direction(lin.generator("c1").linear());
        auto residual = [&](double beta) {
            const AffineRepresentation r =
                cocycle_from_tangent_vector(lin, {{"a1", ta}, {"b1", beta * w}});
            return minkowski_inner(r.generator("c1").translation(), u);
        };
        const double r0 = residual(0.0), r1 = residual(1.0);
        const double beta = -r0 / (r1 - r0);
        ex.rep = cocycle_from_tangent_vector(lin, {{"a1", ta}, {"b1", beta * w}});
    } else {
        ex.rep = lin;
    }
    ex.tri = two_triangles();
    ex.tri.vertex_class = {{"m1", "c1"}, {"z", "c1"}, {"p1", "c1"}, {"inf", "c1"}};
    ex.tri.vertex_word = {{"z", {}},
                          {"m1", parse_word("a1^-1")},
                          {"p1", parse_word("b1^-1")},
                          {"inf", parse_word("b1^-1 a1^-1")}};
    ex.tri.gluings.push_back({0, 2, 1, 0, parse_word("a1")});
    ex.tri.gluings.push_back({1, 1, 0, 0, parse_word("b1")});
    return ex;
}

}  // namespace

std::vector<std::string> builtin_names() { return {"gamma2", "torus"}; }

BuiltinExample builtin_example(const std::string& name, bool nonzero_cocycle)
{
    if (name == "gamma2")
        return gamma2(nonzero_cocycle);
    if (name == "torus")
        return torus(nonzero_cocycle);
    fail(ErrorCode::InvalidInput, "unknown example '" + name + "'");
}

}  // namespace btz
