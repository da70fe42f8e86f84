#include "btz/surface_rep.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace btz {

BoundaryPoint mobius(const Mat2& m, const BoundaryPoint& p)
{
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    if (p.infinite) {
        if (c == 0.0)
            return BoundaryPoint::infinity();
        return BoundaryPoint::at(a / c);
    }
    const double den = c * p.xi + d;
    if (den == 0.0)
        return BoundaryPoint::infinity();
    return BoundaryPoint::at((a * p.xi + b) / den);
}

Mat2 vector_to_sl2_algebra(const Vec3& v)
{
    Mat2 x;
    x << -v(1), v(0) + v(2), v(2) - v(0), v(1);
    return x;
}

Vec3 sl2_algebra_to_vector(const Mat2& x)
{
    return Vec3(0.5 * (x(0, 1) - x(1, 0)), -x(0, 0), 0.5 * (x(0, 1) + x(1, 0)));
}

LinearIsometry sl2_to_so12(const Mat2& m, double tol)
{
    if (!m.allFinite())
        fail(ErrorCode::InvalidVector, "SL(2,R) matrix has a non-finite entry");
    if (std::abs(m.determinant() - 1.0) > tol)
        fail(ErrorCode::NotUnimodular, "matrix does not have determinant 1");
    Mat2 inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    Mat3 out;
    for (int k = 0; k < 3; ++k) {
        const Mat2 x = vector_to_sl2_algebra(Vec3::Unit(k));
        out.col(k) = sl2_algebra_to_vector(m * x * inv);
    }
    return LinearIsometry::unchecked(out);
}

Vec3 boundary_to_lightlike(const BoundaryPoint& p)
{
    if (p.infinite)
        return Vec3(1.0, 0.0, 1.0);
    if (!std::isfinite(p.xi))
        fail(ErrorCode::InvalidVector, "boundary point is not finite");
    const double s = 1.0 + p.xi * p.xi;
    return Vec3(1.0, 2.0 * p.xi / s, (p.xi * p.xi - 1.0) / s);
}

Word parse_word(const std::string& text)
{
    std::string normalized;
    // accept the unicode superscript inverse as well
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text.compare(i, 5, "⁻¹") == 0) {
            normalized += "^-1";
            i += 4;
        } else {
            normalized += text[i];
        }
    }
    Word w;
    std::istringstream is(normalized);
    std::string token;
    while (is >> token) {
        WordLetter letter;
        const auto caret = token.find('^');
        letter.generator = token.substr(0, caret);
        if (letter.generator.empty())
            fail(ErrorCode::InvalidInput, "empty generator in word '" + text + "'");
        if (caret != std::string::npos) {
            const std::string exponent = token.substr(caret + 1);
            std::size_t used = 0;
            try {
                letter.power = std::stoi(exponent, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != exponent.size())
                fail(ErrorCode::InvalidInput, "bad exponent in word '" + text + "'");
        }
        if (letter.power != 0)
            w.push_back(letter);
    }
    return w;
}

std::string format_word(const Word& w)
{
    std::string out;
    for (const auto& letter : w) {
        if (!out.empty())
            out += ' ';
        out += letter.generator;
        if (letter.power != 1)
            out += "^" + std::to_string(letter.power);
    }
    return out;
}

Word inverse_word(const Word& w)
{
    Word out(w.rbegin(), w.rend());
    for (auto& letter : out)
        letter.power = -letter.power;
    return out;
}

std::vector<std::string> AffineRepresentation::generator_names() const
{
    std::vector<std::string> names;
    for (int i = 1; i <= genus; ++i) {
        names.push_back("a" + std::to_string(i));
        names.push_back("b" + std::to_string(i));
    }
    for (const auto& c : peripheral_names())
        names.push_back(c);
    return names;
}

std::vector<std::string> AffineRepresentation::peripheral_names() const
{
    std::vector<std::string> names;
    for (int j = 1; j <= punctures; ++j)
        names.push_back("c" + std::to_string(j));
    return names;
}

const AffineIsometry& AffineRepresentation::generator(const std::string& name) const
{
    auto it = generators.find(name);
    if (it == generators.end())
        fail(ErrorCode::UnknownGenerator, "no generator named '" + name + "'");
    return it->second;
}

AffineIsometry evaluate_word(const AffineRepresentation& rep, const Word& w)
{
    AffineIsometry out;
    for (const auto& letter : w) {
        const AffineIsometry& g = rep.generator(letter.generator);
        const AffineIsometry step = letter.power > 0 ? g : g.inverse();
        for (int k = 0; k < std::abs(letter.power); ++k)
            out = out * step;
    }
    return out;
}

namespace {

Word relator_word(const AffineRepresentation& rep, int peripherals)
{
    Word w;
    for (int i = 1; i <= rep.genus; ++i) {
        const std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i);
        w.push_back({a, 1});
        w.push_back({b, 1});
        w.push_back({a, -1});
        w.push_back({b, -1});
    }
    for (int j = 1; j <= peripherals; ++j)
        w.push_back({"c" + std::to_string(j), 1});
    return w;
}

void check_counts(const AffineRepresentation& rep)
{
    if (rep.genus < 0 || rep.punctures < 1)
        fail(ErrorCode::InvalidInput, "need genus >= 0 and at least one puncture");
    if (2 * rep.genus - 2 + rep.punctures <= 0)
        fail(ErrorCode::InvalidInput, "surface must have negative Euler characteristic");
}

}  // namespace

AffineIsometry relator_value(const AffineRepresentation& rep)
{
    return evaluate_word(rep, relator_word(rep, rep.punctures));
}

void complete_from_relator(AffineRepresentation& rep)
{
    check_counts(rep);
    const std::string last = "c" + std::to_string(rep.punctures);
    if (rep.generators.count(last))
        return;
    const AffineIsometry partial = evaluate_word(rep, relator_word(rep, rep.punctures - 1));
    rep.generators[last] = partial.inverse();
    if (!rep.sl2.empty()) {
        Mat2 m = Mat2::Identity();
        bool complete = true;
        for (const auto& letter : relator_word(rep, rep.punctures - 1)) {
            auto it = rep.sl2.find(letter.generator);
            if (it == rep.sl2.end()) {
                complete = false;
                break;
            }
            m = m * (letter.power > 0 ? it->second : Mat2(it->second.inverse()));
        }
        if (complete)
            rep.sl2[last] = m.inverse();
    }
}

AdmissibilityReport validate_admissible(const AffineRepresentation& rep)
{
    check_counts(rep);
    AdmissibilityReport report;
    for (const auto& name : rep.generator_names()) {
        if (!rep.generators.count(name))
            fail(ErrorCode::UnknownGenerator, "missing generator '" + name + "'");
    }
    for (const auto& [name, g] : rep.generators) {
        (void)g;
        const auto names = rep.generator_names();
        if (std::find(names.begin(), names.end(), name) == names.end())
            fail(ErrorCode::UnknownGenerator, "unexpected generator '" + name + "'");
    }
    const AffineIsometry r = relator_value(rep);
    report.relator_residual = std::max((r.linear().matrix() - Mat3::Identity()).norm(),
                                       r.translation().norm());
    if (report.relator_residual >= 1e-9)
        report.failures.push_back("relator residual " + std::to_string(report.relator_residual));

    for (const auto& name : rep.peripheral_names()) {
        const AffineIsometry& c = rep.generator(name);
        PeripheralReport pr;
        pr.name = name;
        const Mat3 n = c.linear().matrix() - Mat3::Identity();
        pr.square_norm = (n * n).norm();
        pr.cube_norm = (n * n * n).norm();
        pr.kind = classify_isometry(c.linear()).kind;
        pr.parabolic = pr.kind == IsometryKind::Parabolic && pr.square_norm > 1e-6 &&
                       pr.cube_norm < 1e-8;
        if (pr.parabolic) {
            pr.direction = fixed_lightlike_direction(c.linear());
            pr.tangency = std::abs(minkowski_inner(c.translation(), pr.direction));
            pr.tangent = is_tangent(c.translation(), pr.direction);
            if (!pr.tangent)
                report.failures.push_back(name + " translation is not tangent");
        } else {
            report.failures.push_back(name + " is " + isometry_kind_name(pr.kind) +
                                      ", not parabolic");
        }
        report.peripherals.push_back(pr);
    }

    if (rep.certificate.rfind("builtin:", 0) == 0) {
        const std::string name = rep.certificate.substr(8);
        const auto names = builtin_names();
        if (std::find(names.begin(), names.end(), name) != names.end()) {
            const BuiltinExample ref = builtin_example(name);
            bool same = true;
            for (const auto& [gname, g] : ref.rep.generators) {
                auto it = rep.generators.find(gname);
                if (it == rep.generators.end() ||
                    (it->second.linear().matrix() - g.linear().matrix()).norm() > 1e-12)
                    same = false;
            }
            if (same)
                report.discreteness = Discreteness::CertifiedByConstruction;
        }
    }
    report.admissible = report.failures.empty();
    return report;
}

void require_admissible(const AffineRepresentation& rep)
{
    const AdmissibilityReport report = validate_admissible(rep);
    if (!report.admissible) {
        std::string msg;
        for (const auto& f : report.failures)
            msg += (msg.empty() ? "" : "; ") + f;
        fail(ErrorCode::InvalidRepresentation, msg);
    }
}

AffineRepresentation cocycle_from_tangent_vector(const AffineRepresentation& linear_rep,
                                                 const std::map<std::string, Vec3>& tangents)
{
    check_counts(linear_rep);
    AffineRepresentation out;
    out.genus = linear_rep.genus;
    out.punctures = linear_rep.punctures;
    out.sl2 = linear_rep.sl2;
    out.certificate = linear_rep.certificate;
    const auto names = linear_rep.generator_names();
    const std::string last = names.back();
    for (const auto& [name, v] : tangents) {
        if (std::find(names.begin(), names.end(), name) == names.end())
            fail(ErrorCode::UnknownGenerator, "no generator named '" + name + "'");
        if (name == last)
            fail(ErrorCode::InvalidInput, "the last peripheral translation is forced");
        require_finite(v, "tangent vector");
    }
    for (const auto& name : names) {
        if (name == last)
            continue;
        auto it = tangents.find(name);
        const Vec3 tau = it == tangents.end() ? Vec3::Zero() : it->second;
        out.generators[name] = AffineIsometry(linear_rep.generator(name).linear(), tau);
    }
    out.sl2.erase(last);
    complete_from_relator(out);
    // keep the exact linear part supplied for the last generator
    if (linear_rep.generators.count(last)) {
        out.generators[last] =
            AffineIsometry(linear_rep.generator(last).linear(), out.generators[last].translation());
        if (linear_rep.sl2.count(last))
            out.sl2[last] = linear_rep.sl2.at(last);
    }
    return out;
}

namespace {

double relative_gap(const Vec3& a, const Vec3& b)
{
    return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

}  // namespace

DecoratedComplex decorate(const AffineRepresentation& rep, const IdealTriangulation& tri)
{
    DecoratedComplex out;
    const auto peripherals = rep.peripheral_names();
    std::map<std::string, int> cusp_index;
    for (const auto& name : peripherals) {
        CuspData cusp;
        cusp.name = name;
        cusp.holonomy = rep.generator(name);
        const FixedLine line = fixed_line(cusp.holonomy);
        cusp.u = line.direction;
        cusp.p = line.point;
        cusp_index[name] = static_cast<int>(out.cusps.size());
        out.cusps.push_back(cusp);
    }
    if (tri.triangles.empty())
        fail(ErrorCode::InvalidTriangulation, "no triangles");

    struct Corner {
        int cusp;
        Vec3 u, p;
    };
    std::map<std::string, Corner> corners;
    for (const auto& t : tri.triangles) {
        for (const auto& v : t) {
            if (corners.count(v))
                continue;
            auto cls = tri.vertex_class.find(v);
            if (cls == tri.vertex_class.end())
                fail(ErrorCode::InvalidTriangulation, "vertex '" + v + "' has no class");
            auto ci = cusp_index.find(cls->second);
            if (ci == cusp_index.end())
                fail(ErrorCode::InvalidTriangulation,
                     "vertex '" + v + "' refers to unknown puncture '" + cls->second + "'");
            auto pos = tri.positions.find(v);
            if (pos == tri.positions.end())
                fail(ErrorCode::InvalidTriangulation, "vertex '" + v + "' has no position");
            auto word = tri.vertex_word.find(v);
            const AffineIsometry g =
                word == tri.vertex_word.end() ? AffineIsometry() : evaluate_word(rep, word->second);
            const CuspData& cusp = out.cusps[ci->second];
            Corner c{ci->second, g.linear()(cusp.u), g(cusp.p)};
            const Vec3 expected = boundary_to_lightlike(pos->second);
            if (relative_gap(c.u / c.u(0), expected) > 1e-8)
                fail(ErrorCode::DecorationFailure,
                     "vertex '" + v + "': position does not match the holonomy fixed point");
            corners[v] = c;
        }
    }

    const int n = static_cast<int>(tri.triangles.size());
    for (int i = 0; i < n; ++i) {
        DecoratedSimplex s;
        s.id = i;
        s.vertex = tri.triangles[i];
        for (int k = 0; k < 3; ++k) {
            const Corner& c = corners.at(s.vertex[k]);
            s.cusp[k] = c.cusp;
            s.u[k] = c.u;
            s.p[k] = c.p;
        }
        Mat3 m;
        m << s.u[0], s.u[1], s.u[2];
        const double det = m.determinant();
        if (!(det > 1e-12 * s.u[0].norm() * s.u[1].norm() * s.u[2].norm()))
            fail(ErrorCode::DecorationFailure,
                 "triangle " + std::to_string(i) + " is degenerate or not counterclockwise");
        out.simplices.push_back(s);
    }

    std::set<std::pair<int, int>> used;
    for (const auto& gl : tri.gluings) {
        if (gl.tri_a < 0 || gl.tri_a >= n || gl.tri_b < 0 || gl.tri_b >= n || gl.edge_a < 0 ||
            gl.edge_a > 2 || gl.edge_b < 0 || gl.edge_b > 2)
            fail(ErrorCode::InvalidTriangulation, "gluing refers to a missing edge");
        for (auto e : {std::make_pair(gl.tri_a, gl.edge_a), std::make_pair(gl.tri_b, gl.edge_b)}) {
            if (!used.insert(e).second)
                fail(ErrorCode::InvalidTriangulation,
                     "edge " + std::to_string(e.second) + " of triangle " +
                         std::to_string(e.first) + " is glued twice");
        }
        const AffineIsometry g = evaluate_word(rep, gl.word);
        const DecoratedSimplex& a = out.simplices[gl.tri_a];
        const DecoratedSimplex& b = out.simplices[gl.tri_b];
        for (int s = 0; s < 2; ++s) {
            const int ka = (gl.edge_a + s) % 3;
            const int kb = (gl.edge_b + 1 - s) % 3;
            const double gap = std::max(relative_gap(g.linear()(a.u[ka]), b.u[kb]),
                                        relative_gap(g(a.p[ka]), b.p[kb]));
            out.gluing_residual = std::max(out.gluing_residual, gap);
            if (gap > 1e-9)
                fail(ErrorCode::DecorationFailure,
                     "gluing of triangle " + std::to_string(gl.tri_a) + " edge " +
                         std::to_string(gl.edge_a) + " is not equivariant");
        }
        out.gluings.push_back(gl);
        out.gluing_maps.push_back(g);
    }
    if (static_cast<int>(used.size()) != 3 * n)
        fail(ErrorCode::InvalidTriangulation, "some edges are not glued");
    return out;
}

}  // namespace btz
