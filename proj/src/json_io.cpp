#include "btz/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace btz {

namespace {

void write_string(std::string& out, const std::string& s)
{
    out += Json(s).dump();
}

void write(std::string& out, const Json& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out += ",\n";
            first = false;
            out += pad;
            write_string(out, it.key());
            out += ": ";
            write(out, it.value(), indent + 2);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // arrays of scalars stay on one line
        bool flat = true;
        for (const auto& e : j)
            flat = flat && !e.is_structured();
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i)
                    out += ", ";
                write(out, j[i], indent);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ",\n";
            out += pad;
            write(out, j[i], indent + 2);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        if (!std::isfinite(x)) {
            out += "null";
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out += buf;
        // keep floats recognizable as floats when read back
        if (std::string(buf).find_first_of(".en") == std::string::npos)
            out += ".0";
        return;
    }
    default:
        out += j.dump();
    }
}

const Json& member(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        fail(ErrorCode::InvalidInput, std::string("missing JSON field '") + key + "'");
    return j.at(key);
}

double number(const Json& j, const char* what)
{
    if (!j.is_number())
        fail(ErrorCode::InvalidInput, std::string("expected a number for '") + what + "'");
    return j.get<double>();
}

int integer(const Json& j, const char* what)
{
    if (!j.is_number_integer())
        fail(ErrorCode::InvalidInput, std::string("expected an integer for '") + what + "'");
    return j.get<int>();
}

std::string text(const Json& j, const char* what)
{
    if (!j.is_string())
        fail(ErrorCode::InvalidInput, std::string("expected a string for '") + what + "'");
    return j.get<std::string>();
}

template <int R, int C>
Eigen::Matrix<double, R, C> matrix_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != R)
        fail(ErrorCode::InvalidInput, "matrix has the wrong number of rows");
    Eigen::Matrix<double, R, C> m;
    for (int r = 0; r < R; ++r) {
        if (!j[r].is_array() || j[r].size() != C)
            fail(ErrorCode::InvalidInput, "matrix row has the wrong length");
        for (int c = 0; c < C; ++c)
            m(r, c) = number(j[r][c], "matrix entry");
    }
    if (!m.allFinite())
        fail(ErrorCode::InvalidInput, "matrix has non-finite entries");
    return m;
}

const char* kind_name(IsometryKind k)
{
    switch (k) {
    case IsometryKind::Identity:
        return "identity";
    case IsometryKind::Elliptic:
        return "elliptic";
    case IsometryKind::Parabolic:
        return "parabolic";
    case IsometryKind::Hyperbolic:
        return "hyperbolic";
    }
    return "unknown";
}

}  // namespace

std::string dump17(const Json& j)
{
    std::string out;
    write(out, j, 0);
    out += "\n";
    return out;
}

Json parse_json(const std::string& s)
{
    try {
        return Json::parse(s);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::InvalidInput, "malformed JSON at byte " + std::to_string(e.byte));
    }
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::InvalidInput, "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::InvalidInput, path + ": malformed JSON at byte " + std::to_string(e.byte));
    }
}

void write_text_file(const std::string& path, const std::string& s)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(ErrorCode::InvalidInput, "cannot write '" + path + "'");
    out << s;
}

Json to_json(const Vec3& v) { return Json::array({v(0), v(1), v(2)}); }

Json to_json(const Mat3& m)
{
    Json out = Json::array();
    for (int r = 0; r < 3; ++r)
        out.push_back(Json::array({m(r, 0), m(r, 1), m(r, 2)}));
    return out;
}

Json to_json(const Mat2& m)
{
    return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

Vec3 vec3_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 3)
        fail(ErrorCode::InvalidInput, "expected an array of 3 numbers");
    Vec3 v(number(j[0], "vector"), number(j[1], "vector"), number(j[2], "vector"));
    if (!v.allFinite())
        fail(ErrorCode::InvalidInput, "vector has non-finite entries");
    return v;
}

Mat3 mat3_from_json(const Json& j) { return matrix_from_json<3, 3>(j); }
Mat2 mat2_from_json(const Json& j) { return matrix_from_json<2, 2>(j); }

Json representation_to_json(const AffineRepresentation& rep)
{
    Json gens = Json::object();
    for (const auto& name : rep.generator_names()) {
        auto it = rep.generators.find(name);
        if (it == rep.generators.end())
            continue;
        Json g = Json::object();
        auto s = rep.sl2.find(name);
        if (s != rep.sl2.end())
            g["sl2"] = to_json(s->second);
        else
            g["so12"] = to_json(it->second.linear().matrix());
        g["translation"] = to_json(it->second.translation());
        gens[name] = g;
    }
    Json out = {{"genus", rep.genus}, {"punctures", rep.punctures}, {"generators", gens}};
    if (!rep.certificate.empty())
        out["certificate"] = rep.certificate;
    return out;
}

AffineRepresentation representation_from_json(const Json& j)
{
    AffineRepresentation rep;
    rep.genus = integer(member(j, "genus"), "genus");
    rep.punctures = integer(member(j, "punctures"), "punctures");
    if (rep.genus < 0 || rep.punctures < 1)
        fail(ErrorCode::InvalidInput, "need genus >= 0 and at least one puncture");
    const Json& gens = member(j, "generators");
    if (!gens.is_object())
        fail(ErrorCode::InvalidInput, "'generators' must be an object");
    const auto names = rep.generator_names();
    for (auto it = gens.begin(); it != gens.end(); ++it) {
        if (std::find(names.begin(), names.end(), it.key()) == names.end())
            fail(ErrorCode::UnknownGenerator, "unknown generator '" + it.key() + "'");
        const Json& g = it.value();
        LinearIsometry a;
        if (g.contains("sl2")) {
            const Mat2 m = mat2_from_json(g.at("sl2"));
            a = sl2_to_so12(m);
            rep.sl2[it.key()] = m;
        } else if (g.contains("so12")) {
            a = LinearIsometry(mat3_from_json(g.at("so12")));
        } else {
            fail(ErrorCode::InvalidInput, "generator '" + it.key() + "' needs 'sl2' or 'so12'");
        }
        const Vec3 tr = g.contains("translation") ? vec3_from_json(g.at("translation")) : Vec3::Zero();
        rep.generators[it.key()] = AffineIsometry(a, tr);
    }
    for (std::size_t i = 0; i + 1 < names.size(); ++i)
        if (!rep.generators.count(names[i]))
            fail(ErrorCode::InvalidInput, "missing generator '" + names[i] + "'");
    if (j.contains("certificate"))
        rep.certificate = text(j.at("certificate"), "certificate");
    complete_from_relator(rep);
    return rep;
}

Json triangulation_to_json(const IdealTriangulation& tri)
{
    Json triangles = Json::array();
    for (const auto& t : tri.triangles)
        triangles.push_back(Json::array({t[0], t[1], t[2]}));
    Json gluings = Json::array();
    for (const auto& g : tri.gluings)
        gluings.push_back({{"tri_a", g.tri_a},
                           {"edge_a", g.edge_a},
                           {"tri_b", g.tri_b},
                           {"edge_b", g.edge_b},
                           {"word", format_word(g.word)}});
    Json classes = Json::object();
    for (const auto& [v, c] : tri.vertex_class)
        classes[v] = c;
    Json positions = Json::object();
    for (const auto& [v, p] : tri.positions)
        positions[v] = p.infinite ? Json("inf") : Json(p.xi);
    Json words = Json::object();
    for (const auto& [v, w] : tri.vertex_word)
        words[v] = format_word(w);
    return {{"triangles", triangles},
            {"gluings", gluings},
            {"vertex_class", classes},
            {"positions", positions},
            {"vertex_word", words}};
}

IdealTriangulation triangulation_from_json(const Json& j)
{
    IdealTriangulation tri;
    const Json& triangles = member(j, "triangles");
    if (!triangles.is_array() || triangles.empty())
        fail(ErrorCode::InvalidTriangulation, "'triangles' must be a non-empty array");
    for (const auto& t : triangles) {
        if (!t.is_array() || t.size() != 3)
            fail(ErrorCode::InvalidTriangulation, "each triangle lists three vertices");
        tri.triangles.push_back({text(t[0], "vertex"), text(t[1], "vertex"), text(t[2], "vertex")});
    }
    for (const auto& g : member(j, "gluings")) {
        Gluing gl;
        gl.tri_a = integer(member(g, "tri_a"), "tri_a");
        gl.edge_a = integer(member(g, "edge_a"), "edge_a");
        gl.tri_b = integer(member(g, "tri_b"), "tri_b");
        gl.edge_b = integer(member(g, "edge_b"), "edge_b");
        gl.word = g.contains("word") ? parse_word(text(g.at("word"), "word")) : Word{};
        tri.gluings.push_back(gl);
    }
    const Json& classes = member(j, "vertex_class");
    for (auto it = classes.begin(); it != classes.end(); ++it)
        tri.vertex_class[it.key()] = text(it.value(), "vertex_class");
    const Json& positions = member(j, "positions");
    for (auto it = positions.begin(); it != positions.end(); ++it) {
        BoundaryPoint p;
        if (it.value().is_string()) {
            if (it.value().get<std::string>() != "inf")
                fail(ErrorCode::InvalidInput, "position must be a number or \"inf\"");
            p.infinite = true;
        } else {
            p.xi = number(it.value(), "position");
        }
        tri.positions[it.key()] = p;
    }
    if (j.contains("vertex_word")) {
        const Json& words = j.at("vertex_word");
        for (auto it = words.begin(); it != words.end(); ++it)
            tri.vertex_word[it.key()] = parse_word(text(it.value(), "vertex_word"));
    }
    return tri;
}

Json profile_to_json(const BoundaryProfile& bp)
{
    return {{"R", bp.R}, {"cos", bp.cos}, {"sin", bp.sin}, {"const", bp.constant}};
}

BoundaryProfile profile_from_json(const Json& j)
{
    BoundaryProfile bp;
    bp.R = number(member(j, "R"), "R");
    if (j.contains("const"))
        bp.constant = number(j.at("const"), "const");
    for (const char* key : {"cos", "sin"}) {
        if (!j.contains(key))
            continue;
        if (!j.at(key).is_array())
            fail(ErrorCode::InvalidProfile, std::string("'") + key + "' must be an array");
        auto& dst = std::string(key) == "cos" ? bp.cos : bp.sin;
        for (const auto& c : j.at(key))
            dst.push_back(number(c, key));
    }
    bp.check();
    return bp;
}

Json admissibility_to_json(const AdmissibilityReport& r)
{
    Json peripherals = Json::array();
    for (const auto& p : r.peripherals)
        peripherals.push_back({{"name", p.name},
                               {"kind", kind_name(p.kind)},
                               {"parabolic", p.parabolic},
                               {"tangent", p.tangent},
                               {"square_norm", p.square_norm},
                               {"cube_norm", p.cube_norm},
                               {"tangency", p.tangency},
                               {"direction", to_json(p.direction)}});
    return {{"admissible", r.admissible},
            {"relator_residual", r.relator_residual},
            {"discreteness", r.discreteness == Discreteness::CertifiedByConstruction
                                 ? "certified_by_construction"
                                 : "not_checked"},
            {"peripherals", peripherals},
            {"failures", r.failures}};
}

Json certification_to_json(const CertificationRecord& c)
{
    return {{"passed", c.passed},
            {"kappa", c.kappa},
            {"doublings", c.doublings},
            {"samples", c.samples},
            {"min_jacobian_det", c.min_jacobian_det},
            {"min_gram_eigenvalue", c.min_gram_eigenvalue},
            {"min_blended_gram_eigenvalue", c.min_blended_gram_eigenvalue},
            {"t_min", c.t_min},
            {"t_max", c.t_max},
            {"t_samples", c.t_samples},
            {"grid_n", c.grid_n},
            {"margin", c.margin}};
}

Json puncture_to_json(const PunctureGeometry& pg)
{
    return {{"name", pg.name},
            {"cusp", pg.cusp},
            {"triangles_per_turn", pg.r},
            {"period_power", pg.period_power},
            {"theta", pg.theta},
            {"Theta", pg.Theta},
            {"period_spread", pg.period_spread},
            {"holonomy_residual", pg.holonomy_residual},
            {"ell", pg.ell},
            {"theta_normalized", pg.theta_normalized},
            {"Theta_normalized", pg.Theta_normalized}};
}

Json spear_to_json(const SpearDescriptor& s)
{
    return {{"cusp", s.cusp},
            {"R", s.R},
            {"vertex_tau", s.vertex_tau},
            {"vertex_t", s.vertex_t},
            {"vertex_point", to_json(s.vertex_point)},
            {"boundary_samples", s.boundary_samples},
            {"shrinks", s.shrinks}};
}

Json config_to_json(const RunConfig& cfg)
{
    Json out = Json::object();
    std::istringstream in(format_config(cfg));
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos)
            out[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return out;
}

RunConfig config_from_json(const Json& j)
{
    if (!j.is_object())
        fail(ErrorCode::InvalidInput, "'config' must be an object");
    std::string txt;
    for (auto it = j.begin(); it != j.end(); ++it)
        txt += it.key() + " = " + text(it.value(), "config value") + "\n";
    return parse_config(txt);
}

Json bundle_to_json(const PolyhedralSpacetime& st)
{
    Json punctures = Json::array();
    for (const auto& pg : st.punctures)
        punctures.push_back(puncture_to_json(pg));
    Json spears = Json::array();
    for (const auto& f : st.fibers)
        if (f.spear)
            spears.push_back(spear_to_json(*f.spear));
    return {{"format", "btzkit-bundle"},
            {"version", 1},
            {"seed", st.config.seed},
            {"config", config_to_json(st.config)},
            {"representation", representation_to_json(st.rep)},
            {"triangulation", triangulation_to_json(st.tri)},
            {"kappa", st.kappa},
            {"blend", {{"id", "hexagon-plateau"}, {"plateau", 2.0 / 3.0}}},
            {"certification", certification_to_json(st.certificate)},
            {"punctures", punctures},
            {"spears", spears}};
}

PolyhedralSpacetime bundle_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("format") || j.at("format") != "btzkit-bundle")
        fail(ErrorCode::InvalidInput, "not a spacetime bundle");
    const RunConfig cfg = config_from_json(member(j, "config"));
    PolyhedralSpacetime st =
        assemble_spacetime(representation_from_json(member(j, "representation")),
                           triangulation_from_json(member(j, "triangulation")),
                           number(member(j, "kappa"), "kappa"), cfg);
    const Json& cert = member(j, "certification");
    if (cert.contains("doublings"))
        st.certificate.doublings = integer(cert.at("doublings"), "doublings");
    return st;
}

Json causal_report_to_json(const CauchyTimeReport& r, std::uint64_t seed)
{
    return {{"seed", seed},
            {"curves", r.curves},
            {"axis_curves", r.axis_curves},
            {"leaves", r.leaves},
            {"passed", r.passed()},
            {"trace_failures", r.trace_failures},
            {"non_monotone", r.non_monotone},
            {"leaf_crossing_failures", r.leaf_crossing_failures},
            {"decomposition_violations", r.decomposition_violations},
            {"total_points", r.total_points},
            {"failure_messages", r.failure_messages}};
}

Json polyline_to_json(const CausalPolyline& c)
{
    Json pts = Json::array();
    for (const auto& p : c.points) {
        Json q = {{"t", p.point.t}, {"developed", to_json(p.developed)}};
        if (p.point.singular())
            q["fiber"] = p.point.fiber;
        else {
            q["simplex"] = p.point.simplex;
            q["alpha"] = to_json(p.point.alpha);
        }
        pts.push_back(q);
    }
    return {{"points", pts}, {"chart_changes", c.chart_changes}, {"failures", c.failures}};
}

}  // namespace btz
