#pragma once

#include <string>

#include <json.hpp>

#include "btz/causality.hpp"
#include "btz/spacetime.hpp"
#include "btz/surgery.hpp"

namespace btz {

using Json = nlohmann::ordered_json;

/// Serializes with every float written as %.17g, two-space indent, keys in insertion order.
std::string dump17(const Json& j);

/// Parses text; syntax errors become InvalidInput with the byte offset.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(const Vec3& v);
Json to_json(const Mat3& m);  // row-major
Json to_json(const Mat2& m);
Vec3 vec3_from_json(const Json& j);
Mat3 mat3_from_json(const Json& j);
Mat2 mat2_from_json(const Json& j);

/// {"genus", "punctures", "generators": {name: {"sl2" | "so12", "translation"}}, "certificate"}.
/// A missing last peripheral is completed from the relator.
Json representation_to_json(const AffineRepresentation& rep);
AffineRepresentation representation_from_json(const Json& j);

/// {"triangles", "gluings": [{"tri_a", "edge_a", "tri_b", "edge_b", "word"}], "vertex_class",
/// "positions" (number or "inf"), "vertex_word"}.
Json triangulation_to_json(const IdealTriangulation& tri);
IdealTriangulation triangulation_from_json(const Json& j);

/// {"R", "cos", "sin", "const"}.
Json profile_to_json(const BoundaryProfile& bp);
BoundaryProfile profile_from_json(const Json& j);

Json admissibility_to_json(const AdmissibilityReport& r);
Json certification_to_json(const CertificationRecord& c);
Json puncture_to_json(const PunctureGeometry& pg);
Json spear_to_json(const SpearDescriptor& s);
Json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const Json& j);

/// Representation, triangulation, kappa, blend, certification, punctures, spears, config, seed.
Json bundle_to_json(const PolyhedralSpacetime& st);
/// Rebuilds the spacetime with the stored kappa and config.
PolyhedralSpacetime bundle_from_json(const Json& j);

Json causal_report_to_json(const CauchyTimeReport& r, std::uint64_t seed);
Json polyline_to_json(const CausalPolyline& c);

}  // namespace btz
