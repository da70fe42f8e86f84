#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "btz/minkowski.hpp"

namespace btz {

/// Point of the ideal boundary of the upper half-plane: a real number or infinity.
struct BoundaryPoint {
    double xi = 0.0;
    bool infinite = false;

    static BoundaryPoint at(double value) { return {value, false}; }
    static BoundaryPoint infinity() { return {0.0, true}; }
};

BoundaryPoint mobius(const Mat2& m, const BoundaryPoint& p);

/// Traceless 2x2 matrix [[-x, t + y], [y - t, x]] <-> (t, x, y); -det X = T(t, x, y).
Mat2 vector_to_sl2_algebra(const Vec3& v);
Vec3 sl2_algebra_to_vector(const Mat2& x);

/// Adjoint action of SL(2,R) on its Lie algebra, read in the (t, x, y) coordinates above.
/// Kernel is {I, -I}; throws NotUnimodular when |det m - 1| > tol.
LinearIsometry sl2_to_so12(const Mat2& m, double tol = 1e-9);

/// Future lightlike vector with t = 1 matching an ideal point; increasing xi runs
/// counterclockwise and infinity maps to (1, 0, 1).
Vec3 boundary_to_lightlike(const BoundaryPoint& p);

struct WordLetter {
    std::string generator;
    int power = 1;
};
using Word = std::vector<WordLetter>;

/// Parses whitespace separated letters such as "a1 b1^-1 c2^3"; the empty string is the identity.
Word parse_word(const std::string& text);
std::string format_word(const Word& w);
Word inverse_word(const Word& w);

/// Affine representation of the fundamental group of a genus-g surface with s punctures.
/// Generators are named a1, b1, ..., ag, bg, c1, ..., cs with relator
/// [a1, b1] ... [ag, bg] c1 ... cs = 1 and [a, b] = a b a^-1 b^-1.
struct AffineRepresentation {
    int genus = 0;
    int punctures = 0;
    std::map<std::string, AffineIsometry> generators;
    std::map<std::string, Mat2> sl2;  // optional lifts of the linear parts
    std::string certificate;          // "builtin:<name>" for the shipped examples

    std::vector<std::string> generator_names() const;
    std::vector<std::string> peripheral_names() const;
    const AffineIsometry& generator(const std::string& name) const;
};

AffineIsometry evaluate_word(const AffineRepresentation& rep, const Word& w);

/// Value of the relator word.
AffineIsometry relator_value(const AffineRepresentation& rep);

/// Fills in the last peripheral generator from the relator if it is missing.
void complete_from_relator(AffineRepresentation& rep);

enum class Discreteness { CertifiedByConstruction, NotChecked };

struct PeripheralReport {
    std::string name;
    IsometryKind kind = IsometryKind::Identity;
    double square_norm = 0.0;  // ||(A - I)^2||
    double cube_norm = 0.0;    // ||(A - I)^3||
    double tangency = 0.0;     // |<tau, u>|
    bool parabolic = false;
    bool tangent = false;
    Vec3 direction = Vec3::Zero();
};

struct AdmissibilityReport {
    double relator_residual = 0.0;
    std::vector<PeripheralReport> peripherals;
    Discreteness discreteness = Discreteness::NotChecked;
    bool admissible = false;
    std::vector<std::string> failures;
};

AdmissibilityReport validate_admissible(const AffineRepresentation& rep);

/// Throws InvalidRepresentation listing the failures.
void require_admissible(const AffineRepresentation& rep);

/// Affine representation with the linear parts of `linear_rep` and translations given by the
/// tangent vectors on the free generators; the last peripheral translation is forced by the
/// cocycle relation.
AffineRepresentation cocycle_from_tangent_vector(const AffineRepresentation& linear_rep,
                                                 const std::map<std::string, Vec3>& tangents);

/// Edge k of a triangle runs from corner k to corner k + 1 (mod 3).
struct Gluing {
    int tri_a = 0;
    int edge_a = 0;
    int tri_b = 0;
    int edge_b = 0;
    Word word;  // rho(word) maps edge_a of tri_a onto edge_b of tri_b, reversing direction
};

struct IdealTriangulation {
    std::vector<std::array<std::string, 3>> triangles;  // counterclockwise vertex names
    std::vector<Gluing> gluings;
    std::map<std::string, std::string> vertex_class;  // vertex -> peripheral generator
    std::map<std::string, BoundaryPoint> positions;
    std::map<std::string, Word> vertex_word;  // g with vertex = g . fixed point of its class
};

struct CuspData {
    std::string name;
    AffineIsometry holonomy;
    Vec3 u = Vec3::Zero();  // fixed lightlike direction, t = 1
    Vec3 p = Vec3::Zero();  // closest point of the fixed line to the origin
};

struct DecoratedSimplex {
    int id = 0;
    std::array<std::string, 3> vertex;
    std::array<int, 3> cusp{};
    std::array<Vec3, 3> u;
    std::array<Vec3, 3> p;
};

struct DecoratedComplex {
    std::vector<CuspData> cusps;
    std::vector<DecoratedSimplex> simplices;
    std::vector<Gluing> gluings;
    std::vector<AffineIsometry> gluing_maps;
    double gluing_residual = 0.0;
};

/// Attaches the lightlike corner vectors and the fixed-line points to each triangle.
DecoratedComplex decorate(const AffineRepresentation& rep, const IdealTriangulation& tri);

struct BuiltinExample {
    std::string name;
    AffineRepresentation rep;
    IdealTriangulation tri;
};

std::vector<std::string> builtin_names();

/// "gamma2": thrice-punctured sphere from the level-2 congruence subgroup;
/// "torus": once-punctured torus. `nonzero_cocycle` selects a nonzero tangent cocycle.
BuiltinExample builtin_example(const std::string& name, bool nonzero_cocycle = false);

}  // namespace btz
