#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "btz/config.hpp"
#include "btz/model_spaces.hpp"
#include "btz/surface_rep.hpp"

namespace btz {

using Mat32 = Eigen::Matrix<double, 3, 2>;

inline constexpr const char* kBlendId = "cut-product";

/// Blend of the closed triangle onto itself. Equal to the vertex e_i on the corner region
/// {alpha_i >= 2/3}; inside the hexagon phi_i is proportional to alpha_i w_j w_k with
/// w = 2/3 - alpha. Fixes edges setwise and commutes with permutations of the coordinates.
Vec3 hexagon_blend(const Vec3& alpha);

/// Derivative of the blend in the chart (alpha_1, alpha_2), alpha_3 = 1 - alpha_1 - alpha_2.
Mat32 hexagon_blend_jacobian(const Vec3& alpha);

/// Half-cell offset barycentric grid: the n^2 centroids of the subdivided triangle.
std::vector<Vec3> barycentric_grid(int n);

/// rho(frame) [ t sum alpha_k u_k + kappa sum beta_k u_k + sum beta_k p_k ] for the fundamental copy.
Vec3 develop(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha, const Vec3& beta);
Vec3 develop_plain(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha);
Vec3 develop_blended(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha);

/// Columns: derivatives of the blended map in t, alpha_1, alpha_2.
Mat3 blended_jacobian(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha);

/// Gram matrix of the affine leaf t = const of the plain map.
Mat2 leaf_gram(const DecoratedSimplex& s, double t, double kappa);

/// Gram matrix of the tangent plane of the blended leaf at alpha.
Mat2 blended_leaf_gram(const DecoratedSimplex& s, double kappa, double t, const Vec3& alpha);

std::vector<double> leaf_sample_times(const RunConfig& cfg);

struct CertificationRecord {
    double kappa = 0.0;
    int doublings = 0;
    long samples = 0;
    double min_jacobian_det = 0.0;
    double min_gram_eigenvalue = 0.0;          // affine leaves
    double min_blended_gram_eigenvalue = 0.0;  // tangent planes of the blended leaves
    double t_min = 0.0;
    double t_max = 0.0;
    int t_samples = 0;
    int grid_n = 0;
    double margin = 0.0;
    bool passed = false;
};

CertificationRecord certify_kappa(const DecoratedComplex& cx, double kappa, const RunConfig& cfg);

/// Doubles kappa from kappa0 until the sampled certificate passes; throws KappaSearchExhausted.
CertificationRecord choose_kappa(const DecoratedComplex& cx, const RunConfig& cfg);

struct FanEntry {
    int simplex = 0;
    int corner = 0;
    AffineIsometry frame;  // developed copy is frame . simplex
};

/// Corner fan around the fixed line of one puncture, in the chart
/// q -> dev0^-1(L (q - p_c)) with L a rotation taking u_c to (1, 1, 0).
struct PunctureGeometry {
    int cusp = 0;
    std::string name;
    int r = 0;                   // triangles per turn
    int period_power = 1;        // fan entry n + r is rho(c)^period_power applied to entry n
    std::vector<FanEntry> fan;   // 2r + 1 entries
    std::vector<double> theta;   // angle of the half-plane Pi_n, n = 0..2r
    double Theta = 0.0;          // theta_{n+r} - theta_n
    double period_spread = 0.0;  // max deviation of theta_{n+r} - theta_n from Theta
    double holonomy_residual = 0.0;
    double ell = 1.0;            // h_ell with ell = 2 pi / Theta normalizes the period
    std::vector<double> theta_normalized;
    double Theta_normalized = 0.0;
    LinearIsometry chart;
    Vec3 origin = Vec3::Zero();
};

struct SpearDescriptor {
    int cusp = 0;
    double R = 0.0;           // radius in normalized BTZ coordinates
    double vertex_tau = 0.0;  // normalized BTZ time of the vertex
    double vertex_t = 0.0;    // time function value at the vertex
    Vec3 vertex_point = Vec3::Zero();
    int boundary_samples = 0;
    int shrinks = 0;
};

struct SingularFiber {
    int cusp = 0;
    std::string name;
    Vec3 point = Vec3::Zero();
    Vec3 direction = Vec3::Zero();
    bool present = true;
    std::optional<SpearDescriptor> spear;
};

struct PolyhedralSpacetime {
    AffineRepresentation rep;
    IdealTriangulation tri;
    DecoratedComplex complex;
    RunConfig config;
    double kappa = 0.0;
    CertificationRecord certificate;
    std::vector<PunctureGeometry> punctures;
    std::vector<SingularFiber> fibers;
    std::set<int> missing_simplices;  // only used to model corrupted fans
};

/// Validates, decorates, searches kappa, computes puncture geometry and spears.
PolyhedralSpacetime build_spacetime(const AffineRepresentation& rep, const IdealTriangulation& tri,
                                    const RunConfig& cfg);

/// Same with a fixed kappa; the certificate is recorded but not enforced.
PolyhedralSpacetime assemble_spacetime(const AffineRepresentation& rep,
                                       const IdealTriangulation& tri, double kappa,
                                       const RunConfig& cfg);

/// Max over sampled gluings of |rho(gamma) D(t, alpha) - D(t, alpha')|.
double equivariance_residual(const PolyhedralSpacetime& st, int samples, std::uint64_t seed);

PunctureGeometry puncture_geometry(const PolyhedralSpacetime& st, int cusp);

/// Normalized BTZ coordinates (tau, r, theta) of a Minkowski point near a puncture line.
Vec3 puncture_coordinates(const PunctureGeometry& pg, const Vec3& q);
Vec3 puncture_point(const PunctureGeometry& pg, const Vec3& normalized);

/// Whether a Minkowski point lies in the developed corner prisms of the fan.
bool in_corner_fan(const PolyhedralSpacetime& st, const PunctureGeometry& pg, const Vec3& q);

/// Largest radius R = R0 / 2^k whose spear lies in the corner fan; throws SpearNotFound.
SpearDescriptor find_spear(const PolyhedralSpacetime& st, int cusp);

PolyhedralSpacetime strip_btz(const PolyhedralSpacetime& st);
PolyhedralSpacetime extend_btz(const PolyhedralSpacetime& st);

/// Same fibers, spears, kappa and simplices.
bool same_structure(const PolyhedralSpacetime& a, const PolyhedralSpacetime& b);

enum class MeshFormat { Obj, Json };

/// Leaves t = const of the blended map on a triangular grid of the given resolution.
std::string export_mesh(const PolyhedralSpacetime& st, const std::vector<double>& leaves,
                        int resolution, MeshFormat format);

}  // namespace btz
