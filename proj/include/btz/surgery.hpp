#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "btz/model_spaces.hpp"

namespace btz {

/// tau^R(theta) = const + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta) on the circle r = R.
struct BoundaryProfile {
    double R = 1.0;
    double constant = 0.0;
    std::vector<double> cos;
    std::vector<double> sin;

    double value(double theta) const;
    double derivative(double theta) const;
    double second_derivative(double theta) const;
    /// max |d tau^R / d theta| by dense sampling plus Newton polishing at the critical points.
    double max_abs_derivative() const;
    /// Throws InvalidProfile for R <= 0 or non-finite coefficients.
    void check() const;
};

struct GraphJet {
    double value = 0.0;
    double d_r = 0.0;
    double d_theta = 0.0;
};

enum class GraphProvenance { Complete, Compact, Analytic, Grid };

const char* provenance_name(GraphProvenance p);

/// Graph tau = f(r, theta) over the disk of radius R in BTZ coordinates, written in spear
/// coordinates (vertex at tau = -R/2, shaft r = R, tau >= 0).
class SurfaceGraph {
public:
    using JetFn = std::function<GraphJet(double r, double theta)>;

    /// `punctured` graphs are defined on 0 < r <= R only.
    static SurfaceGraph analytic(double R, JetFn jet, bool punctured);
    /// Bilinear interpolation of values[i * thetas + j] at radii[i] and angle 2 pi j / thetas.
    static SurfaceGraph from_grid(double R, std::vector<double> radii, int thetas,
                                  std::vector<double> values);

    double R() const { return R_; }
    GraphProvenance provenance() const { return provenance_; }
    bool punctured() const { return punctured_; }
    double M() const { return M_; }
    std::optional<double> seam() const { return seam_; }

    /// Value and first derivatives; throws OnSeam on a non-smooth seam.
    GraphJet jet(double r, double theta) const;
    double value(double r, double theta) const;

private:
    friend SurfaceGraph extend_complete(const BoundaryProfile&);
    friend SurfaceGraph extend_compact(const BoundaryProfile&, double);

    void check_domain(double r) const;

    double R_ = 1.0;
    GraphProvenance provenance_ = GraphProvenance::Analytic;
    bool punctured_ = false;
    double M_ = 0.0;
    std::optional<double> seam_;
    JetFn jet_;
};

/// tau = tau^R(theta) + M (1/r - 1/R) with M = 1 + max |tau^R'|^2, on 0 < r <= R.
SurfaceGraph extend_complete(const BoundaryProfile& bp);

/// ((2r - R)/R)^2 tau^R + M (1/r - 1/R) on [R/2, R] and M/R on [0, R/2]; M doubled from
/// 1 + max |tau^R'|^2 until delta > margin on a sample grid. Throws MSearchExhausted.
SurfaceGraph extend_compact(const BoundaryProfile& bp, double margin = 1e-6);

/// 1 - 2 d tau/dr - ((1/r) d tau/dtheta)^2; the graph is spacelike where it is positive.
double delta(const SurfaceGraph& sg, double r, double theta);

/// Induced metric in (r, theta): [[delta + tau_theta^2 / r^2, -tau_theta], [-tau_theta, r^2]].
Mat2 induced_metric(const SurfaceGraph& sg, double r, double theta);

struct CompletenessCertificate {
    bool certified = false;
    double C = 0.0;                   // inf of r sqrt(delta) over the samples
    std::vector<double> ring_minima;  // per dyadic ring r = R 2^-k
    std::string reason;
};

CompletenessCertificate completeness_certificate(const SurfaceGraph& sg, int angular_samples = 64,
                                                 double margin = 1e-6);

struct DivergenceReport {
    bool diverges = false;
    std::vector<double> ring_minima;  // min over theta of tau at r = R 2^-k, k = 0..20
    double threshold = 0.0;
};

DivergenceReport divergence_check(const SurfaceGraph& sg, double threshold = 1e3,
                                  int angular_samples = 64);

/// Polyline in spear coordinates (tau, r, theta). `escapes` continues the last point
/// vertically to tau = +infinity.
struct CausalPath {
    std::vector<Vec3> points;
    bool escapes = false;
};

/// Throws NotCausal unless every segment is future causal in the BTZ metric.
void validate_causal_path(const CausalPath& path, double tol = 1e-9);

struct IntersectionResult {
    int count = 0;
    int prediction = 0;  // 1 if the end of the path lies in the causal future of the rim
    double min_gap = 0.0;
};

/// Counts sign changes of tau_path - tau_graph along the path inside the spear of radius R.
/// Throws Tangency when the path touches the graph within the sampling tolerance.
IntersectionResult intersection_count(const CausalPath& path, const SurfaceGraph& sg,
                                      int substeps = 64,
                                      double tangency_tol = 1e-9);

}  // namespace btz
