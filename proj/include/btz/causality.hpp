#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "btz/spacetime.hpp"

namespace btz {

/// Point of the polyhedral spacetime: a simplex chart (t, alpha) or, when `fiber >= 0`,
/// the point at time t of a singular fiber.
struct SpacetimePoint {
    int simplex = 0;
    int fiber = -1;
    double t = 1.0;
    Vec3 alpha = Vec3::Constant(1.0 / 3.0);

    bool singular() const { return fiber >= 0; }
};

struct PolylinePoint {
    SpacetimePoint point;
    AffineIsometry frame;  // developed copy of the chart used for `developed`
    Vec3 developed = Vec3::Zero();
};

/// Chart points joined by segments that are future causal in the developed picture.
struct CausalPolyline {
    std::vector<PolylinePoint> points;
    std::vector<std::string> failures;
    int chart_changes = 0;

    bool ok() const { return failures.empty(); }
};

enum class Steering {
    Random,    // leaf normal tilted by a random spacelike vector inside the cone
    Vertical,  // leaf normal
    Axis,      // follow the singular fiber of the start point, then leave it
};

/// Traces a future causal curve from `start` until the time function reaches `t_end`.
/// Problems (leaf not spacelike, Jacobian not orientation preserving, t not increasing,
/// non-causal segment) are recorded in `failures` and stop the curve.
CausalPolyline trace_causal_curve(const PolyhedralSpacetime& st, const SpacetimePoint& start,
                                  Steering steering, double t_end, std::uint64_t seed);

struct BtzDecomposition {
    int singular_points = 0;
    int regular_points = 0;
    double split_t = 0.0;  // time at which the curve leaves the singular fiber
};

/// Splits a polyline into its singular prefix and regular rest; throws DecompositionViolation
/// if a singular point follows a regular one or a regular point is not in the causal future
/// of the singular part.
BtzDecomposition btz_decomposition(const CausalPolyline& c, double tol = 1e-9);

struct CauchyTimeReport {
    int curves = 0;
    std::vector<double> leaves;
    int trace_failures = 0;
    int non_monotone = 0;
    int leaf_crossing_failures = 0;
    int decomposition_violations = 0;
    int axis_curves = 0;
    long total_points = 0;
    std::vector<std::string> failure_messages;

    bool passed() const
    {
        return trace_failures == 0 && non_monotone == 0 && leaf_crossing_failures == 0 &&
               decomposition_violations == 0;
    }
};

/// Traces `curves` curves (every tenth one starting on a singular fiber) and checks that t
/// increases strictly and that each leaf is crossed exactly once.
CauchyTimeReport cauchy_time_report(const PolyhedralSpacetime& st, int curves,
                                    const std::vector<double>& leaves, std::uint64_t seed);

struct DiamondSample {
    std::vector<SpacetimePoint> points;
    double t_min = 0.0;
    double t_max = 0.0;
    Vec3 box_min = Vec3::Zero();  // developed coordinates of the witnessing lifts
    Vec3 box_max = Vec3::Zero();
    int budget = 0;
    bool empty() const { return points.empty(); }
};

/// Heuristic sample of J+(p) n J-(q): rejection sampling of chart points, causality decided
/// against translates by group words of length <= 2. Not a decision procedure.
DiamondSample diamond_sample(const PolyhedralSpacetime& st, const SpacetimePoint& p,
                             const SpacetimePoint& q, int budget, std::uint64_t seed);

}  // namespace btz
