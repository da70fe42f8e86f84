#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace btz {

/// Run parameters. Every field can be set from a flat `key = value` file.
struct RunConfig {
    std::uint64_t seed = 1;

    // kappa search and certification
    double kappa0 = 0.0;  // 0 selects 1 + max |p|
    int max_doublings = 40;
    double cert_margin = 1e-6;
    double t_min = 0.1;
    double t_max = 10.0;
    int t_samples = 25;
    int grid_n = 15;
    int equivariance_samples = 200;

    // punctures and spears
    bool normalize_theta = false;
    double spear_initial_radius = 1.0;
    int spear_max_shrinks = 40;
    int spear_angular_samples = 64;
    int spear_radial_samples = 16;
    double spear_vertex_t = 1.0;

    // causal tracing
    int curves = 100;
    std::vector<double> leaves{0.5, 1.0, 2.0};
    double cone_margin = 1e-6;
    double trace_t_start = 0.25;
    double trace_t_end = 4.0;
    double trace_step = 0.02;
    int deck_kmax = 8;

    // meshes and surgery
    int mesh_resolution = 8;
    int surgery_radial_samples = 100;
    int surgery_angular_samples = 100;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys are input errors.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Same flat format, keys in a fixed order.
std::string format_config(const RunConfig& cfg);

}  // namespace btz
