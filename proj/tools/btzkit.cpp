#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "btz/json_io.hpp"

using namespace btz;

namespace {

struct Common {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    bool normalize_theta = false;
};

RunConfig make_config(const Common& c)
{
    RunConfig cfg;
    if (!c.config.empty())
        cfg = load_config(c.config);
    if (c.seed_set)
        cfg.seed = c.seed;
    if (c.normalize_theta)
        cfg.normalize_theta = true;
    return cfg;
}

void emit(const Common& c, const Json& report)
{
    const std::string s = dump17(report);
    if (c.out.empty())
        std::cout << s;
    else
        write_text_file(c.out, s);
}

Json surgery_report(const PolyhedralSpacetime& st, const BoundaryProfile& bp, const std::string& mode,
                    bool& passed)
{
    const RunConfig& cfg = st.config;
    const bool complete = mode == "complete";
    const SurfaceGraph sg = complete ? extend_complete(bp) : extend_compact(bp, cfg.cone_margin);
    const int nr = cfg.surgery_radial_samples, nt = cfg.surgery_angular_samples;
    double delta_min = std::numeric_limits<double>::infinity();
    double delta_r2_min = delta_min;
    double det_defect = 0.0;
    for (int i = 1; i <= nr; ++i) {
        // half-cell offsets keep the samples off the compact seam
        const double r = bp.R * (i - 0.5) / nr;
        for (int k = 0; k < nt; ++k) {
            const double th = kTwoPi * k / nt;
            const double d = delta(sg, r, th);
            delta_min = std::min(delta_min, d);
            delta_r2_min = std::min(delta_r2_min, d * r * r);
            det_defect = std::max(det_defect,
                                  std::abs(induced_metric(sg, r, th).determinant() - d * r * r));
        }
    }
    double boundary_error = 0.0;
    for (int k = 0; k < nt; ++k) {
        const double th = kTwoPi * k / nt;
        boundary_error = std::max(boundary_error, std::abs(sg.value(bp.R, th) - bp.value(th)));
    }
    const CompletenessCertificate cert = completeness_certificate(sg, 64, cfg.cone_margin);
    const DivergenceReport div = divergence_check(sg);
    passed = delta_min > 0.0 && boundary_error == 0.0 &&
             (complete ? cert.certified && div.diverges : !div.diverges);
    Json spears = Json::array();
    for (const auto& f : st.fibers)
        if (f.spear)
            spears.push_back(spear_to_json(*f.spear));
    Json out = {{"seed", cfg.seed},
                {"config", config_to_json(cfg)},
                {"mode", mode},
                {"profile", profile_to_json(bp)},
                {"provenance", provenance_name(sg.provenance())},
                {"M", sg.M()},
                {"seam", sg.seam() ? Json(*sg.seam()) : Json(nullptr)},
                {"samples", nr * nt},
                {"delta_min", delta_min},
                {"delta_r2_min", delta_r2_min},
                {"metric_det_defect", det_defect},
                {"boundary_error", boundary_error},
                {"completeness", {{"certified", cert.certified},
                                  {"C", cert.C},
                                  {"ring_minima", cert.ring_minima},
                                  {"reason", cert.reason}}},
                {"divergence", {{"diverges", div.diverges},
                                {"threshold", div.threshold},
                                {"ring_minima", div.ring_minima}}},
                {"spears", spears},
                {"passed", passed}};
    return out;
}

std::vector<double> parse_leaves(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || !(v > 0.0))
            fail(ErrorCode::InvalidInput, "leaves must be positive numbers, got '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        fail(ErrorCode::InvalidInput, "need at least one leaf");
    return out;
}

int run_demo(const std::string& name, bool nonzero, const Common& c)
{
    const RunConfig cfg = make_config(c);
    const std::filesystem::path dir = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
    std::filesystem::create_directories(dir);
    const BuiltinExample ex = builtin_example(name, nonzero);
    const std::string base = ex.name + (nonzero ? "_nonzero" : "");
    write_text_file((dir / (base + "_rep.json")).string(), dump17(representation_to_json(ex.rep)));
    write_text_file((dir / (base + "_tri.json")).string(), dump17(triangulation_to_json(ex.tri)));

    const AdmissibilityReport adm = validate_admissible(ex.rep);
    write_text_file((dir / (base + "_validate.json")).string(), dump17(admissibility_to_json(adm)));
    if (!adm.admissible) {
        std::printf("%-10s FAIL\n", "validate");
        return 1;
    }
    const PolyhedralSpacetime st = build_spacetime(ex.rep, ex.tri, cfg);
    write_text_file((dir / (base + "_bundle.json")).string(), dump17(bundle_to_json(st)));

    BoundaryProfile bp;
    bp.R = 1.0;
    bp.sin = {0.0, 0.3};
    bool complete_ok = false, compact_ok = false;
    write_text_file((dir / (base + "_surgery_complete.json")).string(),
                    dump17(surgery_report(st, bp, "complete", complete_ok)));
    write_text_file((dir / (base + "_surgery_compact.json")).string(),
                    dump17(surgery_report(st, bp, "compact", compact_ok)));

    const CauchyTimeReport causal = cauchy_time_report(st, cfg.curves, cfg.leaves, cfg.seed);
    write_text_file((dir / (base + "_causal.json")).string(),
                    dump17(causal_report_to_json(causal, cfg.seed)));
    write_text_file((dir / (base + "_mesh.obj")).string(),
                    export_mesh(st, cfg.leaves, cfg.mesh_resolution, MeshFormat::Obj));

    std::printf("%-10s %s\n", "step", "result");
    std::printf("%-10s %s (relator residual %.3g)\n", "validate", "ok", adm.relator_residual);
    std::printf("%-10s ok (kappa %.17g, %ld samples, %zu spears)\n", "build", st.kappa,
                st.certificate.samples, st.fibers.size());
    std::printf("%-10s %s / %s (complete / compact)\n", "surgery", complete_ok ? "ok" : "FAIL",
                compact_ok ? "ok" : "FAIL");
    std::printf("%-10s %s (%d curves)\n", "causal", causal.passed() ? "ok" : "FAIL", causal.curves);
    std::printf("%-10s ok (%zu leaves)\n", "mesh", cfg.leaves.size());
    return complete_ok && compact_ok && causal.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Builds and probes flat spacetimes with BTZ-type singular lines"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", c.config, "flat key = value config file");
        sub->add_option("--seed", c.seed, "random seed")->each([&](const std::string&) { c.seed_set = true; });
        sub->add_option("--out", c.out, "output path");
        sub->add_flag("--normalize-theta", c.normalize_theta, "rescale so that the angle period is 2 pi");
    };

    std::string rep_path, tri_path, bundle_path, profile_path, mode = "complete", leaves_text,
                                                                format = "obj", demo_name;
    int curves = -1, resolution = -1;
    bool nonzero = false;

    auto* validate = app.add_subcommand("validate", "check admissibility of a representation");
    validate->add_option("rep", rep_path)->required();
    add_common(validate);

    auto* build = app.add_subcommand("build", "build and certify a spacetime bundle");
    build->add_option("rep", rep_path)->required();
    build->add_option("tri", tri_path)->required();
    add_common(build);

    auto* surgery = app.add_subcommand("surgery", "extend a boundary profile into a spear");
    surgery->add_option("bundle", bundle_path)->required();
    surgery->add_option("profile", profile_path)->required();
    surgery->add_option("--mode", mode)->check(CLI::IsMember({"complete", "compact"}));
    add_common(surgery);

    auto* causal = app.add_subcommand("causal", "trace causal curves and check the time function");
    causal->add_option("bundle", bundle_path)->required();
    causal->add_option("--curves", curves);
    add_common(causal);

    auto* mesh = app.add_subcommand("mesh", "export leaves t = const");
    mesh->add_option("bundle", bundle_path)->required();
    mesh->add_option("--leaves", leaves_text, "comma separated times");
    mesh->add_option("--res", resolution);
    mesh->add_option("--format", format)->check(CLI::IsMember({"obj", "json"}));
    add_common(mesh);

    auto* demo = app.add_subcommand("demo", "run the whole pipeline on a builtin example");
    demo->add_option("name", demo_name)->required()->check(CLI::IsMember({"gamma2", "torus"}));
    demo->add_flag("--nonzero", nonzero, "use the nonzero tangent cocycle");
    add_common(demo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) {
            const AdmissibilityReport r = validate_admissible(representation_from_json(read_json_file(rep_path)));
            emit(c, admissibility_to_json(r));
            return r.admissible ? 0 : 1;
        }
        if (*build) {
            const RunConfig cfg = make_config(c);
            const PolyhedralSpacetime st =
                build_spacetime(representation_from_json(read_json_file(rep_path)),
                                triangulation_from_json(read_json_file(tri_path)), cfg);
            emit(c, bundle_to_json(st));
            return 0;
        }
        if (*surgery) {
            PolyhedralSpacetime st = bundle_from_json(read_json_file(bundle_path));
            const BoundaryProfile bp = profile_from_json(read_json_file(profile_path));
            if (c.seed_set)
                st.config.seed = c.seed;
            bool passed = false;
            emit(c, surgery_report(st, bp, mode, passed));
            return passed ? 0 : 1;
        }
        if (*causal) {
            const PolyhedralSpacetime st = bundle_from_json(read_json_file(bundle_path));
            const RunConfig cfg = c.config.empty() ? st.config : make_config(c);
            const std::uint64_t seed = c.seed_set ? c.seed : cfg.seed;
            const CauchyTimeReport r =
                cauchy_time_report(st, curves >= 0 ? curves : cfg.curves, cfg.leaves, seed);
            Json out = causal_report_to_json(r, seed);
            out["config"] = config_to_json(cfg);
            emit(c, out);
            return r.passed() ? 0 : 1;
        }
        if (*mesh) {
            const PolyhedralSpacetime st = bundle_from_json(read_json_file(bundle_path));
            const std::vector<double> leaves =
                mesh->count("--leaves") ? parse_leaves(leaves_text) : st.config.leaves;
            const int res = resolution >= 0 ? resolution : st.config.mesh_resolution;
            if (res < 1)
                fail(ErrorCode::InvalidInput, "mesh resolution must be >= 1");
            const std::string s =
                export_mesh(st, leaves, res, format == "json" ? MeshFormat::Json : MeshFormat::Obj);
            if (c.out.empty())
                std::cout << s;
            else
                write_text_file(c.out, s);
            return 0;
        }
        if (*demo)
            return run_demo(demo_name, nonzero, c);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return is_input_error(e.code()) ? 2 : 1;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
