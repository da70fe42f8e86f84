// One line per acceptance criterion; exit status is the number of failures.
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "btz/json_io.hpp"

using namespace btz;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

PolyhedralSpacetime build(const std::string& name, bool nonzero, bool normalize = false)
{
    RunConfig cfg;
    cfg.normalize_theta = normalize;
    const BuiltinExample ex = builtin_example(name, nonzero);
    return build_spacetime(ex.rep, ex.tri, cfg);
}

// Words of length <= 8 in the one-parameter generators rotation, boost and parabolic shift.
// The demo representations are checked separately in exact arithmetic: their words grow
// like lambda^8, far beyond what an absolute 1e-9 allows in double precision.
Outcome isometry_invariance()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0), angle(-M_PI, M_PI), rapidity(-0.5, 0.5);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        LinearIsometry a;
        const int len = static_cast<int>(rng() % 9);
        for (int k = 0; k < len; ++k) {
            switch (rng() % 3) {
            case 0: a = a * LinearIsometry::rotation(angle(rng)); break;
            case 1: a = a * LinearIsometry::boost_x(rapidity(rng)); break;
            default: a = a * btz_angle_shift(u(rng)); break;
            }
        }
        const Vec3 v(u(rng), u(rng), u(rng));
        worst = std::max(worst, std::abs(quadratic_form(Vec3(a(v))) - quadratic_form(v)));
    }
    // demo generators: entries are exact in double, so exact rational words must preserve T
    using Q = boost::multiprecision::cpp_rational;
    using QMat = std::array<std::array<Q, 3>, 3>;
    auto to_q = [](const Mat3& m) {
        QMat q;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                q[r][c] = Q(m(r, c));
        return q;
    };
    auto mul = [](const QMat& a, const QMat& b) {
        QMat c;
        for (int r = 0; r < 3; ++r)
            for (int k = 0; k < 3; ++k)
                c[r][k] = a[r][0] * b[0][k] + a[r][1] * b[1][k] + a[r][2] * b[2][k];
        return c;
    };
    auto form = [](const std::array<Q, 3>& v) { return -v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; };
    std::vector<QMat> letters;
    for (const auto& name : builtin_names()) {
        for (const auto& [g, a] : builtin_example(name).rep.generators) {
            letters.push_back(to_q(a.linear().matrix()));
            letters.push_back(to_q(a.linear().inverse().matrix()));
        }
    }
    bool exact = true;
    for (int i = 0; i < 200; ++i) {
        QMat a = to_q(Mat3::Identity());
        const int len = static_cast<int>(rng() % 9);
        for (int k = 0; k < len; ++k)
            a = mul(a, letters[rng() % letters.size()]);
        const std::array<Q, 3> v{Q(u(rng)), Q(u(rng)), Q(u(rng))};
        std::array<Q, 3> av;
        for (int r = 0; r < 3; ++r)
            av[r] = a[r][0] * v[0] + a[r][1] * v[1] + a[r][2] * v[2];
        exact = exact && form(av) == form(v);
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-9 && exact && dt < 5.0,
            fmt("max |T(Av) - T(v)| = %.3g over 1e5 samples, %.2f s, ", worst, dt) +
                (exact ? "demo words exact" : "demo words not exact")};
}

Mat3 fd_pullback(const std::function<Vec3(const Vec3&)>& f, const Vec3& x, const Mat3& metric, double h)
{
    Mat3 j;
    for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e(k) = h;
        j.col(k) = (f(x + e) - f(x - e)) / (2 * h);
    }
    return j.transpose() * metric * j;
}

Outcome model_metrics()
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> tau(-2, 2), r(0.1, 3), th(-M_PI, M_PI), l(0.25, 4);
    double dev_err = 0.0, h_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x(tau(rng), r(rng), th(rng));
        Mat3 expected;
        expected << 0, -1, 0, -1, 1, 0, 0, 0, x(1) * x(1);
        const Mat3 g = fd_pullback([](const Vec3& y) { return dev0(y); }, x, minkowski_metric<double>(), 1e-5);
        dev_err = std::max(dev_err, (g - expected).cwiseAbs().maxCoeff());
        const double ell = l(rng);
        const Mat3 gh = fd_pullback([&](const Vec3& y) { return h_ell(ell, y); }, x,
                                    metric_btz(h_ell(ell, x)), 1e-5);
        h_err = std::max(h_err, (gh - metric_btz(x)).cwiseAbs().maxCoeff());
    }
    bool identity = true;
    for (int i = 0; i < 1000; ++i) {
        const Vec3 x(tau(rng), r(rng), th(rng));
        identity = identity && h_ell(1.0, x) == x;
    }
    return {dev_err <= 1e-6 && h_err <= 1e-6 && identity,
            fmt("dev0 pullback error %.3g, h_ell pullback error %.3g, h_1 identity ", dev_err, h_err) +
                (identity ? "exact" : "broken")};
}

Outcome gamma2_admissible()
{
    const auto t0 = Clock::now();
    const AdmissibilityReport r = validate_admissible(builtin_example("gamma2").rep);
    bool ok = r.relator_residual < 1e-9 && r.peripherals.size() == 3;
    double sq = 1e300, cube = 0.0;
    for (const auto& p : r.peripherals) {
        ok = ok && p.parabolic && p.tangent && p.cube_norm < 1e-8 && p.square_norm > 1e-6;
        sq = std::min(sq, p.square_norm);
        cube = std::max(cube, p.cube_norm);
    }
    const double dt = seconds_since(t0);
    return {ok && r.admissible && dt < 1.0,
            fmt("relator residual %.3g, min ||(A-I)^2|| %.3g, max ||(A-I)^3|| %.3g", r.relator_residual, sq, cube)};
}

Outcome builder_certification()
{
    bool ok = true;
    std::string detail;
    for (const auto& name : builtin_names()) {
        for (bool nonzero : {false, true}) {
            const auto t0 = Clock::now();
            const PolyhedralSpacetime st = build(name, nonzero);
            const PolyhedralSpacetime norm = build(name, nonzero, true);
            const CertificationRecord& c = st.certificate;
            bool good = c.passed && c.samples >= 10000 && c.min_jacobian_det > 1e-6 &&
                        c.min_gram_eigenvalue > 1e-6 && c.min_blended_gram_eigenvalue > 1e-6;
            const double eq = equivariance_residual(st, 1000, 3);
            good = good && eq <= 1e-8;
            double spread = 0.0, theta_err = 0.0;
            for (const auto& pg : st.punctures) {
                for (std::size_t n = 1; n < pg.theta.size(); ++n)
                    good = good && pg.theta[n] > pg.theta[n - 1];
                for (int n = 0; n + pg.r < static_cast<int>(pg.theta.size()); ++n)
                    spread = std::max(spread, std::abs(pg.theta[n + pg.r] - pg.theta[n] - pg.Theta));
            }
            for (const auto& pg : norm.punctures)
                theta_err = std::max(theta_err, std::abs(pg.Theta_normalized - kTwoPi));
            const double dt = seconds_since(t0);
            good = good && spread <= 1e-8 && theta_err <= 1e-9 && dt < 60.0;
            ok = ok && good;
            detail += name + (nonzero ? "+cocycle" : "") +
                      fmt(" (kappa %.6g, %.0f samples, residual %.2g)", st.kappa, double(c.samples), eq) + "; ";
        }
    }
    return {ok, detail};
}

Outcome gram_hand_check()
{
    DecoratedSimplex s;
    for (int k = 0; k < 3; ++k) {
        const double a = kTwoPi * k / 3;
        s.u[k] = Vec3(1, std::cos(a), std::sin(a));
        s.p[k] = Vec3::Zero();
    }
    const Mat2 g = leaf_gram(s, 0.25, 0.75);
    Mat2 expected;
    expected << 3, 1.5, 1.5, 3;
    // independent inner products <u_i, u_j> = -1 + cos(120 deg) = -3/2
    const Vec3 e1 = s.u[1] - s.u[0], e2 = s.u[2] - s.u[0];
    Mat2 independent;
    independent << minkowski_inner(e1, e1), minkowski_inner(e1, e2), minkowski_inner(e2, e1), minkowski_inner(e2, e2);
    const double err = (g - expected).cwiseAbs().maxCoeff();
    const double err2 = (independent - expected).cwiseAbs().maxCoeff();
    return {err <= 1e-14 && err2 <= 1e-14,
            fmt("Gram [[%.15g, %.15g], [., %.15g]]", g(0, 0), g(0, 1), g(1, 1))};
}

Outcome surgery_bounds()
{
    BoundaryProfile bp;
    bp.R = 1.0;
    bp.sin = {0.0, 0.3};
    const SurfaceGraph full = extend_complete(bp);
    const SurfaceGraph cap = extend_compact(bp);
    double min_dr2 = 1e300, min_delta_cap = 1e300;
    for (int i = 1; i <= 100; ++i) {
        for (int k = 0; k < 100; ++k) {
            const double th = kTwoPi * k / 100;
            const double r = i / 100.0;
            min_dr2 = std::min(min_dr2, delta(full, r, th) * r * r);
            min_delta_cap = std::min(min_delta_cap, delta(cap, (i - 0.5) / 100.0, th));
        }
    }
    bool boundary = true, seam = true;
    for (int k = 0; k < 360; ++k) {
        const double th = kTwoPi * k / 360;
        boundary = boundary && full.value(1.0, th) == bp.value(th) && cap.value(1.0, th) == bp.value(th);
        // the two pieces of the compact extension agree at r = R/2
        seam = seam && cap.value(0.5, th) == cap.M() / bp.R &&
               cap.value(std::nextafter(0.5, 1.0), th) - cap.M() / bp.R < 1e-12;
    }
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> r(0.05, 1.0), th(0, kTwoPi);
    double det_err = 0.0, fd_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double rr = r(rng), t = th(rng);
        const Mat2 g = induced_metric(full, rr, t);
        det_err = std::max(det_err, std::abs(g.determinant() - delta(full, rr, t) * rr * rr) / std::max(1.0, g.norm()));
        const double h = 1e-5;
        Eigen::Matrix<double, 3, 2> j;
        j.col(0) = Vec3((full.value(rr + h, t) - full.value(rr - h, t)) / (2 * h), 1, 0);
        j.col(1) = Vec3((full.value(rr, t + h) - full.value(rr, t - h)) / (2 * h), 0, 1);
        const Mat2 fd = j.transpose() * metric_btz(Vec3(0, rr, t)) * j;
        fd_err = std::max(fd_err, (fd - g).cwiseAbs().maxCoeff() / std::max(1.0, g.norm()));
    }
    const bool ok = min_dr2 >= 1.0 && boundary && seam && min_delta_cap > 0.0 && det_err <= 1e-9 && fd_err <= 1e-6;
    return {ok, fmt("min delta r^2 %.4g, compact min delta %.3g, det error %.2g", min_dr2, min_delta_cap, det_err) +
                    fmt(", pullback error %.2g", fd_err) + (boundary && seam ? ", boundary and seam exact" : ", boundary or seam mismatch")};
}

// Random future causal polylines in spear coordinates from below the graph to the shaft.
CausalPath random_path(std::mt19937_64& rng, const SurfaceGraph& sg)
{
    const double R = sg.R();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r0 = R * (0.05 + 0.4 * u(rng));
    const double th0 = kTwoPi * u(rng);
    const double floor = 0.5 * (r0 - R);
    const double tau0 = floor + std::min(sg.value(r0, th0) - floor, R) * (0.05 + 0.9 * u(rng));
    CausalPath path;
    path.points.emplace_back(tau0, r0, th0);
    const int steps = 1 + static_cast<int>(rng() % 6);
    std::vector<double> radii;
    for (int i = 0; i < steps - 1; ++i)
        radii.push_back(r0 + (R - r0) * u(rng));
    std::sort(radii.begin(), radii.end());
    radii.push_back(R);
    // total time budget chosen so that about half the paths end above the rim
    const double lean = std::pow(10.0, -2.0 + 2.5 * u(rng));
    for (double r : radii) {
        const Vec3& a = path.points.back();
        const double dr = r - a(1);
        const double dth = (u(rng) - 0.5) * 0.6;
        if (dr <= 0.0)
            continue;
        const double need = (dr * dr + r * r * dth * dth) / (2 * dr);
        path.points.emplace_back(a(0) + need * (1.0 + 1e-6) + lean * R * u(rng), r, a(2) + dth);
    }
    path.points.back()(1) = R;
    return path;
}

Outcome intersection_oracle()
{
    const PolyhedralSpacetime st = build("gamma2", false, true);
    const double R = st.fibers[0].spear->R;
    BoundaryProfile bp;
    bp.R = R;
    bp.constant = 0.5 * R;
    bp.sin = {0.0, 0.3 * R};
    bool ok = true;
    std::string detail = fmt("spear radius %.4g; ", R);
    std::mt19937_64 rng(7);
    for (bool complete : {true, false}) {
        const SurfaceGraph sg = complete ? extend_complete(bp) : extend_compact(bp);
        int agree = 0, tangent = 0, total = 0, crossings = 0;
        while (total < 200) {
            const CausalPath path = random_path(rng, sg);
            ++total;
            try {
                const IntersectionResult r = intersection_count(path, sg);
                agree += r.count == r.prediction;
                crossings += r.count;
            } catch (const Error& e) {
                if (e.code() != ErrorCode::Tangency)
                    throw;
                ++tangent;
            }
        }
        const int decided = total - tangent;
        ok = ok && agree == decided && tangent < 0.02 * total && crossings > 0 && crossings < decided;
        detail += std::string(complete ? "complete" : "compact") +
                  fmt(" cap %.0f/%.0f agree, %.0f tangent, ", agree, decided, tangent) +
                  fmt("%.0f crossing; ", crossings);
    }
    return {ok, detail};
}

Outcome cauchy_time()
{
    bool ok = true;
    std::string detail;
    for (const auto& name : builtin_names()) {
        for (bool nonzero : {false, true}) {
            const PolyhedralSpacetime st = build(name, nonzero);
            const CauchyTimeReport r = cauchy_time_report(st, 100, {0.5, 1.0, 2.0}, 8);
            ok = ok && r.passed() && r.curves == 100;
            detail += name + (nonzero ? "+cocycle" : "") +
                      fmt(" %.0f curves, %.0f violations; ", r.curves,
                          r.trace_failures + r.non_monotone + r.leaf_crossing_failures + r.decomposition_violations);
        }
    }
    return {ok, detail};
}

Outcome btz_round_trip()
{
    bool ok = true;
    std::string detail;
    for (const auto& name : builtin_names()) {
        for (bool nonzero : {false, true}) {
            const PolyhedralSpacetime st = build(name, nonzero);
            const PolyhedralSpacetime stripped = strip_btz(st);
            bool all_removed = true;
            for (const auto& f : stripped.fibers)
                all_removed = all_removed && !f.present;
            const PolyhedralSpacetime back = extend_btz(stripped);
            ok = ok && all_removed && same_structure(st, back) && back.kappa == st.kappa;
            detail += name + (nonzero ? "+cocycle " : " ") + fmt("%.0f fibers; ", double(st.fibers.size()));
        }
    }
    return {ok, detail};
}

Outcome determinism()
{
    const std::string a = dump17(bundle_to_json(build("torus", true)));
    const std::string b = dump17(bundle_to_json(build("torus", true)));
    const PolyhedralSpacetime replay = bundle_from_json(parse_json(a));
    const std::string c = dump17(bundle_to_json(replay));
    const Json r1 = causal_report_to_json(cauchy_time_report(replay, 50, replay.config.leaves, 21), 21);
    const Json r2 = causal_report_to_json(cauchy_time_report(replay, 50, replay.config.leaves, 21), 21);
    const bool seeds = parse_json(a).contains("seed") && r1.contains("seed");
    const bool ok = a == b && a == c && dump17(r1) == dump17(r2) && seeds;
    return {ok, fmt("bundle %.0f bytes, identical rebuilds and replays", double(a.size()))};
}

}  // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"isometry invariance", isometry_invariance},
        {"model space metrics", model_metrics},
        {"admissible thrice punctured sphere", gamma2_admissible},
        {"builder certification", builder_certification},
        {"leaf Gram hand check", gram_hand_check},
        {"surgery bounds", surgery_bounds},
        {"intersection counts", intersection_oracle},
        {"time function evidence", cauchy_time},
        {"BTZ strip and extend", btz_round_trip},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("criterion %zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    }
    return failures;
}
