#include "cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>

#include "vpoly/euler_patch.hpp"
#include "vpoly/format.hpp"
#include "vpoly/linear_theory.hpp"
#include "vpoly/point_vortex.hpp"
#include "vpoly/sqg_patch.hpp"
#include "vpoly/vstate_solver.hpp"

namespace vpoly::cli {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "1.0.0";

struct ModelArgs {
    int N = 2;
    double l = 1.0;
    std::string kind = "euler";
    double beta = 0.5;
    std::string cbeta = "printed";

    void add_to(CLI::App* app) {
        app->add_option("--n", N, "number of vortices / patches")->required()->check(CLI::Range(2, 1000));
        app->add_option("--l", l, "distance from the origin to each vortex (nonzero)");
        app->add_option("--kind", kind, "equation")->check(CLI::IsMember({"euler", "sqg"}));
        app->add_option("--beta", beta, "kernel exponent for --kind sqg, in (0,1)");
        app->add_option("--c-beta", cbeta, "normalization of C_beta")->check(CLI::IsMember({"printed", "standard"}));
    }

    [[nodiscard]] PolygonModel model() const {
        const auto variant = cbeta == "standard" ? CBetaVariant::standard : CBetaVariant::printed;
        PolygonModel m = kind == "sqg" ? PolygonModel::sqg(N, l, beta, variant) : PolygonModel::euler(N, l);
        m.validate();
        return m;
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Run metadata lives next to the data file so the data itself stays reproducible.
void write_meta(const std::string& data_path, const std::vector<std::string>& args, Clock::time_point start) {
    json m;
    m["data_file"] = data_path;
    m["version"] = kVersion;
    m["command_line"] = args;
    m["finished_utc"] = utc_now();
    m["wall_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    write_file(data_path + ".meta.json", m.dump(2) + "\n");
}

json model_json(const PolygonModel& m) {
    json j;
    j["N"] = m.N;
    j["l"] = m.l;
    j["kind"] = to_string(m.kind);
    if (m.kind == EquationKind::sqg) {
        j["beta"] = m.beta;
        j["c_beta_variant"] = to_string(m.cbeta);
    }
    return j;
}

int cmd_omega(const ModelArgs& ma, const std::string& out_path, const std::vector<std::string>& args,
              Clock::time_point start, std::ostream& out) {
    const PolygonModel m = ma.model();
    json j = model_json(m);
    j["omega"] = omega_point(m);
    const std::string text = j.dump(2) + "\n";
    out << text;
    if (!out_path.empty()) {
        write_file(out_path, text);
        write_meta(out_path, args, start);
    }
    return ok;
}

struct PointsArgs {
    double periods = 1.0;
    std::size_t steps_per_period = 4096;
    std::size_t stride = 16;
    std::string csv = "trajectory.csv";
    std::string summary = "points.json";
};

int cmd_points(const ModelArgs& ma, const PointsArgs& pa, const std::vector<std::string>& args,
               Clock::time_point start, std::ostream& out) {
    const PolygonModel m = ma.model();
    if (!(pa.periods > 0.0)) throw InvalidArgument("--periods must be positive");
    if (pa.steps_per_period < 1 || pa.stride < 1) throw InvalidArgument("--steps-per-period and --stride must be >= 1");
    const Interaction inter =
        m.kind == EquationKind::euler ? Interaction::newtonian() : Interaction::sqg(m.beta, m.cbeta);
    const PointConfig cfg = thomson_polygon(m.N, m.l, inter);
    const double omega = omega_point(m);
    const double T = 2.0 * std::numbers::pi / std::abs(omega);
    const double dt = T / static_cast<double>(pa.steps_per_period);
    const auto steps = static_cast<std::size_t>(std::llround(pa.periods * static_cast<double>(pa.steps_per_period)));
    const Trajectory traj = integrate_points(cfg, dt, steps);

    Trajectory thinned;
    for (std::size_t s = 0; s < traj.positions.size(); s += pa.stride) {
        thinned.times.push_back(traj.times[s]);
        thinned.positions.push_back(traj.positions[s]);
    }
    if ((traj.positions.size() - 1) % pa.stride != 0) {
        thinned.times.push_back(traj.times.back());
        thinned.positions.push_back(traj.positions.back());
    }
    std::ostringstream csv;
    write_trajectory_csv(csv, thinned);
    write_file(pa.csv, csv.str());
    write_meta(pa.csv, args, start);

    // rigid-rotation defect: distance to the exactly rotated initial polygon at the final time
    const double t_end = traj.times.back();
    const cplx rot = std::polar(1.0, omega * t_end);
    double defect = 0.0;
    for (std::size_t k = 0; k < cfg.positions.size(); ++k)
        defect = std::max(defect, std::abs(traj.positions.back()[k] - rot * cfg.positions[k]));

    json j = model_json(m);
    j["omega"] = omega;
    j["period"] = T;
    j["dt"] = dt;
    j["steps"] = steps;
    j["rotation_defect"] = defect;
    j["closure_error_one_period"] = closure_error(cfg, omega, pa.steps_per_period);
    j["energy_drift"] = traj.energy_drift();
    const cplx c = traj.center(traj.positions.size() - 1);
    j["center_drift"] = std::abs(c - traj.center(0));
    const std::string text = j.dump(2) + "\n";
    write_file(pa.summary, text);
    write_meta(pa.summary, args, start);
    out << text;
    return ok;
}

struct SolveArgs {
    double eps = 0.05;
    int steps = 10;
    std::size_t modes = 0;
    std::size_t nodes = 0;
    double tol = 0.0;
    double validation_tol = 0.0;
    std::size_t validation_factor = 4;
    int max_iter = 30;
    double sigma = kDefaultSigma;
    std::string rule = "spectral";
    std::string taylor = "closed_form";
    std::string out = "vstate.json";
    std::string contours = "contours.csv";
    std::string run_out;
    std::size_t contour_samples = 256;
    bool force = false;

    void add_to(CLI::App* app) {
        app->add_option("--eps", eps, "target patch size epsilon");
        app->add_option("--steps", steps, "continuation steps")->check(CLI::PositiveNumber);
        app->add_option("--modes", modes, "Fourier modes solved for (0 = model default)");
        app->add_option("--nodes", nodes, "quadrature nodes while solving (0 = model default)");
        app->add_option("--tol", tol, "Newton tolerance on the projected residual (0 = model default)");
        app->add_option("--validation-tol", validation_tol, "pointwise residual threshold (0 = model default)");
        app->add_option("--validation-factor", validation_factor, "validation grid refinement factor");
        app->add_option("--max-iter", max_iter, "Newton iterations per step");
        app->add_option("--sigma", sigma, "admissible radius for sum n|a_n|");
        app->add_option("--rule", rule, "singular quadrature for SQG")
            ->check(CLI::IsMember({"plain", "subtraction", "spectral"}));
        app->add_option("--taylor", taylor, "Taylor remainder evaluation for SQG")
            ->check(CLI::IsMember({"closed_form", "gauss_legendre"}));
        app->add_option("--out", out, "VState JSON");
        app->add_option("--contours", contours, "contour CSV");
        app->add_option("--run-out", run_out, "continuation run JSON (every state)");
        app->add_option("--contour-samples", contour_samples, "points per patch contour");
        app->add_flag("--force", force, "write the final state even if validation fails");
    }

    [[nodiscard]] SolverConfig config(const PolygonModel& m) const {
        SolverConfig c = default_config(m);
        if (modes) c.modes = modes;
        if (nodes) c.nodes = nodes;
        if (tol > 0.0) c.tol = tol;
        if (validation_tol > 0.0) c.validation_tol = validation_tol;
        c.validation_factor = validation_factor;
        c.max_iter = max_iter;
        c.sigma = sigma;
        c.rule = singular_rule_from_string(rule);
        c.taylor = taylor == "gauss_legendre" ? TaylorRule::gauss_legendre : TaylorRule::closed_form;
        c.validate();
        return c;
    }
};

json run_json(const ContinuationRun& run) {
    json j;
    j["eps_target"] = run.eps_target;
    j["steps"] = run.steps;
    j["completed"] = run.completed;
    j["eps_reached"] = run.eps_reached;
    if (!run.failure.empty()) j["failure"] = run.failure;
    auto& arr = j["states"] = json::array();
    for (const auto& v : run.states) {
        double amax = 0.0;
        for (double a : v.shape.coeffs) amax = std::max(amax, std::abs(a));
        json s;
        s["epsilon"] = v.eps;
        s["omega"] = v.omega;
        s["iterations"] = v.iterations;
        s["projected_residual"] = v.projected_residual;
        s["residual_history"] = v.history;
        s["coefficient_sup"] = amax;
        s["coefficients"] = v.shape.coeffs;
        arr.push_back(std::move(s));
    }
    return j;
}

int cmd_solve(const ModelArgs& ma, const SolveArgs& sa, const std::vector<std::string>& args, Clock::time_point start,
              std::ostream& out, std::ostream& err) {
    const PolygonModel m = ma.model();
    const SolverConfig cfg = sa.config(m);
    if (sa.contour_samples < 3) throw InvalidArgument("--contour-samples must be >= 3");
    const ContinuationRun run = continuation(m, sa.eps, sa.steps, cfg);
    if (!sa.run_out.empty()) {
        write_file(sa.run_out, run_json(run).dump(2) + "\n");
        write_meta(sa.run_out, args, start);
    }
    if (run.states.empty()) {
        err << "no converged state\n";
        return failed;
    }
    VState v = run.states.back();
    const ValidationReport rep = validate_vstate(v);
    out << "eps " << fmt_double(v.eps) << "  omega " << fmt_double(v.omega) << "  projected " << fmt_double(v.projected_residual)
        << "  pointwise " << fmt_double(rep.pointwise_residual) << " (" << rep.nodes << " nodes, threshold "
        << fmt_double(rep.threshold) << ")  omega drift " << fmt_double(rep.omega_drift) << '\n';
    if (!run.completed) err << "continuation stopped at eps = " << run.eps_reached << ": " << run.failure << '\n';
    if (!rep.passed) err << "validation failed: pointwise residual " << rep.pointwise_residual << '\n';
    if (rep.passed || sa.force) {
        write_file(sa.out, vstate_to_json(v));
        write_meta(sa.out, args, start);
        write_file(sa.contours, contours_to_csv(patch_contours(v, sa.contour_samples)));
        write_meta(sa.contours, args, start);
    } else {
        err << "state not written (use --force to write it anyway)\n";
    }
    return (rep.passed && run.completed) ? ok : failed;
}

int cmd_validate(const std::string& in, std::size_t factor, const std::string& out_path,
                 const std::vector<std::string>& args, Clock::time_point start, std::ostream& out) {
    VState v = vstate_from_json(read_file(in));
    if (factor < 1) throw InvalidArgument("--factor must be >= 1");
    v.config.validation_factor = factor;
    v.config.validate();
    const auto rep = validate_vstate(v);
    json j;
    j["input"] = in;
    j["nodes"] = rep.nodes;
    j["pointwise_residual"] = rep.pointwise_residual;
    j["omega_drift"] = rep.omega_drift;
    j["threshold"] = rep.threshold;
    j["passed"] = rep.passed;
    const std::string text = j.dump(2) + "\n";
    out << text;
    if (!out_path.empty()) {
        write_file(out_path, text);
        write_meta(out_path, args, start);
    }
    return rep.passed ? ok : failed;
}

struct SpectrumArgs {
    double beta = 0.5;
    int n_max = 20;
    std::string cbeta = "printed";
    std::string csv;
    std::string json_path;
    bool verify = false;
    int verify_n = 10;
    std::size_t verify_nodes = 4096;
    double verify_tol = 1e-5;
};

int cmd_spectrum(const SpectrumArgs& sa, const std::vector<std::string>& args, Clock::time_point start,
                 std::ostream& out, std::ostream& err) {
    const auto variant = sa.cbeta == "standard" ? CBetaVariant::standard : CBetaVariant::printed;
    const SpectrumTable t = spectrum_table(sa.beta, sa.n_max, variant);
    bool good = t.all_positive() && t.c0 > 0.0;
    json j = json::parse(t.to_json());
    if (sa.verify) {
        if (sa.verify_n < 1) throw InvalidArgument("--verify-n must be >= 1");
        auto& rows = j["verification"] = json::array();
        double worst = 0.0;
        for (int n = 1; n <= sa.verify_n; ++n) {
            const auto closed = gamma_coeffs(sa.beta, n, variant);
            const auto quad = gamma_coeffs_quadrature(sa.beta, n, sa.verify_nodes, variant);
            const double d_closed = sqg_diagonal(sa.beta, n, variant);
            const double d_quad = sqg_diagonal_quadrature(sa.beta, n, sa.verify_nodes, variant);
            const double e1 = std::abs(quad.gamma1 - closed.gamma1) / std::abs(closed.gamma1);
            const double e2 = std::abs(quad.gamma2 - closed.gamma2) / std::abs(closed.gamma2);
            const double ed = std::abs(d_quad - d_closed) / std::abs(d_closed);
            worst = std::max({worst, e1, e2, ed});
            json r;
            r["n"] = n;
            r["gamma1_quadrature"] = quad.gamma1;
            r["gamma2_quadrature"] = quad.gamma2;
            r["diagonal_quadrature"] = d_quad;
            r["rel_err_gamma1"] = e1;
            r["rel_err_gamma2"] = e2;
            r["rel_err_diagonal"] = ed;
            rows.push_back(std::move(r));
        }
        j["verification_nodes"] = sa.verify_nodes;
        j["verification_worst"] = worst;
        j["verification_passed"] = worst < sa.verify_tol;
        if (!(worst < sa.verify_tol)) {
            err << "quadrature verification failed: worst relative error " << worst << '\n';
            good = false;
        }
    }
    const std::string text = j.dump(2) + "\n";
    if (!sa.csv.empty()) {
        write_file(sa.csv, t.to_csv());
        write_meta(sa.csv, args, start);
    }
    if (!sa.json_path.empty()) {
        write_file(sa.json_path, text);
        write_meta(sa.json_path, args, start);
    }
    if (sa.csv.empty() && sa.json_path.empty()) out << t.to_csv();
    out << "c0 = " << fmt_double(t.c0) << " at n = " << t.c0_at << (t.all_positive() ? ", all gamma_n > 0" : ", NONPOSITIVE gamma_n")
        << '\n';
    return good ? ok : failed;
}

void append_config_value(std::vector<std::string>& out, const std::string& flag, const json& v) {
    if (v.is_boolean()) {
        if (v.get<bool>()) out.push_back(flag);
    } else if (v.is_string()) {
        out.push_back(flag);
        out.push_back(v.get<std::string>());
    } else if (v.is_number_integer()) {
        out.push_back(flag);
        out.push_back(std::to_string(v.get<long long>()));
    } else if (v.is_number()) {
        out.push_back(flag);
        out.push_back(fmt_double(v.get<double>()));
    } else if (v.is_array()) {
        for (const auto& e : v) append_config_value(out, flag, e);
    } else {
        throw InvalidArgument("config value for " + flag + " must be a scalar or array");
    }
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config_path.empty()) return rest;

    json cfg;
    try {
        cfg = json::parse(read_file(config_path));
    } catch (const json::exception& e) {
        throw InvalidArgument("config file '" + config_path + "': " + e.what());
    }
    if (!cfg.is_object()) throw InvalidArgument("config file must hold a JSON object");
    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) append_config_value(injected, "--" + key, value);

    // insert after the subcommand (first non-option token after the program name)
    std::size_t pos = rest.size();
    for (std::size_t i = 1; i < rest.size(); ++i) {
        if (rest[i].empty() || rest[i][0] != '-') {
            pos = i + 1;
            break;
        }
    }
    rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(pos), injected.begin(), injected.end());
    return rest;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    if (args.empty()) args.emplace_back("vpoly");
    const std::vector<std::string> original = args;

    CLI::App app{"Rotating point-vortex polygons and their desingularized patch states (Euler and gSQG)", "vpoly"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.add_option("--config", "JSON file of option values; explicit flags override it");

    ModelArgs omega_model;
    std::string omega_out;
    auto* omega = app.add_subcommand("omega", "angular velocity of the Thomson polygon");
    omega_model.add_to(omega);
    omega->add_option("--out", omega_out, "also write the JSON here");

    ModelArgs points_model;
    PointsArgs pa;
    auto* points = app.add_subcommand("points", "integrate the point-vortex polygon with RK4");
    points_model.add_to(points);
    points->add_option("--periods", pa.periods, "integration length in rotation periods");
    points->add_option("--steps-per-period", pa.steps_per_period, "RK4 steps per period");
    points->add_option("--stride", pa.stride, "write every stride-th step to the CSV");
    points->add_option("--csv", pa.csv, "trajectory CSV");
    points->add_option("--summary", pa.summary, "summary JSON");

    ModelArgs solve_model;
    SolveArgs sa;
    auto* solve = app.add_subcommand("vstate-solve", "continuation in epsilon and validation of a V-state");
    solve->alias("solve");
    solve_model.add_to(solve);
    sa.add_to(solve);

    std::string validate_in;
    std::size_t validate_factor = 4;
    std::string validate_out;
    auto* validate = app.add_subcommand("vstate-validate", "pointwise check of a saved V-state on a finer grid");
    validate->add_option("--in", validate_in, "VState JSON")->required();
    validate->add_option("--factor", validate_factor, "refinement factor over the solve grid");
    validate->add_option("--out", validate_out, "report JSON");

    SpectrumArgs spa;
    auto* spectrum = app.add_subcommand("spectrum", "diagonal of the linearized gSQG functional");
    spectrum->add_option("--beta", spa.beta, "kernel exponent in (0,1)")->required();
    spectrum->add_option("--n-max", spa.n_max, "largest mode")->check(CLI::PositiveNumber);
    spectrum->add_option("--c-beta", spa.cbeta)->check(CLI::IsMember({"printed", "standard"}));
    spectrum->add_option("--csv", spa.csv, "table CSV");
    spectrum->add_option("--json", spa.json_path, "table JSON");
    spectrum->add_flag("--verify", spa.verify, "compare with brute-force quadrature");
    spectrum->add_option("--verify-n", spa.verify_n, "modes checked by --verify");
    spectrum->add_option("--verify-nodes", spa.verify_nodes, "quadrature nodes for --verify");
    spectrum->add_option("--verify-tol", spa.verify_tol, "relative tolerance for --verify");

    try {
        auto expanded = expand_config(args);
        std::vector<std::string> rev(expanded.rbegin(), expanded.rend());
        rev.pop_back();  // program name
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : usage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }

    try {
        if (omega->parsed()) return cmd_omega(omega_model, omega_out, original, start, out);
        if (points->parsed()) return cmd_points(points_model, pa, original, start, out);
        if (solve->parsed()) return cmd_solve(solve_model, sa, original, start, out, err);
        if (validate->parsed()) return cmd_validate(validate_in, validate_factor, validate_out, original, start, out);
        if (spectrum->parsed()) return cmd_spectrum(spa, original, start, out, err);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failed;
    }
    return usage;
}

}  // namespace vpoly::cli
