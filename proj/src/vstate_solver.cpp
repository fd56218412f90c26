#include "vpoly/vstate_solver.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "vpoly/euler_patch.hpp"
#include "vpoly/format.hpp"
#include "vpoly/point_vortex.hpp"

namespace vpoly {

namespace {

using json = nlohmann::ordered_json;

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

FourierShape shape_from(std::span<const double> a) { return FourierShape{std::vector<double>(a.begin(), a.end())}; }

double shape_scaling(const PolygonModel& model, double eps) {
    return model.kind == EquationKind::euler ? eps : std::pow(eps, 1.0 + model.beta);
}

double closed_omega(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                    const SolverConfig& cfg) {
    if (model.kind == EquationKind::euler) return omega_closure_euler(eps, f, model, grid, cfg.sigma);
    return omega_closure_sqg(eps, f, model, grid, cfg.sqg_options());
}

}  // namespace

void SolverConfig::validate() const {
    if (modes < 1) throw InvalidArgument("solver needs at least one mode");
    if (modes + 2 > nodes / 2) {
        std::ostringstream os;
        os << "modes = " << modes << " too large for " << nodes << " nodes (need modes <= nodes/2 - 2)";
        throw InvalidArgument(os.str());
    }
    if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
    if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("sigma must lie in (0,1)");
    if (validation_factor < 1) throw InvalidArgument("validation_factor must be >= 1");
    if (!(validation_tol > 0.0)) throw InvalidArgument("validation tolerance must be positive");
}

SolverConfig default_config(const PolygonModel& model) {
    SolverConfig c;
    if (model.kind == EquationKind::sqg) {
        c.modes = 24;
        c.nodes = 512;
        c.tol = 1e-8;
        c.validation_tol = 1e-6;
    }
    return c;
}

TildeResult tilde(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                  const SolverConfig& cfg) {
    if (model.kind == EquationKind::euler) return f_tilde_euler(eps, f, model, grid, cfg.sigma);
    return f_tilde_sqg(eps, f, model, grid, cfg.sqg_options());
}

std::vector<double> assemble_residual(std::span<const double> a, double eps, const PolygonModel& model,
                                      const CircleGrid& grid, const SolverConfig& cfg) {
    cfg.validate();
    if (a.size() != cfg.modes) throw InvalidArgument("assemble_residual: coefficient count differs from cfg.modes");
    if (grid.nodes / 2 < cfg.modes + 2) throw InvalidArgument("assemble_residual: grid too coarse for cfg.modes");
    const auto t = tilde(eps, shape_from(a), model, grid, cfg);
    return {t.coeffs.begin(), t.coeffs.begin() + static_cast<std::ptrdiff_t>(cfg.modes)};
}

Eigen::MatrixXd jacobian_fd(std::span<const double> a, double eps, const PolygonModel& model, const CircleGrid& grid,
                            const SolverConfig& cfg) {
    const std::size_t M = cfg.modes;
    Eigen::MatrixXd Jm(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
    std::vector<double> x(a.begin(), a.end());
    for (std::size_t c = 0; c < M; ++c) {
        const double h = std::max(1e-6, 1e-6 * std::abs(a[c]));
        x[c] = a[c] + h;
        const auto rp = assemble_residual(x, eps, model, grid, cfg);
        x[c] = a[c] - h;
        const auto rm = assemble_residual(x, eps, model, grid, cfg);
        x[c] = a[c];
        for (std::size_t r = 0; r < M; ++r) {
            const double d = (rp[r] - rm[r]) / (2.0 * h);
            if (!std::isfinite(d)) throw NumericalError("jacobian_fd: non-finite entry");
            Jm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = d;
        }
    }
    return Jm;
}

VState newton_solve(double eps, const PolygonModel& model, const FourierShape& init, const SolverConfig& cfg) {
    model.validate();
    cfg.validate();
    const CircleGrid grid = make_grid(cfg.nodes);
    std::vector<double> a(cfg.modes, 0.0);
    for (std::size_t k = 0; k < std::min(a.size(), init.coeffs.size()); ++k) a[k] = init.coeffs[k];
    require_admissible(shape_from(a), cfg.sigma);

    std::vector<double> r = assemble_residual(a, eps, model, grid, cfg);
    double norm = sup_norm(r);
    std::vector<double> history{norm};
    int it = 0;
    while (norm >= cfg.tol) {
        if (it == cfg.max_iter) {
            std::ostringstream os;
            os << "Newton diverged at eps = " << eps << ": residual " << norm << " after " << it << " iterations";
            throw SolverDiverged(os.str(), history);
        }
        ++it;
        const Eigen::MatrixXd Jm = jacobian_fd(a, eps, model, grid, cfg);
        const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size()));
        const Eigen::VectorXd step = Jm.partialPivLu().solve(rhs);
        if (!step.allFinite()) throw SolverDiverged("Newton step is not finite", history);

        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= cfg.max_halvings; ++halving, lambda *= 0.5) {
            std::vector<double> trial(a);
            for (std::size_t k = 0; k < trial.size(); ++k) trial[k] += lambda * step(static_cast<Eigen::Index>(k));
            try {
                auto rt = assemble_residual(trial, eps, model, grid, cfg);
                const double nt = sup_norm(rt);
                if (std::isfinite(nt) && nt < norm) {
                    a = std::move(trial);
                    r = std::move(rt);
                    norm = nt;
                    accepted = true;
                    break;
                }
            } catch (const InvalidArgument&) {
                // left the admissible ball
            } catch (const NumericalError&) {
                // overlap or Taylor radius
            }
        }
        history.push_back(norm);
        if (!accepted) {
            std::ostringstream os;
            os << "Newton stalled at eps = " << eps << ": no decrease after " << cfg.max_halvings
               << " step halvings, residual " << norm;
            throw SolverDiverged(os.str(), history);
        }
    }

    VState v;
    v.model = model;
    v.eps = eps;
    v.shape = shape_from(a);
    v.omega = closed_omega(eps, v.shape, model, grid, cfg);
    v.projected_residual = norm;
    v.iterations = it;
    v.history = std::move(history);
    v.config = cfg;
    return v;
}

ContinuationRun continuation(const PolygonModel& model, double eps_max, int steps, const SolverConfig& cfg) {
    model.validate();
    cfg.validate();
    if (steps < 1) throw InvalidArgument("continuation needs steps >= 1");
    if (!(eps_max > 0.0)) throw InvalidArgument("continuation needs eps_max > 0");
    const double radius = disjointness_radius(model, FourierShape{}, make_grid(64));
    if (!(eps_max < radius)) {
        std::ostringstream os;
        os << "eps = " << eps_max << " outside the patch disjointness radius " << radius;
        throw InvalidArgument(os.str());
    }

    ContinuationRun run;
    run.eps_target = eps_max;
    run.steps = steps;
    FourierShape seed{std::vector<double>(cfg.modes, 0.0)};
    for (int s = 1; s <= steps; ++s) {
        const double eps = eps_max * static_cast<double>(s) / static_cast<double>(steps);
        try {
            VState v = newton_solve(eps, model, seed, cfg);
            seed = v.shape;
            run.eps_reached = eps;
            run.states.push_back(std::move(v));
        } catch (const NumericalError& e) {
            if (s == 1) throw;
            run.failure = e.what();
            return run;
        }
    }
    run.completed = true;
    return run;
}

ValidationReport validate_vstate(const VState& v, const CircleGrid& fine) {
    const SolverConfig& cfg = v.config;
    ValidationReport rep;
    rep.nodes = fine.nodes;
    rep.threshold = cfg.validation_tol;
    double omega_fine = 0.0;
    std::vector<double> F;
    if (v.model.kind == EquationKind::euler) {
        const auto ev = evaluate_euler(v.eps, v.shape, v.model, fine, cfg.sigma);
        omega_fine = ev.omega;
        F = ev.F;
    } else {
        const auto ev = evaluate_sqg(v.eps, v.shape, v.model, fine, cfg.sqg_options());
        omega_fine = ev.omega;
        F = ev.F;
    }
    rep.pointwise_residual = sup_norm(F);
    rep.omega_drift = std::abs(omega_fine - v.omega);
    rep.passed = rep.pointwise_residual < rep.threshold && std::isfinite(rep.omega_drift);
    return rep;
}

ValidationReport validate_vstate(VState& v) {
    const auto fine = make_grid(v.config.nodes * v.config.validation_factor);
    const auto rep = validate_vstate(static_cast<const VState&>(v), fine);
    v.pointwise_residual = rep.pointwise_residual;
    v.omega_drift = rep.omega_drift;
    v.validated = rep.passed;
    return rep;
}

std::vector<std::vector<cplx>> patch_contours(const VState& v, std::size_t samples) {
    if (samples < 3) throw InvalidArgument("patch_contours needs at least 3 samples");
    const double p = shape_scaling(v.model, v.eps);
    std::vector<cplx> base(samples + 1);
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples);
        const cplx w(std::cos(t), std::sin(t));
        base[j] = v.model.l + v.eps * (w + p * eval_shape(v.shape, w).value);
    }
    base[samples] = base[0];
    std::vector<std::vector<cplx>> out;
    for (int m = 0; m < v.model.N; ++m) {
        const cplx e = polygon_vertex(m, v.model.N);
        std::vector<cplx> c(base.size());
        for (std::size_t j = 0; j < base.size(); ++j) c[j] = e * base[j];
        c.back() = c.front();
        out.push_back(std::move(c));
    }
    return out;
}

double polygon_area(std::span<const cplx> contour) {
    double a = 0.0;
    for (std::size_t j = 0; j + 1 < contour.size(); ++j)
        a += contour[j].real() * contour[j + 1].imag() - contour[j + 1].real() * contour[j].imag();
    return 0.5 * a;
}

std::string vstate_to_json(const VState& v) {
    json j;
    j["kind"] = to_string(v.model.kind);
    if (v.model.kind == EquationKind::sqg) {
        j["beta"] = v.model.beta;
        j["c_beta_variant"] = to_string(v.model.cbeta);
        j["rule"] = to_string(v.config.rule);
    }
    j["N"] = v.model.N;
    j["l"] = v.model.l;
    j["epsilon"] = v.eps;
    j["omega"] = v.omega;
    j["coefficients"] = v.shape.coeffs;
    j["projected_residual"] = v.projected_residual;
    j["pointwise_residual"] = v.pointwise_residual;
    j["omega_drift"] = v.omega_drift;
    j["validated"] = v.validated;
    j["modes"] = v.config.modes;
    j["solve_nodes"] = v.config.nodes;
    j["validation_nodes"] = v.config.nodes * v.config.validation_factor;
    j["tolerance"] = v.config.tol;
    j["validation_tolerance"] = v.config.validation_tol;
    j["sigma"] = v.config.sigma;
    j["iterations"] = v.iterations;
    j["patch_amplitude"] = v.eps > 0.0 ? 1.0 / (std::numbers::pi * v.eps * v.eps) : 0.0;
    return j.dump(2) + "\n";
}

VState vstate_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("VState JSON: ") + e.what());
    }
    try {
        VState v;
        const std::string kind = j.at("kind").get<std::string>();
        const int N = j.at("N").get<int>();
        const double l = j.at("l").get<double>();
        if (kind == "euler") {
            v.model = PolygonModel::euler(N, l);
        } else if (kind == "sqg") {
            const auto variant = j.value("c_beta_variant", std::string("printed")) == "standard"
                                     ? CBetaVariant::standard
                                     : CBetaVariant::printed;
            v.model = PolygonModel::sqg(N, l, j.at("beta").get<double>(), variant);
        } else {
            throw InvalidArgument("VState JSON: unknown kind '" + kind + "'");
        }
        v.model.validate();
        v.config = default_config(v.model);
        v.eps = j.at("epsilon").get<double>();
        v.omega = j.at("omega").get<double>();
        v.shape.coeffs = j.at("coefficients").get<std::vector<double>>();
        v.projected_residual = j.value("projected_residual", 0.0);
        v.pointwise_residual = j.value("pointwise_residual", 0.0);
        v.omega_drift = j.value("omega_drift", 0.0);
        v.validated = j.value("validated", false);
        v.iterations = j.value("iterations", 0);
        v.config.modes = v.shape.coeffs.size();
        v.config.nodes = j.value("solve_nodes", v.config.nodes);
        v.config.tol = j.value("tolerance", v.config.tol);
        v.config.validation_tol = j.value("validation_tolerance", v.config.validation_tol);
        v.config.sigma = j.value("sigma", v.config.sigma);
        if (j.contains("rule")) v.config.rule = singular_rule_from_string(j.at("rule").get<std::string>());
        const auto vnodes = j.value("validation_nodes", v.config.nodes * v.config.validation_factor);
        v.config.validation_factor = std::max<std::size_t>(1, vnodes / v.config.nodes);
        return v;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("VState JSON: ") + e.what());
    }
}

std::string contours_to_csv(const std::vector<std::vector<cplx>>& contours) {
    std::ostringstream os;
    os << "patch_index,re,im\n";
    for (std::size_t m = 0; m < contours.size(); ++m)
        for (const auto& z : contours[m]) os << m << ',' << fmt_double(z.real()) << ',' << fmt_double(z.imag()) << '\n';
    return os.str();
}

}  // namespace vpoly
