#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "vpoly/patch_common.hpp"
#include "vpoly/sqg_patch.hpp"

namespace vpoly {

/// Newton failed to reach the tolerance; carries the residual history.
class SolverDiverged : public NumericalError {
public:
    SolverDiverged(const std::string& what, std::vector<double> history)
        : NumericalError(what), history_(std::move(history)) {}
    [[nodiscard]] const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

struct SolverConfig {
    std::size_t modes = 32;   ///< unknowns a_1..a_M
    std::size_t nodes = 128;  ///< quadrature nodes used while solving
    double tol = 1e-10;       ///< sup-norm target on the projected residual
    int max_iter = 30;
    int max_halvings = 12;
    double sigma = kDefaultSigma;
    SingularRule rule = SingularRule::spectral;  ///< SQG only
    TaylorRule taylor = TaylorRule::closed_form;  ///< SQG only
    std::size_t validation_factor = 4;
    double validation_tol = 1e-8;

    [[nodiscard]] SqgOptions sqg_options() const { return {rule, taylor, sigma}; }
    void validate() const;
};

/// M = 32, 128 nodes, tolerances 1e-10 / 1e-8 for Euler; M = 24, 512 nodes,
/// tolerances 1e-8 / 1e-6 for SQG.
SolverConfig default_config(const PolygonModel& model);

struct VState {
    PolygonModel model;
    double eps = 0.0;
    double omega = 0.0;
    FourierShape shape;
    double projected_residual = 0.0;
    double pointwise_residual = 0.0;
    double omega_drift = 0.0;
    bool validated = false;
    int iterations = 0;
    std::vector<double> history;  ///< projected residual after each Newton iterate
    SolverConfig config;
};

struct ContinuationRun {
    std::vector<VState> states;  ///< ordered by eps
    double eps_target = 0.0;
    int steps = 0;
    bool completed = false;
    /// Largest eps reached; equals eps_target when completed.
    double eps_reached = 0.0;
    std::string failure;
};

/// Projected residual r_k = coefficient of sin((k+2) theta) in F at the closed Omega, k = 0..M-1.
std::vector<double> assemble_residual(std::span<const double> a, double eps, const PolygonModel& model,
                                      const CircleGrid& grid, const SolverConfig& cfg);

/// Central differences, column step max(1e-6, 1e-6 |a_j|).
Eigen::MatrixXd jacobian_fd(std::span<const double> a, double eps, const PolygonModel& model, const CircleGrid& grid,
                            const SolverConfig& cfg);

/// Newton iteration with step halving. The initial shape is padded or truncated to cfg.modes.
/// Throws SolverDiverged when the tolerance is not met within max_iter.
VState newton_solve(double eps, const PolygonModel& model, const FourierShape& init, const SolverConfig& cfg);

/// Uniform steps eps_max/steps, ..., eps_max, each warm-started from the previous shape.
/// Stops at the first failure and reports the partial run; throws if the first step fails
/// or eps_max lies outside the disjointness radius of the circular patches.
ContinuationRun continuation(const PolygonModel& model, double eps_max, int steps, const SolverConfig& cfg);

struct ValidationReport {
    double pointwise_residual = 0.0;
    double omega_drift = 0.0;
    double threshold = 0.0;
    std::size_t nodes = 0;
    bool passed = false;
};

/// Max |F| at the closed Omega on `fine` and |Omega(fine) - Omega(solve grid)|.
ValidationReport validate_vstate(const VState& v, const CircleGrid& fine);
/// Same on a grid validation_factor times the solve resolution; fills the VState fields.
ValidationReport validate_vstate(VState& v);

/// Contour m is e^{2 pi i m/N} (l + Phi(w_j)), j = 0..samples, closed by repeating the first point.
std::vector<std::vector<cplx>> patch_contours(const VState& v, std::size_t samples);

/// Shoelace area of a closed polyline.
double polygon_area(std::span<const cplx> contour);

std::string vstate_to_json(const VState& v);
VState vstate_from_json(const std::string& text);
std::string contours_to_csv(const std::vector<std::vector<cplx>>& contours);

/// Evaluate the model's tilde functional with the config's options.
TildeResult tilde(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                  const SolverConfig& cfg);

}  // namespace vpoly
