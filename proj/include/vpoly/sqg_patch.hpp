#pragma once

#include <vector>

#include "vpoly/patch_common.hpp"

namespace vpoly {

/// How integrals of the form oint S(xi) |w - xi|^{-beta} dxi with smooth S are discretized.
enum class SingularRule {
    /// Plain trapezoid on the offset nodes; converges like h^{1-beta}.
    plain,
    /// Trapezoid on S(xi) - S(w) plus S(w) times the closed-form circle integral.
    subtraction,
    /// Product quadrature: the kernel's Fourier multipliers are applied exactly to
    /// the trigonometric interpolant of S, giving spectral accuracy.
    spectral,
};

/// How the Taylor remainder 1/|A+B|^beta - 1/|A|^beta is evaluated.
enum class TaylorRule {
    /// expm1/log1p closed form of the t-integral; exact up to rounding.
    closed_form,
    /// 16-point Gauss-Legendre in t.
    gauss_legendre,
};

struct SqgOptions {
    SingularRule rule = SingularRule::spectral;
    TaylorRule taylor = TaylorRule::closed_form;
    double sigma = kDefaultSigma;
};

std::string to_string(SingularRule rule);
SingularRule singular_rule_from_string(const std::string& name);

/// Returns -beta * int_0^1 (Re[A conj(B)] + t|B|^2) / |A + tB|^{2+beta} dt by
/// 16-point Gauss-Legendre, so 1/|A+B|^beta = 1/|A|^beta + taylor_split(A, B, beta).
/// Throws TaylorRadiusError unless |B| < |A|.
double taylor_split(cplx A, cplx B, double beta);

/// The four velocity pieces at the evaluation nodes.
struct SqgTerms {
    std::vector<cplx> J1;  ///< self-interaction Taylor remainder
    std::vector<cplx> J2;  ///< self-interaction f' term
    std::vector<cplx> J3;  ///< neighbour-patch Taylor remainder
    std::vector<cplx> J4;  ///< neighbour-patch f' term

    [[nodiscard]] std::vector<cplx> total() const;
};

struct SqgEvaluation {
    SqgTerms terms;
    std::vector<double> F;
    double omega = 0.0;
    std::vector<double> sin_coeffs;
};

/// Conformal scaling Phi(w) = eps (w + eps^{1+beta} f(w)) enters through
/// u = eps^{1+beta}. Requires an SQG model and an admissible shape.
SqgTerms j_sqg(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
               const SqgOptions& opts = {});

double omega_closure_sqg(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                         const SqgOptions& opts = {});

/// F_beta(w_j) = Re[{conj(J) + i Omega (conj(Phi(w)) + l)} w (1 + eps^{1+beta} f'(w))] + mu_beta Im[f'(w)].
std::vector<double> f_sqg(double omega, double eps, const FourierShape& f, const PolygonModel& model,
                          const CircleGrid& grid, const SqgOptions& opts = {});

TildeResult f_tilde_sqg(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                        const SqgOptions& opts = {});

SqgEvaluation evaluate_sqg(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                           const SqgOptions& opts = {});

/// Quadrature weights W_d, d = (j - k) mod M, such that
/// oint |w_j - xi_k|^{-beta} S(xi) dxi ~ sum_k W_{(j-k) mod M} S(xi_k) i xi_k.
/// The subtraction rule shares the plain table. Cached per (node count, beta, rule).
const std::vector<double>& singular_weights(std::size_t nodes, double beta, SingularRule rule);

}  // namespace vpoly
