#pragma once

#include <vector>

#include "vpoly/patch_common.hpp"

namespace vpoly {

/// Everything computed while evaluating the Euler residual once.
struct EulerEvaluation {
    std::vector<cplx> J;          ///< J(eps,f)(w_j)
    std::vector<double> F;        ///< F(Omega,eps,f)(w_j)
    double omega = 0.0;
    std::vector<double> sin_coeffs;  ///< project_sin(F); sin_coeffs[0] is f_1
};

/// Velocity integral J(eps,f) at the evaluation nodes, made of the
/// self-interaction kernels and the N-1 neighbour-patch kernels. Requires an
/// Euler model, sum n|a_n| <= sigma, and non-overlapping patches.
std::vector<cplx> j_euler(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                          double sigma = kDefaultSigma);

/// Omega(eps, f) chosen so the sin(theta) mode of the residual vanishes.
double omega_closure_euler(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                           double sigma = kDefaultSigma);

/// F(Omega,eps,f)(w_j) = Re[-(i/2pi) f'(w) + {J + i Omega eps (wbar + eps f(wbar)) + i Omega l} w (1 + eps f'(w))].
std::vector<double> f_euler(double omega, double eps, const FourierShape& f, const PolygonModel& model,
                            const CircleGrid& grid, double sigma = kDefaultSigma);

/// F evaluated at the closed Omega, projected on sin(n theta), n >= 2.
TildeResult f_tilde_euler(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                          double sigma = kDefaultSigma);

EulerEvaluation evaluate_euler(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                               double sigma = kDefaultSigma);

}  // namespace vpoly
