#pragma once

#include <span>
#include <vector>

#include "vpoly/harmonic_core.hpp"

namespace vpoly {

/// Two patches came too close for the inter-patch kernels to stay regular.
class PatchOverlapError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The Taylor split 1/|A+B|^beta = 1/|A|^beta + ... was requested with |B| >= |A|.
class TaylorRadiusError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Default radius for the admissible ball sum n|a_n| <= sigma.
inline constexpr double kDefaultSigma = 0.5;

/// Throws InvalidArgument if sum n|a_n| > sigma (sigma must be < 1).
void require_admissible(const FourierShape& f, double sigma);

/// Shape and derivative sampled on the evaluation and quadrature nodes, plus
/// the values at conjugate nodes which enter the kernels literally.
struct ShapeSamples {
    std::vector<cplx> fw, dfw, fw_conj;     // f(w_j), f'(w_j), f(conj w_j)
    std::vector<cplx> fxi, dfxi, fxi_conj;  // f(xi_k), f'(xi_k), f(conj xi_k)
};

ShapeSamples sample_shape(const FourierShape& f, const CircleGrid& grid);

/// Result of projecting a residual onto sine modes after the Omega closure.
struct TildeResult {
    double omega = 0.0;
    /// Coefficient of sin(theta); zero up to quadrature once Omega is closed.
    double f1 = 0.0;
    /// coeffs[k] is the coefficient of sin((k+2) theta).
    std::vector<double> coeffs;
    std::vector<double> samples;
};

/// Omega = i oint V (w - wbar)(1 + p f') dw / oint (1 + p f')(w - wbar)(l + eps wbar + eps p f(wbar)) dw
/// with both integrals discretized on the evaluation nodes. V is J for Euler and
/// conj(J) for SQG; p is the shape scaling (eps or eps^{1+beta}).
/// The imaginary part is checked against reality_scale * 1e-10 and dropped.
double omega_closure(std::span<const cplx> velocity_term, double eps, double p, const ShapeSamples& s,
                     const PolygonModel& model, const CircleGrid& grid, double reality_scale);

/// max_j |F(w_j) + F(conj w_j)|, i.e. departure from odd symmetry on the node pairs.
double odd_symmetry_defect(std::span<const double> samples);

/// Largest epsilon (bisection) for which every inter-patch denominator
/// |l(1-e_m) + Phi(w) - e_m Phi(xi)| stays above 0.1 |l| |1 - e^{2 pi i/N}|.
double disjointness_radius(const PolygonModel& model, const FourierShape& f, const CircleGrid& grid);

/// min over m and node pairs of the inter-patch denominator above at a given epsilon.
double min_interpatch_gap(const PolygonModel& model, const FourierShape& f, const CircleGrid& grid, double eps);

/// e^{2 pi i m / N}
cplx polygon_vertex(int m, int N);

}  // namespace vpoly
