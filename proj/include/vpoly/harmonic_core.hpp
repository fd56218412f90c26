#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpoly {

using cplx = std::complex<double>;

/// Thrown when an argument violates a documented precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures detected while evaluating or solving (overlap, divergence, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// CircleGrid
// ---------------------------------------------------------------------------

/// Evaluation nodes w_j = e^{i theta_j}, theta_j = 2 pi j / M, and quadrature
/// nodes xi_k shifted by half a cell so that no xi_k coincides with a w_j.
struct CircleGrid {
    std::size_t nodes = 0;
    std::vector<double> theta;
    std::vector<cplx> w;
    std::vector<cplx> xi;

    [[nodiscard]] double spacing() const;
};

/// Requires an even node count of at least 8.
CircleGrid make_grid(std::size_t nodes);

// ---------------------------------------------------------------------------
// FourierShape
// ---------------------------------------------------------------------------

/// Boundary perturbation f(w) = sum_{n>=1} a_n w^{-n} with real a_n.
/// Stored zero-based: coeffs[0] holds a_1.
struct FourierShape {
    std::vector<double> coeffs;

    FourierShape() = default;
    explicit FourierShape(std::vector<double> a) : coeffs(std::move(a)) {}
    static FourierShape zero(std::size_t modes) { return FourierShape(std::vector<double>(modes, 0.0)); }

    [[nodiscard]] std::size_t modes() const { return coeffs.size(); }
    /// a_n for n >= 1; zero past the truncation.
    [[nodiscard]] double a(std::size_t n) const { return (n >= 1 && n <= coeffs.size()) ? coeffs[n - 1] : 0.0; }
    /// sum n |a_n|; the conformal map is bilipschitz only while this stays below 1.
    [[nodiscard]] double lipschitz_norm() const;
};

struct ShapeValue {
    cplx value;
    cplx derivative;
};

/// value = sum a_n z^{-n}, derivative = -sum n a_n z^{-n-1}, for |z| = 1.
ShapeValue eval_shape(const FourierShape& f, cplx z);

// ---------------------------------------------------------------------------
// PolygonModel
// ---------------------------------------------------------------------------

enum class EquationKind { euler, sqg };

/// Which normalization constant multiplies the |x|^{-beta} kernel.
enum class CBetaVariant {
    printed,   ///< Gamma(beta/2) / (2^{1-beta} Gamma((1-beta)/2))
    standard,  ///< Gamma(beta/2) / (2^{1-beta} Gamma(1-beta/2))
};

struct PolygonModel {
    int N = 2;
    double l = 1.0;
    EquationKind kind = EquationKind::euler;
    double beta = 0.0;
    CBetaVariant cbeta = CBetaVariant::printed;

    static PolygonModel euler(int N, double l);
    static PolygonModel sqg(int N, double l, double beta, CBetaVariant variant = CBetaVariant::printed);

    /// Throws InvalidArgument unless N >= 2, l != 0 and (for SQG) 0 < beta < 1.
    void validate() const;
    /// C_beta under the selected variant; SQG models only.
    [[nodiscard]] double c_beta() const;
};

std::string to_string(EquationKind kind);
std::string to_string(CBetaVariant variant);

// ---------------------------------------------------------------------------
// Quadrature and projections
// ---------------------------------------------------------------------------

/// Trapezoid rule for the contour integral over the unit circle,
/// (2 pi / M) sum_k g(z_k) i z_k, for samples taken at nodes z_k.
cplx quad_circle(std::span<const cplx> samples, std::span<const cplx> nodes);
/// Same, with samples aligned to the grid's offset nodes xi_k.
cplx quad_circle(std::span<const cplx> samples, const CircleGrid& grid);

/// f_n = (2/M) sum_j s_j sin(n theta_j) for n = 1..M/2-1; result[0] holds f_1.
std::vector<double> project_sin(std::span<const double> samples);
/// sum_n coeffs[n-1] sin(n theta_j) at the grid's evaluation angles.
std::vector<double> synth_sin(std::span<const double> coeffs, const CircleGrid& grid);

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Lanczos approximation with reflection below 1/2; rejects the poles 0, -1, -2, ...
double gamma_fn(double x);
/// Rising factorial x (x+1) ... (x+n-1); pochhammer(x, 0) = 1.
double pochhammer(double x, int n);

double c_beta_printed(double beta);
double c_beta_standard(double beta);
double c_beta(double beta, CBetaVariant variant);
/// mu_beta = C_beta 2 beta Gamma(1-beta) / ((2-beta) Gamma(1-beta/2)^2).
double mu_beta(double beta, CBetaVariant variant = CBetaVariant::printed);

void require_beta(double beta);

}  // namespace vpoly
