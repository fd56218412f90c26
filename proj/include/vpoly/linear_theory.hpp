#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vpoly/harmonic_core.hpp"

namespace vpoly {

/// kappa_beta with oint dxi / |w - xi|^beta = i kappa_beta w on the unit circle.
double circle_kernel_integral(double beta);

/// oint dxi / |w - xi|^beta at w = e^{i theta0} by the midpoint rule on `nodes`
/// points with the Hurwitz-zeta endpoint correction. Independent of the closed form.
cplx circle_kernel_quadrature(double beta, std::size_t nodes = 2048, double theta0 = 0.0);

struct GammaPair {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

/// Closed-form gamma_{1,n}, gamma_{2,n}; n = 0 gives zeros.
GammaPair gamma_coeffs(double beta, int n, CBetaVariant variant = CBetaVariant::printed);

/// gamma_n = 2(1+n)/(1-beta/2) - (1+beta/2)_n/(1-beta/2)_n - (1+beta/2)_{n+1}/(1-beta/2)_{n+1}.
double gamma_n(double beta, int n);

/// C_beta beta Gamma(1-beta) / (2 Gamma(1-beta/2)^2): multiplies gamma_n in the SQG diagonal.
double spectral_prefactor(double beta, CBetaVariant variant = CBetaVariant::printed);

/// Diagonal multiplier of a_n on sin((n+1) theta).
double euler_diagonal(int n);
double sqg_diagonal(double beta, int n, CBetaVariant variant = CBetaVariant::printed);

/// Linearized residual at the trivial root. result[k] multiplies sin((k+2) theta),
/// with as many entries as h has modes.
std::vector<double> linearized_euler(const FourierShape& h);
std::vector<double> linearized_sqg(double beta, const FourierShape& h, CBetaVariant variant = CBetaVariant::printed);

/// gamma_{1,n}, gamma_{2,n} extracted from a direct quadrature of
/// (beta C_beta / 2 pi i) oint Re[(w - xi) conj(w^{-n} - xi^{-n})] / |w - xi|^{2+beta} dxi.
GammaPair gamma_coeffs_quadrature(double beta, int n, std::size_t nodes = 4096,
                                  CBetaVariant variant = CBetaVariant::printed);

/// Coefficient of conj(w)^n in (C_beta / 2 pi i) oint f'(xi) / |w - xi|^beta dxi for
/// f = w^{-n}, by direct quadrature.
double kernel_mode_quadrature(double beta, int n, std::size_t nodes = 4096,
                              CBetaVariant variant = CBetaVariant::printed);
/// Closed-form counterpart: -C_beta Gamma(1-beta)/Gamma(1-beta/2)^2 n (beta/2)_n/(1-beta/2)_n.
double kernel_mode_closed(double beta, int n, CBetaVariant variant = CBetaVariant::printed);

/// sin((n+1) theta) coefficient of mu_beta Im[h'] + Re[conj(K h) w] for h = w^{-n},
/// with K the two self-interaction integrals at eps = 0 evaluated by direct quadrature.
double sqg_diagonal_quadrature(double beta, int n, std::size_t nodes = 4096,
                               CBetaVariant variant = CBetaVariant::printed);

struct SpectrumRow {
    int n = 0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma = 0.0;
    double diagonal = 0.0;
};

struct SpectrumTable {
    double beta = 0.0;
    CBetaVariant variant = CBetaVariant::printed;
    std::vector<SpectrumRow> rows;
    /// min over rows of gamma_n / n, and the n where it is attained.
    double c0 = 0.0;
    int c0_at = 0;

    [[nodiscard]] bool all_positive() const;
    [[nodiscard]] bool strictly_increasing() const;
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
};

SpectrumTable spectrum_table(double beta, int n_max, CBetaVariant variant = CBetaVariant::printed);

}  // namespace vpoly
