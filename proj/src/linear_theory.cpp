#include "vpoly/linear_theory.hpp"

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "vpoly/format.hpp"

namespace vpoly {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

// Projection angles for the quadrature oracles; far more than the two or three
// modes present, so the discrete projections are exact.
constexpr std::size_t kProbeAngles = 64;

void require_mode(int n) {
    if (n < 1) throw InvalidArgument("mode index must be >= 1");
}

void require_oracle_nodes(std::size_t nodes) {
    if (nodes < 16 || nodes % 2 != 0) throw InvalidArgument("oracle node count must be even and >= 16");
}

double g2(double beta) {
    const double g = gamma_fn(1.0 - 0.5 * beta);
    return g * g;
}

// oint |w - xi|^{-beta} S(xi) dxi at w = e^{i theta}: midpoint rule in the angle
// offset from theta, minus the two one-sided Hurwitz-zeta endpoint terms.
cplx corrected_midpoint(double beta, std::size_t nodes, double theta, const std::function<cplx(cplx)>& S,
                        cplx S_diag) {
    const double h = 2.0 * kPi / static_cast<double>(nodes);
    const long half = static_cast<long>(nodes / 2);
    cplx acc = 0.0;
    for (long k = -half; k < half; ++k) {
        const double x = (static_cast<double>(k) + 0.5) * h;
        const cplx xi = std::polar(1.0, theta + x);
        acc += std::pow(std::abs(2.0 * std::sin(0.5 * x)), -beta) * S(xi) * kI * xi;
    }
    acc *= h;
    const double hurwitz_half = (std::pow(2.0, beta) - 1.0) * boost::math::zeta(beta);
    const cplx w = std::polar(1.0, theta);
    return acc - 2.0 * std::pow(h, 1.0 - beta) * hurwitz_half * S_diag * kI * w;
}

// (w^{-n} - xi^{-n}) / (w - xi) and its diagonal limit -n w^{-n-1}
cplx mode_quotient(cplx w, cplx xi, int n) { return (std::pow(w, -n) - std::pow(xi, -n)) / (w - xi); }
cplx mode_derivative(cplx z, int n) { return -static_cast<double>(n) * std::pow(z, -n - 1); }

// (a)_n / (b)_n as a running product, so large n does not overflow.
double poch_ratio(double a, double b, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= (a + i) / (b + i);
    return r;
}

double probe_angle(std::size_t p) { return 2.0 * kPi * static_cast<double>(p) / static_cast<double>(kProbeAngles); }

}  // namespace

double circle_kernel_integral(double beta) {
    require_beta(beta);
    return 2.0 * kPi * beta * gamma_fn(1.0 - beta) / ((2.0 - beta) * g2(beta));
}

cplx circle_kernel_quadrature(double beta, std::size_t nodes, double theta0) {
    require_beta(beta);
    require_oracle_nodes(nodes);
    return corrected_midpoint(beta, nodes, theta0, [](cplx) { return cplx(1.0); }, 1.0);
}

GammaPair gamma_coeffs(double beta, int n, CBetaVariant variant) {
    require_beta(beta);
    if (n < 0) throw InvalidArgument("gamma_coeffs: n must be >= 0");
    const double cb = c_beta(beta, variant);
    const double base = beta * cb * gamma_fn(1.0 - beta) / g2(beta);
    GammaPair g;
    g.gamma1 = base * (1.0 + 0.5 * beta) / (2.0 * (2.0 - beta)) *
               (1.0 - poch_ratio(2.0 + 0.5 * beta, 2.0 - 0.5 * beta, n));
    g.gamma2 = -0.25 * base * (1.0 - poch_ratio(0.5 * beta, -0.5 * beta, n));
    return g;
}

double gamma_n(double beta, int n) {
    require_beta(beta);
    require_mode(n);
    const double a = 1.0 + 0.5 * beta;
    const double b = 1.0 - 0.5 * beta;
    return 2.0 * (1.0 + n) / b - poch_ratio(a, b, n) - poch_ratio(a, b, n + 1);
}

double spectral_prefactor(double beta, CBetaVariant variant) {
    require_beta(beta);
    return c_beta(beta, variant) * beta * gamma_fn(1.0 - beta) / (2.0 * g2(beta));
}

double euler_diagonal(int n) {
    require_mode(n);
    return static_cast<double>(n) / (2.0 * kPi);
}

double sqg_diagonal(double beta, int n, CBetaVariant variant) {
    return spectral_prefactor(beta, variant) * gamma_n(beta, n);
}

std::vector<double> linearized_euler(const FourierShape& h) {
    std::vector<double> out(h.modes());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = euler_diagonal(static_cast<int>(k + 1)) * h.coeffs[k];
    return out;
}

std::vector<double> linearized_sqg(double beta, const FourierShape& h, CBetaVariant variant) {
    require_beta(beta);
    std::vector<double> out(h.modes());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = sqg_diagonal(beta, static_cast<int>(k + 1), variant) * h.coeffs[k];
    return out;
}

GammaPair gamma_coeffs_quadrature(double beta, int n, std::size_t nodes, CBetaVariant variant) {
    require_beta(beta);
    require_mode(n);
    require_oracle_nodes(nodes);
    const double cb = c_beta(beta, variant);
    cplx g1 = 0.0;
    cplx g2c = 0.0;
    for (std::size_t p = 0; p < kProbeAngles; ++p) {
        const double theta = probe_angle(p);
        const cplx w = std::polar(1.0, theta);
        const cplx I = corrected_midpoint(
            beta, nodes, theta, [&](cplx xi) { return cplx(std::real(mode_quotient(w, xi, n))); },
            std::real(mode_derivative(w, n)));
        const cplx lhs = beta * cb / (2.0 * kPi * kI) * I;
        g1 += lhs * std::polar(1.0, -(n + 2) * theta);
        g2c += lhs * std::polar(1.0, n * theta);
    }
    const double P = static_cast<double>(kProbeAngles);
    return {g1.real() / P, g2c.real() / P};
}

double kernel_mode_quadrature(double beta, int n, std::size_t nodes, CBetaVariant variant) {
    require_beta(beta);
    require_mode(n);
    require_oracle_nodes(nodes);
    const double cb = c_beta(beta, variant);
    cplx acc = 0.0;
    for (std::size_t p = 0; p < kProbeAngles; ++p) {
        const double theta = probe_angle(p);
        const cplx w = std::polar(1.0, theta);
        const cplx I =
            corrected_midpoint(beta, nodes, theta, [&](cplx xi) { return mode_derivative(xi, n); }, mode_derivative(w, n));
        acc += cb / (2.0 * kPi * kI) * I * std::polar(1.0, n * theta);
    }
    return acc.real() / static_cast<double>(kProbeAngles);
}

double kernel_mode_closed(double beta, int n, CBetaVariant variant) {
    require_beta(beta);
    require_mode(n);
    return -c_beta(beta, variant) * gamma_fn(1.0 - beta) / g2(beta) * static_cast<double>(n) *
           poch_ratio(0.5 * beta, 1.0 - 0.5 * beta, n);
}

double sqg_diagonal_quadrature(double beta, int n, std::size_t nodes, CBetaVariant variant) {
    require_beta(beta);
    require_mode(n);
    require_oracle_nodes(nodes);
    const double cb = c_beta(beta, variant);
    const double mu = mu_beta(beta, variant);
    double acc = 0.0;
    for (std::size_t p = 0; p < kProbeAngles; ++p) {
        const double theta = probe_angle(p);
        const cplx w = std::polar(1.0, theta);
        const cplx dw = mode_derivative(w, n);
        const cplx I1 = corrected_midpoint(
            beta, nodes, theta, [&](cplx xi) { return cplx(std::real(mode_quotient(w, xi, n))); }, std::real(dw));
        const cplx I2 =
            corrected_midpoint(beta, nodes, theta, [&](cplx xi) { return mode_derivative(xi, n); }, dw);
        const cplx K = -beta * cb / kPi * I1 + cb / kPi * I2;
        const double F = std::real(std::conj(K) * w) + mu * std::imag(dw);
        acc += F * std::sin((n + 1) * theta);
    }
    return 2.0 * acc / static_cast<double>(kProbeAngles);
}

bool SpectrumTable::all_positive() const {
    return std::all_of(rows.begin(), rows.end(), [](const SpectrumRow& r) { return r.gamma > 0.0; });
}

bool SpectrumTable::strictly_increasing() const {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].gamma > rows[i - 1].gamma)) return false;
    return true;
}

std::string SpectrumTable::to_csv() const {
    std::ostringstream os;
    os << "n,gamma1,gamma2,gamma_n,diagonal\n";
    for (const auto& r : rows)
        os << r.n << ',' << fmt_double(r.gamma1) << ',' << fmt_double(r.gamma2) << ',' << fmt_double(r.gamma) << ','
           << fmt_double(r.diagonal) << '\n';
    return os.str();
}

std::string SpectrumTable::to_json() const {
    nlohmann::ordered_json j;
    j["beta"] = beta;
    j["c_beta_variant"] = to_string(variant);
    j["prefactor"] = spectral_prefactor(beta, variant);
    j["c0"] = c0;
    j["c0_at"] = c0_at;
    j["all_positive"] = all_positive();
    j["strictly_increasing"] = strictly_increasing();
    auto& arr = j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row;
        row["n"] = r.n;
        row["gamma1"] = r.gamma1;
        row["gamma2"] = r.gamma2;
        row["gamma_n"] = r.gamma;
        row["diagonal"] = r.diagonal;
        arr.push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

SpectrumTable spectrum_table(double beta, int n_max, CBetaVariant variant) {
    require_beta(beta);
    if (n_max < 1) throw InvalidArgument("spectrum_table: n_max must be >= 1");
    SpectrumTable t;
    t.beta = beta;
    t.variant = variant;
    const double pref = spectral_prefactor(beta, variant);
    t.c0 = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= n_max; ++n) {
        const auto g = gamma_coeffs(beta, n, variant);
        SpectrumRow r{n, g.gamma1, g.gamma2, gamma_n(beta, n), 0.0};
        r.diagonal = pref * r.gamma;
        const double ratio = r.gamma / n;
        if (ratio < t.c0) {
            t.c0 = ratio;
            t.c0_at = n;
        }
        t.rows.push_back(r);
    }
    return t;
}

}  // namespace vpoly
