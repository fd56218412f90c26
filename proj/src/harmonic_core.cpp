#include "vpoly/harmonic_core.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace vpoly {

namespace {
constexpr double kPi = std::numbers::pi;
}

double CircleGrid::spacing() const { return 2.0 * kPi / static_cast<double>(nodes); }

CircleGrid make_grid(std::size_t nodes) {
    if (nodes < 8 || nodes % 2 != 0) {
        throw InvalidArgument("make_grid: node count must be even and >= 8, got " + std::to_string(nodes));
    }
    CircleGrid g;
    g.nodes = nodes;
    g.theta.resize(nodes);
    g.w.resize(nodes);
    g.xi.resize(nodes);
    const double h = g.spacing();
    for (std::size_t j = 0; j < nodes; ++j) {
        const double t = h * static_cast<double>(j);
        g.theta[j] = t;
        g.w[j] = cplx(std::cos(t), std::sin(t));
        const double s = t + 0.5 * h;
        g.xi[j] = cplx(std::cos(s), std::sin(s));
    }
    return g;
}

double FourierShape::lipschitz_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) s += static_cast<double>(i + 1) * std::abs(coeffs[i]);
    return s;
}

ShapeValue eval_shape(const FourierShape& f, cplx z) {
    // Horner in zbar = z^{-1} on the unit circle.
    const cplx zb = std::conj(z);
    cplx value = 0.0;
    cplx dsum = 0.0;
    for (std::size_t i = f.coeffs.size(); i-- > 0;) {
        const double n = static_cast<double>(i + 1);
        value = (value + f.coeffs[i]) * zb;
        dsum = dsum * zb + n * f.coeffs[i];
    }
    // derivative = -sum n a_n z^{-n-1} = -zbar^2 * sum n a_n zbar^{n-1}
    return {value, -zb * zb * dsum};
}

// ---------------------------------------------------------------------------

PolygonModel PolygonModel::euler(int N, double l) {
    PolygonModel m;
    m.N = N;
    m.l = l;
    m.kind = EquationKind::euler;
    m.validate();
    return m;
}

PolygonModel PolygonModel::sqg(int N, double l, double beta, CBetaVariant variant) {
    PolygonModel m;
    m.N = N;
    m.l = l;
    m.kind = EquationKind::sqg;
    m.beta = beta;
    m.cbeta = variant;
    m.validate();
    return m;
}

void PolygonModel::validate() const {
    if (N < 2) throw InvalidArgument("polygon model: N must be >= 2");
    if (l == 0.0 || !std::isfinite(l)) throw InvalidArgument("polygon model: l must be finite and nonzero");
    if (kind == EquationKind::sqg) require_beta(beta);
}

double PolygonModel::c_beta() const {
    if (kind != EquationKind::sqg) throw InvalidArgument("C_beta requested for an Euler model");
    return vpoly::c_beta(beta, cbeta);
}

std::string to_string(EquationKind kind) { return kind == EquationKind::euler ? "euler" : "sqg"; }

std::string to_string(CBetaVariant variant) { return variant == CBetaVariant::printed ? "printed" : "standard"; }

// ---------------------------------------------------------------------------

cplx quad_circle(std::span<const cplx> samples, std::span<const cplx> nodes) {
    if (samples.size() != nodes.size() || samples.empty()) {
        throw InvalidArgument("quad_circle: sample count must match node count");
    }
    cplx acc = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) acc += samples[k] * nodes[k];
    return cplx(0.0, 2.0 * kPi / static_cast<double>(samples.size())) * acc;
}

cplx quad_circle(std::span<const cplx> samples, const CircleGrid& grid) { return quad_circle(samples, grid.xi); }

std::vector<double> project_sin(std::span<const double> samples) {
    const std::size_t M = samples.size();
    if (M < 4) throw InvalidArgument("project_sin: need at least 4 samples");
    const std::size_t count = M / 2 - 1;
    std::vector<double> out(count, 0.0);
    const double h = 2.0 * kPi / static_cast<double>(M);
    for (std::size_t n = 1; n <= count; ++n) {
        double acc = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            // reduce n*j mod M first so the angle stays exact for large grids
            const std::size_t r = (n * j) % M;
            acc += samples[j] * std::sin(h * static_cast<double>(r));
        }
        out[n - 1] = 2.0 * acc / static_cast<double>(M);
    }
    return out;
}

std::vector<double> synth_sin(std::span<const double> coeffs, const CircleGrid& grid) {
    std::vector<double> out(grid.nodes, 0.0);
    const double h = grid.spacing();
    for (std::size_t j = 0; j < grid.nodes; ++j) {
        double acc = 0.0;
        for (std::size_t n = 1; n <= coeffs.size(); ++n) {
            acc += coeffs[n - 1] * std::sin(h * static_cast<double>((n * j) % grid.nodes));
        }
        out[j] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------

double gamma_fn(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("gamma_fn: non-finite argument");
    if (x <= 0.0 && x == std::floor(x)) throw InvalidArgument("gamma_fn: pole at nonpositive integer");
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    }
    static constexpr double g = 7.0;
    static constexpr std::array<double, 9> c = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
    };
    const double z = x - 1.0;
    double s = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) s += c[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * s;
}

double pochhammer(double x, int n) {
    if (n < 0) throw InvalidArgument("pochhammer: n must be >= 0");
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= x + k;
    return p;
}

void require_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0,1)");
}

double c_beta_printed(double beta) {
    require_beta(beta);
    return gamma_fn(0.5 * beta) / (std::pow(2.0, 1.0 - beta) * gamma_fn(0.5 * (1.0 - beta)));
}

double c_beta_standard(double beta) {
    require_beta(beta);
    return gamma_fn(0.5 * beta) / (std::pow(2.0, 1.0 - beta) * gamma_fn(1.0 - 0.5 * beta));
}

double c_beta(double beta, CBetaVariant variant) {
    return variant == CBetaVariant::printed ? c_beta_printed(beta) : c_beta_standard(beta);
}

double mu_beta(double beta, CBetaVariant variant) {
    const double g = gamma_fn(1.0 - 0.5 * beta);
    return c_beta(beta, variant) * 2.0 * beta * gamma_fn(1.0 - beta) / ((2.0 - beta) * g * g);
}

}  // namespace vpoly
