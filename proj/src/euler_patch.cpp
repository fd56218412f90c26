#include "vpoly/euler_patch.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "vpoly/point_vortex.hpp"

namespace vpoly {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

void require_euler(const PolygonModel& model) {
    model.validate();
    if (model.kind != EquationKind::euler) throw InvalidArgument("Euler functional called with an SQG model");
}

std::vector<cplx> j_from_samples(double eps, const ShapeSamples& s, const PolygonModel& model,
                                 const CircleGrid& grid) {
    const std::size_t M = grid.nodes;
    const double l = model.l;
    const double overlap_tol = 1e-8 * std::abs(l);

    std::vector<cplx> vertex(static_cast<std::size_t>(model.N));
    for (int m = 0; m < model.N; ++m) vertex[static_cast<std::size_t>(m)] = polygon_vertex(m, model.N);

    // dxi = i xi dphi, so each node carries weight (2 pi / M) i xi_k; the 1/(4 pi^2) prefactor joins it.
    std::vector<cplx> weight(M);
    for (std::size_t k = 0; k < M; ++k) weight[k] = kI * grid.xi[k] * (2.0 * kPi / static_cast<double>(M)) / (4.0 * kPi * kPi);

    // z(xi) = xi + eps f(xi) on patch 0 and its conjugate counterpart
    std::vector<cplx> zxi(M), zxi_bar(M), stretch_xi(M);
    for (std::size_t k = 0; k < M; ++k) {
        zxi[k] = grid.xi[k] + eps * s.fxi[k];
        zxi_bar[k] = std::conj(grid.xi[k]) + eps * s.fxi_conj[k];
        stretch_xi[k] = 1.0 + eps * s.dfxi[k];
    }

    std::vector<cplx> J(M);
    for (std::size_t j = 0; j < M; ++j) {
        const cplx w = grid.w[j];
        const cplx wb = std::conj(w);
        const cplx zw = w + eps * s.fw[j];
        cplx acc = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const cplx xi = grid.xi[k];
            const cplx xib = std::conj(xi);
            const cplx dw = w - xi;
            const cplx df = s.fw[j] - s.fxi[k];
            const cplx df_bar = s.fw_conj[j] - s.fxi_conj[k];
            const cplx denom = dw + eps * df;

            // self-interaction, f' part
            const cplx k1 = (wb - xib + eps * df_bar) / denom * s.dfxi[k];
            // self-interaction, shape-difference part
            const cplx k2 = (dw * df_bar - (wb - xib) * df) / (dw * denom);

            // neighbour patches m = 1..N-1
            cplx k3 = 0.0;
            for (std::size_t m = 1; m < vertex.size(); ++m) {
                const cplx e = vertex[m];
                const cplx d = eps * e * zxi[k] - eps * zw + (e - 1.0) * l;
                if (std::abs(d) < overlap_tol) {
                    std::ostringstream os;
                    os << "patch overlap: neighbour " << m << " denominator " << std::abs(d) << " at nodes (" << j
                       << ", " << k << ")";
                    throw PatchOverlapError(os.str());
                }
                k3 += zxi_bar[k] / d * stretch_xi[k];
            }
            acc += (k1 + k2 + k3) * weight[k];
        }
        J[j] = acc;
    }
    return J;
}

std::vector<double> residual_samples(double omega, double eps, std::span<const cplx> J, const ShapeSamples& s,
                                     const PolygonModel& model, const CircleGrid& grid) {
    std::vector<double> F(grid.nodes);
    for (std::size_t j = 0; j < grid.nodes; ++j) {
        const cplx w = grid.w[j];
        const cplx bracket = J[j] + kI * omega * eps * (std::conj(w) + eps * s.fw_conj[j]) + kI * omega * model.l;
        F[j] = std::real(-kI / (2.0 * kPi) * s.dfw[j] + bracket * w * (1.0 + eps * s.dfw[j]));
    }
    return F;
}

double closed_omega(double eps, std::span<const cplx> J, const ShapeSamples& s, const PolygonModel& model,
                    const CircleGrid& grid) {
    return omega_closure(J, eps, eps, s, model, grid, std::abs(omega_newtonian(model.N, model.l)));
}

}  // namespace

std::vector<cplx> j_euler(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                          double sigma) {
    require_euler(model);
    require_admissible(f, sigma);
    return j_from_samples(eps, sample_shape(f, grid), model, grid);
}

double omega_closure_euler(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                           double sigma) {
    require_euler(model);
    require_admissible(f, sigma);
    const ShapeSamples s = sample_shape(f, grid);
    const auto J = j_from_samples(eps, s, model, grid);
    return closed_omega(eps, J, s, model, grid);
}

std::vector<double> f_euler(double omega, double eps, const FourierShape& f, const PolygonModel& model,
                            const CircleGrid& grid, double sigma) {
    require_euler(model);
    require_admissible(f, sigma);
    const ShapeSamples s = sample_shape(f, grid);
    const auto J = j_from_samples(eps, s, model, grid);
    return residual_samples(omega, eps, J, s, model, grid);
}

EulerEvaluation evaluate_euler(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                               double sigma) {
    require_euler(model);
    require_admissible(f, sigma);
    const ShapeSamples s = sample_shape(f, grid);
    EulerEvaluation ev;
    ev.J = j_from_samples(eps, s, model, grid);
    ev.omega = closed_omega(eps, ev.J, s, model, grid);
    ev.F = residual_samples(ev.omega, eps, ev.J, s, model, grid);
    ev.sin_coeffs = project_sin(ev.F);
    return ev;
}

TildeResult f_tilde_euler(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                          double sigma) {
    EulerEvaluation ev = evaluate_euler(eps, f, model, grid, sigma);
    TildeResult r;
    r.omega = ev.omega;
    r.f1 = ev.sin_coeffs.front();
    r.coeffs.assign(ev.sin_coeffs.begin() + 1, ev.sin_coeffs.end());
    r.samples = std::move(ev.F);
    return r;
}

}  // namespace vpoly
