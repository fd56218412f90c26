#include "vpoly/patch_common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace vpoly {

void require_admissible(const FourierShape& f, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("admissibility radius sigma must lie in (0,1)");
    const double norm = f.lipschitz_norm();
    if (!std::isfinite(norm) || norm > sigma) {
        std::ostringstream os;
        os << "shape not admissible: sum n|a_n| = " << norm << " exceeds sigma = " << sigma;
        throw InvalidArgument(os.str());
    }
}

ShapeSamples sample_shape(const FourierShape& f, const CircleGrid& grid) {
    ShapeSamples s;
    const std::size_t M = grid.nodes;
    s.fw.resize(M);
    s.dfw.resize(M);
    s.fw_conj.resize(M);
    s.fxi.resize(M);
    s.dfxi.resize(M);
    s.fxi_conj.resize(M);
    for (std::size_t j = 0; j < M; ++j) {
        const auto w = eval_shape(f, grid.w[j]);
        s.fw[j] = w.value;
        s.dfw[j] = w.derivative;
        s.fw_conj[j] = eval_shape(f, std::conj(grid.w[j])).value;
        const auto x = eval_shape(f, grid.xi[j]);
        s.fxi[j] = x.value;
        s.dfxi[j] = x.derivative;
        s.fxi_conj[j] = eval_shape(f, std::conj(grid.xi[j])).value;
    }
    return s;
}

double omega_closure(std::span<const cplx> velocity_term, double eps, double p, const ShapeSamples& s,
                     const PolygonModel& model, const CircleGrid& grid, double reality_scale) {
    const std::size_t M = grid.nodes;
    std::vector<cplx> num(M), den(M);
    for (std::size_t j = 0; j < M; ++j) {
        const cplx w = grid.w[j];
        const cplx wb = std::conj(w);
        const cplx stretch = 1.0 + p * s.dfw[j];
        num[j] = velocity_term[j] * (w - wb) * stretch;
        den[j] = stretch * (w - wb) * (model.l + eps * wb + eps * p * s.fw_conj[j]);
    }
    const cplx top = cplx(0.0, 1.0) * quad_circle(num, grid.w);
    const cplx bottom = quad_circle(den, grid.w);
    if (std::abs(bottom) < 1e-12 * std::abs(model.l)) throw NumericalError("omega closure degenerate: vanishing denominator");
    const cplx omega = top / bottom;
    const double scale = std::max(reality_scale, std::abs(omega.real()));
    if (!(std::abs(omega.imag()) <= 1e-10 * std::max(scale, 1e-300))) {
        std::ostringstream os;
        os << "omega closure is not real: Im = " << omega.imag() << ", Re = " << omega.real();
        throw NumericalError(os.str());
    }
    return omega.real();
}

double odd_symmetry_defect(std::span<const double> samples) {
    const std::size_t M = samples.size();
    double d = 0.0;
    for (std::size_t j = 0; j < M; ++j) d = std::max(d, std::abs(samples[j] + samples[(M - j) % M]));
    return d;
}

cplx polygon_vertex(int m, int N) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(N);
    return {std::cos(t), std::sin(t)};
}

namespace {

double shape_scaling(const PolygonModel& model, double eps) {
    return model.kind == EquationKind::euler ? eps : std::pow(std::abs(eps), 1.0 + model.beta);
}

}  // namespace

double min_interpatch_gap(const PolygonModel& model, const FourierShape& f, const CircleGrid& grid, double eps) {
    const double p = shape_scaling(model, eps);
    const std::size_t M = grid.nodes;
    std::vector<cplx> phi_w(M), phi_xi(M);
    for (std::size_t j = 0; j < M; ++j) {
        phi_w[j] = eps * (grid.w[j] + p * eval_shape(f, grid.w[j]).value);
        phi_xi[j] = eps * (grid.xi[j] + p * eval_shape(f, grid.xi[j]).value);
    }
    double gap = std::numeric_limits<double>::infinity();
    for (int m = 1; m < model.N; ++m) {
        const cplx e = polygon_vertex(m, model.N);
        const cplx a = model.l * (1.0 - e);
        for (std::size_t j = 0; j < M; ++j)
            for (std::size_t k = 0; k < M; ++k) gap = std::min(gap, std::abs(a + phi_w[j] - e * phi_xi[k]));
    }
    return gap;
}

double disjointness_radius(const PolygonModel& model, const FourierShape& f, const CircleGrid& grid) {
    model.validate();
    const double threshold = 0.1 * std::abs(model.l) * std::abs(1.0 - polygon_vertex(1, model.N));
    double lo = 0.0;
    double hi = std::abs(model.l) * std::abs(1.0 - polygon_vertex(1, model.N));
    while (min_interpatch_gap(model, f, grid, hi) > threshold) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (min_interpatch_gap(model, f, grid, mid) > threshold ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace vpoly
