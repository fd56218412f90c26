#include "vpoly/point_vortex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "vpoly/format.hpp"

namespace vpoly {

namespace {

constexpr double kPi = std::numbers::pi;

cplx root_of_unity(int k, int N) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(N);
    return {std::cos(t), std::sin(t)};
}

void require_polygon(int N, double l) {
    if (N < 2) throw InvalidArgument("point vortex polygon: N must be >= 2");
    if (l == 0.0 || !std::isfinite(l)) throw InvalidArgument("point vortex polygon: l must be finite and nonzero");
}

cplx newtonian_sum(int N) {
    cplx s = 0.0;
    for (int k = 1; k < N; ++k) s += 1.0 / (1.0 - root_of_unity(k, N));
    return s;
}

cplx sqg_sum(int N, double beta) {
    cplx s = 0.0;
    for (int k = 1; k < N; ++k) {
        const cplx d = 1.0 - root_of_unity(k, N);
        s += d / std::pow(std::abs(d), 2.0 + beta);
    }
    return s;
}

// Asserted reality of the polygon sums.
constexpr double kRealityTol = 1e-13;

}  // namespace

Interaction Interaction::newtonian() {
    Interaction it;
    it.dG = [](double r) { return 1.0 / (2.0 * kPi * r); };
    it.G = [](double r) { return std::log(r) / (2.0 * kPi); };
    it.name = "newtonian";
    return it;
}

Interaction Interaction::sqg(double beta, CBetaVariant variant) {
    const double cb = c_beta(beta, variant);
    Interaction it;
    it.dG = [beta, cb](double r) { return beta * cb * std::pow(r, -1.0 - beta); };
    it.G = [beta, cb](double r) { return -cb * std::pow(r, -beta); };
    it.name = "sqg";
    return it;
}

Interaction Interaction::none() {
    Interaction it;
    it.dG = [](double) { return 0.0; };
    it.G = [](double) { return 0.0; };
    it.name = "none";
    return it;
}

PointConfig thomson_polygon(int N, double l, Interaction interaction) {
    require_polygon(N, l);
    PointConfig cfg;
    cfg.positions.reserve(static_cast<std::size_t>(N));
    for (int m = 0; m < N; ++m) cfg.positions.push_back(l * root_of_unity(m, N));
    cfg.interaction = std::move(interaction);
    return cfg;
}

double omega_newtonian_imag(int N) { return std::imag(newtonian_sum(N)); }

double omega_sqg_imag(int N, double beta) { return std::imag(sqg_sum(N, beta)); }

double omega_newtonian(int N, double l) {
    require_polygon(N, l);
    const cplx s = newtonian_sum(N);
    if (std::abs(s.imag()) > kRealityTol * std::max(1.0, std::abs(s))) {
        throw NumericalError("omega_newtonian: polygon sum is not real");
    }
    return s.real() / (2.0 * kPi * l * l);
}

double omega_general(int N, double l, const std::function<double(double)>& dG) {
    require_polygon(N, l);
    const double al = std::abs(l);
    cplx s = 0.0;
    for (int k = 1; k < N; ++k) {
        const cplx d = 1.0 - root_of_unity(k, N);
        const double r = std::abs(d);
        const double g = dG(al * r);
        if (!std::isfinite(g)) throw InvalidArgument("omega_general: G' is not finite on the chord lengths");
        s += d / r * g;
    }
    if (std::abs(s.imag()) > kRealityTol * std::max(1.0, std::abs(s))) {
        throw NumericalError("omega_general: polygon sum is not real");
    }
    return s.real() / al;
}

double omega_sqg(int N, double l, double beta, CBetaVariant variant) {
    require_polygon(N, l);
    const cplx s = sqg_sum(N, beta);
    if (std::abs(s.imag()) > kRealityTol * std::max(1.0, std::abs(s))) {
        throw NumericalError("omega_sqg: polygon sum is not real");
    }
    return beta * c_beta(beta, variant) / std::pow(std::abs(l), 2.0 + beta) * s.real();
}

double omega_point(const PolygonModel& model) {
    model.validate();
    return model.kind == EquationKind::euler ? omega_newtonian(model.N, model.l)
                                             : omega_sqg(model.N, model.l, model.beta, model.cbeta);
}

std::vector<cplx> velocity_points(const PointConfig& config) {
    const auto& z = config.positions;
    std::vector<cplx> v(z.size(), 0.0);
    for (std::size_t m = 0; m < z.size(); ++m) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (k == m) continue;
            const cplx d = z[m] - z[k];
            const double r = std::abs(d);
            if (r == 0.0) throw InvalidArgument("velocity_points: coincident vortices");
            acc += d / r * config.interaction.dG(r);
        }
        v[m] = cplx(0.0, 1.0) * acc;
    }
    return v;
}

// ---------------------------------------------------------------------------

double Trajectory::energy_drift() const {
    if (energy.empty()) return 0.0;
    double d = 0.0;
    for (double e : energy) d = std::max(d, std::abs(e - energy.front()));
    return d;
}

cplx Trajectory::center(std::size_t step) const {
    cplx s = 0.0;
    for (const cplx& z : positions.at(step)) s += z;
    return s;
}

namespace {

double pair_energy(const std::vector<cplx>& z, const std::function<double(double)>& G) {
    double e = 0.0;
    for (std::size_t m = 0; m < z.size(); ++m)
        for (std::size_t k = m + 1; k < z.size(); ++k) e += G(std::abs(z[m] - z[k]));
    return e;
}

}  // namespace

Trajectory integrate_points(const PointConfig& config, double dt, std::size_t steps) {
    if (!std::isfinite(dt) || !std::isfinite(dt * static_cast<double>(steps))) {
        throw InvalidArgument("integrate_points: dt * steps must be finite");
    }
    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.positions.reserve(steps + 1);
    const bool track_energy = static_cast<bool>(config.interaction.G);

    PointConfig state = config;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.positions.push_back(state.positions);
        if (track_energy) traj.energy.push_back(pair_energy(state.positions, config.interaction.G));
    };
    record(0.0);

    const std::size_t n = state.positions.size();
    PointConfig stage = config;
    auto shifted = [&](const std::vector<cplx>& base, const std::vector<cplx>& k, double scale) {
        for (std::size_t m = 0; m < n; ++m) stage.positions[m] = base[m] + scale * k[m];
        return velocity_points(stage);
    };

    for (std::size_t s = 0; s < steps; ++s) {
        const std::vector<cplx> z0 = state.positions;
        const auto k1 = velocity_points(state);
        const auto k2 = shifted(z0, k1, 0.5 * dt);
        const auto k3 = shifted(z0, k2, 0.5 * dt);
        const auto k4 = shifted(z0, k3, dt);
        for (std::size_t m = 0; m < n; ++m) {
            state.positions[m] = z0[m] + (dt / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
            if (!std::isfinite(state.positions[m].real()) || !std::isfinite(state.positions[m].imag())) {
                throw NumericalError("integrate_points: non-finite position for vortex " + std::to_string(m) +
                                     " at step " + std::to_string(s + 1));
            }
        }
        record(static_cast<double>(s + 1) * dt);
    }
    return traj;
}

double closure_error(const PointConfig& config, double omega, std::size_t steps_per_period) {
    if (omega == 0.0) throw InvalidArgument("closure_error: zero angular velocity has no period");
    const double T = 2.0 * kPi / std::abs(omega);
    const Trajectory traj = integrate_points(config, T / static_cast<double>(steps_per_period), steps_per_period);
    double err = 0.0;
    const auto& first = traj.positions.front();
    const auto& last = traj.positions.back();
    for (std::size_t m = 0; m < first.size(); ++m) err = std::max(err, std::abs(last[m] - first[m]));
    return err;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,m,re,im\n";
    for (std::size_t s = 0; s < traj.positions.size(); ++s) {
        for (std::size_t m = 0; m < traj.positions[s].size(); ++m) {
            out << fmt_double(traj.times[s]) << ',' << m << ',' << fmt_double(traj.positions[s][m].real()) << ','
                << fmt_double(traj.positions[s][m].imag()) << '\n';
        }
    }
}

}  // namespace vpoly
