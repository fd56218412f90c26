#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "vpoly/harmonic_core.hpp"

namespace vpoly {

/// Pairwise interaction supplied through G'. Velocities follow
///   dz_m/dt = i sum_{k != m} (z_m - z_k)/|z_m - z_k| G'(|z_m - z_k|),
/// i.e. the perpendicular gradient is multiplication by i.
struct Interaction {
    std::function<double(double)> dG;
    /// Optional G itself, used only by the energy monitor.
    std::function<double(double)> G;
    std::string name = "general";

    /// G = ln(r) / (2 pi).
    static Interaction newtonian();
    /// G = -C_beta r^{-beta}, so G' = beta C_beta r^{-1-beta} > 0. This sign
    /// makes the general angular velocity agree with the SQG closed form.
    static Interaction sqg(double beta, CBetaVariant variant = CBetaVariant::printed);
    static Interaction none();
};

struct PointConfig {
    std::vector<cplx> positions;
    Interaction interaction;
};

PointConfig thomson_polygon(int N, double l, Interaction interaction = Interaction::newtonian());

/// (1 / (2 pi l^2)) Re sum_{k=1}^{N-1} 1/(1 - e^{2 pi i k/N}).
double omega_newtonian(int N, double l);
/// (1/|l|) Re sum_k (1-e_k)/|1-e_k| G'(|l| |1-e_k|).
double omega_general(int N, double l, const std::function<double(double)>& dG);
/// (beta C_beta / |l|^{2+beta}) Re sum_k (1-e_k)/|1-e_k|^{2+beta}.
double omega_sqg(int N, double l, double beta, CBetaVariant variant = CBetaVariant::printed);
/// Angular velocity matching the model's equation kind.
double omega_point(const PolygonModel& model);

/// Imaginary parts of the polygon sums; they vanish for every N.
double omega_newtonian_imag(int N);
double omega_sqg_imag(int N, double beta);

std::vector<cplx> velocity_points(const PointConfig& config);

struct Trajectory {
    std::vector<double> times;
    /// positions[s][m]: vortex m after s steps.
    std::vector<std::vector<cplx>> positions;
    /// sum_{m<k} G(|z_m - z_k|) per step; empty when G is not supplied.
    std::vector<double> energy;

    [[nodiscard]] double energy_drift() const;
    [[nodiscard]] cplx center(std::size_t step) const;
};

/// Classic fixed-step RK4; throws NumericalError on a non-finite state.
Trajectory integrate_points(const PointConfig& config, double dt, std::size_t steps);

/// max_m |z_m(T) - z_m(0)| after integrating one rotation period T = 2 pi / Omega.
double closure_error(const PointConfig& config, double omega, std::size_t steps_per_period);

/// CSV with header "t,m,re,im", one row per vortex per step.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace vpoly
