// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "test_util.hpp"
#include "vpoly/euler_patch.hpp"
#include "vpoly/linear_theory.hpp"
#include "vpoly/point_vortex.hpp"
#include "vpoly/sqg_patch.hpp"
#include "vpoly/vstate_solver.hpp"

using namespace vpoly;
using vpoly::testing::max_abs;
using vpoly::testing::random_shape;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const double kBetas[] = {0.25, 0.5, 0.75};

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int k, const std::string& name, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << k << "] " << name << ":" << o.detail.str() << " (" << secs
              << " s)" << std::endl;
}

double coeff_norm(const FourierShape& f) {
    double s = 0.0;
    for (double a : f.coeffs) s += a * a;
    return std::sqrt(s);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void c1(Outcome& o) {
    const double e = std::abs(omega_newtonian(2, 0.5) - 1.0 / kPi);
    o.require(e < 1e-12, "N=2, l=0.5");
    double worst = 0.0;
    for (int N = 2; N <= 10; ++N)
        for (double l : {0.5, 1.0, 2.0}) {
            cplx s = 0.0;
            for (int k = 1; k < N; ++k) s += 1.0 / (1.0 - std::polar(1.0, 2 * kPi * k / N));
            const double sum = s.real() / (2 * kPi * l * l);
            const double closed = (N - 1) / (4 * kPi * l * l);
            worst = std::max({worst, std::abs(omega_newtonian(N, l) - closed), std::abs(omega_newtonian(N, l) - sum)});
        }
    o.require(worst < 1e-12, "N <= 10 closed form / summation");
    o.detail << " |omega(2,0.5) - 1/pi| = " << e << ", worst over N<=10 = " << worst;
}

void c2(Outcome& o) {
    double worst_close = 0.0, min_ratio = 1e300, max_ratio = 0.0;
    for (int N = 3; N <= 5; ++N)
        for (bool sqg : {false, true}) {
            const auto inter = sqg ? Interaction::sqg(0.5) : Interaction::newtonian();
            const auto cfg = thomson_polygon(N, 1.0, inter);
            const double om = sqg ? omega_sqg(N, 1.0, 0.5) : omega_newtonian(N, 1.0);
            worst_close = std::max(worst_close, closure_error(cfg, om, 4096));
            // the error at dt = T/4096 sits at rounding level, so the order is read off coarser steps
            const double e1 = closure_error(cfg, om, 128);
            const double e2 = closure_error(cfg, om, 256);
            min_ratio = std::min(min_ratio, e1 / e2);
            max_ratio = std::max(max_ratio, e1 / e2);
        }
    o.require(worst_close < 1e-8, "closure");
    o.require(min_ratio > 14.0 && max_ratio < 18.0, "Richardson ratio near 16");
    o.detail << " worst closure " << worst_close << ", halving ratios in [" << min_ratio << ", " << max_ratio << "]";
}

void c3(Outcome& o) {
    double we = 0.0, ws = 0.0;
    const auto ge = make_grid(128);
    const auto gs = make_grid(512);
    for (int N = 2; N <= 6; ++N) {
        we = std::max(we, max_abs(f_euler(omega_newtonian(N, 1.0), 0.0, FourierShape::zero(8), PolygonModel::euler(N, 1.0), ge)));
        for (double b : kBetas)
            ws = std::max(ws, max_abs(f_sqg(omega_sqg(N, 1.0, b), 0.0, FourierShape::zero(8), PolygonModel::sqg(N, 1.0, b), gs)));
    }
    o.require(we < 1e-12, "Euler");
    o.require(ws < 5e-11, "SQG");
    o.detail << " Euler " << we << ", SQG " << ws;
}

void c4(Outcome& o) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ue(0.0, 0.08);
    std::uniform_real_distribution<double> uf(0.1, 1.0);
    double odd = 0.0, f1 = 0.0;
    const auto ge = make_grid(128);
    const auto gs = make_grid(256);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = random_shape(rng, 12, kDefaultSigma, uf(rng));
        const double eps = ue(rng);
        const auto e = evaluate_euler(eps, f, PolygonModel::euler(2 + trial % 5, 1.0), ge);
        const auto s = evaluate_sqg(eps, f, PolygonModel::sqg(2 + trial % 5, 1.0, kBetas[trial % 3]), gs);
        odd = std::max({odd, odd_symmetry_defect(e.F), odd_symmetry_defect(s.F)});
        f1 = std::max({f1, std::abs(e.sin_coeffs[0]), std::abs(s.sin_coeffs[0])});
    }
    o.require(odd < 1e-10, "odd symmetry");
    o.require(f1 < 1e-9, "sin(theta) coefficient");
    o.detail << " 100 draws per equation: odd defect " << odd << ", |f_1| " << f1;
}

void c5(Outcome& o) {
    std::mt19937_64 rng(5);
    double we = 0.0, ws = 0.0;
    const auto ge = make_grid(128);
    const auto gs = make_grid(512);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_shape(rng, 12, kDefaultSigma, 0.95);
        const int N = 2 + trial % 5;
        const double b = kBetas[trial % 3];
        we = std::max(we, std::abs(omega_closure_euler(0.0, f, PolygonModel::euler(N, 1.0), ge) - omega_newtonian(N, 1.0)));
        ws = std::max(ws, std::abs(omega_closure_sqg(0.0, f, PolygonModel::sqg(N, 1.0, b), gs) - omega_sqg(N, 1.0, b)));
    }
    o.require(we < 1e-10, "Euler");
    o.require(ws < 1e-8, "SQG");
    o.detail << " Euler " << we << ", SQG " << ws;
}

void c6(Outcome& o) {
    double worst = 0.0;
    for (double b : kBetas)
        for (int n = 1; n <= 10; ++n) {
            const auto c = gamma_coeffs(b, n);
            const auto q = gamma_coeffs_quadrature(b, n, 4096);
            worst = std::max({worst, std::abs(q.gamma1 / c.gamma1 - 1), std::abs(q.gamma2 / c.gamma2 - 1)});
        }
    o.require(worst < 1e-5, "quadrature equivalence");
    double c0 = 1e300;
    bool positive = true;
    for (int i = 1; i <= 9; ++i) {
        const auto t = spectrum_table(0.1 * i, 100);
        positive = positive && t.all_positive();
        c0 = std::min(c0, t.c0);
    }
    o.require(positive, "gamma_n > 0");
    o.require(c0 > 0.0, "C0 > 0");
    o.detail << " worst relative error " << worst << ", min C0 over beta 0.1..0.9 = " << c0;
}

void c7(Outcome& o) {
    const auto me = PolygonModel::euler(2, 1.0);
    const auto ce = default_config(me);
    const auto Je = jacobian_fd(std::vector<double>(ce.modes, 0.0), 0.0, me, make_grid(ce.nodes), ce);
    double de = 0.0;
    for (Eigen::Index i = 0; i < Je.rows(); ++i)
        for (Eigen::Index k = 0; k < Je.cols(); ++k)
            de = std::max(de, std::abs(Je(i, k) - (i == k ? euler_diagonal(static_cast<int>(k + 1)) : 0.0)));
    const auto ms = PolygonModel::sqg(3, 1.0, 0.5);
    const auto cs = default_config(ms);
    const auto Js = jacobian_fd(std::vector<double>(cs.modes, 0.0), 0.0, ms, make_grid(cs.nodes), cs);
    double ds = 0.0;
    for (Eigen::Index i = 0; i < Js.rows(); ++i)
        for (Eigen::Index k = 0; k < Js.cols(); ++k) {
            const int n = static_cast<int>(k + 1);
            ds = std::max(ds, std::abs(Js(i, k) - (i == k ? spectral_prefactor(0.5) * gamma_n(0.5, n) : 0.0)));
        }
    o.require(de < 1e-6, "Euler");
    o.require(ds < 1e-4, "SQG");
    o.detail << " Euler " << Je.rows() << "x" << Je.cols() << " max deviation " << de << ", SQG " << Js.rows() << "x"
             << Js.cols() << " max deviation " << ds;
}

void c8_run(Outcome& o, const PolygonModel& m, double eps, int steps, const std::string& tag) {
    const auto cfg = default_config(m);
    const auto run = continuation(m, eps, steps, cfg);
    o.require(run.completed, tag + " continuation");
    if (run.states.empty()) return;
    VState v = run.states.back();
    const auto rep = validate_vstate(v);
    o.require(rep.passed && rep.pointwise_residual < cfg.validation_tol, tag + " validation");
    bool monotone = true;
    double prev = 0.0;
    for (const auto& s : run.states) {
        const double n = coeff_norm(s.shape);
        monotone = monotone && n > prev;
        prev = n;
    }
    const double first = coeff_norm(run.states.front().shape) / run.states.front().eps;
    const double last = coeff_norm(v.shape) / v.eps;
    // ||a|| shrinks with eps: monotone along the run and proportional to eps
    o.require(monotone && std::abs(first / last - 1) < 0.1, tag + " ||a|| -> 0");
    o.detail << " " << tag << ": eps " << v.eps << ", omega " << v.omega << ", residual " << rep.pointwise_residual
             << " on " << rep.nodes << " nodes, ||a||/eps " << first << " -> " << last << ";";
}

void c8(Outcome& o) {
    c8_run(o, PolygonModel::euler(2, 1.0), 0.05, 10, "Euler N=2");
    c8_run(o, PolygonModel::sqg(3, 1.0, 0.5), 0.02, 5, "SQG N=3 beta=0.5");
}

void c9(Outcome& o) {
    const fs::path dir = fs::temp_directory_path() / ("vpoly_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<std::string> files;
    for (const std::string tag : {"a", "b"}) {
        const auto f = [&](const std::string& n) { return (dir / (tag + "_" + n)).string(); };
        const std::vector<std::vector<std::string>> cmds = {
            {"vpoly", "vstate-solve", "--n", "2", "--eps", "0.05", "--steps", "10", "--out", f("vstate.json"),
             "--contours", f("contours.csv"), "--run-out", f("run.json")},
            {"vpoly", "spectrum", "--beta", "0.5", "--n-max", "50", "--csv", f("spectrum.csv"), "--json", f("spectrum.json")},
            {"vpoly", "points", "--n", "4", "--kind", "sqg", "--beta", "0.5", "--csv", f("trajectory.csv"), "--summary",
             f("points.json")},
            {"vpoly", "omega", "--n", "5", "--out", f("omega.json")},
        };
        for (const auto& c : cmds) {
            std::ostringstream out, err;
            const int rc = cli::run(c, out, err);
            o.require(rc == 0, c[1] + " exit code");
        }
    }
    std::size_t compared = 0;
    for (const std::string n : {"vstate.json", "contours.csv", "run.json", "spectrum.csv", "spectrum.json",
                                "trajectory.csv", "points.json", "omega.json"}) {
        const auto a = slurp(dir / ("a_" + n));
        const auto b = slurp(dir / ("b_" + n));
        o.require(!a.empty() && a == b, n + " identical");
        ++compared;
    }
    fs::remove_all(dir);
    o.detail << " " << compared << " data files compared byte for byte";
}

}  // namespace

int main() {
    criterion(1, "Thomson angular velocity (Euler)", c1);
    criterion(2, "Point-vortex choreography under RK4", c2);
    criterion(3, "Trivial roots", c3);
    criterion(4, "Odd symmetry and Omega closure", c4);
    criterion(5, "Omega(0,f) = Omega_0", c5);
    criterion(6, "Spectral equivalence and positivity", c6);
    criterion(7, "Jacobian at the origin", c7);
    criterion(8, "V-state construction", c8);
    criterion(9, "Determinism", c9);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
