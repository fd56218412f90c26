#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "vpoly/linear_theory.hpp"
#include "vpoly/point_vortex.hpp"
#include "vpoly/vstate_solver.hpp"

using namespace vpoly;
using vpoly::testing::max_abs;

namespace {
constexpr double kPi = std::numbers::pi;

SolverConfig small_euler() {
    SolverConfig c;
    c.modes = 16;
    c.nodes = 64;
    return c;
}

double coeff_norm(const FourierShape& f) {
    double s = 0.0;
    for (double a : f.coeffs) s += a * a;
    return std::sqrt(s);
}

// Shoelace area of S samples of eps (e^{it} + p sum a_n e^{-int}) taken exactly:
// each Fourier mode k contributes (S/2) |c_k|^2 sin(2 pi k / S).
double sampled_area_oracle(double eps, double p, const FourierShape& f, std::size_t S) {
    const double s = static_cast<double>(S);
    double a = std::sin(2 * kPi / s);
    for (std::size_t k = 0; k < f.modes(); ++k) {
        const double n = static_cast<double>(k + 1);
        a -= p * p * f.coeffs[k] * f.coeffs[k] * std::sin(2 * kPi * n / s);
    }
    return 0.5 * s * eps * eps * a;
}

const ContinuationRun& euler_run() {
    static const ContinuationRun run = [] {
        SolverConfig c = default_config(PolygonModel::euler(2, 1.0));
        return continuation(PolygonModel::euler(2, 1.0), 0.05, 10, c);
    }();
    return run;
}
}  // namespace

TEST_CASE("residual vanishes at the trivial root") {
    const auto g = make_grid(64);
    const std::vector<double> zero(16, 0.0);
    CHECK(max_abs(assemble_residual(zero, 0.0, PolygonModel::euler(3, 1.0), g, small_euler())) < 1e-12);
    SolverConfig s = small_euler();
    s.modes = 8;
    CHECK(max_abs(assemble_residual(std::vector<double>(8, 0.0), 0.0, PolygonModel::sqg(3, 1.0, 0.5), make_grid(128), s)) <
          5e-11);
    CHECK_THROWS_AS(assemble_residual(std::vector<double>(5, 0.0), 0.0, PolygonModel::euler(3, 1.0), g, small_euler()),
                    InvalidArgument);
}

TEST_CASE("Jacobian at the origin is the diagonal linear operator") {
    SUBCASE("Euler") {
        const auto cfg = small_euler();
        const auto J = jacobian_fd(std::vector<double>(cfg.modes, 0.0), 0.0, PolygonModel::euler(2, 1.0),
                                   make_grid(cfg.nodes), cfg);
        for (Eigen::Index i = 0; i < J.rows(); ++i)
            for (Eigen::Index k = 0; k < J.cols(); ++k) {
                const double expected = i == k ? static_cast<double>(k + 1) / (2 * kPi) : 0.0;
                CHECK(std::abs(J(i, k) - expected) < 1e-6);
            }
    }
    SUBCASE("SQG") {
        SolverConfig cfg;
        cfg.modes = 8;
        cfg.nodes = 128;
        for (double b : {0.25, 0.5, 0.75}) {
            const auto J = jacobian_fd(std::vector<double>(cfg.modes, 0.0), 0.0, PolygonModel::sqg(3, 1.0, b),
                                       make_grid(cfg.nodes), cfg);
            for (Eigen::Index i = 0; i < J.rows(); ++i)
                for (Eigen::Index k = 0; k < J.cols(); ++k) {
                    const int n = static_cast<int>(k + 1);
                    const double expected = i == k ? spectral_prefactor(b) * gamma_n(b, n) : 0.0;
                    CHECK(std::abs(J(i, k) - expected) < 1e-4);
                }
        }
    }
}

TEST_CASE("Newton at eps = 0 returns the circle") {
    const auto v = newton_solve(0.0, PolygonModel::euler(3, 1.0), FourierShape{}, small_euler());
    CHECK(v.iterations == 0);
    CHECK(coeff_norm(v.shape) == 0.0);
    CHECK(v.omega == doctest::Approx(omega_newtonian(3, 1.0)).epsilon(1e-12));
}

TEST_CASE("Newton from a perturbed start returns to the circle at eps = 0") {
    const auto v = newton_solve(0.0, PolygonModel::euler(2, 1.0), FourierShape({0.02, -0.01, 0.005}), small_euler());
    CHECK(coeff_norm(v.shape) < 1e-10);
    CHECK(v.iterations >= 1);
}

TEST_CASE("Euler solve at eps = 0.05") {
    const auto m = PolygonModel::euler(2, 1.0);
    const auto cfg = default_config(m);
    const auto v = newton_solve(0.05, m, FourierShape{}, cfg);
    CHECK(v.projected_residual < cfg.tol);
    CHECK(std::abs(v.omega - omega_newtonian(2, 1.0)) < 0.05);
    CHECK(coeff_norm(v.shape) > 0.0);

    // tightening the tolerance moves the solution by no more than the looser tolerance allows
    SolverConfig tight = cfg;
    tight.tol = 1e-12;
    const auto w = newton_solve(0.05, m, v.shape, tight);
    for (std::size_t k = 0; k < cfg.modes; ++k) CHECK(std::abs(w.shape.coeffs[k] - v.shape.coeffs[k]) < 1e-8);
}

TEST_CASE("Euler continuation to eps = 0.05") {
    const auto& run = euler_run();
    REQUIRE(run.completed);
    REQUIRE(run.states.size() == 10);
    CHECK(run.eps_reached == doctest::Approx(0.05));
    double prev = 0.0;
    for (const auto& v : run.states) {
        const double n = coeff_norm(v.shape);
        CHECK(n > prev);
        prev = n;
        // N = 2 patches are symmetric under z -> conj(z): only real coefficients and even rotation pairs
        CHECK(v.projected_residual < 1e-10);
    }
    // a(eps) -> 0 linearly: the first coefficient over eps stays close to its limit
    const double r1 = run.states.front().shape.coeffs[0] / run.states.front().eps;
    const double r10 = run.states.back().shape.coeffs[0] / run.states.back().eps;
    MESSAGE("a1/eps at first and last step: " << r1 << ", " << r10);
    CHECK(std::abs(r1 - r10) < 0.05 * std::abs(r10));
}

TEST_CASE("N = 2 state has the mirror symmetry of the pair") {
    // z -> -conj(z) maps patch 0 onto patch 1, so F must stay odd and the contour of
    // patch 1 must be the reflection of patch 0.
    const auto& v = euler_run().states.back();
    const auto c = patch_contours(v, 128);
    for (std::size_t j = 0; j < 128; ++j) {
        const std::size_t jr = (128 - j) % 128;
        CHECK(std::abs(c[1][j] + c[0][j]) < 1e-12);
        CHECK(std::abs(c[0][jr] - std::conj(c[0][j])) < 1e-10);
    }
}

TEST_CASE("step count does not change the endpoint") {
    const auto m = PolygonModel::euler(2, 1.0);
    const auto a = continuation(m, 0.05, 5, default_config(m));
    const auto& b = euler_run();
    REQUIRE(a.completed);
    for (std::size_t k = 0; k < a.states.back().shape.modes(); ++k)
        CHECK(std::abs(a.states.back().shape.coeffs[k] - b.states.back().shape.coeffs[k]) < 1e-8);
    CHECK(std::abs(a.states.back().omega - b.states.back().omega) < 1e-10);
}

TEST_CASE("continuation failures") {
    const auto m = PolygonModel::euler(2, 1.0);
    SolverConfig c = small_euler();
    c.max_iter = 1;
    c.tol = 1e-30;
    CHECK_THROWS_AS(continuation(m, 0.05, 2, c), SolverDiverged);
    try {
        continuation(m, 0.05, 2, c);
    } catch (const SolverDiverged& e) {
        CHECK(e.history().size() >= 2);
    }
    CHECK_THROWS_AS(continuation(m, 10.0, 2, small_euler()), InvalidArgument);
    CHECK_THROWS_AS(continuation(m, 0.05, 0, small_euler()), InvalidArgument);
    SolverConfig bad = small_euler();
    bad.nodes = 32;
    CHECK_THROWS_AS(continuation(m, 0.05, 2, bad), InvalidArgument);
}

TEST_CASE("validation") {
    auto v = newton_solve(0.0, PolygonModel::euler(3, 1.0), FourierShape{}, small_euler());
    auto rep = validate_vstate(v);
    CHECK(rep.passed);
    CHECK(rep.nodes == 256);
    CHECK(v.validated);

    VState e = euler_run().states.back();
    rep = validate_vstate(e);
    MESSAGE("Euler validation residual " << rep.pointwise_residual << " drift " << rep.omega_drift);
    CHECK(rep.passed);
    CHECK(rep.pointwise_residual < 1e-8);
    CHECK(rep.omega_drift < 1e-10);

    VState corrupt = e;
    corrupt.shape.coeffs[1] += 1e-3;
    rep = validate_vstate(corrupt);
    CHECK_FALSE(rep.passed);
    CHECK_FALSE(corrupt.validated);
}

TEST_CASE("patch contours") {
    SUBCASE("circles at the trivial root") {
        const auto v = newton_solve(0.0, PolygonModel::euler(4, 1.5), FourierShape{}, small_euler());
        VState c = v;
        c.eps = 0.1;
        const auto cs = patch_contours(c, 64);
        REQUIRE(cs.size() == 4);
        for (int m = 0; m < 4; ++m) {
            const cplx centre = 1.5 * polygon_vertex(m, 4);
            CHECK(cs[m].size() == 65);
            CHECK(cs[m].front() == cs[m].back());
            for (const auto& z : cs[m]) CHECK(std::abs(std::abs(z - centre) - 0.1) < 1e-14);
        }
    }
    SUBCASE("area and separation of a computed state") {
        const auto& v = euler_run().states.back();
        const std::size_t S = 256;
        const auto cs = patch_contours(v, S);
        const double expected = sampled_area_oracle(v.eps, v.eps, v.shape, S);
        for (const auto& c : cs) CHECK(polygon_area(c) == doctest::Approx(expected).epsilon(1e-12));
        double exact = 1.0;
        for (std::size_t k = 0; k < v.shape.modes(); ++k)
            exact -= v.eps * v.eps * static_cast<double>(k + 1) * v.shape.coeffs[k] * v.shape.coeffs[k];
        CHECK(polygon_area(cs[0]) == doctest::Approx(kPi * v.eps * v.eps * exact).epsilon(1e-3));
        double gap = 1e300;
        for (const auto& z : cs[0])
            for (const auto& y : cs[1]) gap = std::min(gap, std::abs(z - y));
        CHECK(gap > 1.5);
    }
    CHECK_THROWS_AS(patch_contours(euler_run().states.back(), 2), InvalidArgument);
}

TEST_CASE("JSON round trip") {
    VState v = euler_run().states.back();
    validate_vstate(v);
    const auto text = vstate_to_json(v);
    const auto back = vstate_from_json(text);
    CHECK(back.model.N == 2);
    CHECK(back.eps == v.eps);
    CHECK(back.omega == v.omega);
    CHECK(back.shape.coeffs == v.shape.coeffs);
    CHECK(back.validated == v.validated);
    CHECK(back.config.nodes == v.config.nodes);
    CHECK(vstate_to_json(back) == text);
    CHECK(text.find("\"patch_amplitude\"") != std::string::npos);

    SolverConfig s;
    s.modes = 8;
    s.nodes = 128;
    auto q = newton_solve(0.0, PolygonModel::sqg(3, 1.0, 0.5), FourierShape{}, s);
    const auto qt = vstate_to_json(q);
    const auto qb = vstate_from_json(qt);
    CHECK(qb.model.kind == EquationKind::sqg);
    CHECK(qb.model.beta == 0.5);
    CHECK(qb.config.rule == SingularRule::spectral);
    CHECK(vstate_to_json(qb) == qt);

    CHECK_THROWS_AS(vstate_from_json("{"), InvalidArgument);
    CHECK_THROWS_AS(vstate_from_json(R"({"kind":"navier"})"), InvalidArgument);
}

TEST_CASE("contour CSV") {
    const auto csv = contours_to_csv(patch_contours(euler_run().states.back(), 8));
    CHECK(csv.rfind("patch_index,re,im\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 9);
}
