#include "vpoly/sqg_patch.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "vpoly/linear_theory.hpp"
#include "vpoly/point_vortex.hpp"

namespace vpoly {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

using Gauss16 = boost::math::quadrature::gauss<double, 16>;

void require_sqg(const PolygonModel& model, double eps) {
    model.validate();
    if (model.kind != EquationKind::sqg) throw InvalidArgument("SQG functional called with an Euler model");
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw InvalidArgument("SQG functional requires eps >= 0");
}

// ((1 + x)^{-beta/2} - 1) / x, continuous at x = 0.
double phi(double x, double beta) {
    if (x == 0.0) return -0.5 * beta;
    return std::expm1(-0.5 * beta * std::log1p(x)) / x;
}

// -beta int_0^1 (Re[A conj G] + t s |G|^2) / |A + t s G|^{2+beta} dt
double taylor_gl(cplx A, cplx G, double s, double beta) {
    const double re = std::real(A * std::conj(G));
    const double g2 = std::norm(G);
    auto integrand = [&](double x) {
        const double t = 0.5 * (x + 1.0);
        const double r2 = std::norm(A + t * s * G);
        return (re + t * s * g2) * std::pow(r2, -1.0 - 0.5 * beta);
    };
    return -0.5 * beta * Gauss16::integrate(integrand, -1.0, 1.0);
}

double kernel_power(double r, double beta) { return std::pow(r, -beta); }

struct WeightKey {
    std::size_t nodes;
    std::uint64_t beta_bits;
    int rule;
    auto operator<=>(const WeightKey&) const = default;
};

std::vector<double> build_weights(std::size_t M, double beta, SingularRule rule) {
    const double h = 2.0 * kPi / static_cast<double>(M);
    std::vector<double> W(M);
    if (rule == SingularRule::spectral) {
        // Fourier coefficients of |2 sin(x/2)|^{-beta}
        const std::size_t P = M / 2;
        std::vector<double> c(P);
        c[0] = gamma_fn(1.0 - beta) / (gamma_fn(1.0 - 0.5 * beta) * gamma_fn(1.0 - 0.5 * beta));
        for (std::size_t p = 1; p < P; ++p) {
            const double pd = static_cast<double>(p);
            c[p] = c[p - 1] * (0.5 * beta + pd - 1.0) / (pd - 0.5 * beta);
        }
        for (std::size_t d = 0; d < M; ++d) {
            const double x = h * (static_cast<double>(d) - 0.5);
            double acc = 0.0;
            for (std::size_t p = P - 1; p >= 1; --p) acc += c[p] * std::cos(static_cast<double>(p) * x);
            W[d] = h * (c[0] + 2.0 * acc);
        }
    } else {
        for (std::size_t d = 0; d < M; ++d) {
            const double x = h * (static_cast<double>(d) - 0.5);
            W[d] = h * kernel_power(std::abs(2.0 * std::sin(0.5 * x)), beta);
        }
    }
    return W;
}

std::size_t offset(std::size_t j, std::size_t k, std::size_t M) { return (j + M - k) % M; }

struct Context {
    double eps;
    double u;  // eps^{1+beta}
    double beta;
    double cb;
    double kappa;
    const PolygonModel& model;
    const CircleGrid& grid;
    const SqgOptions& opts;
};

// Singular integral oint |w_j - xi|^{-beta} S(xi) dxi from the samples S_k = S(xi_k)
// and the diagonal limit S(w_j).
cplx singular_integral(std::span<const cplx> S, cplx S_diag, std::size_t j, const std::vector<double>& W,
                       const Context& ctx) {
    const std::size_t M = ctx.grid.nodes;
    cplx acc = 0.0;
    if (ctx.opts.rule == SingularRule::subtraction) {
        for (std::size_t k = 0; k < M; ++k) acc += W[offset(j, k, M)] * (S[k] - S_diag) * kI * ctx.grid.xi[k];
        acc += S_diag * kI * ctx.kappa * ctx.grid.w[j];
    } else {
        for (std::size_t k = 0; k < M; ++k) acc += W[offset(j, k, M)] * S[k] * kI * ctx.grid.xi[k];
    }
    return acc;
}

[[noreturn]] void radius_violation(const char* term, std::size_t j, std::size_t k, int m) {
    std::ostringstream os;
    os << "Taylor radius violated in " << term << " at nodes (" << j << ", " << k << ")";
    if (m > 0) os << ", neighbour " << m;
    throw TaylorRadiusError(os.str());
}

SqgTerms terms_from_samples(const ShapeSamples& s, const Context& ctx) {
    const std::size_t M = ctx.grid.nodes;
    const double beta = ctx.beta;
    const double eps = ctx.eps;
    const double u = ctx.u;
    const bool gl = ctx.opts.taylor == TaylorRule::gauss_legendre;
    const auto& W = singular_weights(M, beta, ctx.opts.rule);
    const double pref = ctx.cb / kPi;
    const double h = ctx.grid.spacing();
    const double overlap_tol = 1e-8 * std::abs(ctx.model.l);

    SqgTerms out;
    out.J1.assign(M, 0.0);
    out.J2.assign(M, 0.0);
    out.J3.assign(M, 0.0);
    out.J4.assign(M, 0.0);

    std::vector<cplx> S1(M), S2(M);
    for (std::size_t j = 0; j < M; ++j) {
        const cplx w = ctx.grid.w[j];

        // self-interaction
        for (std::size_t k = 0; k < M; ++k) {
            const cplx dq = (s.fw[j] - s.fxi[k]) / (w - ctx.grid.xi[k]);
            if (!(u * std::abs(dq) < 1.0)) radius_violation("J1", j, k, 0);
            const double q = 2.0 * dq.real() + u * std::norm(dq);
            const double ph = phi(u * q, beta);
            S1[k] = gl ? taylor_gl(1.0, dq, u, beta) : q * ph;
            S2[k] = s.dfxi[k] * (1.0 + u * q * ph);
        }
        const cplx dw = s.dfw[j];
        const double qd = 2.0 * dw.real() + u * std::norm(dw);
        const double phd = phi(u * qd, beta);
        const cplx S1d = gl ? taylor_gl(1.0, dw, u, beta) : qd * phd;
        const cplx S2d = dw * (1.0 + u * qd * phd);
        out.J1[j] = pref * singular_integral(S1, S1d, j, W, ctx);
        out.J2[j] = pref * singular_integral(S2, S2d, j, W, ctx);

        // neighbour patches; smooth integrands, plain trapezoid
        const cplx fw = s.fw[j];
        cplx j3 = 0.0;
        cplx j4 = 0.0;
        for (int m = 1; m < ctx.model.N; ++m) {
            const cplx e = polygon_vertex(m, ctx.model.N);
            const cplx A = ctx.model.l * (1.0 - e);
            const double a2 = std::norm(A);
            const double a_pow = std::pow(a2, -0.5 * beta);
            cplx acc3 = 0.0;
            cplx acc4 = 0.0;
            for (std::size_t k = 0; k < M; ++k) {
                const cplx xi = ctx.grid.xi[k];
                const cplx G = w - e * xi + u * (fw - e * s.fxi[k]);
                if (!(eps * std::abs(G) < std::abs(A))) radius_violation("J3", j, k, m);
                if (std::abs(A + eps * G) < overlap_tol) {
                    std::ostringstream os;
                    os << "patch overlap: neighbour " << m << " at nodes (" << j << ", " << k << ")";
                    throw PatchOverlapError(os.str());
                }
                const double q = (2.0 * std::real(A * std::conj(G)) + eps * std::norm(G)) / a2;
                const double ph = phi(eps * q, beta);
                const double t3 = gl ? taylor_gl(A, G, eps, beta) : a_pow * q * ph;
                const cplx dxi = kI * xi * h;
                acc3 += t3 * dxi;
                acc4 += s.dfxi[k] * (a_pow * (1.0 + eps * q * ph)) * dxi;
            }
            j3 += e * acc3;
            j4 += e * acc4;
        }
        out.J3[j] = pref * j3;
        out.J4[j] = pref * std::pow(eps, beta) * j4;
    }
    return out;
}

Context make_context(double eps, const PolygonModel& model, const CircleGrid& grid, const SqgOptions& opts) {
    return Context{eps,
                   std::pow(eps, 1.0 + model.beta),
                   model.beta,
                   model.c_beta(),
                   circle_kernel_integral(model.beta),
                   model,
                   grid,
                   opts};
}

std::vector<cplx> conj_total(const SqgTerms& t) {
    auto v = t.total();
    for (auto& z : v) z = std::conj(z);
    return v;
}

double closed_omega(const SqgTerms& t, const ShapeSamples& s, const Context& ctx) {
    return omega_closure(conj_total(t), ctx.eps, ctx.u, s, ctx.model, ctx.grid,
                         std::abs(omega_sqg(ctx.model.N, ctx.model.l, ctx.beta, ctx.model.cbeta)));
}

std::vector<double> residual_samples(double omega, const SqgTerms& t, const ShapeSamples& s, const Context& ctx) {
    const std::size_t M = ctx.grid.nodes;
    const double mu = mu_beta(ctx.beta, ctx.model.cbeta);
    const auto J = t.total();
    std::vector<double> F(M);
    for (std::size_t j = 0; j < M; ++j) {
        const cplx w = ctx.grid.w[j];
        const cplx phi_bar = ctx.eps * (std::conj(w) + ctx.u * s.fw_conj[j]);
        const cplx bracket = std::conj(J[j]) + kI * omega * (phi_bar + ctx.model.l);
        F[j] = std::real(bracket * w * (1.0 + ctx.u * s.dfw[j])) + mu * std::imag(s.dfw[j]);
    }
    return F;
}

}  // namespace

std::string to_string(SingularRule rule) {
    switch (rule) {
        case SingularRule::plain: return "plain";
        case SingularRule::subtraction: return "subtraction";
        case SingularRule::spectral: return "spectral";
    }
    return "unknown";
}

SingularRule singular_rule_from_string(const std::string& name) {
    if (name == "plain") return SingularRule::plain;
    if (name == "subtraction") return SingularRule::subtraction;
    if (name == "spectral") return SingularRule::spectral;
    throw InvalidArgument("unknown singular rule '" + name + "' (expected plain, subtraction or spectral)");
}

double taylor_split(cplx A, cplx B, double beta) {
    require_beta(beta);
    if (!(std::abs(B) < std::abs(A))) throw TaylorRadiusError("Taylor radius violated: |B| >= |A|");
    return taylor_gl(A, B, 1.0, beta);
}

std::vector<cplx> SqgTerms::total() const {
    std::vector<cplx> t(J1.size());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = J1[j] + J2[j] + J3[j] + J4[j];
    return t;
}

const std::vector<double>& singular_weights(std::size_t nodes, double beta, SingularRule rule) {
    static std::mutex mtx;
    static std::map<WeightKey, std::unique_ptr<std::vector<double>>> cache;
    require_beta(beta);
    std::uint64_t bits = 0;
    std::memcpy(&bits, &beta, sizeof bits);
    // subtraction shares the plain kernel table
    const int r = rule == SingularRule::spectral ? 1 : 0;
    const WeightKey key{nodes, bits, r};
    std::lock_guard lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::make_unique<std::vector<double>>(build_weights(nodes, beta, rule))).first;
    return *it->second;
}

SqgTerms j_sqg(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
               const SqgOptions& opts) {
    require_sqg(model, eps);
    require_admissible(f, opts.sigma);
    const auto ctx = make_context(eps, model, grid, opts);
    return terms_from_samples(sample_shape(f, grid), ctx);
}

double omega_closure_sqg(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                         const SqgOptions& opts) {
    require_sqg(model, eps);
    require_admissible(f, opts.sigma);
    const auto ctx = make_context(eps, model, grid, opts);
    const auto s = sample_shape(f, grid);
    return closed_omega(terms_from_samples(s, ctx), s, ctx);
}

std::vector<double> f_sqg(double omega, double eps, const FourierShape& f, const PolygonModel& model,
                          const CircleGrid& grid, const SqgOptions& opts) {
    require_sqg(model, eps);
    require_admissible(f, opts.sigma);
    const auto ctx = make_context(eps, model, grid, opts);
    const auto s = sample_shape(f, grid);
    return residual_samples(omega, terms_from_samples(s, ctx), s, ctx);
}

SqgEvaluation evaluate_sqg(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                           const SqgOptions& opts) {
    require_sqg(model, eps);
    require_admissible(f, opts.sigma);
    const auto ctx = make_context(eps, model, grid, opts);
    const auto s = sample_shape(f, grid);
    SqgEvaluation ev;
    ev.terms = terms_from_samples(s, ctx);
    ev.omega = closed_omega(ev.terms, s, ctx);
    ev.F = residual_samples(ev.omega, ev.terms, s, ctx);
    ev.sin_coeffs = project_sin(ev.F);
    return ev;
}

TildeResult f_tilde_sqg(double eps, const FourierShape& f, const PolygonModel& model, const CircleGrid& grid,
                        const SqgOptions& opts) {
    SqgEvaluation ev = evaluate_sqg(eps, f, model, grid, opts);
    TildeResult r;
    r.omega = ev.omega;
    r.f1 = ev.sin_coeffs.front();
    r.coeffs.assign(ev.sin_coeffs.begin() + 1, ev.sin_coeffs.end());
    r.samples = std::move(ev.F);
    return r;
}

}  // namespace vpoly
