#pragma once

// Residuals of the bilinear identities satisfied by (or refuted for) the
// components of a decomposed bispinor. Each identity is a homogeneous
// quadratic in the components, so residuals are divided by |T|^2 and the
// verdict is scale-invariant.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dkspin/decomposition.hpp"

namespace dk {

struct IdentityResidual
{
    std::string index;
    double magnitude = 0.0;  //!< |raw residual| / scale
};

struct IdentityReport
{
    std::string name;
    std::vector<IdentityResidual> residuals;
    double max_residual = 0.0;
    double scale = 1.0;  //!< normalizer applied to every raw residual
    double tolerance = kDefaultTolerance;
    bool holds = true;
};

namespace detail {

inline double identity_scale(const TensorSet& t)
{
    const double s = t.norm_squared();
    return s > 0.0 ? s : 1.0;
}

inline IdentityReport make_report(std::string name, const std::vector<std::pair<std::string, Complex>>& raw,
                                  double scale, double tolerance)
{
    IdentityReport r;
    r.name = std::move(name);
    r.scale = scale;
    r.tolerance = tolerance;
    for (const auto& [label, value] : raw) {
        const double m = std::abs(value) / scale;
        r.residuals.push_back({label, m});
        r.max_residual = std::max(r.max_residual, m);
    }
    r.holds = r.max_residual < tolerance;
    return r;
}

/// sum_b Psi^{ab} x_b for an upper-index vector x.
inline std::array<Complex, 4> tensor_contract(const TensorSet& t, const std::array<Complex, 4>& x)
{
    const auto x_low = lower(x);
    std::array<Complex, 4> out{};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) out[a] += t.tensor_at(a, b) * x_low[b];
    }
    return out;
}

inline std::string free_index(const char* prefix, int a) { return std::string(prefix) + "[a=" + std::to_string(a) + "]"; }

}  // namespace detail

/// Psi^a tPsi_a.
inline IdentityReport residual_orthogonality(const TensorSet& t, double tolerance = kDefaultTolerance)
{
    return detail::make_report("orthogonality", {{"Psi^a tPsi_a", minkowski_contract(t.vector, t.pseudovector)}},
                               detail::identity_scale(t), tolerance);
}

/// Psi^{ab} Psi_b + tPsi tPsi^a and Psi^{ab} tPsi_b - tPsi Psi^a, one per free index.
inline IdentityReport residual_fierz(const TensorSet& t, double tolerance = kDefaultTolerance)
{
    const auto tv = detail::tensor_contract(t, t.vector);
    const auto tpv = detail::tensor_contract(t, t.pseudovector);
    std::vector<std::pair<std::string, Complex>> raw;
    for (int a = 0; a < 4; ++a) {
        raw.emplace_back(detail::free_index("vector", a), tv[a] + t.pseudoscalar * t.pseudovector[a]);
    }
    for (int a = 0; a < 4; ++a) {
        raw.emplace_back(detail::free_index("pseudovector", a), tpv[a] - t.pseudoscalar * t.vector[a]);
    }
    return detail::make_report("fierz", raw, detail::identity_scale(t), tolerance);
}

struct AnsatzCoefficients
{
    Complex alpha{-1.0};
    Complex beta{1.0};
    Complex rho{};
    Complex sigma{};
};

/// Psi^{ab} Psi_b - alpha tPsi tPsi^a - rho Psi Psi^a and
/// Psi^{ab} tPsi_b - beta tPsi Psi^a - sigma Psi tPsi^a.
inline IdentityReport residual_quad_ansatz(const TensorSet& t, const AnsatzCoefficients& c,
                                           double tolerance = kDefaultTolerance)
{
    const auto tv = detail::tensor_contract(t, t.vector);
    const auto tpv = detail::tensor_contract(t, t.pseudovector);
    std::vector<std::pair<std::string, Complex>> raw;
    for (int a = 0; a < 4; ++a) {
        raw.emplace_back(detail::free_index("vector", a),
                         tv[a] - c.alpha * t.pseudoscalar * t.pseudovector[a] - c.rho * t.scalar * t.vector[a]);
    }
    for (int a = 0; a < 4; ++a) {
        raw.emplace_back(detail::free_index("pseudovector", a),
                         tpv[a] - c.beta * t.pseudoscalar * t.vector[a] - c.sigma * t.scalar * t.pseudovector[a]);
    }
    return detail::make_report("quad_ansatz", raw, detail::identity_scale(t), tolerance);
}

struct AnsatzFit
{
    AnsatzCoefficients coefficients;
    double residual_floor = 0.0;     //!< RMS of normalized residuals at the optimum
    double min_sample_max = 0.0;     //!< smallest per-sample max residual at the optimum
    std::size_t samples = 0;
};

/// Least-squares choice of (alpha, beta, rho, sigma) shared by all samples.
inline AnsatzFit fit_quad_ansatz(std::span<const TensorSet> samples)
{
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXcd lhs_v(4 * n, 2), lhs_p(4 * n, 2);
    Eigen::VectorXcd rhs_v(4 * n), rhs_p(4 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const TensorSet& t = samples[static_cast<std::size_t>(k)];
        const double w = 1.0 / detail::identity_scale(t);
        const auto tv = detail::tensor_contract(t, t.vector);
        const auto tpv = detail::tensor_contract(t, t.pseudovector);
        for (int a = 0; a < 4; ++a) {
            const Eigen::Index row = 4 * k + a;
            lhs_v(row, 0) = w * t.pseudoscalar * t.pseudovector[a];
            lhs_v(row, 1) = w * t.scalar * t.vector[a];
            rhs_v(row) = w * tv[a];
            lhs_p(row, 0) = w * t.pseudoscalar * t.vector[a];
            lhs_p(row, 1) = w * t.scalar * t.pseudovector[a];
            rhs_p(row) = w * tpv[a];
        }
    }
    const Eigen::Vector2cd x_v = lhs_v.colPivHouseholderQr().solve(rhs_v);
    const Eigen::Vector2cd x_p = lhs_p.colPivHouseholderQr().solve(rhs_p);

    AnsatzFit fit;
    fit.samples = samples.size();
    fit.coefficients = {x_v[0], x_p[0], x_v[1], x_p[1]};
    if (n == 0) return fit;

    const Eigen::VectorXcd r_v = lhs_v * x_v - rhs_v;
    const Eigen::VectorXcd r_p = lhs_p * x_p - rhs_p;
    fit.residual_floor = std::sqrt((r_v.squaredNorm() + r_p.squaredNorm()) / static_cast<double>(8 * n));
    fit.min_sample_max = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double m = std::max(r_v.segment(4 * k, 4).cwiseAbs().maxCoeff(),
                                  r_p.segment(4 * k, 4).cwiseAbs().maxCoeff());
        fit.min_sample_max = std::min(fit.min_sample_max, m);
    }
    return fit;
}

/// s.s, t.t and s.t - (mu nu / 2)(AD - BC)^2 for a pair built as
/// psi = (mu A, mu B, nu C, nu D) from phi.
inline IdentityReport residual_isotropy(const TensorSet& t, Complex mu, Complex nu, const Spinor4& phi,
                                        double tolerance = kDefaultTolerance)
{
    const auto st = isotropic_pair(t);
    const Complex det = phi.a * phi.d - phi.b * phi.c;
    return detail::make_report("isotropy",
                               {{"s.s", dot3(st.s, st.s)},
                                {"t.t", dot3(st.t, st.t)},
                                {"s.t", dot3(st.s, st.t) - 0.5 * mu * nu * det * det}},
                               detail::identity_scale(t), tolerance);
}

/// (nu - mu) Psi^a - i (nu + mu) tPsi^a for the same blockwise-proportional pair.
inline IdentityReport residual_vector_proportionality(const TensorSet& t, Complex mu, Complex nu,
                                                      double tolerance = kDefaultTolerance)
{
    std::vector<std::pair<std::string, Complex>> raw;
    for (int a = 0; a < 4; ++a) {
        raw.emplace_back(detail::free_index("vector", a), (nu - mu) * t.vector[a] - kI * (nu + mu) * t.pseudovector[a]);
    }
    // linear in the components, so normalize by |T|
    return detail::make_report("vector_proportionality", raw, std::sqrt(detail::identity_scale(t)), tolerance);
}

}  // namespace dk
