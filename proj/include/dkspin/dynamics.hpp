#pragma once

// Plane-wave check of the Dirac-Kahler tensor field equations. The product
// of two plane waves exp(-i p.x) oscillates at momentum P = 2p, so every
// derivative becomes multiplication by -i P_l and the boson mass is m = 2M.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dkspin/decomposition.hpp"
#include "dkspin/identities.hpp"

namespace dk {

using Momentum = std::array<double, 4>;

inline double minkowski_square(const Momentum& p) { return p[0] * p[0] - p[1] * p[1] - p[2] * p[2] - p[3] * p[3]; }

inline Momentum on_shell_momentum(const std::array<double, 3>& k, double mass)
{
    return {std::sqrt(mass * mass + k[0] * k[0] + k[1] * k[1] + k[2] * k[2]), k[0], k[1], k[2]};
}

inline bool is_on_shell(const Momentum& p, double mass)
{
    return std::abs(minkowski_square(p) - mass * mass) < 1e-12 * mass * mass;
}

/// A plane wave amplitude * exp(-i p.x) of mass M.
struct PlaneWaveField
{
    Momentum momentum{};
    double mass = 1.0;
    Spinor4 amplitude;
};

/// u(p) with (gamma^a p_a - M) u = 0, normalized so that u = (zeta, zeta) at
/// rest; branch 0 and 1 pick zeta = (1, 0) and (0, 1).
inline Spinor4 dirac_plane_wave(const Momentum& p, double mass, int branch)
{
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    if (branch != 0 && branch != 1) throw std::invalid_argument("branch must be 0 or 1");
    if (!(p[0] > 0.0) || !is_on_shell(p, mass)) throw std::invalid_argument("momentum is not on shell");

    const auto& s = pauli();
    Mat2 p_sigma_bar = Mat2::Zero();  // p_a sigma_bar^a = E + p.sigma
    Mat2 p_sigma = Mat2::Zero();      // p_a sigma^a     = E - p.sigma
    for (int a = 0; a < 4; ++a) {
        p_sigma_bar += metric(a, a) * p[a] * s.sigma_down[a];
        p_sigma += metric(a, a) * p[a] * s.sigma_up[a];
    }
    const Mat2 id = Mat2::Identity();
    const Eigen::Vector2cd zeta = branch == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
    const double norm = std::sqrt(2.0 * mass * (p[0] + mass));
    const Eigen::Vector2cd up = (p_sigma_bar + mass * id) * zeta / norm;
    const Eigen::Vector2cd down = (p_sigma + mass * id) * zeta / norm;
    return {up[0], up[1], down[0], down[1]};
}

/// max |(gamma^a p_a - M) u| / |u|.
inline double dirac_residual(const Momentum& p, double mass, const Spinor4& u)
{
    const auto& gamma = gamma_matrices();
    Mat4 op = -mass * Mat4::Identity();
    for (int a = 0; a < 4; ++a) op += metric(a, a) * p[a] * gamma[a];
    const double n = u.norm();
    return n == 0.0 ? 0.0 : (op * u.vec()).norm() / n;
}

struct EquationEntry
{
    std::string index;
    Complex value;
};

struct EquationGroup
{
    std::string name;
    std::vector<EquationEntry> entries;
    double max_residual = 0.0;
};

struct FieldEquationReport
{
    std::string system;  //!< "linear" or "nonlinear"
    std::vector<EquationGroup> groups;
    double max_residual = 0.0;
    double tolerance = 1e-10;
    bool holds = false;
    bool singular = false;  //!< nonlinear rewrite undefined (pseudoscalar vanishes)

    /// Equations as printed, evaluated for comparison only.
    std::vector<EquationGroup> literal_diagnostics;

    // nonlinear only
    double pseudoscalar_magnitude = 0.0;
    double fierz_residual = 0.0;   //!< unnormalized max Fierz residual
    double envelope_bound = 0.0;   //!< linear max + kappa * fierz / |pseudoscalar|
};

namespace detail {

inline void finish_group(EquationGroup& g)
{
    g.max_residual = 0.0;
    for (const auto& e : g.entries) g.max_residual = std::max(g.max_residual, std::abs(e.value));
}

inline std::string idx(int l) { return "[" + std::to_string(l) + "]"; }
inline std::string idx(int m, int n) { return "[" + std::to_string(m) + "," + std::to_string(n) + "]"; }

/// Plane-wave evaluation context: d_l -> -i P_l.
struct WaveOperator
{
    Momentum p_up;  //!< P^a
    Momentum p_low; //!< P_a
    double m;

    Complex d(int l) const { return -kI * p_low[l]; }

    /// -i P^l x_l for lower-index x.
    Complex divergence(const std::array<Complex, 4>& x_low) const
    {
        Complex acc{};
        for (int l = 0; l < 4; ++l) acc += -kI * p_up[l] * x_low[l];
        return acc;
    }
};

inline Complex tensor_low(const TensorSet& t, int m, int n) { return metric(m, m) * metric(n, n) * t.tensor_at(m, n); }

/// Psi_l^a.
inline Complex tensor_mixed(const TensorSet& t, int l, int a) { return metric(l, l) * t.tensor_at(l, a); }

/// Psi_{ln} x^n for upper-index x.
inline std::array<Complex, 4> lower_contract(const TensorSet& t, const std::array<Complex, 4>& x)
{
    std::array<Complex, 4> out{};
    for (int l = 0; l < 4; ++l) {
        for (int n = 0; n < 4; ++n) out[l] += tensor_low(t, l, n) * x[n];
    }
    return out;
}

/// -1/2 eps_l^{amn} d_a Psi_mn.
inline Complex dual_curl(const WaveOperator& w, const TensorSet& t, int l)
{
    Complex acc{};
    for (int a = 0; a < 4; ++a) {
        for (int m = 0; m < 4; ++m) {
            for (int n = 0; n < 4; ++n) {
                const int e = levi_civita(l, a, m, n);
                if (e != 0) acc += metric(l, l) * e * w.d(a) * tensor_low(t, m, n);
            }
        }
    }
    return -0.5 * acc;
}

/// The five groups with vector parts given as lower-index arrays, so the
/// same code serves the linear system and its rewrite.
inline std::vector<EquationGroup> evaluate_system(const WaveOperator& w, const TensorSet& t,
                                                  const std::array<Complex, 4>& v_low,
                                                  const std::array<Complex, 4>& pv_low)
{
    std::vector<EquationGroup> g(5);
    g[0].name = "scalar";
    g[0].entries.push_back({"[]", w.divergence(v_low) + w.m * t.scalar});
    g[1].name = "pseudoscalar";
    g[1].entries.push_back({"[]", w.divergence(pv_low) + w.m * t.pseudoscalar});

    g[2].name = "vector";
    g[3].name = "pseudovector";
    for (int l = 0; l < 4; ++l) {
        Complex div_f{};
        for (int a = 0; a < 4; ++a) div_f += w.d(a) * tensor_mixed(t, l, a);
        g[2].entries.push_back({idx(l), w.d(l) * t.scalar + div_f - w.m * v_low[l]});
        g[3].entries.push_back({idx(l), w.d(l) * t.pseudoscalar + dual_curl(w, t, l) - w.m * pv_low[l]});
    }

    g[4].name = "tensor";
    for (const auto& [m, n] : kTensorPairs) {
        Complex dual{};
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                const int e = levi_civita(m, n, a, b);
                if (e != 0) dual += metric(m, m) * metric(n, n) * e * w.d(a) * pv_low[b];
            }
        }
        g[4].entries.push_back(
            {idx(m, n), w.d(m) * v_low[n] - w.d(n) * v_low[m] + dual - w.m * tensor_low(t, m, n)});
    }
    for (auto& x : g) finish_group(x);
    return g;
}

inline void finish_report(FieldEquationReport& r)
{
    r.max_residual = 0.0;
    for (const auto& g : r.groups) r.max_residual = std::max(r.max_residual, g.max_residual);
    r.holds = !r.singular && r.max_residual < r.tolerance;
}

inline WaveOperator product_wave(const PlaneWaveField& phi, const PlaneWaveField& psi, std::optional<double> boson_mass)
{
    if (phi.momentum != psi.momentum || phi.mass != psi.mass) {
        throw std::invalid_argument("plane waves must share momentum and mass");
    }
    WaveOperator w{};
    for (int a = 0; a < 4; ++a) {
        w.p_up[a] = 2.0 * phi.momentum[a];
        w.p_low[a] = metric(a, a) * w.p_up[a];
    }
    w.m = boson_mass.value_or(2.0 * phi.mass);
    return w;
}

}  // namespace detail

/// Residuals of the linear tensor system on the product of two plane waves.
/// The scalar groups use the divergence form -i P^l Psi_l + m Psi; the
/// printed gradient forms d_l Psi + m Psi_l are listed as diagnostics.
inline FieldEquationReport linear_system_residual(const PlaneWaveField& phi, const PlaneWaveField& psi,
                                                  std::optional<double> boson_mass = std::nullopt,
                                                  double tolerance = 1e-10)
{
    const auto w = detail::product_wave(phi, psi, boson_mass);
    const TensorSet t = decompose_pair(phi.amplitude, psi.amplitude);

    FieldEquationReport r;
    r.system = "linear";
    r.tolerance = tolerance;
    r.groups = detail::evaluate_system(w, t, lower(t.vector), lower(t.pseudovector));

    EquationGroup s{"scalar_gradient", {}, 0.0}, ps{"pseudoscalar_gradient", {}, 0.0};
    const auto v_low = lower(t.vector);
    const auto pv_low = lower(t.pseudovector);
    for (int l = 0; l < 4; ++l) {
        s.entries.push_back({detail::idx(l), w.d(l) * t.scalar + w.m * v_low[l]});
        ps.entries.push_back({detail::idx(l), w.d(l) * t.pseudoscalar + w.m * pv_low[l]});
    }
    detail::finish_group(s);
    detail::finish_group(ps);
    r.literal_diagnostics = {s, ps};
    detail::finish_report(r);
    return r;
}

/// Residuals of the linear system after replacing Psi_l by Psi_{ln} tPsi^n / tPsi
/// and tPsi_l by -Psi_{ln} Psi^n / tPsi. Marked singular when
/// |tPsi| <= 1e-10 |phi| |psi|.
inline FieldEquationReport nonlinear_system_residual(const PlaneWaveField& phi, const PlaneWaveField& psi,
                                                     std::optional<double> boson_mass = std::nullopt,
                                                     double tolerance = 1e-9)
{
    const auto w = detail::product_wave(phi, psi, boson_mass);
    const TensorSet t = decompose_pair(phi.amplitude, psi.amplitude);

    FieldEquationReport r;
    r.system = "nonlinear";
    r.tolerance = tolerance;
    r.pseudoscalar_magnitude = std::abs(t.pseudoscalar);
    const double scale = phi.amplitude.norm() * psi.amplitude.norm();
    if (r.pseudoscalar_magnitude <= 1e-10 * scale) {
        r.singular = true;
        r.holds = false;
        return r;
    }

    const auto f_pv = detail::lower_contract(t, t.pseudovector);  // Psi_{ln} tPsi^n
    const auto f_v = detail::lower_contract(t, t.vector);         // Psi_{ln} Psi^n
    std::array<Complex, 4> v_low{}, pv_low{};
    for (int l = 0; l < 4; ++l) {
        v_low[l] = f_pv[l] / t.pseudoscalar;
        pv_low[l] = -f_v[l] / t.pseudoscalar;
    }
    r.groups = detail::evaluate_system(w, t, v_low, pv_low);

    // printed forms of the first four equations
    EquationGroup e1{"scalar_literal", {}, 0.0}, e2{"pseudoscalar_literal", {}, 0.0};
    EquationGroup e3{"vector_literal", {}, 0.0}, e4{"pseudovector_literal", {}, 0.0};
    for (int l = 0; l < 4; ++l) {
        Complex div_f{};
        for (int a = 0; a < 4; ++a) div_f += w.d(a) * detail::tensor_mixed(t, l, a);
        e1.entries.push_back({detail::idx(l), w.d(l) * t.scalar + w.m * v_low[l]});
        e2.entries.push_back({detail::idx(l), w.d(l) * t.pseudoscalar + w.m * pv_low[l]});
        e3.entries.push_back({detail::idx(l), w.d(l) * t.scalar - t.pseudoscalar * div_f - w.m * v_low[l]});
        e4.entries.push_back(
            {detail::idx(l), w.d(l) * t.pseudoscalar + detail::dual_curl(w, t, l) - w.m * pv_low[l]});
    }
    for (auto* g : {&e1, &e2, &e3, &e4}) detail::finish_group(*g);
    r.literal_diagnostics = {e1, e2, e3, e4};

    const auto fierz = residual_fierz(t, 1.0);
    r.fierz_residual = fierz.max_residual * fierz.scale;
    double p_sum = 0.0;
    for (double x : w.p_low) p_sum += std::abs(x);
    const double kappa = w.m + 4.0 * p_sum;
    const auto linear = linear_system_residual(phi, psi, boson_mass);
    r.envelope_bound = linear.max_residual + kappa * r.fierz_residual / r.pseudoscalar_magnitude;
    detail::finish_report(r);
    return r;
}

}  // namespace dk
