#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>
#include <utility>

#include "dkspin/algebra.hpp"

namespace dk {

/// A 4-spinor (A, B, C, D) = (xi^1, xi^2, eta_1dot, eta_2dot).
struct Spinor4
{
    Complex a{}, b{}, c{}, d{};

    Complex& operator[](int i) { return i == 0 ? a : i == 1 ? b : i == 2 ? c : d; }
    Complex operator[](int i) const { return i == 0 ? a : i == 1 ? b : i == 2 ? c : d; }

    Eigen::Vector4cd vec() const { return {a, b, c, d}; }
    static Spinor4 from_vec(const Eigen::Vector4cd& v) { return {v[0], v[1], v[2], v[3]}; }

    double norm() const { return vec().norm(); }

    friend Spinor4 operator+(const Spinor4& x, const Spinor4& y)
    {
        return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
    }
    friend Spinor4 operator*(Complex s, const Spinor4& x) { return {s * x.a, s * x.b, s * x.c, s * x.d}; }
};

/// 4x4 bispinor U with 2x2 blocks [[xi, Delta], [W, eta]].
struct Bispinor
{
    Mat4 u = Mat4::Zero();

    Mat2 xi() const { return u.topLeftCorner<2, 2>(); }
    Mat2 delta() const { return u.topRightCorner<2, 2>(); }
    Mat2 w() const { return u.bottomLeftCorner<2, 2>(); }
    Mat2 eta() const { return u.bottomRightCorner<2, 2>(); }

    friend Bispinor operator+(const Bispinor& x, const Bispinor& y) { return {x.u + y.u}; }
    friend Bispinor operator*(Complex s, const Bispinor& x) { return {s * x.u}; }
};

/// Storage order of the antisymmetric tensor: 01, 02, 03, 23, 31, 12.
inline constexpr std::array<std::pair<int, int>, 6> kTensorPairs{
    {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 1}, {1, 2}}};

inline constexpr std::array<std::string_view, 6> kTensorLabels{"01", "02", "03", "23", "31", "12"};

/// Slot in kTensorPairs for (a, b) and the sign relating Psi^{ab} to the
/// stored value; slot -1 on the diagonal.
constexpr std::pair<int, int> tensor_slot(int a, int b)
{
    for (int s = 0; s < 6; ++s) {
        if (kTensorPairs[s].first == a && kTensorPairs[s].second == b) return {s, +1};
        if (kTensorPairs[s].first == b && kTensorPairs[s].second == a) return {s, -1};
    }
    return {-1, 0};
}

/// The sixteen Dirac-Kahler components, all with upper indices.
struct TensorSet
{
    Complex scalar{};
    Complex pseudoscalar{};
    std::array<Complex, 4> vector{};
    std::array<Complex, 4> pseudovector{};
    std::array<Complex, 6> tensor{};

    /// Psi^{ab}, antisymmetric, zero on the diagonal.
    Complex tensor_at(int a, int b) const
    {
        auto [slot, sign] = tensor_slot(a, b);
        return slot < 0 ? Complex{} : static_cast<double>(sign) * tensor[slot];
    }

    void set_tensor(int a, int b, Complex value)
    {
        auto [slot, sign] = tensor_slot(a, b);
        if (slot >= 0) tensor[slot] = static_cast<double>(sign) * value;
    }

    /// Order: scalar, pseudoscalar, vector[4], pseudovector[4], tensor[6].
    std::array<Complex, 16> flatten() const
    {
        std::array<Complex, 16> out{};
        out[0] = scalar;
        out[1] = pseudoscalar;
        std::copy(vector.begin(), vector.end(), out.begin() + 2);
        std::copy(pseudovector.begin(), pseudovector.end(), out.begin() + 6);
        std::copy(tensor.begin(), tensor.end(), out.begin() + 10);
        return out;
    }

    static TensorSet from_flat(const std::array<Complex, 16>& in)
    {
        TensorSet t;
        t.scalar = in[0];
        t.pseudoscalar = in[1];
        std::copy(in.begin() + 2, in.begin() + 6, t.vector.begin());
        std::copy(in.begin() + 6, in.begin() + 10, t.pseudovector.begin());
        std::copy(in.begin() + 10, in.end(), t.tensor.begin());
        return t;
    }

    /// Squared Frobenius norm over the sixteen stored components.
    double norm_squared() const
    {
        double acc = 0.0;
        for (const auto& x : flatten()) acc += std::norm(x);
        return acc;
    }

    double norm() const { return std::sqrt(norm_squared()); }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto& x : flatten()) m = std::max(m, std::abs(x));
        return m;
    }

    TensorSet& operator+=(const TensorSet& o)
    {
        auto x = flatten();
        const auto y = o.flatten();
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
        return *this = from_flat(x);
    }

    friend TensorSet operator+(TensorSet x, const TensorSet& y) { return x += y; }

    friend TensorSet operator*(Complex s, const TensorSet& t)
    {
        auto x = t.flatten();
        for (auto& v : x) v *= s;
        return from_flat(x);
    }

    friend TensorSet operator-(const TensorSet& x, const TensorSet& y) { return x + Complex{-1.0} * y; }
};

inline double max_abs_difference(const TensorSet& x, const TensorSet& y) { return (x - y).max_abs(); }

/// Vector components with the index lowered by the metric.
inline std::array<Complex, 4> lower(const std::array<Complex, 4>& v)
{
    return {v[0], -v[1], -v[2], -v[3]};
}

/// Self-dual and anti-self-dual combinations of the tensor part:
/// s_j = Psi^{0j} + i Psi^{kl}, t_j = Psi^{0j} - i Psi^{kl}, (jkl) cyclic.
struct IsotropicPair
{
    std::array<Complex, 3> s{};
    std::array<Complex, 3> t{};
};

/// Complex Euclidean 3-dot product (no conjugation).
inline Complex dot3(const std::array<Complex, 3>& x, const std::array<Complex, 3>& y)
{
    return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

inline Bispinor outer_product(const Spinor4& phi, const Spinor4& psi)
{
    return {phi.vec() * psi.vec().transpose()};
}

/// Closed-form components of phi (x) psi with phi = (A,B,C,D), psi = (M,N,K,L).
inline TensorSet decompose_pair(const Spinor4& phi, const Spinor4& psi)
{
    const Complex A = phi.a, B = phi.b, C = phi.c, D = phi.d;
    const Complex M = psi.a, N = psi.b, K = psi.c, L = psi.d;
    const Complex i = kI;

    TensorSet t;
    t.scalar = -1.0 / (4.0 * i) * (B * M - A * N + C * L - D * K);
    t.pseudoscalar = -0.25 * (B * M - A * N - C * L + D * K);

    t.vector[0] = 0.25 * (A * L - B * K + D * M - C * N);
    t.vector[1] = -0.25 * (A * K - B * L + C * M - D * N);
    t.vector[2] = -0.25 * i * (A * K + B * L + C * M + D * N);
    t.vector[3] = 0.25 * (B * K + A * L + D * M + C * N);

    t.pseudovector[0] = 1.0 / (4.0 * i) * (A * L - B * K - D * M + C * N);
    t.pseudovector[1] = -1.0 / (4.0 * i) * (A * K - B * L - C * M + D * N);
    t.pseudovector[2] = -0.25 * (A * K + B * L - C * M - D * N);
    t.pseudovector[3] = 1.0 / (4.0 * i) * (B * K + A * L - D * M - C * N);

    t.tensor[0] = 0.25 * i * (A * M - B * N + C * K - D * L);   // 01
    t.tensor[1] = -0.25 * (A * M + B * N + C * K + D * L);      // 02
    t.tensor[2] = -0.25 * i * (A * N + B * M + C * L + D * K);  // 03
    t.tensor[3] = 0.25 * (A * M - B * N - C * K + D * L);       // 23
    t.tensor[4] = 0.25 * i * (A * M + B * N - C * K - D * L);   // 31
    t.tensor[5] = -0.25 * (A * N + B * M - C * L - D * K);      // 12
    return t;
}

/// Components of phi (x) psi + phi' (x) psi'.
inline TensorSet decompose_quad(const Spinor4& phi, const Spinor4& psi, const Spinor4& phi_p,
                                const Spinor4& psi_p)
{
    return decompose_pair(phi, psi) + decompose_pair(phi_p, psi_p);
}

/// Overall factor between the Clifford expansion and the bispinor. Fixed
/// by requiring the trace route and the closed-form route to agree.
inline constexpr double kExpansionCalibration = 1.0;

/// Trace extraction of the sixteen components from an arbitrary bispinor.
inline TensorSet decompose_bispinor(const Bispinor& bispinor)
{
    const auto& p = pauli();
    const auto& g = sigma_generators();
    const Mat2 xi = bispinor.xi() / kExpansionCalibration;
    const Mat2 delta = bispinor.delta() / kExpansionCalibration;
    const Mat2 w = bispinor.w() / kExpansionCalibration;
    const Mat2 eta = bispinor.eta() / kExpansionCalibration;

    TensorSet t;
    for (int l = 0; l < 4; ++l) {
        const Complex plus = 0.5 * (p.eps_dot_inv * p.sigma_up[l] * delta).trace();  // Psi^l + i tPsi^l
        const Complex minus = 0.5 * (p.eps * p.sigma_down[l] * w).trace();            // Psi^l - i tPsi^l
        t.vector[l] = 0.5 * (plus + minus);
        t.pseudovector[l] = (plus - minus) / (2.0 * kI);
    }

    const Complex undotted = 0.5 * (p.eps * xi).trace();      // -i Psi - tPsi
    const Complex dotted = 0.5 * (p.eps_dot_inv * eta).trace();  // -i Psi + tPsi
    t.scalar = (undotted + dotted) / (-2.0 * kI);
    t.pseudoscalar = 0.5 * (dotted - undotted);

    for (int s = 0; s < 6; ++s) {
        const auto [k, l] = kTensorPairs[s];
        const Complex sd = (p.eps * g.sigma[k][l] * xi).trace();
        const Complex asd = (p.eps_dot_inv * g.sigma_bar[k][l] * eta).trace();
        t.tensor[s] = (sd + asd) / (-2.0 * kI);
    }
    return t;
}

/// Inverse of decompose_bispinor: assembles the 2x2 blocks from the components.
inline Bispinor reconstruct_bispinor(const TensorSet& t)
{
    const auto& p = pauli();
    const auto& g = sigma_generators();
    const auto v_low = lower(t.vector);
    const auto pv_low = lower(t.pseudovector);

    Mat2 delta = Mat2::Zero();
    Mat2 w = Mat2::Zero();
    for (int l = 0; l < 4; ++l) {
        delta += (v_low[l] + kI * pv_low[l]) * p.sigma_down[l];
        w += (v_low[l] - kI * pv_low[l]) * p.sigma_up[l];
    }
    delta = delta * p.eps_dot;
    w = w * p.eps_inv;

    // sum over all ordered (m,n) of Sigma^{mn} Psi_{mn}
    Mat2 sd = Mat2::Zero();
    Mat2 asd = Mat2::Zero();
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
            if (m == n) continue;
            const Complex low = metric(m, m) * metric(n, n) * t.tensor_at(m, n);
            sd += low * g.sigma[m][n];
            asd += low * g.sigma_bar[m][n];
        }
    }
    const Mat2 id = Mat2::Identity();
    const Mat2 xi = ((-kI * t.scalar - t.pseudoscalar) * id + kI * sd) * p.eps_inv;
    const Mat2 eta = ((-kI * t.scalar + t.pseudoscalar) * id + kI * asd) * p.eps_dot;

    Bispinor out;
    out.u.topLeftCorner<2, 2>() = xi;
    out.u.topRightCorner<2, 2>() = delta;
    out.u.bottomLeftCorner<2, 2>() = w;
    out.u.bottomRightCorner<2, 2>() = eta;
    out.u *= kExpansionCalibration;
    return out;
}

inline IsotropicPair isotropic_pair(const TensorSet& t)
{
    IsotropicPair out;
    // (01,23), (02,31), (03,12)
    for (int j = 0; j < 3; ++j) {
        out.s[j] = t.tensor[j] + kI * t.tensor[j + 3];
        out.t[j] = t.tensor[j] - kI * t.tensor[j + 3];
    }
    return out;
}

}  // namespace dk
