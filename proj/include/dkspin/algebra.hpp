#pragma once

// Conventions shared by every module: Pauli and spinor-metric matrices,
// the (+,-,-,-) Minkowski metric, the Levi-Civita symbol and the
// spin generators of the two 2-spinor blocks.

#include <array>
#include <complex>
#include <span>

#include <Eigen/Dense>

namespace dk {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr Complex kI{0.0, 1.0};

/// Absolute tolerance used for unit-scale comparisons.
inline constexpr double kDefaultTolerance = 1e-12;

/// Diagonal of the Minkowski metric, signature (+,-,-,-).
inline constexpr std::array<double, 4> kMetricDiagonal{1.0, -1.0, -1.0, -1.0};

constexpr double metric(int a, int b) { return a == b ? kMetricDiagonal[a] : 0.0; }

/// Totally antisymmetric symbol with upper indices, epsilon^{0123} = +1.
constexpr int levi_civita(int k, int l, int m, int n)
{
    const std::array<int, 4> idx{k, l, m, n};
    for (int i = 0; i < 4; ++i) {
        if (idx[i] < 0 || idx[i] > 3) return 0;
        for (int j = i + 1; j < 4; ++j) {
            if (idx[i] == idx[j]) return 0;
        }
    }
    int sign = 1;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (idx[i] > idx[j]) sign = -sign;
        }
    }
    return sign;
}

/// v^0 w^0 - v^1 w^1 - v^2 w^2 - v^3 w^3 (no complex conjugation).
inline Complex minkowski_contract(std::span<const Complex, 4> v, std::span<const Complex, 4> w)
{
    Complex acc{};
    for (int a = 0; a < 4; ++a) acc += kMetricDiagonal[a] * v[a] * w[a];
    return acc;
}

inline Complex minkowski_contract(const std::array<Complex, 4>& v, const std::array<Complex, 4>& w)
{
    return minkowski_contract(std::span<const Complex, 4>(v), std::span<const Complex, 4>(w));
}

struct PauliBasis
{
    std::array<Mat2, 4> sigma_up;    //!< (I, +sigma^j)
    std::array<Mat2, 4> sigma_down;  //!< (I, -sigma^j), also used as sigma-bar
    Mat2 eps;                        //!< +i sigma^2
    Mat2 eps_inv;
    Mat2 eps_dot;
    Mat2 eps_dot_inv;
};

inline PauliBasis build_pauli_basis()
{
    PauliBasis basis;
    const Mat2 id = Mat2::Identity();
    Mat2 s1, s2, s3;
    s1 << 0.0, 1.0, 1.0, 0.0;
    s2 << 0.0, -kI, kI, 0.0;
    s3 << 1.0, 0.0, 0.0, -1.0;
    basis.sigma_up = {id, s1, s2, s3};
    basis.sigma_down = {id, -s1, -s2, -s3};

    basis.eps << 0.0, 1.0, -1.0, 0.0;
    basis.eps_inv << 0.0, -1.0, 1.0, 0.0;
    basis.eps_dot = basis.eps;
    basis.eps_dot_inv = basis.eps_inv;
    return basis;
}

/// Spin generators on the undotted (sigma) and dotted (sigma_bar) blocks,
/// indexed by an ordered pair of vector indices.
///
/// sigma[k][l]     = 1/4 (sbar^k s^l - sbar^l s^k)   self-dual:  (i/2) eps^{klmn} sigma_mn = +sigma^{kl}
/// sigma_bar[k][l] = 1/4 (s^k sbar^l - s^l sbar^k)   anti-self-dual
///
/// with s = sigma_up and sbar = sigma_down.
struct SigmaGenerators
{
    std::array<std::array<Mat2, 4>, 4> sigma;
    std::array<std::array<Mat2, 4>, 4> sigma_bar;
};

inline SigmaGenerators build_sigma_generators(const PauliBasis& p)
{
    SigmaGenerators g;
    for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) {
            g.sigma[k][l] = 0.25 * (p.sigma_down[k] * p.sigma_up[l] - p.sigma_down[l] * p.sigma_up[k]);
            g.sigma_bar[k][l] = 0.25 * (p.sigma_up[k] * p.sigma_down[l] - p.sigma_up[l] * p.sigma_down[k]);
        }
    }
    return g;
}

/// Dirac matrices in the chiral block basis matching the (xi^alpha, eta_alphadot)
/// layout: gamma^a = [[0, sbar^a], [s^a, 0]].
inline std::array<Mat4, 4> build_gamma_matrices(const PauliBasis& p)
{
    std::array<Mat4, 4> gamma;
    for (int a = 0; a < 4; ++a) {
        gamma[a].setZero();
        gamma[a].topRightCorner<2, 2>() = p.sigma_down[a];
        gamma[a].bottomLeftCorner<2, 2>() = p.sigma_up[a];
    }
    return gamma;
}

inline const PauliBasis& pauli()
{
    static const PauliBasis basis = build_pauli_basis();
    return basis;
}

inline const SigmaGenerators& sigma_generators()
{
    static const SigmaGenerators gens = build_sigma_generators(pauli());
    return gens;
}

inline const std::array<Mat4, 4>& gamma_matrices()
{
    static const std::array<Mat4, 4> gamma = build_gamma_matrices(pauli());
    return gamma;
}

}  // namespace dk
