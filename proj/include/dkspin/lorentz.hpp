#pragma once

// Proper orthochronous Lorentz transformations acting on 4-spinors
// (xi -> S xi, eta -> (S^dagger)^-1 eta) and on the tensor components.

#include <array>
#include <cmath>
#include <stdexcept>

#include "dkspin/decomposition.hpp"

namespace dk {

using Vec3 = std::array<double, 3>;

/// An SL(2,C) element together with the Lorentz matrix it induces on vectors.
class LorentzElement
{
public:
    /// Throws std::invalid_argument unless det(s) = 1 to 1e-12.
    static LorentzElement from_sl2c(const Mat2& s)
    {
        if (std::abs(s.determinant() - 1.0) > 1e-12) {
            throw std::invalid_argument("sl2c matrix must have unit determinant");
        }
        return LorentzElement(s);
    }

    static LorentzElement identity() { return LorentzElement(Mat2::Identity()); }

    const Mat2& sl2c() const { return sl2c_; }

    /// Lambda^a_b with S^dagger sigma^a S = Lambda^a_b sigma^b.
    const Eigen::Matrix4d& induced() const { return induced_; }

    /// diag(S, (S^dagger)^-1).
    const Mat4& spinor4_rep() const { return spinor4_rep_; }

    friend LorentzElement operator*(const LorentzElement& g2, const LorentzElement& g1)
    {
        return LorentzElement(g2.sl2c_ * g1.sl2c_);
    }

private:
    explicit LorentzElement(const Mat2& s) : sl2c_(s)
    {
        const auto& p = pauli();
        const Mat2 s_dag = s.adjoint();
        for (int a = 0; a < 4; ++a) {
            const Mat2 conj = s_dag * p.sigma_up[a] * s;
            for (int c = 0; c < 4; ++c) {
                induced_(a, c) = 0.5 * (conj * p.sigma_down[c]).trace().real() * metric(c, c);
            }
        }
        spinor4_rep_.setZero();
        spinor4_rep_.topLeftCorner<2, 2>() = s;
        spinor4_rep_.bottomRightCorner<2, 2>() = s_dag.inverse();
    }

    Mat2 sl2c_;
    Eigen::Matrix4d induced_;
    Mat4 spinor4_rep_;
};

namespace detail {

inline Mat2 axis_dot_sigma(const Vec3& n)
{
    const auto& p = pauli();
    return n[0] * p.sigma_up[1] + n[1] * p.sigma_up[2] + n[2] * p.sigma_up[3];
}

inline void require_unit_axis(const Vec3& n)
{
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-12) {
        throw std::invalid_argument("axis must be a unit 3-vector");
    }
}

}  // namespace detail

/// exp(rapidity/2 n.sigma) = cosh(rapidity/2) + sinh(rapidity/2) n.sigma.
inline LorentzElement element_from_boost(const Vec3& axis, double rapidity)
{
    detail::require_unit_axis(axis);
    const double h = 0.5 * rapidity;
    return LorentzElement::from_sl2c(std::cosh(h) * Mat2::Identity() + std::sinh(h) * detail::axis_dot_sigma(axis));
}

/// exp(-i angle/2 n.sigma) = cos(angle/2) - i sin(angle/2) n.sigma.
inline LorentzElement element_from_rotation(const Vec3& axis, double angle)
{
    detail::require_unit_axis(axis);
    const double h = 0.5 * angle;
    return LorentzElement::from_sl2c(std::cos(h) * Mat2::Identity() -
                                     kI * std::sin(h) * detail::axis_dot_sigma(axis));
}

inline Spinor4 transform_spinor(const LorentzElement& g, const Spinor4& phi)
{
    return Spinor4::from_vec(g.spinor4_rep() * phi.vec());
}

inline std::array<Complex, 4> transform_vector(const LorentzElement& g, const std::array<Complex, 4>& v)
{
    std::array<Complex, 4> out{};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) out[a] += g.induced()(a, b) * v[b];
    }
    return out;
}

/// Scalars fixed, vectors by Lambda, tensor by Lambda F Lambda^T.
inline TensorSet transform_tensorset(const LorentzElement& g, const TensorSet& t)
{
    TensorSet out;
    out.scalar = t.scalar;
    out.pseudoscalar = t.pseudoscalar;
    out.vector = transform_vector(g, t.vector);
    out.pseudovector = transform_vector(g, t.pseudovector);

    Mat4 f;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) f(a, b) = t.tensor_at(a, b);
    }
    const Eigen::Matrix4cd lam = g.induced().cast<Complex>();
    const Mat4 ft = lam * f * lam.transpose();
    for (int s = 0; s < 6; ++s) out.tensor[s] = ft(kTensorPairs[s].first, kTensorPairs[s].second);
    return out;
}

/// max |decompose_pair(g phi, g psi) - g . decompose_pair(phi, psi)|.
inline double covariance_residual(const LorentzElement& g, const Spinor4& phi, const Spinor4& psi)
{
    return max_abs_difference(decompose_pair(transform_spinor(g, phi), transform_spinor(g, psi)),
                              transform_tensorset(g, decompose_pair(phi, psi)));
}

}  // namespace dk
