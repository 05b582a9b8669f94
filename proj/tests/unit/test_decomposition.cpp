#include <catch_amalgamated.hpp>

#include "dkspin/decomposition.hpp"
#include "dkspin/random.hpp"

using namespace dk;

namespace {

Spinor4 basis_spinor(int i)
{
    Spinor4 s;
    s[i] = 1.0;
    return s;
}

TensorSet basis_tensorset(int k, Complex value = 1.0)
{
    std::array<Complex, 16> flat{};
    flat[static_cast<std::size_t>(k)] = value;
    return TensorSet::from_flat(flat);
}

TensorSet random_tensorset(Sampler& rng)
{
    std::array<Complex, 16> flat{};
    for (auto& z : flat) z = rng.complex();
    return TensorSet::from_flat(flat);
}

}  // namespace

TEST_CASE("first basis spinor paired with itself", "[decomposition]")
{
    const Spinor4 e0 = basis_spinor(0);
    const TensorSet t = decompose_pair(e0, e0);
    CHECK(t.scalar == Complex{});
    CHECK(t.pseudoscalar == Complex{});
    for (int a = 0; a < 4; ++a) {
        CHECK(t.vector[a] == Complex{});
        CHECK(t.pseudovector[a] == Complex{});
    }
    CHECK(std::abs(t.tensor[0] - Complex(0, 0.25)) < 1e-16);   // 01
    CHECK(std::abs(t.tensor[1] - Complex(-0.25)) < 1e-16);     // 02
    CHECK(std::abs(t.tensor[2]) < 1e-16);                      // 03
    CHECK(std::abs(t.tensor[3] - Complex(0.25)) < 1e-16);      // 23
    CHECK(std::abs(t.tensor[4] - Complex(0, 0.25)) < 1e-16);   // 31
    CHECK(std::abs(t.tensor[5]) < 1e-16);                      // 12

    const auto st = isotropic_pair(t);
    CHECK(std::abs(st.s[0] - Complex(0, 0.5)) < 1e-16);
    CHECK(std::abs(st.s[1] - Complex(-0.5)) < 1e-16);
    CHECK(std::abs(st.s[2]) < 1e-16);
    for (auto z : st.t) CHECK(std::abs(z) < 1e-16);
}

TEST_CASE("undotted with dotted basis spinor gives a null vector pair", "[decomposition]")
{
    const TensorSet t = decompose_pair(basis_spinor(0), basis_spinor(3));
    CHECK(std::abs(t.vector[0] - 0.25) < 1e-16);
    CHECK(std::abs(t.vector[3] - 0.25) < 1e-16);
    CHECK(std::abs(t.pseudovector[0] - Complex(0, -0.25)) < 1e-16);
    CHECK(std::abs(t.pseudovector[3] - Complex(0, -0.25)) < 1e-16);
    CHECK(std::abs(t.vector[1]) + std::abs(t.vector[2]) < 1e-16);
    CHECK(std::abs(t.scalar) + std::abs(t.pseudoscalar) < 1e-16);
    for (auto z : t.tensor) CHECK(std::abs(z) < 1e-16);
}

TEST_CASE("blockwise proportional pair with integer entries", "[decomposition]")
{
    // psi = (2A, 2B, 3C, 3D): mu = 2, nu = 3, AD - BC = -2
    const TensorSet t = decompose_pair({1.0, 2.0, 3.0, 4.0}, {2.0, 4.0, 9.0, 12.0});
    CHECK(std::abs(t.scalar) < 1e-15);
    CHECK(std::abs(t.pseudoscalar) < 1e-15);
    CHECK(std::abs(t.vector[0] - (-2.5)) < 1e-15);
    CHECK(std::abs(t.pseudovector[0] - Complex(0, 0.5)) < 1e-15);
}

TEST_CASE("reconstruction of a pure scalar", "[decomposition]")
{
    TensorSet t;
    t.scalar = 1.0;
    const Bispinor u = reconstruct_bispinor(t);
    const auto& p = pauli();
    CHECK((u.xi() - (-kI) * p.eps_inv).norm() < 1e-15);
    CHECK((u.eta() - (-kI) * p.eps_dot).norm() < 1e-15);
    CHECK(u.delta().norm() == 0.0);
    CHECK(u.w().norm() == 0.0);
}

TEST_CASE("trace extraction inverts reconstruction", "[decomposition]")
{
    for (int k = 0; k < 16; ++k) {
        const TensorSet t = basis_tensorset(k);
        CHECK(max_abs_difference(decompose_bispinor(reconstruct_bispinor(t)), t) < 1e-12);
    }
    Sampler rng(11);
    for (int i = 0; i < 100; ++i) {
        const TensorSet t = random_tensorset(rng);
        CHECK(max_abs_difference(decompose_bispinor(reconstruct_bispinor(t)), t) < 1e-12);
        const Bispinor u{Mat4::Random()};
        CHECK((reconstruct_bispinor(decompose_bispinor(u)).u - u.u).norm() < 1e-12);
    }
}

TEST_CASE("closed form agrees with the trace route", "[decomposition]")
{
    Sampler rng(2024);
    for (int i = 0; i < 1000; ++i) {
        const Spinor4 phi = rng.spinor();
        const Spinor4 psi = rng.spinor();
        CHECK(max_abs_difference(decompose_pair(phi, psi), decompose_bispinor(outer_product(phi, psi))) < 1e-12);
    }
}

TEST_CASE("calibration constant is re-derived as one", "[decomposition]")
{
    // ratio of the closed form to the uncalibrated trace on a generic pair
    Sampler rng(5);
    const Spinor4 phi = rng.spinor();
    const Spinor4 psi = rng.spinor();
    const auto closed = decompose_pair(phi, psi).flatten();
    const auto traced = decompose_bispinor(outer_product(phi, psi)).flatten();
    for (std::size_t i = 0; i < 16; ++i) {
        if (std::abs(closed[i]) > 1e-3) CHECK(std::abs(traced[i] / closed[i] - kExpansionCalibration) < 1e-12);
    }
}

TEST_CASE("decomposition is bilinear and additive over pairs", "[decomposition]")
{
    Sampler rng(9);
    const Spinor4 a = rng.spinor(), b = rng.spinor(), c = rng.spinor(), d = rng.spinor();
    const Complex s = rng.complex();
    CHECK(max_abs_difference(decompose_pair(s * a + c, b), s * decompose_pair(a, b) + decompose_pair(c, b)) < 1e-14);
    CHECK(max_abs_difference(decompose_pair(a, s * b + d), s * decompose_pair(a, b) + decompose_pair(a, d)) < 1e-14);
    const TensorSet quad = decompose_quad(a, b, c, d);
    CHECK(max_abs_difference(quad, decompose_bispinor(outer_product(a, b) + outer_product(c, d))) < 1e-12);
    CHECK(max_abs_difference(decompose_pair(a, Spinor4{}), TensorSet{}) == 0.0);
}

TEST_CASE("tensor storage helpers", "[decomposition]")
{
    TensorSet t;
    t.set_tensor(3, 1, 2.0);
    CHECK(t.tensor_at(3, 1) == Complex(2.0));
    CHECK(t.tensor_at(1, 3) == Complex(-2.0));
    CHECK(t.tensor_at(2, 2) == Complex{});
    t.set_tensor(1, 0, Complex(0, 1));
    CHECK(t.tensor[0] == Complex(0, -1));

    Sampler rng(3);
    const TensorSet r = random_tensorset(rng);
    CHECK(max_abs_difference(TensorSet::from_flat(r.flatten()), r) == 0.0);
    CHECK(std::abs(r.norm() * r.norm() - r.norm_squared()) < 1e-12);
    CHECK(tensor_slot(0, 0).first == -1);
}
