#include <catch_amalgamated.hpp>

#include "dkspin/algebra.hpp"
#include "support/oracles.hpp"

using namespace dk;

TEST_CASE("levi-civita matches permutation parity", "[algebra]")
{
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) {
                    CHECK(levi_civita(k, l, m, n) == oracle::permutation_sign({k, l, m, n}));
                }
    STATIC_REQUIRE(levi_civita(0, 1, 2, 3) == 1);
    STATIC_REQUIRE(levi_civita(1, 0, 2, 3) == -1);
    STATIC_REQUIRE(levi_civita(0, 0, 2, 3) == 0);
}

TEST_CASE("pauli matrices and spinor metric", "[algebra]")
{
    const auto& p = pauli();
    for (int j = 1; j < 4; ++j) {
        CHECK((p.sigma_up[j] * p.sigma_up[j] - Mat2::Identity()).norm() == 0.0);
        CHECK((p.sigma_up[j] + p.sigma_down[j]).norm() == 0.0);
        for (int k = j + 1; k < 4; ++k) CHECK((p.sigma_up[j] * p.sigma_up[k] + p.sigma_up[k] * p.sigma_up[j]).norm() == 0.0);
    }
    CHECK((p.sigma_up[1] * p.sigma_up[2] - kI * p.sigma_up[3]).norm() == 0.0);
    CHECK((p.eps * p.eps_inv - Mat2::Identity()).norm() == 0.0);
    CHECK((p.eps_dot * p.eps_dot_inv - Mat2::Identity()).norm() == 0.0);
    CHECK(p.eps(0, 1) == Complex(1.0));
    CHECK(p.eps(1, 0) == Complex(-1.0));
}

TEST_CASE("sigma-bar times sigma trace gives the metric", "[algebra]")
{
    const auto& p = pauli();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            CHECK(std::abs((p.sigma_up[a] * p.sigma_down[b]).trace() - 2.0 * metric(a, b)) < 1e-15);
        }
}

TEST_CASE("gamma matrices satisfy the clifford relation", "[algebra]")
{
    const auto& g = gamma_matrices();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Mat4 anti = g[a] * g[b] + g[b] * g[a];
            CHECK((anti - 2.0 * metric(a, b) * Mat4::Identity()).norm() < 1e-15);
        }
}

TEST_CASE("generators are antisymmetric, traceless and of opposite duality", "[algebra]")
{
    const auto& g = sigma_generators();
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
            CHECK((g.sigma[k][l] + g.sigma[l][k]).norm() == 0.0);
            CHECK(std::abs(g.sigma[k][l].trace()) < 1e-15);
            Mat2 dual = Mat2::Zero(), dual_bar = Mat2::Zero();
            for (int m = 0; m < 4; ++m)
                for (int n = 0; n < 4; ++n) {
                    const double e = levi_civita(k, l, m, n) * metric(m, m) * metric(n, n);
                    dual += 0.5 * kI * e * g.sigma[m][n];
                    dual_bar += 0.5 * kI * e * g.sigma_bar[m][n];
                }
            CHECK((dual - g.sigma[k][l]).norm() < 1e-15);
            CHECK((dual_bar + g.sigma_bar[k][l]).norm() < 1e-15);
        }
}

TEST_CASE("minkowski contraction", "[algebra]")
{
    const std::array<Complex, 4> v{1.0, 2.0, Complex(0, 1), 3.0};
    const std::array<Complex, 4> w{2.0, 1.0, Complex(0, 1), 1.0};
    CHECK(minkowski_contract(v, w) == Complex(2.0 - 2.0 + 1.0 - 3.0));
}
