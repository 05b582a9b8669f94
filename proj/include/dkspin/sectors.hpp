#pragma once

// Vanishing patterns of the components of one spinor pair, and the boson
// sectors of a two-pair (four-spinor) bispinor: their bilinear constraint
// systems, classification and a constructive solver.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dkspin/decomposition.hpp"
#include "dkspin/random.hpp"

namespace dk {

//---------------------------------------------------------------------------//
// Component groups
//---------------------------------------------------------------------------//

enum class ComponentGroup { scalar, pseudoscalar, vector, pseudovector, tensor };

inline double group_norm(const TensorSet& t, ComponentGroup g)
{
    auto norm_of = [](const auto& range) {
        double acc = 0.0;
        for (const auto& x : range) acc += std::norm(x);
        return std::sqrt(acc);
    };
    switch (g) {
        case ComponentGroup::scalar: return std::abs(t.scalar);
        case ComponentGroup::pseudoscalar: return std::abs(t.pseudoscalar);
        case ComponentGroup::vector: return norm_of(t.vector);
        case ComponentGroup::pseudovector: return norm_of(t.pseudovector);
        case ComponentGroup::tensor: return norm_of(t.tensor);
    }
    return 0.0;
}

inline std::string_view to_string(ComponentGroup g)
{
    switch (g) {
        case ComponentGroup::scalar: return "scalar";
        case ComponentGroup::pseudoscalar: return "pseudoscalar";
        case ComponentGroup::vector: return "vector";
        case ComponentGroup::pseudovector: return "pseudovector";
        case ComponentGroup::tensor: return "tensor";
    }
    return "?";
}

//---------------------------------------------------------------------------//
// Two-spinor case analysis
//---------------------------------------------------------------------------//

enum class PairCase {
    scalar_pseudoscalar_zero,  //!< blockwise proportional: psi = (mu xi, nu eta)
    psi_nonzero_tilde_zero,
    psi_zero_tilde_nonzero,
    vectors_zero_branch1,  //!< both undotted halves vanish
    vectors_zero_branch2,  //!< both dotted halves vanish
    pseudovector_zero,     //!< psi = mu phi
    vector_zero,           //!< psi = (mu xi, -mu eta)
    tensor_zero_branch1,   //!< phi undotted and psi dotted halves vanish
    tensor_zero_branch2,   //!< phi dotted and psi undotted halves vanish
    generic,
    degenerate,  //!< one of the spinors is zero
};

inline constexpr std::array<PairCase, 11> kAllPairCases{
    PairCase::scalar_pseudoscalar_zero, PairCase::psi_nonzero_tilde_zero, PairCase::psi_zero_tilde_nonzero,
    PairCase::vectors_zero_branch1,     PairCase::vectors_zero_branch2,   PairCase::pseudovector_zero,
    PairCase::vector_zero,              PairCase::tensor_zero_branch1,    PairCase::tensor_zero_branch2,
    PairCase::generic,                  PairCase::degenerate};

inline std::string_view to_string(PairCase c)
{
    switch (c) {
        case PairCase::scalar_pseudoscalar_zero: return "scalar_pseudoscalar_zero";
        case PairCase::psi_nonzero_tilde_zero: return "psi_nonzero_tilde_zero";
        case PairCase::psi_zero_tilde_nonzero: return "psi_zero_tilde_nonzero";
        case PairCase::vectors_zero_branch1: return "vectors_zero_branch1";
        case PairCase::vectors_zero_branch2: return "vectors_zero_branch2";
        case PairCase::pseudovector_zero: return "pseudovector_zero";
        case PairCase::vector_zero: return "vector_zero";
        case PairCase::tensor_zero_branch1: return "tensor_zero_branch1";
        case PairCase::tensor_zero_branch2: return "tensor_zero_branch2";
        case PairCase::generic: return "generic";
        case PairCase::degenerate: return "degenerate";
    }
    return "?";
}

inline std::optional<PairCase> parse_pair_case(std::string_view name)
{
    for (auto c : kAllPairCases) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

namespace detail {

inline double upper_half_norm(const Spinor4& s) { return std::hypot(std::abs(s.a), std::abs(s.b)); }
inline double lower_half_norm(const Spinor4& s) { return std::hypot(std::abs(s.c), std::abs(s.d)); }

}  // namespace detail

/// Classifies the vanishing pattern of decompose_pair(phi, psi). Groups
/// count as zero below tol * |phi| |psi|; the most restrictive matching
/// pattern wins.
inline PairCase pair_case_classify(const Spinor4& phi, const Spinor4& psi, double tol = 1e-10)
{
    const double phi_n = phi.norm();
    const double psi_n = psi.norm();
    const double scale = phi_n * psi_n;
    if (scale == 0.0) return PairCase::degenerate;

    const TensorSet t = decompose_pair(phi, psi);
    auto zero = [&](ComponentGroup g) { return group_norm(t, g) <= tol * scale; };
    auto phi_up = detail::upper_half_norm(phi) <= tol * phi_n;
    auto phi_dn = detail::lower_half_norm(phi) <= tol * phi_n;
    auto psi_up = detail::upper_half_norm(psi) <= tol * psi_n;
    auto psi_dn = detail::lower_half_norm(psi) <= tol * psi_n;

    const bool v0 = zero(ComponentGroup::vector);
    const bool pv0 = zero(ComponentGroup::pseudovector);
    if (v0 && pv0) {
        if (phi_up && psi_up) return PairCase::vectors_zero_branch1;
        if (phi_dn && psi_dn) return PairCase::vectors_zero_branch2;
    }
    if (zero(ComponentGroup::tensor)) {
        if (phi_up && psi_dn) return PairCase::tensor_zero_branch1;
        if (phi_dn && psi_up) return PairCase::tensor_zero_branch2;
    }
    if (pv0) return PairCase::pseudovector_zero;
    if (v0) return PairCase::vector_zero;

    const bool s0 = zero(ComponentGroup::scalar);
    const bool ps0 = zero(ComponentGroup::pseudoscalar);
    if (s0 && ps0) return PairCase::scalar_pseudoscalar_zero;
    if (ps0) return PairCase::psi_nonzero_tilde_zero;
    if (s0) return PairCase::psi_zero_tilde_nonzero;
    return PairCase::generic;
}

/// Inputs for pair_case_build. `base` supplies phi (or its surviving half),
/// `partner` supplies the free components of psi where the case leaves them
/// unconstrained.
struct PairCaseParams
{
    Spinor4 base;
    Spinor4 partner;
    Complex mu{1.0};
    Complex nu{1.0};
};

namespace detail {

/// partner projected onto {x : sum_i c_i x_i = 0}.
inline Spinor4 project_out(const Spinor4& partner, const Eigen::Vector4cd& c)
{
    const Eigen::Vector4cd x = partner.vec();
    const double cc = c.squaredNorm();
    if (cc == 0.0) return partner;
    const Complex proj = (c.transpose() * x)(0);
    return Spinor4::from_vec(x - (proj / cc) * c.conjugate());
}

}  // namespace detail

/// Builds a pair realizing the given case. Throws std::invalid_argument when
/// the parameters make the components the case requires nonzero vanish.
inline std::pair<Spinor4, Spinor4> pair_case_build(PairCase c, const PairCaseParams& p, double tol = 1e-10)
{
    const Spinor4& b = p.base;
    const Spinor4& q = p.partner;
    const Complex zero{};
    std::pair<Spinor4, Spinor4> out;
    std::vector<std::vector<ComponentGroup>> required;  // each inner list: at least one nonzero

    using G = ComponentGroup;
    switch (c) {
        case PairCase::scalar_pseudoscalar_zero:
            out = {b, {p.mu * b.a, p.mu * b.b, p.nu * b.c, p.nu * b.d}};
            required = {{G::vector, G::pseudovector}};
            break;
        case PairCase::pseudovector_zero:
            out = {b, p.mu * b};
            required = {{G::vector}};
            break;
        case PairCase::vector_zero:
            out = {b, {p.mu * b.a, p.mu * b.b, -p.mu * b.c, -p.mu * b.d}};
            required = {{G::pseudovector}};
            break;
        case PairCase::vectors_zero_branch1:
            out = {{zero, zero, b.c, b.d}, {zero, zero, q.c, q.d}};
            required = {{G::scalar, G::tensor}};
            break;
        case PairCase::vectors_zero_branch2:
            out = {{b.a, b.b, zero, zero}, {q.a, q.b, zero, zero}};
            required = {{G::scalar, G::tensor}};
            break;
        case PairCase::tensor_zero_branch1:
            out = {{zero, zero, b.c, b.d}, {q.a, q.b, zero, zero}};
            required = {{G::vector}};
            break;
        case PairCase::tensor_zero_branch2:
            out = {{b.a, b.b, zero, zero}, {zero, zero, q.c, q.d}};
            required = {{G::vector}};
            break;
        case PairCase::psi_nonzero_tilde_zero:
            // BM - AN - CL + DK = 0 as a linear condition on psi
            out = {b, detail::project_out(q, Eigen::Vector4cd(b.b, -b.a, b.d, -b.c))};
            required = {{G::scalar}};
            break;
        case PairCase::psi_zero_tilde_nonzero:
            // BM - AN + CL - DK = 0
            out = {b, detail::project_out(q, Eigen::Vector4cd(b.b, -b.a, -b.d, b.c))};
            required = {{G::pseudoscalar}};
            break;
        case PairCase::generic:
            out = {b, q};
            break;
        case PairCase::degenerate:
            out = {b, Spinor4{}};
            break;
    }

    const double scale = out.first.norm() * out.second.norm();
    if (c != PairCase::degenerate && scale == 0.0) {
        throw std::invalid_argument(std::string("parameters give a zero spinor for case ") +
                                    std::string(to_string(c)));
    }
    const TensorSet t = decompose_pair(out.first, out.second);
    for (const auto& alternatives : required) {
        const bool any = std::any_of(alternatives.begin(), alternatives.end(),
                                     [&](G g) { return group_norm(t, g) > tol * scale; });
        if (!any) {
            throw std::invalid_argument(std::string("parameters make the required components vanish for case ") +
                                        std::string(to_string(c)));
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
// Four-spinor sectors
//---------------------------------------------------------------------------//

enum class Sector { scalar, pseudoscalar, vector, pseudovector };

inline constexpr std::array<Sector, 4> kAllSectors{Sector::scalar, Sector::pseudoscalar, Sector::vector,
                                                   Sector::pseudovector};

inline std::string_view to_string(Sector s)
{
    switch (s) {
        case Sector::scalar: return "scalar";
        case Sector::pseudoscalar: return "pseudoscalar";
        case Sector::vector: return "vector";
        case Sector::pseudovector: return "pseudovector";
    }
    return "?";
}

inline std::optional<Sector> parse_sector(std::string_view name)
{
    for (auto s : kAllSectors) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

struct SectorSpec
{
    Sector label;
    std::vector<ComponentGroup> zero_components;
    std::vector<ComponentGroup> free_components;
    int constraint_count;
};

inline SectorSpec sector_spec(Sector s)
{
    using G = ComponentGroup;
    switch (s) {
        case Sector::scalar: return {s, {G::pseudoscalar, G::pseudovector, G::tensor}, {G::scalar, G::vector}, 11};
        case Sector::pseudoscalar: return {s, {G::scalar, G::vector, G::tensor}, {G::pseudoscalar, G::pseudovector}, 11};
        case Sector::vector: return {s, {G::scalar, G::pseudoscalar, G::pseudovector}, {G::vector, G::tensor}, 6};
        case Sector::pseudovector: return {s, {G::scalar, G::pseudoscalar, G::vector}, {G::pseudovector, G::tensor}, 6};
    }
    throw std::invalid_argument("unknown sector");
}

/// Two spinor pairs, U = phi (x) psi + phi_p (x) psi_p.
struct Quad
{
    Spinor4 phi, psi, phi_p, psi_p;

    std::array<Spinor4, 4> spinors() const { return {phi, psi, phi_p, psi_p}; }
    static Quad from_spinors(const std::array<Spinor4, 4>& s) { return {s[0], s[1], s[2], s[3]}; }

    TensorSet decompose() const { return decompose_quad(phi, psi, phi_p, psi_p); }

    /// |phi||psi| + |phi_p||psi_p|, the natural size of a quadratic component.
    double component_scale() const { return phi.norm() * psi.norm() + phi_p.norm() * psi_p.norm(); }
};

/// A bilinear form x^T Q y summed over both pairs of a quad. Built from an
/// expression such as "AL-DM" whose first letters index phi (A,B,C,D) and
/// second letters index psi (M,N,K,L).
struct BilinearConstraint
{
    std::string label;
    Eigen::Matrix4d form = Eigen::Matrix4d::Zero();

    static BilinearConstraint parse(std::string_view expr)
    {
        constexpr std::string_view phi_letters = "ABCD";
        constexpr std::string_view psi_letters = "MNKL";
        BilinearConstraint c;
        c.label = std::string(expr);
        double sign = 1.0;
        std::size_t i = 0;
        while (i < expr.size()) {
            if (expr[i] == '+' || expr[i] == '-') {
                sign = expr[i] == '-' ? -1.0 : 1.0;
                ++i;
                continue;
            }
            if (i + 1 >= expr.size()) throw std::invalid_argument("truncated bilinear term");
            const auto r = phi_letters.find(expr[i]);
            const auto col = psi_letters.find(expr[i + 1]);
            if (r == std::string_view::npos || col == std::string_view::npos) {
                throw std::invalid_argument("bad bilinear term in " + c.label);
            }
            c.form(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) += sign;
            sign = 1.0;
            i += 2;
        }
        return c;
    }

    Complex evaluate(const Spinor4& x, const Spinor4& y) const
    {
        return (x.vec().transpose() * form.cast<Complex>() * y.vec())(0);
    }

    Complex evaluate(const Quad& q) const { return evaluate(q.phi, q.psi) + evaluate(q.phi_p, q.psi_p); }
};

namespace detail {

inline std::vector<BilinearConstraint> parse_all(std::initializer_list<std::string_view> exprs)
{
    std::vector<BilinearConstraint> out;
    for (auto e : exprs) out.push_back(BilinearConstraint::parse(e));
    return out;
}

}  // namespace detail

/// The constraint system separating a sector, in its canonical grouping.
inline const std::vector<BilinearConstraint>& sector_constraints(Sector s)
{
    static const auto scalar = detail::parse_all({"BM-AN-CL+DK", "AL-DM", "BK-CN", "AK-CM", "BL-DN", "AM-BN",
                                                  "CK-DL", "AM+BN", "CK+DL", "AN+BM", "CL+DK"});
    static const auto pseudoscalar = detail::parse_all({"BM-AN+CL-DK", "AL+DM", "BK+CN", "AK+CM", "BL+DN", "AM-BN",
                                                        "CK-DL", "AM+BN", "CK+DL", "AN+BM", "CL+DK"});
    static const auto vector = detail::parse_all({"BM-AN", "CL-DK", "AL-DM", "BK-CN", "AK-CM", "BL-DN"});
    static const auto pseudovector = detail::parse_all({"BM-AN", "CL-DK", "AL+DM", "BK+CN", "AK+CM", "BL+DN"});
    switch (s) {
        case Sector::scalar: return scalar;
        case Sector::pseudoscalar: return pseudoscalar;
        case Sector::vector: return vector;
        case Sector::pseudovector: return pseudovector;
    }
    throw std::invalid_argument("unknown sector");
}

struct SectorResidual
{
    std::string label;
    Complex value;
};

inline std::vector<SectorResidual> sector_residuals(const Quad& q, Sector s)
{
    std::vector<SectorResidual> out;
    for (const auto& c : sector_constraints(s)) out.push_back({c.label, c.evaluate(q)});
    return out;
}

inline double max_residual(const std::vector<SectorResidual>& r)
{
    double m = 0.0;
    for (const auto& x : r) m = std::max(m, std::abs(x.value));
    return m;
}

/// Matching sector, if any. Zero groups must lie below tol * scale and free
/// groups above 1e-6 * scale, with scale = Quad::component_scale().
inline std::optional<Sector> sector_classify(const Quad& q, double tol = 1e-10)
{
    const double scale = q.component_scale();
    if (scale == 0.0) return std::nullopt;
    const TensorSet t = q.decompose();
    for (auto s : kAllSectors) {
        const SectorSpec spec = sector_spec(s);
        const bool zeros = std::all_of(spec.zero_components.begin(), spec.zero_components.end(),
                                       [&](ComponentGroup g) { return group_norm(t, g) <= tol * scale; });
        const bool frees = std::all_of(spec.free_components.begin(), spec.free_components.end(),
                                       [&](ComponentGroup g) { return group_norm(t, g) > 1e-6 * scale; });
        if (zeros && frees) return s;
    }
    return std::nullopt;
}

//---------------------------------------------------------------------------//
// Constructive solver
//---------------------------------------------------------------------------//

class SolverStall : public std::runtime_error
{
public:
    SolverStall(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

struct SectorBuildOptions
{
    bool single_pair = false;       //!< pin phi_p = psi_p = 0
    int max_iterations = 200;
    double accept_residual = 1e-10; //!< per-constraint magnitude required for success
    double stall_residual = 1e-8;
    double free_threshold = 1e-3;   //!< minimum norm of each free group
};

struct SectorBuildResult
{
    Quad quad;
    int iterations = 0;
    double max_residual = 0.0;
};

namespace detail {

/// Complex 4x4 matrix Q_c with component c of decompose_pair(x, y) = x^T Q_c y.
inline const std::array<Mat4, 16>& component_forms()
{
    static const std::array<Mat4, 16> forms = [] {
        std::array<Mat4, 16> f;
        for (auto& m : f) m.setZero();
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                Spinor4 x, y;
                x[i] = 1.0;
                y[j] = 1.0;
                const auto flat = decompose_pair(x, y).flatten();
                for (int c = 0; c < 16; ++c) f[c](i, j) = flat[c];
            }
        }
        return f;
    }();
    return forms;
}

struct BilinearEquation
{
    Mat4 form;
    Complex target;
};

/// Normalization conditions fixing a nonzero value of each free group.
inline std::vector<BilinearEquation> free_group_pins(Sector s, Sampler& rng)
{
    const auto& forms = component_forms();
    auto target = [&] {
        const double phase = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        return std::polar(0.5, phase);
    };
    auto functional = [&](int first, int count) {
        Mat4 q = Mat4::Zero();
        double norm = 0.0;
        std::vector<Complex> w(static_cast<std::size_t>(count));
        for (auto& x : w) {
            x = rng.complex();
            norm += std::norm(x);
        }
        for (int k = 0; k < count; ++k) q += (w[static_cast<std::size_t>(k)] / std::sqrt(norm)) * forms[first + k];
        return q;
    };
    switch (s) {
        case Sector::scalar: return {{forms[0], target()}};
        case Sector::pseudoscalar: return {{forms[1], target()}};
        case Sector::vector: return {{functional(2, 4), target()}, {functional(10, 6), target()}};
        case Sector::pseudovector: return {{functional(6, 4), target()}, {functional(10, 6), target()}};
    }
    return {};
}

}  // namespace detail

/// Finds a quad satisfying every constraint of the sector with nonzero free
/// groups, by damped least squares from a seeded random start. Throws
/// SolverStall when the seed does not lead to an acceptable solution.
inline SectorBuildResult sector_build(Sector s, std::uint64_t seed, const SectorBuildOptions& opt = {})
{
    Sampler rng(seed);
    std::vector<detail::BilinearEquation> eqs;
    for (const auto& c : sector_constraints(s)) eqs.push_back({c.form.cast<Complex>(), Complex{}});
    const auto n_constraints = eqs.size();
    for (auto& pin : detail::free_group_pins(s, rng)) eqs.push_back(pin);

    const int n_pairs = opt.single_pair ? 1 : 2;
    const int n_unknowns = 8 * n_pairs;
    Eigen::VectorXcd z(n_unknowns);
    for (int k = 0; k < n_unknowns; ++k) z[k] = rng.complex();

    const auto m = static_cast<Eigen::Index>(eqs.size());
    auto residual = [&](const Eigen::VectorXcd& x) {
        Eigen::VectorXcd r(m);
        for (Eigen::Index k = 0; k < m; ++k) {
            const auto& e = eqs[static_cast<std::size_t>(k)];
            Complex v = -e.target;
            for (int p = 0; p < n_pairs; ++p) {
                v += (x.segment<4>(8 * p).transpose() * e.form * x.segment<4>(8 * p + 4))(0);
            }
            r[k] = v;
        }
        return r;
    };
    auto jacobian = [&](const Eigen::VectorXcd& x) {
        Eigen::MatrixXcd j(m, n_unknowns);
        for (Eigen::Index k = 0; k < m; ++k) {
            const auto& e = eqs[static_cast<std::size_t>(k)];
            for (int p = 0; p < n_pairs; ++p) {
                j.block<1, 4>(k, 8 * p) = (e.form * x.segment<4>(8 * p + 4)).transpose();
                j.block<1, 4>(k, 8 * p + 4) = (e.form.transpose() * x.segment<4>(8 * p)).transpose();
            }
        }
        return j;
    };

    Eigen::VectorXcd r = residual(z);
    double lambda = 1e-12;
    int iter = 0;
    for (; iter < opt.max_iterations; ++iter) {
        if (r.cwiseAbs().maxCoeff() < 1e-15) break;
        const Eigen::MatrixXcd j = jacobian(z);
        const Eigen::MatrixXcd jjh = j * j.adjoint();
        const double diag_scale = std::max(jjh.diagonal().real().maxCoeff(), 1e-300);
        bool improved = false;
        while (lambda < 1e8) {
            const Eigen::MatrixXcd a = jjh + (lambda * diag_scale) * Eigen::MatrixXcd::Identity(m, m);
            const Eigen::VectorXcd step = -j.adjoint() * a.ldlt().solve(r);
            const Eigen::VectorXcd z_new = z + step;
            const Eigen::VectorXcd r_new = residual(z_new);
            if (r_new.norm() < r.norm()) {
                z = z_new;
                r = r_new;
                lambda = std::max(lambda * 0.1, 1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) break;
    }

    SectorBuildResult out;
    out.iterations = iter;
    Quad& q = out.quad;
    q.phi = Spinor4::from_vec(z.segment<4>(0));
    q.psi = Spinor4::from_vec(z.segment<4>(4));
    if (!opt.single_pair) {
        q.phi_p = Spinor4::from_vec(z.segment<4>(8));
        q.psi_p = Spinor4::from_vec(z.segment<4>(12));
    }
    out.max_residual = max_residual(sector_residuals(q, s));
    const double pin_residual =
        n_constraints < static_cast<std::size_t>(m)
            ? r.tail(m - static_cast<Eigen::Index>(n_constraints)).cwiseAbs().maxCoeff()
            : 0.0;

    const std::string where = std::string(to_string(s)) + " sector, seed " + std::to_string(seed);
    if (out.max_residual > opt.accept_residual || pin_residual > opt.accept_residual) {
        const double worst = std::max(out.max_residual, pin_residual);
        throw SolverStall((worst > opt.stall_residual ? "solver stalled" : "solver did not reach tolerance") +
                              std::string(" (") + where + "), residual " + std::to_string(worst) +
                              "; retry with another seed",
                          worst);
    }
    const TensorSet t = q.decompose();
    for (auto g : sector_spec(s).free_components) {
        if (group_norm(t, g) <= opt.free_threshold) {
            throw SolverStall("free group " + std::string(to_string(g)) + " vanished (" + where +
                                  "); retry with another seed",
                              out.max_residual);
        }
    }
    return out;
}

}  // namespace dk
