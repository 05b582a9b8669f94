// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dkspin/dkspin.hpp"
#include "dkspin/cli.hpp"
#include "dkspin/json_io.hpp"
#include "support/oracles.hpp"

using namespace dk;

namespace {

struct Criterion
{
    int id;
    std::string name;
    std::function<bool(std::ostringstream&)> check;
};

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", x);
    return buf;
}

//---------------------------------------------------------------------------//

bool round_trip(std::ostringstream& note)
{
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        std::array<Complex, 16> flat{};
        flat[static_cast<std::size_t>(k)] = 1.0;
        const TensorSet t = TensorSet::from_flat(flat);
        worst = std::max(worst, max_abs_difference(decompose_bispinor(reconstruct_bispinor(t)), t));
    }
    Sampler rng(1);
    for (int i = 0; i < 100; ++i) {
        std::array<Complex, 16> flat{};
        for (auto& z : flat) z = rng.complex();
        const TensorSet t = TensorSet::from_flat(flat);
        worst = std::max(worst, max_abs_difference(decompose_bispinor(reconstruct_bispinor(t)), t));
    }
    note << "max error " << sci(worst) << ", calibration " << kExpansionCalibration;
    return worst < 1e-12;
}

bool pair_path(std::ostringstream& note)
{
    Sampler rng(2);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Spinor4 phi = rng.spinor(), psi = rng.spinor();
        worst = std::max(worst, max_abs_difference(decompose_pair(phi, psi), decompose_bispinor(outer_product(phi, psi))));
    }
    note << "max difference " << sci(worst) << " over 1000 pairs";
    return worst < 1e-12;
}

bool identity_suite(std::ostringstream& note)
{
    Sampler rng(3);
    double worst_pair = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const TensorSet t = decompose_pair(rng.spinor(), rng.spinor());
        worst_pair = std::max({worst_pair, residual_orthogonality(t).max_residual, residual_fierz(t).max_residual});
    }
    std::vector<TensorSet> quads;
    int exceeded = 0;
    for (int i = 0; i < 1000; ++i) {
        quads.push_back(decompose_quad(rng.spinor(), rng.spinor(), rng.spinor(), rng.spinor()));
        if (residual_fierz(quads.back()).max_residual > 1e-3) ++exceeded;
    }
    const AnsatzFit fit = fit_quad_ansatz(quads);
    note << "pair max " << sci(worst_pair) << "; quads above 1e-3: " << exceeded << "/1000; ansatz floor "
         << sci(fit.residual_floor);
    return worst_pair < 1e-12 && exceeded >= 990 && fit.residual_floor > 1e-3;
}

/// psi -> selected components of decompose_pair(phi, psi), as a matrix.
Eigen::MatrixXcd component_map(const Spinor4& phi, int first, int count)
{
    Eigen::MatrixXcd m(count, 4);
    for (int j = 0; j < 4; ++j) {
        Spinor4 e;
        e[j] = 1.0;
        const auto flat = decompose_pair(phi, e).flatten();
        for (int c = 0; c < count; ++c) m(c, j) = flat[static_cast<std::size_t>(first + c)];
    }
    return m;
}

bool biconditionals(std::ostringstream& note)
{
    struct Case
    {
        PairCase pair_case;
        int first, count;  // vanishing components in flattened order
        int kernel_dim;
    };
    const std::vector<Case> cases{{PairCase::scalar_pseudoscalar_zero, 0, 2, 2},
                                  {PairCase::pseudovector_zero, 6, 4, 1},
                                  {PairCase::vector_zero, 2, 4, 1}};
    double worst_forward = 0.0, worst_converse = 0.0, worst_r2 = 1.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Sampler rng(1000 + seed);
        const PairCaseParams p{rng.spinor(), rng.spinor(), rng.complex(), rng.complex()};
        const Spinor4 direction = rng.spinor();
        for (const auto& c : cases) {
            // restriction => vanishing
            const auto [phi, psi] = pair_case_build(c.pair_case, p);
            const auto flat = decompose_pair(phi, psi).flatten();
            double zero = 0.0;
            for (int k = c.first; k < c.first + c.count; ++k) zero = std::max(zero, std::abs(flat[static_cast<std::size_t>(k)]));
            worst_forward = std::max(worst_forward, zero / (phi.norm() * psi.norm()));

            // vanishing => restriction: the kernel is exactly the restricted family
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(component_map(phi, c.first, c.count));
            const Eigen::MatrixXcd ker = lu.kernel();
            if (ker.cols() != c.kernel_dim) return false;
            for (int k = 0; k < ker.cols(); ++k) {
                const Eigen::Vector4cd v = ker.col(k);
                double off = 0.0;
                if (c.pair_case == PairCase::scalar_pseudoscalar_zero) {
                    off = std::abs(phi.b * v[0] - phi.a * v[1]) + std::abs(phi.d * v[2] - phi.c * v[3]);
                }
                else {
                    const double sign = c.pair_case == PairCase::pseudovector_zero ? 1.0 : -1.0;
                    const Eigen::Vector4cd line(phi.a, phi.b, sign * phi.c, sign * phi.d);
                    off = (v - (v[0] / phi.a) * line).norm();
                }
                worst_converse = std::max(worst_converse, off / v.norm());
            }

            // leaving the restriction grows the group linearly
            std::vector<double> deltas, sizes;
            for (double d : {1e-4, 2e-4, 3e-4, 4e-4, 5e-4}) {
                const auto f = decompose_pair(phi, psi + Complex(d) * direction).flatten();
                double s = 0.0;
                for (int k = c.first; k < c.first + c.count; ++k) s = std::hypot(s, std::abs(f[static_cast<std::size_t>(k)]));
                deltas.push_back(d);
                sizes.push_back(s);
            }
            worst_r2 = std::min(worst_r2, oracle::linear_fit_r2(deltas, sizes));
        }
    }
    note << "forward " << sci(worst_forward) << ", converse " << sci(worst_converse) << ", min R^2 " << worst_r2;
    return worst_forward < 1e-12 && worst_converse < 1e-10 && worst_r2 > 0.999;
}

bool constraint_counts(std::ostringstream& note)
{
    const std::array<std::size_t, 4> expected{11, 11, 6, 6};
    Sampler rng(5);
    const Quad probe{rng.spinor(), rng.spinor(), rng.spinor(), rng.spinor()};
    bool ok = true;
    double worst_res = 0.0, weakest_free = 1e300;
    for (std::size_t i = 0; i < 4; ++i) {
        const Sector s = kAllSectors[i];
        ok = ok && sector_residuals(probe, s).size() == expected[i];
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            try {
                const auto built = sector_build(s, seed);
                const auto res = sector_residuals(built.quad, s);
                ok = ok && res.size() == expected[i];
                worst_res = std::max(worst_res, max_residual(res));
                const TensorSet t = built.quad.decompose();
                for (auto g : sector_spec(s).free_components) weakest_free = std::min(weakest_free, group_norm(t, g));
            }
            catch (const SolverStall& e) {
                note << "stall: " << e.what() << "; ";
                ok = false;
            }
        }
    }
    note << "counts 11/11/6/6, max residual " << sci(worst_res) << ", weakest free group " << sci(weakest_free);
    return ok && worst_res < 1e-10 && weakest_free > 1e-3;
}

bool isotropy(std::ostringstream& note)
{
    Sampler rng(6);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Spinor4 phi = rng.spinor();
        const Complex mu = rng.complex(), nu = rng.complex();
        const TensorSet t = decompose_pair(phi, {mu * phi.a, mu * phi.b, nu * phi.c, nu * phi.d});
        worst = std::max(worst, residual_isotropy(t, mu, nu, phi).max_residual);
    }
    note << "max residual " << sci(worst) << " over 100 pairs";
    return worst < 1e-12;
}

bool lorentz(std::ostringstream& note)
{
    Sampler rng(7);
    double worst = 0.0;
    int verdict_changes = 0, case_changes = 0, sector_changes = 0;
    for (int i = 0; i < 200; ++i) {
        const auto g = element_from_boost(rng.direction(), rng.uniform(-2.0, 2.0)) *
                       element_from_rotation(rng.direction(), rng.uniform(-4.0, 4.0));
        const Spinor4 phi = rng.spinor(), psi = rng.spinor();
        worst = std::max(worst, covariance_residual(g, phi, psi));

        const Spinor4 gphi = transform_spinor(g, phi), gpsi = transform_spinor(g, psi);
        const TensorSet t0 = decompose_pair(phi, psi), t1 = decompose_pair(gphi, gpsi);
        if (residual_fierz(t0).holds != residual_fierz(t1).holds ||
            residual_orthogonality(t0).holds != residual_orthogonality(t1).holds) {
            ++verdict_changes;
        }
        const PairCaseParams p{phi, psi, rng.complex(), rng.complex()};
        const PairCase c = kAllPairCases[static_cast<std::size_t>(i) % (kAllPairCases.size() - 1)];
        const auto [a, b] = pair_case_build(c, p);
        if (pair_case_classify(transform_spinor(g, a), transform_spinor(g, b)) != c) ++case_changes;

        if (i < 40) {
            const Sector s = kAllSectors[static_cast<std::size_t>(i) % 4];
            const Quad q = sector_build(s, 100 + static_cast<std::uint64_t>(i)).quad;
            const Quad gq{transform_spinor(g, q.phi), transform_spinor(g, q.psi), transform_spinor(g, q.phi_p),
                          transform_spinor(g, q.psi_p)};
            const auto cls = sector_classify(gq);
            if (!cls || *cls != s) ++sector_changes;
        }
    }
    note << "max covariance residual " << sci(worst) << "; verdict changes " << verdict_changes << ", case changes "
         << case_changes << ", sector changes " << sector_changes;
    return worst < 1e-10 && verdict_changes == 0 && case_changes == 0 && sector_changes == 0;
}

bool dynamics(std::ostringstream& note)
{
    Sampler rng(8);
    double worst_lin = 0.0, worst_nl = 0.0;
    bool within_envelope = true;
    for (int i = 0; i < 50; ++i) {
        const double mass = rng.uniform(0.3, 2.0);
        const Momentum p = on_shell_momentum({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)}, mass);
        const int b1 = i % 2, b2 = (i / 2) % 2;
        const PlaneWaveField phi{p, mass, dirac_plane_wave(p, mass, b1)};
        const PlaneWaveField psi{p, mass, dirac_plane_wave(p, mass, b2)};
        worst_lin = std::max(worst_lin, linear_system_residual(phi, psi).max_residual);

        const PlaneWaveField mixed{p, mass, dirac_plane_wave(p, mass, 1 - b1)};
        const auto nl = nonlinear_system_residual(phi, mixed);
        if (nl.singular) return false;
        worst_nl = std::max(worst_nl, nl.max_residual);
        within_envelope = within_envelope && nl.max_residual <= nl.envelope_bound * (1.0 + 1e-12);

        // generic amplitudes: rewrite residual bounded by the envelope
        const Spinor4 left = rng.spinor();
        const Spinor4 right = rng.spinor();
        const auto off = nonlinear_system_residual({p, mass, left}, {p, mass, right});
        if (!off.singular) within_envelope = within_envelope && off.max_residual <= off.envelope_bound * (1.0 + 1e-12);
    }

    const Momentum p = on_shell_momentum({0.3, -0.4, 0.2}, 1.0);
    const PlaneWaveField phi{p, 1.0, dirac_plane_wave(p, 1.0, 0)};
    const PlaneWaveField psi{p, 1.0, dirac_plane_wave(p, 1.0, 1)};
    const Spinor4 direction = rng.spinor();
    std::vector<double> deltas, residuals;
    for (double d : {1e-3, 2e-3, 3e-3, 4e-3, 5e-3}) {
        deltas.push_back(d);
        residuals.push_back(linear_system_residual({p, 1.0, phi.amplitude + Complex(d) * direction}, psi).max_residual);
    }
    const double r2 = oracle::linear_fit_r2(deltas, residuals);

    // blockwise-proportional amplitudes force a vanishing pseudoscalar
    const Spinor4 base = rng.spinor();
    const Spinor4 partner{2.0 * base.a, 2.0 * base.b, 3.0 * base.c, 3.0 * base.d};
    const bool singular = nonlinear_system_residual({p, 1.0, base}, {p, 1.0, partner}).singular &&
                          nonlinear_system_residual(phi, phi).singular;

    note << "linear max " << sci(worst_lin) << ", nonlinear max " << sci(worst_nl) << ", off-shell R^2 " << r2
         << ", envelope " << (within_envelope ? "respected" : "violated") << ", singular detection "
         << (singular ? "ok" : "missed");
    return worst_lin < 1e-10 && worst_nl < 1e-9 && r2 > 0.999 && within_envelope && singular;
}

//---------------------------------------------------------------------------//

int run_cli(const std::string& args, const std::string& out_file)
{
    const std::string cmd = std::string("\"") + DKSPIN_CLI_PATH + "\" " + args + " > \"" + out_file + "\" 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

bool cli_determinism(std::ostringstream& note)
{
    const std::string dir = DKSPIN_WORK_DIR;
    const std::string a = dir + "/acceptance_verify_a.json";
    const std::string b = dir + "/acceptance_verify_b.json";
    const int s1 = run_cli("verify --seed 42 --samples 1000", a);
    const int s2 = run_cli("verify --seed 42 --samples 1000", b);
    const bool identical = json_io::read_file(a) == json_io::read_file(b) && !json_io::read_file(a).empty();

    std::ostringstream in_process;
    std::ostringstream err;
    cli::run({"verify", "--seed", "42", "--samples", "1000"}, in_process, err);
    const bool same_in_process = in_process.str() == json_io::read_file(a);

    const std::string empty = dir + "/acceptance_empty.json";
    std::ofstream(empty).close();
    const int fail = run_cli("verify --samples 5 --tol 1e-30", dir + "/acceptance_fail.json");
    const int parse = run_cli("decompose --input \"" + empty + "\"", dir + "/acceptance_parse.json");
    const int usage = run_cli("verify --samples 0", dir + "/acceptance_usage.json");

    note << "statuses pass/pass/fail/parse/usage = " << s1 << "/" << s2 << "/" << fail << "/" << parse << "/" << usage
         << ", byte-identical " << (identical ? "yes" : "no") << ", in-process match "
         << (same_in_process ? "yes" : "no");
    return s1 == 0 && s2 == 0 && identical && same_in_process && fail == 1 && parse == 2 && usage == 2;
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "round-trip bijection", round_trip},
        {2, "pair-path consistency", pair_path},
        {3, "identity suite and quad refutation", identity_suite},
        {4, "proportionality biconditionals", biconditionals},
        {5, "sector constraint counts and solver", constraint_counts},
        {6, "isotropy relations", isotropy},
        {7, "lorentz covariance and invariance", lorentz},
        {8, "dynamics on plane waves", dynamics},
        {9, "cli determinism and exit statuses", cli_determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        std::ostringstream note;
        bool ok = false;
        try {
            ok = c.check(note);
        }
        catch (const std::exception& e) {
            note << "exception: " << e.what();
        }
        if (!ok) ++failed;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.id << " " << c.name << " (" << note.str() << ")\n";
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
