// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Arguments: <cli-binary> <config-dir> <scratch-dir>.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wallflux/budgets.hpp"
#include "wallflux/fd.hpp"
#include "wallflux/sweeps.hpp"

using namespace wallflux;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void verdict(const char* id, bool pass, const std::string& detail) {
    std::printf("%-4s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::shared_ptr<const Body> sphere() {
    static std::shared_ptr<const Body> b = Body::make_sphere(1.0);
    return b;
}

const Vec3 kV{0, 0, 1};
const TimeBump kBump = TimeBump::standard(1.0);
const double kEps = 0.45;
const double kNu = 0.1;

QuadratureSpec reference_spec() {
    QuadratureSpec s;
    s.surface_order = 12;
    s.radial_order = 16;
    s.shell_radial_order = 16;
    s.time_order = 20;
    s.ball_radial_order = 6;
    s.ball_sphere_order = 6;
    return s;
}

std::shared_ptr<const SurfaceSection> tan_section(const std::string& id, const AmbientField& a) {
    return std::make_shared<SurfaceSection>(SurfaceSection::tangential(id, sphere(), a, kBump));
}
std::shared_ptr<const SurfaceSection> nrm_section(const std::string& id,
                                                  const NormalProfile& p) {
    return std::make_shared<SurfaceSection>(SurfaceSection::normal(id, sphere(), p, kBump));
}

std::vector<double> dyadic(double base, int k0, int k1) {
    std::vector<double> out;
    for (int k = k0; k <= k1; ++k) out.push_back(base * std::pow(2.0, -k));
    return out;
}

// --------------------------------------------------------------------------

void criterion1() {
    const auto start = std::chrono::steady_clock::now();
    auto stokes = make_stokes_sphere(kV, 1.0, kNu, 0.0, 1.0);
    const Vec3 tilt{1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)};
    const std::vector<std::shared_ptr<const SurfaceSection>> sections{
        tan_section("tz", AmbientField::constant(kV)),
        tan_section("mz", AmbientField::meridional(kV)),
        tan_section("mt", AmbientField::meridional(tilt))};
    bool pass = true;
    std::ostringstream detail;
    for (const auto& psi : sections) {
        const ExtendedTestField phi = extend_tangential(sphere(), psi, kEps);
        const IdentityResidual r =
            identity_residual_tangential(*stokes, *sphere(), phi, reference_spec());
        const double scale = std::max(std::fabs(r.left), std::fabs(r.right));
        const double rel_ref = r.abs_residual_base / scale;
        const bool improving = r.abs_residual < r.abs_residual_base;
        pass = pass && rel_ref <= 1e-5 && improving;
        detail << psi->id << ": rel=" << fmt(rel_ref)
               << (improving ? " improving" : " NOT-improving") << "  ";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    pass = pass && secs <= 120.0;
    detail << "runtime=" << fmt(secs) << "s";
    verdict("C1", pass, "weak tangential identity (forced Stokes): " + detail.str());
}

void criterion2() {
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    auto swirl = tan_section("swirl", AmbientField::axial_swirl(kV));
    const std::vector<std::shared_ptr<const SurfaceSection>> sections{
        nrm_section("n1", NormalProfile::constant(1.0)),
        nrm_section("nz2", NormalProfile::component_squared(kV)),
        std::make_shared<SurfaceSection>(lighthill_companion_section(swirl))};
    bool pass = true;
    std::ostringstream detail;
    for (const auto& psi : sections) {
        const ExtendedTestField phi = extend_normal(sphere(), psi, kEps);
        const IdentityResidual r =
            identity_residual_normal(*pot, *sphere(), phi, reference_spec());
        pass = pass && r.rel_residual <= 1e-6;
        detail << psi->id << ": rel=" << fmt(r.rel_residual) << "  ";
    }
    verdict("C2", pass, "weak normal identity (potential): " + detail.str());
}

void criterion3() {
    auto stokes = make_stokes_sphere(kV, 1.0, kNu, 0.0, 1.0);
    auto nz = nrm_section("nz", NormalProfile::component(kV));
    QuadratureSpec spec = reference_spec();
    spec.shell_radial_order = 18;
    const ExtendedTestField phi = extend_normal(sphere(), nz, kEps);
    const ScaleSweepResult res = run_scale_sweep(*stokes, *sphere(), phi, dyadic(kEps, 2, 6),
                                                 0.5, "wall_pressure", spec, 2);
    const bool pass = res.gap_fit.valid && res.gap_fit.exponent >= 1.0 &&
                      res.limit_gap_rel <= 1e-3;
    std::ostringstream detail;
    detail << "exponent=" << fmt(res.gap_fit.exponent)
           << " limit_gap_rel=" << fmt(res.limit_gap_rel)
           << " raw_final_gap_rel=" << fmt(res.points.back().gap_rel);
    verdict("C3", pass, "flux-to-wall convergence (Stokes, normal): " + detail.str());
}

void criterion4() {
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    auto tz = tan_section("tz", AmbientField::constant(kV));
    const QuadratureSpec spec = reference_spec();
    const ExtendedTestField canonical = extend_tangential(sphere(), tz, kEps);
    const PairingValue pv =
        momentum_flux_pairing(*pot, *sphere(), kEps / 8.0, kEps / 16.0, canonical, spec);
    const bool zero_pass = std::fabs(pv.pressure) <= 1e-14;

    const ExtendedTestField drift = extend_tangential_drift(sphere(), tz, kEps, 0.5, kV);
    std::vector<double> hs, pres;
    for (double h : dyadic(kEps, 4, 8)) {
        const PairingValue pd =
            momentum_flux_pairing(*pot, *sphere(), h, 0.5 * h, drift, spec);
        hs.push_back(h);
        pres.push_back(std::fabs(pd.pressure));
    }
    const RateFit fit = fit_rate(hs, pres, {});
    const bool drift_pass = fit.valid && std::fabs(fit.exponent - 1.0) <= 0.2;
    std::ostringstream detail;
    detail << "canonical pressure=" << fmt(pv.pressure)
           << " drift exponent=" << fmt(fit.exponent);
    verdict("C4", zero_pass && drift_pass,
            "natural-extension pressure annihilation: " + detail.str());
}

void criterion5() {
    auto tz = tan_section("tz", AmbientField::constant(kV));
    auto nz = nrm_section("nz", NormalProfile::component(kV));
    const QuadratureSpec spec = reference_spec();
    const std::vector<double> nus = dyadic(1.0, 4, 14);
    const std::vector<double> deltas = dyadic(0.5, 1, 5);
    bool pass = true;
    std::ostringstream detail;

    {  // weak-anomaly scenario: delta = sqrt(nu), skin friction fades
        BoundaryLayerOptions opt;
        opt.delta_exponent = 0.5;
        auto family = [&](double nu) {
            return make_boundary_layer(sphere(), kV, 1.0, nu, opt, 1.0);
        };
        const ViscositySweepResult res =
            run_viscosity_sweep(family, *sphere(), *tz, *nz, nus, spec, 2);
        const bool expfit = res.tau_fit.valid && std::fabs(res.tau_fit.exponent - 0.5) <= 0.1;
        auto field = family(nus.back());
        const auto curve = estimate_no_flow_through(*field, *sphere(), deltas, spec);
        const bool vanish = curve.back().value.lower <= 0.5 * curve.front().value.lower;
        pass = pass && expfit && vanish;
        detail << "sqrt: exp=" << fmt(res.tau_fit.exponent)
               << (vanish ? " no-flow-vanishes" : " no-flow-PERSISTS") << "  ";
    }
    {  // vortex-sheet scenario: delta = nu with a wall-normal burst
        BoundaryLayerOptions opt;
        opt.delta_exponent = 1.0;
        opt.normal_perturbation = 0.5;
        auto family = [&](double nu) {
            return make_boundary_layer(sphere(), kV, 1.0, nu, opt, 1.0);
        };
        const ViscositySweepResult res =
            run_viscosity_sweep(family, *sphere(), *tz, *nz, nus, spec, 2);
        const bool expfit = res.tau_fit.valid && std::fabs(res.tau_fit.exponent - 0.0) <= 0.1;
        auto field = family(nus.back());
        const auto curve = estimate_no_flow_through(*field, *sphere(), deltas, spec);
        const bool persist = curve.back().value.lower > 0.5 * curve.front().value.lower;
        pass = pass && expfit && persist;
        detail << "linear: exp=" << fmt(res.tau_fit.exponent)
               << (persist ? " no-flow-persists" : " no-flow-VANISHES");
    }
    verdict("C5", pass, "anomaly scenarios (layer family): " + detail.str());
}

void criterion6() {
    const QuadratureSpec spec = reference_spec();
    auto nz = nrm_section("nz", NormalProfile::component(kV));
    auto tz = tan_section("tz", AmbientField::constant(kV));
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    const double form = pair_wall_pressure(*pot, *sphere(), *nz, spec).value;
    const bool dalembert = std::fabs(form) <= 1e-10;

    auto stokes = make_stokes_sphere(kV, 1.0, kNu, 0.0, 1.0);
    const double skin = pair_wall_shear(*stokes, *sphere(), *tz, spec).value;
    const double pres = pair_wall_pressure(*stokes, *sphere(), *nz, spec).value;
    const double drag = skin - pres;  // pressure pairing enters drag with its sign flipped
    const double expect = 6.0 * M_PI * kNu * 1.0 * 1.0 * kBump.integral();
    const bool total_ok = std::fabs(drag - expect) <= 1e-5 * expect;
    const bool split_ok = std::fabs(skin / (-pres) - 2.0) <= 1e-5;
    std::ostringstream detail;
    detail << "potential form drag=" << fmt(form) << " stokes drag rel err="
           << fmt(std::fabs(drag - expect) / expect) << " skin:pressure="
           << fmt(skin / (-pres));
    verdict("C6", dalembert && total_ok && split_ok, "drag pairings: " + detail.str());
}

void criterion7() {
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    auto swirl = tan_section("swirl", AmbientField::axial_swirl(kV));
    const QuadratureSpec spec = reference_spec();
    const ExtendedTestField phi = extend_tangential(sphere(), swirl, kEps);

    const LighthillBalance ref = lighthill_balance(*pot, *sphere(), 0.1, 0.05, phi, spec);
    const bool balance_ok = ref.residual.rel_residual <= 1e-4;

    auto companion = std::make_shared<SurfaceSection>(lighthill_companion_section(swirl));
    const double target = pair_wall_pressure(*pot, *sphere(), *companion, spec).value;
    std::vector<double> hs, s1, gaps;
    for (double h : dyadic(kEps, 2, 6)) {
        const LighthillBalance bal = lighthill_balance(*pot, *sphere(), h, 0.5 * h, phi, spec);
        hs.push_back(h);
        s1.push_back(bal.step1.value);
        gaps.push_back(std::fabs(bal.step1.value - target));
    }
    const RateFit fit = fit_rate(hs, gaps, {});
    const double limit = richardson_limit(hs, s1, fit.valid ? fit.exponent : 1.0);
    const double limit_gap = std::fabs(limit - target) / std::fabs(target);
    const bool limit_ok = limit_gap <= 1e-3;
    std::ostringstream detail;
    detail << "step1-vs-step2 rel=" << fmt(ref.residual.rel_residual)
           << " limit_gap_rel=" << fmt(limit_gap);
    verdict("C7", balance_ok && limit_ok, "vorticity-source balance: " + detail.str());
}

void criterion8() {
    auto pot = make_potential_sphere(kV, 1.0, 0.0, 1.0);
    QuadratureSpec spec = reference_spec();
    spec.surface_order = 10;
    const std::vector<double> hs{0.2, 0.1, 0.05, 0.025, 0.0125};
    bool pass = true;
    std::ostringstream detail;
    for (int comp : {0, 2}) {
        const auto curve =
            filter_convergence_curve_component(*pot, *sphere(), comp, 0.0, 0.3, hs, 0.5, 2,
                                               spec);
        bool monotone = true;
        for (std::size_t i = curve.size() - 3; i + 1 < curve.size(); ++i)
            monotone = monotone && curve[i + 1].norm < curve[i].norm;
        const bool shrinking = curve.back().norm < 0.4 * curve.front().norm;
        pass = pass && monotone && shrinking;
        detail << "u" << comp + 1 << ": " << fmt(curve.front().norm) << "->"
               << fmt(curve.back().norm) << (monotone ? " monotone" : " NOT-monotone") << "  ";
    }
    verdict("C8", pass, "windowed filter convergence on a wall annulus: " + detail.str());
}

void criterion9() {
    const SurfaceQuadrature sq = sphere()->surface_quadrature(24);
    const double area_err = std::fabs(sq.total_weight() - 4.0 * M_PI);
    double xdotn = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i)
        xdotn += sq.weights[i] * dot(sq.nodes[i], sq.normals[i]);
    const double divthm_err = std::fabs(xdotn - 4.0 * M_PI);

    double idem = 0.0, gradd = 0.0;
    for (std::size_t i = 0; i < sq.size(); i += 37) {
        const Vec3 x = sq.nodes[i] + 0.3 * sq.normals[i];
        const Vec3 foot = sphere()->project(x);
        idem = std::max(idem, norm(sphere()->project(foot) - foot));
        const Vec3 n = sphere()->normal_at(foot);
        for (int j = 0; j < 3; ++j) {
            Vec3 e{0, 0, 0};
            e[j] = 1.0;
            const double fd1 =
                fd::deriv1([&](double t) { return sphere()->distance(x + t * e); }, 1e-5);
            gradd = std::max(gradd, std::fabs(fd1 - n[j]));
        }
    }
    const bool pass =
        area_err <= 1e-12 && divthm_err <= 1e-10 && idem <= 1e-8 && gradd <= 1e-8;
    std::ostringstream detail;
    detail << "area_err=" << fmt(area_err) << " divthm_err=" << fmt(divthm_err)
           << " idempotence=" << fmt(idem) << " grad_d=" << fmt(gradd);
    verdict("C9", pass, "geometry oracles: " + detail.str());
}

void criterion10(const std::string& cli, const std::string& config_dir,
                 const std::string& scratch) {
    const std::string cfg = config_dir + "/potential_sphere.cfg";
    const std::string out_a = scratch + "/det_a", out_b = scratch + "/det_b";
    fs::create_directories(scratch);
    const std::string base = cli + " verify --config " + cfg + " --threads 2 --out ";
    const int rc1 = std::system((base + out_a + " > /dev/null 2>&1").c_str());
    const int rc2 = std::system((base + out_b + " > /dev/null 2>&1").c_str());
    bool pass = WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0;
    std::string mismatch = "none";
    for (const char* f :
         {"pairings.csv", "identities.csv", "sweeps.csv", "ratefits.csv", "curves.csv"}) {
        std::ifstream fa(out_a + "/" + f), fb(out_b + "/" + f);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (!fa || !fb || sa.str() != sb.str() || sa.str().empty()) {
            pass = false;
            mismatch = f;
        }
    }
    verdict("C10", pass,
            std::string("byte-identical CSV across repeated runs: mismatch=") + mismatch);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::fprintf(stderr, "usage: acceptance <cli-binary> <config-dir> <scratch-dir>\n");
        return 64;
    }
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10(argv[1], argv[2], argv[3]);
    std::printf("acceptance: %d of 10 criteria failed\n", g_failures);
    return g_failures;
}
