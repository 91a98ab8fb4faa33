// Command-line front end: verify (symbolic suite), solve (periodic solver),
// monitor (solve + conservation residual columns), immerse (second
// fundamental form coefficients), surface (frame integration + OBJ export).
//
// Exit codes: 0 all checks pass, 1 verification failure, 2 usage/config
// error, 3 runtime guard stop (blow-up, degeneracy).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pss/chsolver.hpp"
#include "pss/immersion.hpp"
#include "pss/pssforms.hpp"
#include "pss/report.hpp"
#include "pss/surface3d.hpp"

namespace {

using namespace pss;
constexpr double two_pi = 2.0 * std::numbers::pi;

struct SineComponent {
    int mode = 1;
    double amplitude = 0.0;
    double phase = 0.0;
};

std::vector<SineComponent> parse_ic(const std::vector<std::string>& specs) {
    std::vector<SineComponent> out;
    for (const auto& s : specs) {
        SineComponent c;
        char c1 = 0, c2 = 0;
        std::istringstream is(s);
        if (!(is >> c.mode >> c1 >> c.amplitude) || c1 != ':')
            throw CLI::ValidationError("--ic", "expected mode:amplitude[:phase], got '" + s + "'");
        if (is >> c2) {
            if (c2 != ':' || !(is >> c.phase))
                throw CLI::ValidationError("--ic", "expected mode:amplitude[:phase], got '" + s + "'");
        }
        out.push_back(c);
    }
    return out;
}

SolverState make_state(int n, double L, const std::vector<SineComponent>& ic, double mean) {
    SolverState st;
    st.grid = Grid1D::make(L, n);
    Spectral sp(st.grid);
    auto xs = st.grid.nodes();
    std::vector<double> u(n, mean);
    for (const auto& c : ic)
        for (int j = 0; j < n; ++j)
            u[j] += c.amplitude * std::sin(c.mode * two_pi * xs[j] / L + c.phase);
    auto uxx = sp.deriv(u, 2);
    st.m.resize(n);
    for (int j = 0; j < n; ++j) st.m[j] = u[j] - uxx[j];
    return st;
}

int run_verify(int kmax, const std::string& report_path) {
    Report rep;
    for (int eps : {+1, -1}) {
        std::string tag = eps > 0 ? "+" : "-";
        PsSpec spec = build_forms(eps);
        auto rs = structure_residuals(spec);
        for (int i = 0; i < 3; ++i)
            rep.add_exact("structure-r" + std::to_string(i + 1) + " eps" + tag,
                          "structure equations mod the equation", rs[i].reduce(Ruleset::Pde).is_zero());
        rep.add_exact("structure-r2-proportional eps" + tag, "r2 = mu r1 in the raw ring",
                      (rs[1] - DiffExpr::scalar(ParamScalar::mu()) * rs[0]).is_zero());
        rep.add_exact("structure-r3-proportional eps" + tag, "r3 = eps s r1 in the raw ring",
                      (rs[2] - DiffExpr::scalar(ParamScalar::s() * Rational(eps)) * rs[0]).is_zero());
        rep.add_exact("one-form-family-instantiation eps" + tag,
                      "family G-formula reproduces the equation", family_instantiation_check(eps).ok);
        rep.add_exact("pseudo-potential-integrability eps" + tag,
                      "cross-derivative residual mod the equation",
                      check_integrability(eps).is_zero());
        rep.add_exact("parametric-conservation-identity eps" + tag,
                      "[g(u - u_xx + 1)]_t = [g phi]_x mod the equation",
                      check_conservation_identity(eps).is_zero());
    }
    rep.add_exact("t-jet-bridge-identity", "D_x(L) + L - R = 0 in the raw ring",
                  check_bridge_identity().is_zero());
    for (auto e : {Expansion::Negative, Expansion::Positive}) {
        std::string fam = e == Expansion::Negative ? "neg" : "pos";
        for (const auto& c : verify_hierarchy(e, kmax))
            rep.add_exact("hierarchy-" + fam + ": " + c.name, "series recursions and closed forms",
                          c.pass);
    }
    for (int k = 2; k <= kmax; ++k)
        for (const auto& c : check_exactness(Family::Neg, k))
            rep.add_exact("exactness-neg k=" + std::to_string(k) + ": " + c.name,
                          "density/flux from one potential", c.pass);
    for (int k = 1; k <= kmax; ++k)
        for (const auto& c : check_exactness(Family::Pos, k))
            rep.add_exact("exactness-pos k=" + std::to_string(k) + ": " + c.name,
                          "density/flux from one potential", c.pass);

    if (!report_path.empty()) rep.write(report_path);
    std::cout << (rep.all_pass() ? "verify: all " : "verify: FAILURES among ")
              << rep.checks.size() << " checks\n";
    return rep.all_pass() ? 0 : 1;
}

nlohmann::json run_metadata(const SolverState& st, const Spectral& sp, double dt) {
    auto u = helmholtz_solve(sp, st.m);
    double su = 0.0, sm = 0.0;
    for (double v : u) su = std::max(su, std::abs(v));
    for (double v : st.m) sm = std::max(sm, std::abs(v));
    return {{"L", st.grid.L}, {"n", st.grid.n}, {"dt", dt},
            {"t", st.t},      {"sup_u", su},   {"sup_m", sm}};
}

struct SolveArgs {
    int n = 256;
    double L = two_pi;
    double dt = 0.0;
    double t_end = 1.0;
    double mean = 0.0;
    std::vector<std::string> ic{"1:0.05:0"};
    std::string out, meta;
};

int run_solve(const SolveArgs& a, JetFields* jets_out = nullptr, SolverState* st_out = nullptr) {
    SolverState st = make_state(a.n, a.L, parse_ic(a.ic), a.mean);
    Spectral sp(st.grid);
    double dt = a.dt;
    if (dt <= 0.0) dt = heuristic_dt(sp, st);
    int nsteps = a.t_end > 0.0 ? static_cast<int>(std::ceil(a.t_end / dt)) : 0;
    if (nsteps > 0) dt = a.t_end / nsteps;
    try {
        advance(sp, st, nsteps > 0 ? dt : 1.0, nsteps);
    } catch (const BlowUpError& e) {
        std::cerr << "solve: " << e.what() << "\n";
        return 3;
    }
    JetFields jets = jet_snapshot(sp, st);
    if (!a.out.empty()) {
        std::ofstream os(a.out);
        if (!os) throw CLI::ValidationError("--out", "cannot open " + a.out);
        snapshot_csv(os, jets);
    }
    if (!a.meta.empty()) {
        std::ofstream os(a.meta);
        if (!os) throw CLI::ValidationError("--meta", "cannot open " + a.meta);
        os << run_metadata(st, sp, dt).dump(2) << "\n";
    }
    if (jets_out) *jets_out = std::move(jets);
    if (st_out) *st_out = std::move(st);
    return 0;
}

int run_monitor(const SolveArgs& a, const std::vector<std::string>& families,
                const std::vector<int>& ks, double tol, double window_hi,
                const std::string& report_path) {
    JetFields jets;
    SolverState st;
    SolveArgs inner = a;
    inner.out.clear();
    int rc = run_solve(inner, &jets, &st);
    if (rc != 0) return rc;

    Report rep;
    std::vector<std::pair<std::string, std::vector<double>>> extra;
    double hi = window_hi > 0.0 ? window_hi : a.L;
    for (const auto& fam : families) {
        Family f = fam == "neg" ? Family::Neg : Family::Pos;
        for (int k : ks) {
            if (f == Family::Neg && k < 2) continue;
            if (f == Family::Pos && k < 1) continue;
            try {
                auto r = conservation_residual(jets, f, k, {0.0, hi}, st.grid.h);
                std::vector<double> col(jets.x.size(), 0.0);
                for (std::size_t i = 0; i < r.indices.size(); ++i)
                    col[r.indices[i]] = r.residual[i];
                extra.emplace_back("resid_" + fam + std::to_string(k), std::move(col));
                rep.add("conservation-residual " + fam + " k=" + std::to_string(k),
                        "density/flux pair on the snapshot", r.sup, tol);
            } catch (const DivisionGuardError& e) {
                std::cerr << "monitor: " << e.what() << "\n";
                return 3;
            }
        }
    }
    if (!a.out.empty()) {
        std::ofstream os(a.out);
        if (!os) throw CLI::ValidationError("--out", "cannot open " + a.out);
        snapshot_csv(os, jets, extra);
    }
    if (!report_path.empty()) rep.write(report_path);
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "pass " : "FAIL ") << c.name << " residual " << c.residual << "\n";
    return rep.all_pass() ? 0 : 1;
}

struct ImmerseArgs {
    double mu = 0.0, beta = 1.0, C = 5.0;
    std::string sign = "+";
    double b0 = 1.5, x0 = 0.0, span = 0.5;
    int nodes = 257;
    std::string out;
};

int run_immerse(const ImmerseArgs& a) {
    int branch = a.sign == "-" ? -1 : +1;
    SffCoeffs co;
    if (a.mu == 0.0) {
        auto [lo, hi] = mu0_strip(a.C, a.beta);
        double margin = 1e-3 * (hi - lo);
        std::vector<double> xs(a.nodes);
        for (int i = 0; i < a.nodes; ++i)
            xs[i] = lo + margin + (hi - lo - 2 * margin) * i / (a.nodes - 1);
        co = mu0_coeffs(a.C, a.beta, branch, xs);
    } else {
        ImmersionParams p{.mu = a.mu, .beta = a.beta, .a_branch = branch};
        co = munz_solve(p, a.x0, a.b0, a.span, {}, a.nodes);
    }
    auto curv = curvature_diagnostics(co);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw CLI::ValidationError("--out", "cannot open " + a.out);
        os = &file;
    }
    nlohmann::json hdr{{"mu", a.mu},     {"beta", a.beta}, {"C", a.C},
                       {"branch", branch}, {"guard", co.stop_reason.empty() ? "none" : co.stop_reason}};
    *os << "# " << hdr.dump() << "\n";
    os->precision(17);
    *os << "x,a,b,c,H,gauss" << (a.mu != 0.0 ? ",delta" : "") << "\n";
    for (std::size_t i = 0; i < co.x.size(); ++i) {
        *os << co.x[i] << "," << co.a[i] << "," << co.b[i] << "," << co.c[i] << "," << curv.H[i]
            << "," << co.a[i] * co.c[i] - co.b[i] * co.b[i];
        if (a.mu != 0.0) *os << "," << co.delta[i];
        *os << "\n";
    }
    if (!co.stop_reason.empty()) {
        std::cerr << "immerse: guard stop: " << co.stop_reason << "\n";
        return 3;
    }
    return 0;
}

struct SurfaceArgs {
    SolveArgs solve;
    double C = 5.0, beta = 1.0;
    std::string sign = "+";
    std::string obj, diag;
};

int run_surface(const SurfaceArgs& a) {
    SolverState st = make_state(a.solve.n, a.solve.L, parse_ic(a.solve.ic), a.solve.mean);
    Spectral sp(st.grid);
    double dt = a.solve.dt;
    if (dt <= 0.0) dt = heuristic_dt(sp, st);
    int half_rows = std::max(1, static_cast<int>(std::floor(a.solve.t_end / (2 * dt))));
    int nslices = 2 * half_rows + 1;

    std::vector<JetFields> slices;
    std::vector<double> times;
    try {
        for (int s = 0; s < nslices; ++s) {
            if (s > 0) advance(sp, st, dt, 1);
            slices.push_back(jet_snapshot(sp, st));
            times.push_back(st.t);
        }
    } catch (const BlowUpError& e) {
        std::cerr << "surface: " << e.what() << "\n";
        return 3;
    }

    auto [lo, hi] = mu0_strip(a.C, a.beta);
    double h = st.grid.h;
    int ix0 = std::max(1, static_cast<int>(std::ceil((lo + 0.01) / h)));
    int ix1 = static_cast<int>(std::floor((hi - 0.05) / h));
    if ((ix1 - ix0) % 2 != 0) --ix1;
    if (ix1 <= ix0)
        throw CLI::ValidationError("surface", "strip holds no grid interval; refine the grid");
    std::vector<double> nodes(slices[0].x.begin() + ix0, slices[0].x.begin() + ix1 + 1);
    int branch = a.sign == "-" ? -1 : +1;
    SffCoeffs co = mu0_coeffs(a.C, a.beta, branch, nodes);

    auto mesh = integrate_frame(slices, times, co, ix0, ix1, 0.0, +1);
    auto rep = mesh_diagnostics(mesh, slices, co, ix0, 0.0, +1);
    if (!a.obj.empty()) export_obj(a.obj, mesh);

    nlohmann::json j{{"nx", mesh.nx},
                     {"nt", mesh.nt},
                     {"ortho_drift", mesh.max_ortho_drift},
                     {"metric_rel_err", rep.metric_rel_err},
                     {"k_min", rep.k_min},
                     {"k_max", rep.k_max},
                     {"k_mean", rep.k_mean},
                     {"interior_vertices", rep.interior_vertices},
                     {"degenerate", rep.degenerate}};
    if (!a.diag.empty()) {
        std::ofstream os(a.diag);
        if (!os) throw CLI::ValidationError("--diag", "cannot open " + a.diag);
        os << j.dump(2) << "\n";
    }
    std::cout << j.dump() << "\n";
    bool ok = !rep.degenerate && rep.k_min >= -1.05 && rep.k_max <= -0.95 &&
              rep.metric_rel_err <= 0.01;
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic-numeric laboratory for a pseudospherical evolution equation"};
    app.require_subcommand(1);
    app.set_config("--config")->description("TOML config file; flags override");

    if (const char* threads = std::getenv("PSS_THREADS")) {
        // modules are sequential; the cap is accepted for forward compatibility
        (void)threads;
    }

    int kmax = 5;
    std::string verify_report;
    auto* verify = app.add_subcommand("verify", "run the exact symbolic suite");
    verify->add_option("--kmax", kmax, "hierarchy depth")->check(CLI::Range(1, 12));
    verify->add_option("--report", verify_report, "JSON report path");

    SolveArgs sa;
    auto add_solve_opts = [](CLI::App* cmd, SolveArgs& s) {
        cmd->add_option("--n", s.n, "grid size (power of two >= 16)");
        cmd->add_option("--L", s.L, "domain length");
        cmd->add_option("--dt", s.dt, "time step (0: stability heuristic)");
        cmd->add_option("--t-end", s.t_end, "final time")->check(CLI::NonNegativeNumber);
        cmd->add_option("--mean", s.mean, "constant offset of the initial condition");
        cmd->add_option("--ic", s.ic, "sine components mode:amplitude[:phase]");
        cmd->add_option("--out", s.out, "snapshot CSV path");
        cmd->add_option("--meta", s.meta, "run metadata JSON path");
    };
    auto* solve = app.add_subcommand("solve", "periodic solve, snapshot CSV");
    add_solve_opts(solve, sa);

    SolveArgs ma;
    std::vector<std::string> mon_families{"neg", "pos"};
    std::vector<int> mon_ks{2, 3};
    double mon_tol = 1e-6, mon_window = 0.0;
    std::string mon_report;
    auto* monitor = app.add_subcommand("monitor", "solve + conservation residual columns");
    add_solve_opts(monitor, ma);
    monitor->add_option("--family", mon_families, "families to monitor: neg, pos")
        ->check(CLI::IsMember({"neg", "pos"}));
    monitor->add_option("--k", mon_ks, "hierarchy indices");
    monitor->add_option("--tol", mon_tol, "pass/fail tolerance on the sup-norm");
    monitor->add_option("--window", mon_window, "restrict residuals to x <= window");
    monitor->add_option("--report", mon_report, "JSON report path");

    ImmerseArgs ia;
    auto* immerse = app.add_subcommand("immerse", "second-fundamental-form coefficients CSV");
    immerse->add_option("--mu", ia.mu, "mu parameter");
    immerse->add_option("--beta", ia.beta, "beta parameter");
    immerse->add_option("--C", ia.C, "strip constant (mu = 0 branch)");
    immerse->add_option("--sign", ia.sign, "branch sign + or -")->check(CLI::IsMember({"+", "-"}));
    immerse->add_option("--b0", ia.b0, "initial b (mu != 0 branch)");
    immerse->add_option("--x0", ia.x0, "initial x (mu != 0 branch)");
    immerse->add_option("--span", ia.span, "integration span (mu != 0 branch)");
    immerse->add_option("--nodes", ia.nodes, "output nodes")->check(CLI::Range(2, 1 << 20));
    immerse->add_option("--out", ia.out, "CSV path (default stdout)");

    SurfaceArgs su;
    su.solve.n = 1024;
    su.solve.t_end = 0.1;
    su.solve.ic = {"1:0.3:0"};
    su.solve.mean = 1.0;
    auto* surface = app.add_subcommand("surface", "frame integration, OBJ + diagnostics");
    add_solve_opts(surface, su.solve);
    surface->add_option("--C", su.C, "strip constant");
    surface->add_option("--beta", su.beta, "beta parameter");
    surface->add_option("--sign", su.sign, "branch sign + or -")->check(CLI::IsMember({"+", "-"}));
    surface->add_option("--obj", su.obj, "OBJ mesh path");
    surface->add_option("--diag", su.diag, "diagnostics JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return run_verify(kmax, verify_report);
        if (solve->parsed()) return run_solve(sa);
        if (monitor->parsed())
            return run_monitor(ma, mon_families, mon_ks, mon_tol, mon_window, mon_report);
        if (immerse->parsed()) return run_immerse(ia);
        if (surface->parsed()) return run_surface(su);
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const BlowUpError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DivisionGuardError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
