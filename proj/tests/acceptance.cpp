// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include "pss/chsolver.hpp"
#include "pss/immersion.hpp"
#include "pss/pseudopot.hpp"
#include "pss/pssforms.hpp"
#include "pss/surface3d.hpp"

using namespace pss;

namespace {

constexpr double pi = std::numbers::pi;
int failures = 0;

void criterion(int num, const char* name, bool pass) {
    std::printf("%s criterion %2d: %s\n", pass ? "pass" : "FAIL", num, name);
    if (!pass) ++failures;
}

SolverState make_state(int n, double L, double amp, double mean = 0.0) {
    SolverState st;
    st.grid = Grid1D::make(L, n);
    Spectral sp(st.grid);
    auto xs = st.grid.nodes();
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) u[j] = mean + amp * std::sin(xs[j]);
    auto uxx = sp.deriv(u, 2);
    st.m.resize(n);
    for (int j = 0; j < n; ++j) st.m[j] = u[j] - uxx[j];
    return st;
}

double sup(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

// ---- 1: structure equations -------------------------------------------------

bool structure_equations() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (int eps : {+1, -1}) {
        PsSpec spec = build_forms(eps);
        auto rs = structure_residuals(spec);
        for (const auto& r : rs) ok = ok && r.reduce(Ruleset::Pde).is_zero();
        ok = ok && (rs[1] - DiffExpr::scalar(ParamScalar::mu()) * rs[0]).is_zero();
        ok = ok && (rs[2] - DiffExpr::scalar(ParamScalar::s() * Rational(eps)) * rs[0]).is_zero();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return ok && secs < 5.0;
}

// ---- 3: pseudo-potential ----------------------------------------------------

bool pseudo_potential() {
    bool ok = true;
    for (int eps : {+1, -1}) {
        RiccatiSystem sh = riccati_rhs(eps, RiccatiForm::Shifted);
        DiffExpr g = DiffExpr::g();
        DiffExpr m1 = DiffExpr::u(0, 0) - DiffExpr::u(2, 0) + DiffExpr(1L);
        DiffExpr px = g + g * g * m1 * ParamScalar::eta(eps) * Rational(1, 2);
        DiffExpr pt = g * g * phi_expr() * ParamScalar::eta(eps) * Rational(1, 2);
        ok = ok && sh.rhs_x == px && sh.rhs_t == pt;
        ok = ok && check_integrability(eps, RiccatiForm::Raw).is_zero();
        ok = ok && check_integrability(eps, RiccatiForm::Shifted).is_zero();
        ok = ok && check_conservation_identity(eps).is_zero();
    }
    return ok;
}

// ---- 4: hierarchies + mutations ---------------------------------------------

bool hierarchies() {
    bool ok = true;
    for (auto e : {Expansion::Negative, Expansion::Positive})
        for (const auto& r : verify_hierarchy(e, 5)) ok = ok && r.pass;

    DiffExpr w = DiffExpr::u(1, 0) - DiffExpr::u(0, 0) - DiffExpr(1L);
    DiffExpr m1 = DiffExpr::u(0, 0) - DiffExpr::u(2, 0) + DiffExpr(1L);
    RatExpr half{DiffExpr(ParamScalar(Rational(1, 2)))};

    RatExpr g1 = series_term(Expansion::Negative, 1);
    RatExpr g2_bad(DiffExpr(1L), w.pow(2));
    RatExpr conv_n = g1 * g2_bad + g2_bad * g1;
    ok = ok && !(g2_bad.total_derivative(Dir::X) - (conv_n * RatExpr(m1) * half + g2_bad)).is_zero();

    DiffExpr v = DiffExpr::u(0, 0) - DiffExpr::u(1, 0) + DiffExpr(1L);
    RatExpr G0 = series_term(Expansion::Positive, 0);
    RatExpr G1_bad{DiffExpr::E().pow(2) * v.pow(2) * Rational(1, 2)};
    RatExpr conv_p = G0 * G0;
    ok = ok && !(G1_bad.total_derivative(Dir::X) - (conv_p * RatExpr(m1) * half + G1_bad)).is_zero();
    return ok;
}

// ---- 5: exactness -----------------------------------------------------------

bool exactness() {
    bool ok = true;
    for (int k = 2; k <= 5; ++k)
        for (const auto& r : check_exactness(Family::Neg, k)) ok = ok && r.pass;
    for (int k = 1; k <= 5; ++k)
        for (const auto& r : check_exactness(Family::Pos, k)) ok = ok && r.pass;
    return ok;
}

// ---- 6: t-jet bridge --------------------------------------------------------

double snapshot_bridge_defect(const JetFields& j) {
    double phisup = 0.0, resid = 0.0;
    for (std::size_t i = 0; i < j.u.size(); ++i) {
        double phi = j.u[i] * j.u[i] * j.uxx[i] - 2 * j.u[i] * j.u[i] * j.ux[i] +
                     j.u[i] * j.ux[i] * j.ux[i];
        phisup = std::max(phisup, std::abs(phi));
        resid = std::max(resid, std::abs(j.ut[i] - j.uxt[i] - phi));
    }
    return resid / (1.0 + phisup);
}

bool bridge() {
    bool ok = check_bridge_identity().is_zero();
    auto st = make_state(256, 2 * pi, 0.05);
    Spectral sp(st.grid);
    advance(sp, st, 5e-3, 40);
    ok = ok && snapshot_bridge_defect(jet_snapshot(sp, st)) <= 1e-11;
    auto st2 = make_state(128, 2 * pi, 0.3, 1.0);
    Spectral sp2(st2.grid);
    advance(sp2, st2, 1e-3, 100);
    ok = ok && snapshot_bridge_defect(jet_snapshot(sp2, st2)) <= 1e-11;
    return ok;
}

// ---- 7: solver correctness --------------------------------------------------

bool solver() {
    // manufactured solution u* = A sin(x - t): temporal order 4
    const double A = 0.05, t_end = 0.5;
    Grid1D grid = Grid1D::make(2 * pi, 64);
    Spectral sp(grid);
    auto xs = grid.nodes();
    auto run_err = [&](double dt) {
        SolverState st = make_state(64, 2 * pi, A);
        st.cfg.dealias = false;
        st.cfg.forcing = [&](double t, std::span<const double> x, std::span<double> g) {
            std::vector<double> u(grid.n);
            for (int j = 0; j < grid.n; ++j) u[j] = A * std::sin(x[j] - t);
            auto ux = sp.deriv(u, 1);
            auto uxx = sp.deriv(u, 2);
            std::vector<double> phi(grid.n);
            for (int j = 0; j < grid.n; ++j)
                phi[j] = u[j] * u[j] * uxx[j] - 2 * u[j] * u[j] * ux[j] + u[j] * ux[j] * ux[j];
            auto phix = sp.deriv(phi, 1);
            for (int j = 0; j < grid.n; ++j)
                g[j] = -2.0 * A * std::cos(x[j] - t) - phix[j] - phi[j];
        };
        advance(sp, st, dt, int(std::round(t_end / dt)));
        double err = 0.0;
        for (int j = 0; j < grid.n; ++j)
            err = std::max(err, std::abs(st.m[j] - 2 * A * std::sin(xs[j] - t_end)));
        return err;
    };
    double e1 = run_err(0.1), e2 = run_err(0.05), e3 = run_err(0.025);
    double p12 = std::log2(e1 / e2), p23 = std::log2(e2 / e3);
    bool ok = p12 >= 3.8 && p12 <= 4.2 && p23 >= 3.8 && p23 <= 4.2;

    // constant equilibrium preserved to round-off
    auto eq = make_state(64, 2 * pi, 0.0, 0.4);
    Spectral speq(eq.grid);
    auto m0 = eq.m;
    advance(speq, eq, 1e-3, 1000);
    double drift = 0.0;
    for (int j = 0; j < eq.grid.n; ++j) drift = std::max(drift, std::abs(eq.m[j] - m0[j]));
    ok = ok && drift <= 1e-12;

    // reference run: n = 256, u0 = 0.05 sin x, t = 1
    auto st = make_state(256, 2 * pi, 0.05);
    Spectral spr(st.grid);
    double dt = heuristic_dt(spr, st);
    int nsteps = int(std::ceil(1.0 / dt));
    advance(spr, st, 1.0 / nsteps, nsteps);
    auto jets = jet_snapshot(spr, st);
    for (int k = 2; k <= 5; ++k)
        ok = ok && conservation_residual(jets, Family::Neg, k, {0.0, 2 * pi}, st.grid.h).sup <= 1e-6;
    ok = ok && conservation_residual(jets, Family::Pos, 1, {0.0, 2 * pi}, st.grid.h).sup <= 1e-6;
    // the k = 2 density carries an e^{3x} weight amplifying round-off near
    // x = 2*pi; window as in the unit suite
    ok = ok && conservation_residual(jets, Family::Pos, 2, {0.0, 4.5}, st.grid.h).sup <= 1e-6;

    // refinement: coarse restrictions of a fine solution satisfy the law better
    // on finer grids
    auto truth = make_state(256, 2 * pi, 0.5);
    Spectral spt(truth.grid);
    double dtt = heuristic_dt(spt, truth);
    int ns = int(std::ceil(0.5 / dtt));
    advance(spt, truth, 0.5 / ns, ns);
    auto jt = jet_snapshot(spt, truth);
    auto restrict_to = [&](int n) {
        int stride = truth.grid.n / n;
        Grid1D g = Grid1D::make(2 * pi, n);
        Spectral s(g);
        JetFields j;
        j.x = g.nodes();
        j.u.resize(n);
        j.ut.resize(n);
        for (int i = 0; i < n; ++i) {
            j.u[i] = jt.u[i * stride];
            j.ut[i] = jt.ut[i * stride];
        }
        j.ux = s.deriv(j.u, 1);
        j.uxx = s.deriv(j.u, 2);
        j.uxxx = s.deriv(j.u, 3);
        j.uxt = s.deriv(j.ut, 1);
        j.uxxt = s.deriv(j.ut, 2);
        return j;
    };
    auto rc = conservation_residual(restrict_to(16), Family::Neg, 2, {0.0, 2 * pi}, 2 * pi / 16);
    auto rf = conservation_residual(restrict_to(64), Family::Neg, 2, {0.0, 2 * pi}, 2 * pi / 64);
    return ok && rc.sup >= 1e-12 && rf.sup <= 0.1 * rc.sup;
}

// ---- 8: exponential family --------------------------------------------------

bool exponential_family() {
    DiffExpr resid = DiffExpr::u(0, 1) - DiffExpr::u(2, 1) - pde_F();
    auto c = compile(resid, {});
    bool ok = true;
    for (double amp : {0.7, -1.3}) {
        std::vector<double> xs, u, ut;
        for (int i = 0; i <= 40; ++i) {
            double x = i / 40.0, e = std::exp(x);
            xs.push_back(x);
            u.push_back(amp * e);
            ut.push_back(-0.3 * e);
        }
        auto vals = c.eval_field({xs, u, u, u, u, ut, ut, ut});
        ok = ok && sup(vals) <= 1e-12;
    }
    return ok;
}

// ---- 9: closed-form coefficients --------------------------------------------

bool immersion_closed_form() {
    bool ok = true;
    for (double C : {5.0, 3.0}) {
        auto [lo, hi] = mu0_strip(C, 1.0);
        double disc = std::sqrt(C * C - 4.0);
        ok = ok && std::abs(lo - 0.5 * std::log((C - disc) / 2.0)) <= 1e-12;
        ok = ok && std::abs(hi - 0.5 * std::log((C + disc) / 2.0)) <= 1e-12;

        std::vector<double> xs(257);
        double margin = 1e-3 * (hi - lo);
        for (int i = 0; i < 257; ++i) xs[i] = lo + margin + (hi - lo - 2 * margin) * i / 256.0;
        auto co = mu0_coeffs(C, 1.0, +1, xs);
        double gauss = 0.0;
        for (std::size_t i = 0; i < co.x.size(); ++i)
            gauss = std::max(gauss, std::abs(co.a[i] * co.c[i] - co.b[i] * co.b[i] + 1.0));
        ok = ok && gauss <= 1e-10;
        auto rep = codazzi_residuals(co);
        ok = ok && rep.sup1 <= 1e-12 && rep.sup2 <= 1e-12;
    }
    auto at0 = mu0_coeffs(5.0, 1.0, +1, std::vector<double>{0.0});
    ok = ok && std::abs(at0.a[0] - std::sqrt(3.0)) <= 1e-12;
    ok = ok && std::abs(at0.b[0] + 1.0) <= 1e-12;
    ok = ok && std::abs(at0.c[0]) <= 1e-12;
    return ok;
}

// ---- 10: ODE-branch coefficients --------------------------------------------

bool immersion_ode() {
    ImmersionParams p{.mu = 1.0, .beta = 1.0, .a_branch = +1};
    auto co = munz_solve(p, 0.0, 1.5, 0.5);
    bool ok = co.stop_reason.empty();
    double gauss = 0.0;
    for (std::size_t i = 0; i < co.x.size(); ++i)
        gauss = std::max(gauss, std::abs(co.a[i] * co.c[i] - co.b[i] * co.b[i] + 1.0));
    ok = ok && gauss <= 1e-10;
    auto rep = codazzi_residuals(co);
    ok = ok && rep.sup1 <= 1e-8 && rep.sup2 <= 1e-8;
    auto curv = curvature_diagnostics(co);
    return ok && curv.max_mismatch <= 1e-12 && curv.sign_constant;
}

// ---- 11: surface ------------------------------------------------------------

struct Run {
    std::vector<JetFields> slices;
    std::vector<double> times;
    SffCoeffs co;
    int ix0, ix1;
};

Run make_run(int n, double dt, int nslices) {
    Run r;
    SolverState st = make_state(n, 2 * pi, 0.3, 1.0);
    Spectral sp(st.grid);
    for (int s = 0; s < nslices; ++s) {
        if (s > 0) advance(sp, st, dt, 1);
        r.slices.push_back(jet_snapshot(sp, st));
        r.times.push_back(st.t);
    }
    auto [lo, hi] = mu0_strip(5.0, 1.0);
    double h = st.grid.h;
    r.ix0 = std::max(1, int(std::ceil((lo + 0.01) / h)));
    int ix1 = int(std::floor((hi - 0.05) / h));
    if ((ix1 - r.ix0) % 2 != 0) --ix1;
    r.ix1 = ix1;
    std::vector<double> nodes(r.slices[0].x.begin() + r.ix0, r.slices[0].x.begin() + r.ix1 + 1);
    r.co = mu0_coeffs(5.0, 1.0, +1, nodes);
    return r;
}

bool surface() {
    auto commutator = [](Run& r) {
        FrameState seed;
        FrameState a1 = transport_x(seed, r.slices[0], r.co, r.ix0, r.ix1, 0.0, +1);
        FrameState a2 = transport_t(a1, r.slices, r.times, r.co, r.ix0, r.ix1, 0.0, +1);
        FrameState b1 = transport_t(seed, r.slices, r.times, r.co, r.ix0, r.ix0, 0.0, +1);
        FrameState b2 = transport_x(b1, r.slices.back(), r.co, r.ix0, r.ix1, 0.0, +1);
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (a2.X[k] - b2.X[k]) * (a2.X[k] - b2.X[k]);
        return std::sqrt(s);
    };
    Run coarse = make_run(512, 2e-3, 61);
    Run fine = make_run(1024, 1e-3, 121);
    double rcm = commutator(coarse), rfm = commutator(fine);
    bool ok = rcm > 0.0 && rcm / rfm >= 2.0;

    Run finest = make_run(2048, 1e-3, 121);
    auto mesh = integrate_frame(finest.slices, finest.times, finest.co, finest.ix0, finest.ix1,
                                0.0, +1);
    auto rep = mesh_diagnostics(mesh, finest.slices, finest.co, finest.ix0, 0.0, +1);
    ok = ok && !rep.degenerate && rep.k_min >= -1.05 && rep.k_max <= -0.95;

    std::ostringstream os;
    export_obj(os, mesh);
    std::istringstream is(os.str());
    ObjData data = parse_obj(is);
    std::ostringstream os2;
    os2.precision(9);
    for (const auto& v : data.vertices) os2 << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
    for (const auto& f : data.faces) os2 << "f " << f[0] << " " << f[1] << " " << f[2] << "\n";
    return ok && os2.str() == os.str();
}

}  // namespace

int main() {
    criterion(1, "structure equations reduce to zero; residuals proportional", structure_equations());
    bool c2 = true;
    for (int eps : {+1, -1}) c2 = c2 && family_instantiation_check(eps).ok;
    criterion(2, "one-form family instantiation reproduces the equation", c2);
    criterion(3, "pseudo-potential: shift, integrability, conservation identity", pseudo_potential());
    criterion(4, "hierarchy recursions exact to k = 5; mutations caught", hierarchies());
    criterion(5, "conservation laws exact: potentials give density and flux", exactness());
    criterion(6, "t-jet bridge identity, symbolically and on snapshots", bridge());
    criterion(7, "solver: order 4, equilibria, residuals, refinement", solver());
    criterion(8, "compiled residual vanishes on the exponential family", exponential_family());
    criterion(9, "closed-form coefficients: strip, Gauss, pinned point", immersion_closed_form());
    criterion(10, "ODE-branch coefficients: guards, Gauss, Codazzi, H", immersion_ode());
    criterion(11, "surface: commutator decay, K near -1, OBJ round-trip", surface());
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
