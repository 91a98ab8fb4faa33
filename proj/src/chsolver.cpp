#include "pss/chsolver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace pss {

struct Spectral::Impl {
    int n;
    int nc;  // n/2 + 1
    double* real;
    fftw_complex* spec;
    fftw_plan fwd, bwd;

    explicit Impl(int n_) : n(n_), nc(n_ / 2 + 1) {
        real = fftw_alloc_real(n);
        spec = fftw_alloc_complex(nc);
        fwd = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
    }
    ~Impl() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(spec);
    }
};

Spectral::Spectral(Grid1D grid) : grid_(grid), impl_(new Impl(grid.n)) {}
Spectral::~Spectral() { delete impl_; }

namespace {

// apply a per-mode complex multiplier in spectral space
template <typename F>
std::vector<double> mode_map(const Spectral::Impl* im, const Grid1D& g, std::span<const double> f,
                             F&& mult) {
    std::copy(f.begin(), f.end(), im->real);
    fftw_execute(im->fwd);
    const double k0 = 2.0 * std::numbers::pi / g.L;
    for (int k = 0; k < im->nc; ++k) {
        auto [mr, mi] = mult(k * k0, k);
        double re = im->spec[k][0], iq = im->spec[k][1];
        im->spec[k][0] = re * mr - iq * mi;
        im->spec[k][1] = re * mi + iq * mr;
    }
    fftw_execute(im->bwd);
    std::vector<double> out(g.n);
    const double scale = 1.0 / g.n;
    for (int j = 0; j < g.n; ++j) out[j] = im->real[j] * scale;
    return out;
}

}  // namespace

std::vector<double> Spectral::deriv(std::span<const double> f, int order) const {
    return mode_map(impl_, grid_, f, [&](double kappa, int k) -> std::pair<double, double> {
        // (i kappa)^order; Nyquist derivative zeroed for odd orders
        if (order % 2 == 1 && 2 * k == grid_.n) return {0.0, 0.0};
        double mag = std::pow(kappa, order);
        switch (order % 4) {
            case 0: return {mag, 0.0};
            case 1: return {0.0, mag};
            case 2: return {-mag, 0.0};
            default: return {0.0, -mag};
        }
    });
}

std::vector<double> Spectral::helmholtz_inv(std::span<const double> f) const {
    return mode_map(impl_, grid_, f, [](double kappa, int) -> std::pair<double, double> {
        return {1.0 / (1.0 + kappa * kappa), 0.0};
    });
}

std::vector<double> Spectral::dealias(std::span<const double> f) const {
    const int cut = grid_.n / 3;
    return mode_map(impl_, grid_, f, [&](double, int k) -> std::pair<double, double> {
        return {k <= cut ? 1.0 : 0.0, 0.0};
    });
}

std::vector<double> helmholtz_solve(const Spectral& sp, std::span<const double> m) {
    return sp.helmholtz_inv(m);
}

namespace {

std::vector<double> phi_pointwise(std::span<const double> u, std::span<const double> ux,
                                  std::span<const double> uxx) {
    std::vector<double> phi(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        phi[j] = u[j] * u[j] * uxx[j] - 2.0 * u[j] * u[j] * ux[j] + u[j] * ux[j] * ux[j];
    return phi;
}

std::vector<double> rhs_at(const Spectral& sp, std::span<const double> m, double t,
                           const SolverConfig& cfg, const Grid1D& grid) {
    std::vector<double> u = sp.helmholtz_inv(m);
    std::vector<double> ux = sp.deriv(u, 1);
    std::vector<double> uxx = sp.deriv(u, 2);
    if (cfg.dealias) {
        u = sp.dealias(u);
        ux = sp.dealias(ux);
        uxx = sp.dealias(uxx);
    }
    std::vector<double> phi = phi_pointwise(u, ux, uxx);
    if (cfg.dealias) phi = sp.dealias(phi);
    std::vector<double> phix = sp.deriv(phi, 1);
    std::vector<double> mt(grid.n);
    for (int j = 0; j < grid.n; ++j) mt[j] = phix[j] + phi[j];
    if (cfg.forcing) {
        std::vector<double> x = grid.nodes(), g(grid.n, 0.0);
        cfg.forcing(t, x, g);
        for (int j = 0; j < grid.n; ++j) mt[j] += g[j];
    }
    return mt;
}

}  // namespace

std::vector<double> rhs(const Spectral& sp, const SolverState& st) {
    return rhs_at(sp, st.m, st.t, st.cfg, st.grid);
}

double heuristic_dt(const Spectral& sp, const SolverState& st) {
    std::vector<double> u = sp.helmholtz_inv(st.m);
    double sup = 0.0;
    for (double v : u) sup = std::max(sup, std::abs(v));
    return 0.25 * st.grid.h / std::max(1.0, sup * sup);
}

void advance(const Spectral& sp, SolverState& st, double dt, int nsteps) {
    if (dt <= 0.0) throw std::invalid_argument("advance: dt must be positive");
    const int n = st.grid.n;
    std::vector<double> y(n);
    for (int step = 0; step < nsteps; ++step) {
        auto k1 = rhs_at(sp, st.m, st.t, st.cfg, st.grid);
        for (int j = 0; j < n; ++j) y[j] = st.m[j] + 0.5 * dt * k1[j];
        auto k2 = rhs_at(sp, y, st.t + 0.5 * dt, st.cfg, st.grid);
        for (int j = 0; j < n; ++j) y[j] = st.m[j] + 0.5 * dt * k2[j];
        auto k3 = rhs_at(sp, y, st.t + 0.5 * dt, st.cfg, st.grid);
        for (int j = 0; j < n; ++j) y[j] = st.m[j] + dt * k3[j];
        auto k4 = rhs_at(sp, y, st.t + dt, st.cfg, st.grid);
        double sup = 0.0;
        for (int j = 0; j < n; ++j) {
            st.m[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            sup = std::max(sup, std::abs(st.m[j]));
        }
        if (!std::isfinite(sup) || sup > st.cfg.blowup_sup) throw BlowUpError(st.t);
        st.t += dt;
    }
}

JetFields jet_snapshot(const Spectral& sp, const SolverState& st) {
    JetFields j;
    j.x = st.grid.nodes();
    j.u = sp.helmholtz_inv(st.m);
    j.ux = sp.deriv(j.u, 1);
    j.uxx = sp.deriv(j.u, 2);
    j.uxxx = sp.deriv(j.u, 3);
    std::vector<double> phi = phi_pointwise(j.u, j.ux, j.uxx);
    std::vector<double> phix = sp.deriv(phi, 1);
    std::vector<double> mt(st.grid.n);
    for (int i = 0; i < st.grid.n; ++i) mt[i] = phix[i] + phi[i];
    if (st.cfg.forcing) {
        std::vector<double> g(st.grid.n, 0.0);
        st.cfg.forcing(st.t, j.x, g);
        for (int i = 0; i < st.grid.n; ++i) mt[i] += g[i];
    }
    j.ut = sp.helmholtz_inv(mt);
    j.uxt = sp.deriv(j.ut, 1);
    j.uxxt = sp.deriv(j.ut, 2);
    return j;
}

ResidualReport conservation_residual(const JetFields& jets, Family family, int k,
                                     std::pair<double, double> window, double h,
                                     double div_eps) {
    ConservationLaw law = conservation_law(family, k);
    // expand all total derivatives symbolically so only jet inputs remain
    RatExpr resid = law.density.total_derivative(Dir::T) - law.flux.total_derivative(Dir::X);
    Bindings b;
    b.div_eps = div_eps;
    CompiledExpr prog = compile(resid, b);

    ResidualReport rep;
    FieldView v = jets.view();
    for (std::size_t i = 0; i < jets.x.size(); ++i) {
        if (jets.x[i] < window.first || jets.x[i] > window.second) continue;
        std::array<double, 8> in{jets.x[i],  jets.u[i],  jets.ux[i],  jets.uxx[i],
                                 jets.uxxx[i], jets.ut[i], jets.uxt[i], jets.uxxt[i]};
        (void)v;
        double r = prog.eval_point(in, i);
        rep.indices.push_back(i);
        rep.residual.push_back(r);
        rep.sup = std::max(rep.sup, std::abs(r));
    }
    // trapezoid over the retained contiguous window
    for (std::size_t i = 0; i + 1 < rep.residual.size(); ++i)
        rep.integral += 0.5 * h * (rep.residual[i] + rep.residual[i + 1]);
    return rep;
}

void snapshot_csv(std::ostream& os, const JetFields& jets,
                  const std::vector<std::pair<std::string, std::vector<double>>>& extra) {
    os << "x,u,u_x,u_xx,u_t";
    for (const auto& [name, col] : extra) os << "," << name;
    os << "\n";
    os.precision(17);
    for (std::size_t i = 0; i < jets.x.size(); ++i) {
        os << jets.x[i] << "," << jets.u[i] << "," << jets.ux[i] << "," << jets.uxx[i] << ","
           << jets.ut[i];
        for (const auto& [name, col] : extra) os << "," << (i < col.size() ? col[i] : 0.0);
        os << "\n";
    }
}

}  // namespace pss
