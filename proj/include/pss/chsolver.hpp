#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pss/evalbridge.hpp"
#include "pss/pseudopot.hpp"

namespace pss {

struct Grid1D {
    double L;
    int n;
    double h;

    static Grid1D make(double L, int n) {
        if (n < 16 || (n & (n - 1)) != 0) throw std::invalid_argument("Grid1D: n must be a power of two >= 16");
        return {L, n, L / n};
    }
    std::vector<double> nodes() const {
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j) x[j] = j * h;
        return x;
    }
};

/// Periodic spectral operators on a fixed grid (cached FFTW plans).
class Spectral {
public:
    explicit Spectral(Grid1D grid);
    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    /// spectral d^order/dx^order
    std::vector<double> deriv(std::span<const double> f, int order) const;
    /// (1 - d^2/dx^2)^{-1}, exact per Fourier mode
    std::vector<double> helmholtz_inv(std::span<const double> f) const;
    /// 2/3-rule truncation
    std::vector<double> dealias(std::span<const double> f) const;

    const Grid1D& grid() const { return grid_; }

    struct Impl;

private:
    Grid1D grid_;
    Impl* impl_;
};

using Forcing = std::function<void(double t, std::span<const double> x, std::span<double> g)>;

struct SolverConfig {
    double dt = 0.0;          // 0: use stability heuristic
    bool dealias = true;
    Forcing forcing;          // optional source added to m_t
    double blowup_sup = 1e6;
};

/// Momentum-variable state m = u - u_xx on a periodic grid.
struct SolverState {
    Grid1D grid;
    std::vector<double> m;
    double t = 0.0;
    SolverConfig cfg;
};

struct JetFields {
    std::vector<double> x, u, ux, uxx, uxxx, ut, uxt, uxxt;
    FieldView view() const { return {x, u, ux, uxx, uxxx, ut, uxt, uxxt}; }
};

struct BlowUpError : std::runtime_error {
    double last_t;
    explicit BlowUpError(double t)
        : std::runtime_error("field blow-up detected; last finite time t = " + std::to_string(t)),
          last_t(t) {}
};

std::vector<double> helmholtz_solve(const Spectral& sp, std::span<const double> m);

/// m_t = phi_x + phi (plus forcing), phi = u^2 u_xx - 2 u^2 u_x + u u_x^2.
std::vector<double> rhs(const Spectral& sp, const SolverState& st);

/// default stable step 0.25 h / max(1, sup|u|^2)
double heuristic_dt(const Spectral& sp, const SolverState& st);

/// Classical 4-stage Runge-Kutta; throws BlowUpError on non-finite fields.
void advance(const Spectral& sp, SolverState& st, double dt, int nsteps);

/// One-time-slice jet bundle; u_t via the equation, x-jets spectral.
JetFields jet_snapshot(const Spectral& sp, const SolverState& st);

struct ResidualReport {
    std::vector<std::size_t> indices;  // grid indices inside the window
    std::vector<double> residual;      // pointwise D_t(rho) - D_x(flux)
    double sup = 0.0;
    double integral = 0.0;             // windowed integral of the residual
};

/// Pointwise residual of the (family, k) conservation law on a snapshot,
/// restricted to x in [window.first, window.second].
ResidualReport conservation_residual(const JetFields& jets, Family family, int k,
                                     std::pair<double, double> window, double h,
                                     double div_eps = 1e-12);

/// CSV with columns x,u,u_x,u_xx,u_t plus one column per extra field.
void snapshot_csv(std::ostream& os, const JetFields& jets,
                  const std::vector<std::pair<std::string, std::vector<double>>>& extra = {});

}  // namespace pss
