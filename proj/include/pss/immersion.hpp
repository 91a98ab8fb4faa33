#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pss/chsolver.hpp"

namespace pss {

struct ImmersionParams {
    double mu = 0.0;
    double beta = 0.0;
    double C_strip = 0.0;  // constant of Z(x) on the mu = 0 branch
    int a_branch = +1;     // sign of the square-root branch in a
    int eps = +1;          // sign of s in the one-form coefficients
};

/// Coefficients (a, b, c) of the second fundamental form along a span of x,
/// together with their analytic x-derivatives and, for mu != 0, the
/// discriminant field.
struct SffCoeffs {
    enum class Source { ClosedMu0, OdeMunz };
    Source source;
    ImmersionParams params;
    std::vector<double> x, a, b, c;
    std::vector<double> ax, bx, cx;
    std::vector<double> delta;     // mu != 0 only
    std::string stop_reason;       // nonempty if a guard stopped the solve early
};

/// Open interval where Z(x) = C e^{2x} - beta^2 e^{4x} - 1 > 0.
/// Requires C > 0, C^2 > 4 beta^2, beta != 0.
std::pair<double, double> mu0_strip(double C_strip, double beta);

/// Closed-form mu = 0 branch: a = a_branch * sqrt(Z), b = -beta e^{2x},
/// c = a - a'; all derivatives analytic. Every x must lie strictly inside
/// the strip.
SffCoeffs mu0_coeffs(double C_strip, double beta, int a_branch, std::span<const double> xs);

struct OdeTolerances {
    double rel = 1e-10;
    double abs = 1e-12;
    double delta_eps = 1e-9;  // stop when the discriminant falls to this
    double den_eps = 1e-9;    // stop when the b' denominator falls to this
};

/// mu != 0 branch: adaptive embedded Runge-Kutta integration of b' = g(x, b)
/// from x0 over the given (possibly negative) span, output at n_out uniform
/// nodes; a, c, delta assembled from b. Stops early with a reason when a
/// guard trips. Throws std::invalid_argument for bad parameters and
/// std::domain_error when the initial condition violates the guards.
SffCoeffs munz_solve(const ImmersionParams& p, double x0, double b0, double span,
                     const OdeTolerances& tol = {}, int n_out = 257);

struct CodazziReport {
    std::vector<double> res1, res2;    // first-order x-relations
    double sup1 = 0.0, sup2 = 0.0;
    std::vector<double> full1, full2;  // residuals against the one-form data
    double sup_full1 = 0.0, sup_full2 = 0.0;
};

/// First-order compatibility residuals
///   res1 = a_x + mu b_x - (a - c + 2 mu b)
///   res2 = b_x + mu c_x + (mu a - mu c - 2 b).
CodazziReport codazzi_residuals(const SffCoeffs& co);

/// Same, plus the full residuals with the compiled one-form coefficients
/// evaluated on the supplied jets (a_t = b_t = c_t = 0; node lists must
/// be conformable).
CodazziReport codazzi_residuals(const SffCoeffs& co, const JetFields& jets);

struct CurvatureReport {
    std::vector<double> H;        // (a + c) / 2
    double max_mismatch = 0.0;    // vs a_branch * sqrt(delta) / 2, mu != 0 only
    bool sign_constant = true;
};

CurvatureReport curvature_diagnostics(const SffCoeffs& co);

/// The one-form coefficients and pairwise determinants compiled for numeric
/// evaluation at a fixed parameter point.
struct CompiledForms {
    CompiledExpr f11, f12, f21, f22, f31, f32, d12, d13, d23;
};

CompiledForms compile_forms(double mu, int eps);

struct SffValue {
    double xx = 0.0, xt = 0.0, tt = 0.0;
    bool masked = false;  // |Delta_12| below the genericity threshold
};

/// Second fundamental form in the (dx, dt) basis at one point:
///   Pi_xx = a f11^2 + 2 b f11 f21 + c f21^2, etc.
SffValue second_fundamental_form(double a, double b, double c,
                                 const std::array<double, 8>& jet_point, double mu, int eps,
                                 double mask_eps = 1e-8);

}  // namespace pss
