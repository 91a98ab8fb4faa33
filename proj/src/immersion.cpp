#include "pss/immersion.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pss/pssforms.hpp"

namespace pss {

std::pair<double, double> mu0_strip(double C_strip, double beta) {
    if (beta == 0.0) throw std::invalid_argument("mu0_strip: beta must be nonzero");
    if (!(C_strip > 0.0)) throw std::invalid_argument("mu0_strip: C must be positive");
    if (!(C_strip * C_strip > 4.0 * beta * beta))
        throw std::invalid_argument("mu0_strip: C^2 must exceed 4 beta^2");
    // roots of -beta^2 y^2 + C y - 1 in y = e^{2x}
    double disc = std::sqrt(C_strip * C_strip - 4.0 * beta * beta);
    double b2 = 2.0 * beta * beta;
    return {0.5 * std::log((C_strip - disc) / b2), 0.5 * std::log((C_strip + disc) / b2)};
}

SffCoeffs mu0_coeffs(double C_strip, double beta, int a_branch, std::span<const double> xs) {
    if (a_branch != 1 && a_branch != -1)
        throw std::invalid_argument("mu0_coeffs: a_branch must be +1 or -1");
    auto [xmin, xmax] = mu0_strip(C_strip, beta);

    SffCoeffs co;
    co.source = SffCoeffs::Source::ClosedMu0;
    co.params = {.mu = 0.0, .beta = beta, .C_strip = C_strip, .a_branch = a_branch};
    std::size_t n = xs.size();
    co.x.assign(xs.begin(), xs.end());
    co.a.resize(n);
    co.b.resize(n);
    co.c.resize(n);
    co.ax.resize(n);
    co.bx.resize(n);
    co.cx.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = xs[i];
        if (!(x > xmin && x < xmax)) {
            std::ostringstream msg;
            msg << "mu0_coeffs: x = " << x << " outside the strip (" << xmin << ", " << xmax << ")";
            throw std::domain_error(msg.str());
        }
        double e2 = std::exp(2.0 * x);
        double Z = C_strip * e2 - beta * beta * e2 * e2 - 1.0;
        double a = a_branch * std::sqrt(Z);
        double Zp = 2.0 * C_strip * e2 - 4.0 * beta * beta * e2 * e2;   // Z'
        double Zpp = 4.0 * C_strip * e2 - 16.0 * beta * beta * e2 * e2; // Z''
        double ap = 0.5 * Zp / a;
        double app = 0.5 * Zpp / a - ap * ap / a;  // from a^2 = Z
        co.a[i] = a;
        co.b[i] = -beta * e2;
        co.c[i] = a - ap;
        co.ax[i] = ap;
        co.bx[i] = -2.0 * beta * e2;
        co.cx[i] = ap - app;
    }
    return co;
}

namespace {

struct GuardSignal {
    std::string reason;
};

// right side b' = g(x, b) of the mu != 0 branch, with the discriminant and
// denominator guards; sigma is the square-root branch sign
struct MunzRhs {
    double mu, beta;
    int sigma;
    double delta_eps, den_eps;

    double phi(double x, double b) const {
        return ((mu * mu - 1.0) * b - beta * std::exp(2.0 * x)) / mu;
    }
    double discriminant(double x, double b) const {
        double p = phi(x, b);
        return p * p - 4.0 * (1.0 - b * b);
    }
    double operator()(double x, double b) const {
        double p = phi(x, b);
        double d = p * p - 4.0 * (1.0 - b * b);
        if (!(d > delta_eps)) {
            std::ostringstream msg;
            msg << "discriminant degeneracy at x = " << x;
            throw GuardSignal{msg.str()};
        }
        double sd = std::sqrt(d);
        double m2 = mu * mu;
        double num = 2.0 * (m2 + 1.0) * b * sd + sigma * 2.0 * beta * p * std::exp(2.0 * x);
        double den = sigma * ((m2 - 1.0) * p + 4.0 * mu * b) + (m2 + 1.0) * sd;
        if (std::abs(den) <= den_eps) {
            std::ostringstream msg;
            msg << "denominator vanishing at x = " << x;
            throw GuardSignal{msg.str()};
        }
        return num / den;
    }
};

// one adaptive Dormand-Prince 5(4) step sequence from x to x_target
double dp45_to(const MunzRhs& f, double x, double b, double x_target, double rel, double abs_tol) {
    double dir = x_target >= x ? 1.0 : -1.0;
    double h = dir * std::max(1e-6, 0.1 * std::abs(x_target - x));
    while (dir * (x_target - x) > 1e-15) {
        if (dir * (x + h) > dir * x_target) h = x_target - x;
        double k1 = f(x, b);
        double k2 = f(x + h / 5, b + h * (k1 / 5));
        double k3 = f(x + 3 * h / 10, b + h * (3 * k1 / 40 + 9 * k2 / 40));
        double k4 = f(x + 4 * h / 5, b + h * (44 * k1 / 45 - 56 * k2 / 15 + 32 * k3 / 9));
        double k5 = f(x + 8 * h / 9,
                      b + h * (19372.0 * k1 / 6561 - 25360.0 * k2 / 2187 + 64448.0 * k3 / 6561 -
                               212.0 * k4 / 729));
        double k6 = f(x + h, b + h * (9017.0 * k1 / 3168 - 355.0 * k2 / 33 + 46732.0 * k3 / 5247 +
                                      49.0 * k4 / 176 - 5103.0 * k5 / 18656));
        double b5 = b + h * (35.0 * k1 / 384 + 500.0 * k3 / 1113 + 125.0 * k4 / 192 -
                             2187.0 * k5 / 6784 + 11.0 * k6 / 84);
        double k7 = f(x + h, b5);
        double b4 = b + h * (5179.0 * k1 / 57600 + 7571.0 * k3 / 16695 + 393.0 * k4 / 640 -
                             92097.0 * k5 / 339200 + 187.0 * k6 / 2100 + k7 / 40);
        double err = std::abs(b5 - b4);
        double tol = abs_tol + rel * std::max(std::abs(b), std::abs(b5));
        if (err <= tol) {
            x += h;
            b = b5;
        }
        double factor = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
        h *= std::min(5.0, std::max(0.2, factor));
    }
    return b;
}

}  // namespace

SffCoeffs munz_solve(const ImmersionParams& p, double x0, double b0, double span,
                     const OdeTolerances& tol, int n_out) {
    if (p.mu == 0.0) throw std::invalid_argument("munz_solve: mu must be nonzero");
    if (p.beta == 0.0) throw std::invalid_argument("munz_solve: beta must be nonzero");
    if (p.a_branch != 1 && p.a_branch != -1)
        throw std::invalid_argument("munz_solve: a_branch must be +1 or -1");
    if (n_out < 2) throw std::invalid_argument("munz_solve: n_out must be at least 2");

    MunzRhs f{p.mu, p.beta, p.a_branch, tol.delta_eps, tol.den_eps};
    if (!(f.discriminant(x0, b0) > tol.delta_eps))
        throw std::domain_error("munz_solve: discriminant not positive at the initial point");
    try {
        (void)f(x0, b0);
    } catch (const GuardSignal& g) {
        throw std::domain_error("munz_solve: " + g.reason + " (initial point)");
    }

    SffCoeffs co;
    co.source = SffCoeffs::Source::OdeMunz;
    co.params = p;
    double h = span / (n_out - 1);
    double x = x0, b = b0;
    for (int i = 0; i < n_out; ++i) {
        double xt = x0 + i * h;
        if (i > 0) {
            try {
                b = dp45_to(f, x, b, xt, tol.rel, tol.abs);
            } catch (const GuardSignal& g) {
                co.stop_reason = g.reason;
                break;
            }
            x = xt;
        }
        double phi = f.phi(xt, b);
        double d = f.discriminant(xt, b);
        if (!(d > tol.delta_eps)) {
            std::ostringstream msg;
            msg << "discriminant degeneracy at x = " << xt;
            co.stop_reason = msg.str();
            break;
        }
        double sd = std::sqrt(d);
        double a = 0.5 * (-phi + p.a_branch * sd);
        double bp;
        try {
            bp = f(xt, b);
        } catch (const GuardSignal& g) {
            co.stop_reason = g.reason;
            break;
        }
        double phip = ((p.mu * p.mu - 1.0) * bp - 2.0 * p.beta * std::exp(2.0 * xt)) / p.mu;
        double dp = 2.0 * phi * phip + 8.0 * b * bp;
        double ap = 0.5 * (-phip + p.a_branch * dp / (2.0 * sd));
        co.x.push_back(xt);
        co.a.push_back(a);
        co.b.push_back(b);
        co.c.push_back(a + phi);
        co.ax.push_back(ap);
        co.bx.push_back(bp);
        co.cx.push_back(ap + phip);
        co.delta.push_back(d);
    }

    for (std::size_t i = 0; i < co.x.size(); ++i) {
        double gauss = co.a[i] * co.c[i] - co.b[i] * co.b[i] + 1.0;
        if (std::abs(gauss) > 1e-10)
            throw std::runtime_error("munz_solve: Gauss identity violated along the solution");
    }
    return co;
}

CodazziReport codazzi_residuals(const SffCoeffs& co) {
    CodazziReport rep;
    double mu = co.params.mu;
    std::size_t n = co.x.size();
    rep.res1.resize(n);
    rep.res2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.res1[i] = co.ax[i] + mu * co.bx[i] - (co.a[i] - co.c[i] + 2.0 * mu * co.b[i]);
        rep.res2[i] = co.bx[i] + mu * co.cx[i] + (mu * co.a[i] - mu * co.c[i] - 2.0 * co.b[i]);
        rep.sup1 = std::max(rep.sup1, std::abs(rep.res1[i]));
        rep.sup2 = std::max(rep.sup2, std::abs(rep.res2[i]));
    }
    return rep;
}

CompiledForms compile_forms(double mu, int eps) {
    PsSpec sp = build_forms(eps);
    Bindings b{.mu = mu};
    return {compile(sp.f11, b), compile(sp.f12, b), compile(sp.f21, b),
            compile(sp.f22, b), compile(sp.f31, b), compile(sp.f32, b),
            compile(sp.d12, b), compile(sp.d13, b), compile(sp.d23, b)};
}

CodazziReport codazzi_residuals(const SffCoeffs& co, const JetFields& jets) {
    if (co.x.size() != jets.x.size())
        throw std::invalid_argument("codazzi_residuals: node lists not conformable");
    CodazziReport rep = codazzi_residuals(co);
    CompiledForms cf = compile_forms(co.params.mu, co.params.eps);
    FieldView v = jets.view();
    auto f12 = cf.f12.eval_field(v);
    auto f22 = cf.f22.eval_field(v);
    auto d13 = cf.d13.eval_field(v);
    auto d23 = cf.d23.eval_field(v);
    std::size_t n = co.x.size();
    rep.full1.resize(n);
    rep.full2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // a_t = b_t = c_t = 0: coefficients depend on x only
        rep.full1[i] = -f12[i] * co.ax[i] - f22[i] * co.bx[i] - 2.0 * co.b[i] * d13[i] +
                       (co.a[i] - co.c[i]) * d23[i];
        rep.full2[i] = -f12[i] * co.bx[i] - f22[i] * co.cx[i] +
                       (co.a[i] - co.c[i]) * d13[i] + 2.0 * co.b[i] * d23[i];
        rep.sup_full1 = std::max(rep.sup_full1, std::abs(rep.full1[i]));
        rep.sup_full2 = std::max(rep.sup_full2, std::abs(rep.full2[i]));
    }
    return rep;
}

CurvatureReport curvature_diagnostics(const SffCoeffs& co) {
    CurvatureReport rep;
    std::size_t n = co.x.size();
    rep.H.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.H[i] = 0.5 * (co.a[i] + co.c[i]);
        if (co.params.mu != 0.0 && i < co.delta.size()) {
            double ref = co.params.a_branch * 0.5 * std::sqrt(co.delta[i]);
            rep.max_mismatch = std::max(rep.max_mismatch, std::abs(rep.H[i] - ref));
        }
        if (i > 0 && rep.H[i] * rep.H[0] <= 0.0) rep.sign_constant = false;
    }
    return rep;
}

SffValue second_fundamental_form(double a, double b, double c,
                                 const std::array<double, 8>& jet_point, double mu, int eps,
                                 double mask_eps) {
    CompiledForms cf = compile_forms(mu, eps);
    SffValue out;
    if (std::abs(cf.d12.eval_point(jet_point)) < mask_eps) {
        out.masked = true;
        return out;
    }
    double f11 = cf.f11.eval_point(jet_point);
    double f12 = cf.f12.eval_point(jet_point);
    double f21 = cf.f21.eval_point(jet_point);
    double f22 = cf.f22.eval_point(jet_point);
    out.xx = a * f11 * f11 + 2.0 * b * f11 * f21 + c * f21 * f21;
    out.xt = a * f11 * f12 + b * (f11 * f22 + f12 * f21) + c * f21 * f22;
    out.tt = a * f12 * f12 + 2.0 * b * f12 * f22 + c * f22 * f22;
    return out;
}

}  // namespace pss
