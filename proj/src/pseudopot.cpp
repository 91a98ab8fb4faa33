#include "pss/pseudopot.hpp"

#include "pss/pssforms.hpp"

namespace pss {

namespace {

DiffExpr one() { return DiffExpr(1L); }
DiffExpr w_expr() { return DiffExpr::u(1, 0) - DiffExpr::u(0, 0) - one(); }  // u_x - u - 1
DiffExpr v_expr() { return DiffExpr::u(0, 0) - DiffExpr::u(1, 0) + one(); }  // u - u_x + 1
DiffExpr m1_expr() { return DiffExpr::u(0, 0) - DiffExpr::u(2, 0) + one(); } // u - u_xx + 1

Rational pow2(int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= 2;
    return r;
}

}  // namespace

RiccatiSystem riccati_rhs(int eps, RiccatiForm form) {
    PsSpec sp = build_forms(eps);
    DiffExpr g = DiffExpr::g();
    const Rational half(1, 2);

    // 2 dgamma = w3 - w2 - 2 gamma w1 + gamma^2 (w3 + w2), split by dx / dt
    DiffExpr rx = ((sp.f31 - sp.f21) - g * sp.f11 * Rational(2) + g * g * (sp.f31 + sp.f21)) * half;
    DiffExpr rt = ((sp.f32 - sp.f22) - g * sp.f12 * Rational(2) + g * g * (sp.f32 + sp.f22)) * half;

    if (form == RiccatiForm::Shifted) {
        DiffExpr shift = g + DiffExpr::scalar(ParamScalar::eta_inv(eps));
        rx = rx.substitute(JetVar::g(), shift);
        rt = rt.substitute(JetVar::g(), shift);
    }
    return {rx, rt, form, eps};
}

DiffExpr check_integrability(int eps, RiccatiForm form) {
    RiccatiSystem sys = riccati_rhs(eps, form);
    GammaRules rules{&sys.rhs_x, &sys.rhs_t};
    DiffExpr resid = sys.rhs_x.total_derivative(Dir::T, &rules) -
                     sys.rhs_t.total_derivative(Dir::X, &rules);
    return resid.reduce(Ruleset::Pde);
}

DiffExpr conservation_identity_raw(int eps) {
    RiccatiSystem sys = riccati_rhs(eps, RiccatiForm::Shifted);
    GammaRules rules{&sys.rhs_x, &sys.rhs_t};
    DiffExpr g = DiffExpr::g();
    DiffExpr density = g * m1_expr();
    DiffExpr flux = g * phi_expr();
    return density.total_derivative(Dir::T, &rules) - flux.total_derivative(Dir::X, &rules);
}

DiffExpr check_conservation_identity(int eps) {
    return conservation_identity_raw(eps).reduce(Ruleset::Pde);
}

RatExpr series_term(Expansion e, int k) {
    if (e == Expansion::Negative) {
        if (k < 1) throw std::out_of_range("series_term: negative expansion needs k >= 1");
        if (k == 1) return {DiffExpr(2L), w_expr()};
        // 1 / (2^{k-2} e^{(k-1)x} (u_x - u - 1)^k)
        DiffExpr den = DiffExpr::E().pow(k - 1) * w_expr().pow(k) * ParamScalar(pow2(k - 2));
        return {one(), den};
    }
    if (k < 0) throw std::out_of_range("series_term: positive expansion needs k >= 0");
    // e^{(k+1)x} (u - u_x + 1)^k / 2^k
    return {DiffExpr::E().pow(k + 1) * v_expr().pow(k) * ParamScalar(Rational(1) / pow2(k))};
}

namespace {

void check(std::vector<CheckResult>& out, const std::string& name, const RatExpr& resid) {
    CheckResult c;
    c.name = name;
    c.pass = resid.is_zero();
    if (!c.pass) c.residual = resid.str();
    out.push_back(std::move(c));
}

}  // namespace

std::vector<CheckResult> verify_hierarchy(Expansion e, int kmax) {
    if (kmax < 2) throw std::invalid_argument("verify_hierarchy: kmax >= 2");
    std::vector<CheckResult> out;
    const RatExpr m1{m1_expr()};
    const RatExpr phi{phi_expr()};
    const Rational half(1, 2);

    if (e == Expansion::Negative) {
        for (int k = 1; k <= kmax; ++k) {
            std::string tag = "neg k=" + std::to_string(k);
            RatExpr conv;  // sum_{i=1}^{k} gamma_i gamma_{k+1-i}
            for (int i = 1; i <= k; ++i)
                conv = conv + series_term(e, i) * series_term(e, k + 1 - i);
            RatExpr gk = series_term(e, k);

            RatExpr xres = gk.total_derivative(Dir::X) - (conv * m1 * RatExpr(DiffExpr(ParamScalar(half))) + gk);
            check(out, tag + " x-recursion", xres);

            // sum gamma_i gamma_{k+1-i} = 8k / (2^k e^{(k-1)x} w^{k+1})
            RatExpr closed{DiffExpr(ParamScalar(Rational(8 * k) / pow2(k))),
                           DiffExpr::E().pow(k - 1) * w_expr().pow(k + 1)};
            check(out, tag + " convolution", conv - closed);

            RatExpr tres = gk.total_derivative(Dir::T).reduce(Ruleset::Flow) -
                           conv * phi * RatExpr(DiffExpr(ParamScalar(half)));
            check(out, tag + " t-relation", tres);

            // printed closed form of gamma_{k,t} with (u_x - u)_t -> -phi
            RatExpr tclosed = RatExpr(DiffExpr(ParamScalar(Rational(4 * k) / pow2(k))),
                                      DiffExpr::E().pow(k - 1) * w_expr().pow(k + 1)) * phi;
            check(out, tag + " t-closed-form", gk.total_derivative(Dir::T).reduce(Ruleset::Flow) - tclosed);
        }
    } else {
        // Gamma_{0,x} = Gamma_0
        check(out, "pos k=0 x-recursion",
              series_term(e, 0).total_derivative(Dir::X) - series_term(e, 0));
        for (int k = 1; k <= kmax; ++k) {
            std::string tag = "pos k=" + std::to_string(k);
            RatExpr conv;  // sum_{i=0}^{k-1} Gamma_i Gamma_{k-1-i}
            for (int i = 0; i <= k - 1; ++i)
                conv = conv + series_term(e, i) * series_term(e, k - 1 - i);
            RatExpr Gk = series_term(e, k);

            RatExpr xres = Gk.total_derivative(Dir::X) - (conv * m1 * RatExpr(DiffExpr(ParamScalar(half))) + Gk);
            check(out, tag + " x-recursion", xres);

            RatExpr closed{DiffExpr::E().pow(k + 1) * v_expr().pow(k - 1) *
                           ParamScalar(Rational(k) / pow2(k - 1))};
            check(out, tag + " convolution", conv - closed);

            RatExpr tres = Gk.total_derivative(Dir::T).reduce(Ruleset::Flow) -
                           conv * phi * RatExpr(DiffExpr(ParamScalar(half)));
            check(out, tag + " t-relation", tres);

            RatExpr tclosed = RatExpr(DiffExpr::E().pow(k + 1) * v_expr().pow(k - 1) *
                                      ParamScalar(Rational(k) / pow2(k))) * phi;
            check(out, tag + " t-closed-form", Gk.total_derivative(Dir::T).reduce(Ruleset::Flow) - tclosed);
        }
    }
    return out;
}

DiffExpr check_bridge_identity() {
    DiffExpr phi = phi_expr();
    DiffExpr L3 = DiffExpr::u(0, 1) - DiffExpr::u(1, 1) - phi;
    DiffExpr R = DiffExpr::u(0, 1) - DiffExpr::u(2, 1) - phi - phi.total_derivative(Dir::X);
    return L3.total_derivative(Dir::X) + L3 - R;
}

ConservationLaw conservation_law(Family f, int k) {
    ConservationLaw law;
    law.family = f;
    law.k = k;
    if (f == Family::Neg) {
        if (k < 2) throw std::out_of_range("conservation_law: neg family needs k >= 2");
        DiffExpr den = DiffExpr::E().pow(k - 1) * w_expr().pow(k);
        law.density = {m1_expr(), den};
        law.flux = {phi_expr(), den};
        law.potential = {one(), DiffExpr::E().pow(k - 1) * w_expr().pow(k - 1) * ParamScalar(Rational(k - 1))};
    } else {
        if (k < 1) throw std::out_of_range("conservation_law: pos family needs k >= 1");
        DiffExpr weight = DiffExpr::E().pow(k + 1) * v_expr().pow(k);
        law.density = {weight * m1_expr()};
        law.flux = {weight * phi_expr()};
        law.potential = {DiffExpr::E().pow(k + 1) * v_expr().pow(k + 1) *
                         ParamScalar(Rational(1) / Rational(k + 1))};
    }
    return law;
}

std::vector<CheckResult> check_exactness(Family f, int k) {
    ConservationLaw law = conservation_law(f, k);
    std::string tag = std::string(f == Family::Neg ? "neg" : "pos") + " k=" + std::to_string(k);
    std::vector<CheckResult> out;
    check(out, tag + " D_x(potential) = density",
          law.potential.total_derivative(Dir::X) - law.density);
    check(out, tag + " D_t(potential) = flux (mod flow)",
          law.potential.total_derivative(Dir::T).reduce(Ruleset::Flow) - law.flux);
    return out;
}

}  // namespace pss
