#include "pss/pssforms.hpp"

namespace pss {

PsSpec build_forms(int eps) {
    if (eps != 1 && eps != -1) throw std::invalid_argument("build_forms: eps must be +-1");
    PsSpec sp;
    sp.eps = eps;
    const ParamScalar es = ParamScalar::s() * Rational(eps);
    const ParamScalar mu = ParamScalar::mu();
    const DiffExpr m = DiffExpr::u(0, 0) - DiffExpr::u(2, 0);  // u - u_xx
    const DiffExpr phi = phi_expr();

    sp.f11 = m;
    sp.f12 = phi;
    sp.f21 = m * mu + DiffExpr::scalar(es);
    sp.f22 = phi * mu;
    sp.f31 = m * es + DiffExpr::scalar(mu);
    sp.f32 = phi * es;

    sp.w1 = {sp.f11, sp.f12};
    sp.w2 = {sp.f21, sp.f22};
    sp.w3 = {sp.f31, sp.f32};

    auto delta = [](const DiffExpr& a1, const DiffExpr& a2, const DiffExpr& b1,
                    const DiffExpr& b2) { return a1 * b2 - b1 * a2; };
    sp.d12 = delta(sp.f11, sp.f12, sp.f21, sp.f22);
    sp.d13 = delta(sp.f11, sp.f12, sp.f31, sp.f32);
    sp.d23 = delta(sp.f21, sp.f22, sp.f31, sp.f32);
    return sp;
}

std::array<DiffExpr, 3> structure_residuals(const PsSpec& sp) {
    // d(f1 dx + f2 dt) = (D_x f2 - D_t f1) dx^dt; wedge coefficient of
    // w_i ^ w_j is Delta_ij in the same orientation
    auto dcoeff = [](const OneForm& w) {
        return w.dt.total_derivative(Dir::X) - w.dx.total_derivative(Dir::T);
    };
    DiffExpr r1 = dcoeff(sp.w1) + sp.d23;  // - Delta_32
    DiffExpr r2 = dcoeff(sp.w2) - sp.d13;
    DiffExpr r3 = dcoeff(sp.w3) - sp.d12;
    return {r1, r2, r3};
}

FamilyData family_data(int eps) {
    FamilyData d;
    d.lambda = ParamScalar::one();
    d.f = DiffExpr::u(0, 0) - DiffExpr::u(2, 0);
    DiffExpr u = DiffExpr::u(0, 0), ux = DiffExpr::u(1, 0);
    d.phi12 = u * u * ux * Rational(-2) + u * ux * ux + u * u * u;
    d.C = ParamScalar::zero();
    d.eta2 = ParamScalar::s() * Rational(eps);
    d.mu2 = ParamScalar::mu();
    return d;
}

FamilyInstantiationReport family_instantiation_check(int eps) {
    FamilyData d = family_data(eps);
    DiffExpr u = DiffExpr::u(0, 0), ux = DiffExpr::u(1, 0), uxx = DiffExpr::u(2, 0);

    // The family's G-formula with f' = 1 and the +- sign taken as the same
    // eps as in eta2 = eps*s, so eps*eta2/sqrt(1+mu^2) collapses to 1 and the
    // lambda-term coefficient to u^2; the C-term vanishes since C = 0.
    DiffExpr g = ux * d.phi12.partial(JetVar::u(0, 0)) + uxx * d.phi12.partial(JetVar::u(1, 0)) -
                 u * u * ux + d.phi12 -
                 (u * ux * Rational(2) + u * u) * d.f;

    // right side of the equation minus lambda u^2 u_xxx
    DiffExpr target = pde_F() - u * u * DiffExpr::u(3, 0);

    FamilyInstantiationReport rep;
    rep.g_computed = g;
    rep.g_target = target;
    rep.difference = g - target;
    rep.constraint = (d.lambda * d.eta2) * (d.lambda * d.eta2) + d.C * d.C;
    rep.ok = rep.difference.is_zero() && !rep.constraint.is_zero();
    return rep;
}

std::array<DiffExpr, 3> genericity_exprs(const PsSpec& sp) { return {sp.d12, sp.d13, sp.d23}; }

}  // namespace pss
