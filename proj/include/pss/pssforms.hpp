#pragma once

#include <array>

#include "pss/jetring.hpp"

namespace pss {

struct OneForm {
    DiffExpr dx;
    DiffExpr dt;
};

/// The one-form data of the pseudospherical structure: the six coefficients
/// f_ij, the forms themselves, and the pairwise determinants
/// Delta_ij = f_i1 f_j2 - f_j1 f_i2. The +- branch of the coefficients is
/// realized as eps * s with eps in {+1,-1}.
struct PsSpec {
    int eps = 1;
    DiffExpr f11, f12, f21, f22, f31, f32;
    OneForm w1, w2, w3;
    DiffExpr d12, d13, d23;
};

PsSpec build_forms(int eps);

/// Raw dx^dt residuals of the three structure equations:
///   r1 from d w1 - w3 ^ w2, r2 from d w2 - w1 ^ w3, r3 from d w3 - w1 ^ w2.
/// Contract: each reduces to 0 modulo the equation.
std::array<DiffExpr, 3> structure_residuals(const PsSpec& spec);

/// The instantiation data for the one-parameter family of forms.
struct FamilyData {
    ParamScalar lambda;  // 1
    DiffExpr f;          // u - u_xx
    DiffExpr phi12;      // -2u^2 u_x + u u_x^2 + u^3
    ParamScalar C;       // 0
    ParamScalar eta2;    // eps * s
    ParamScalar mu2;     // mu
};

FamilyData family_data(int eps);

struct FamilyInstantiationReport {
    DiffExpr g_computed;
    DiffExpr g_target;
    DiffExpr difference;       // must be zero
    ParamScalar constraint;    // (lambda*eta2)^2 + C^2, must be nonzero
    bool ok = false;
};

/// Substitutes the instantiation data into the family's G-formula and
/// compares against the equation's non-u_xxx right side.
FamilyInstantiationReport family_instantiation_check(int eps);

/// (Delta_12, Delta_13, Delta_23) for symbolic use and grid masks.
std::array<DiffExpr, 3> genericity_exprs(const PsSpec& spec);

}  // namespace pss
