#pragma once

#include <string>
#include <vector>

#include "pss/jetring.hpp"

namespace pss {

enum class RiccatiForm { Raw, Shifted };

/// Right sides of the quadratic pseudo-potential system, polynomial of
/// degree 2 in the symbol g. The raw form comes from substituting the
/// one-form coefficients into the defining Pfaffian system; the shifted form
/// is the raw form after g -> g + eta^{-1} and matches
///   gamma_x = g + g^2 eta (u - u_xx + 1)/2,  gamma_t = g^2 eta phi / 2.
struct RiccatiSystem {
    DiffExpr rhs_x;
    DiffExpr rhs_t;
    RiccatiForm form;
    int eps;
};

RiccatiSystem riccati_rhs(int eps, RiccatiForm form);

/// D_t(rhs_x) - D_x(rhs_t) with g-derivatives substituted from the system,
/// reduced modulo the equation; contract: zero.
DiffExpr check_integrability(int eps, RiccatiForm form = RiccatiForm::Shifted);

/// Residual of the parameter-dependent conservation law
/// [g (u - u_xx + 1)]_t - [g phi]_x, reduced modulo the equation.
DiffExpr check_conservation_identity(int eps);

/// Same residual before reduction; equals g times the conservation-form
/// residual of the equation.
DiffExpr conservation_identity_raw(int eps);

enum class Expansion { Negative, Positive };

/// Closed-form hierarchy terms: gamma_k of the eta^{-k} expansion
/// (k >= 1) or Gamma_k of the eta^k expansion (k >= 0).
RatExpr series_term(Expansion e, int k);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string residual;  // rendered only when nonzero
};

/// Per-k verification of the x-recursions, convolution identities, and
/// t-derivative relations of both expansion hierarchies.
std::vector<CheckResult> verify_hierarchy(Expansion e, int kmax);

/// D_x(L3) + L3 - R with L3 = (u - u_x)_t - phi and R the conservation-form
/// residual of the equation; identically zero as a raw ring element.
DiffExpr check_bridge_identity();

enum class Family { Neg, Pos };

struct ConservationLaw {
    RatExpr density;
    RatExpr flux;
    RatExpr potential;
    Family family;
    int k;
};

/// The printed conservation-law pair for the given family and k
/// (neg: k >= 2, pos: k >= 1), together with its potential.
ConservationLaw conservation_law(Family f, int k);

/// Exactness: D_x(potential) = density and D_t(potential) = flux mod flow.
std::vector<CheckResult> check_exactness(Family f, int k);

}  // namespace pss
