#pragma once

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pss/param.hpp"

namespace pss {

/// A jet symbol: u(i,j) = d^i/dx^i d^j/dt^j u with j <= 1, the exponential
/// symbol E standing for e^x (D_x E = E, D_t E = 0), or the pseudo-potential
/// symbol g whose derivatives are never stored, only substituted.
struct JetVar {
    enum Kind : std::uint8_t { U = 0, Exp = 1, Gamma = 2 };
    Kind kind = U;
    std::uint8_t xo = 0;  // x-order (U only)
    std::uint8_t to = 0;  // t-order (U only), <= 1

    auto operator<=>(const JetVar&) const = default;

    static JetVar u(int i, int j) {
        if (i < 0 || j < 0 || j > 1) throw std::invalid_argument("JetVar: need i >= 0, j in {0,1}");
        return JetVar{U, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
    }
    static JetVar e() { return JetVar{Exp, 0, 0}; }
    static JetVar g() { return JetVar{Gamma, 0, 0}; }

    std::string str() const;
};

enum class Dir { X, T };
enum class Ruleset { Pde, Flow };

class DiffExpr;

/// Substitution rules for derivatives of the pseudo-potential symbol g,
/// taken from its defining Riccati system.
struct GammaRules {
    const DiffExpr* gx = nullptr;
    const DiffExpr* gt = nullptr;
};

/// Sparse exact sum of monomials in jet variables with ParamScalar
/// coefficients. Zero is the empty sum; all arithmetic is exact.
class DiffExpr {
public:
    using Monomial = std::vector<std::pair<JetVar, int>>;  // sorted, exponents > 0

    DiffExpr() = default;
    explicit DiffExpr(ParamScalar c) {
        if (!c.is_zero()) terms_[{}] = std::move(c);
    }
    explicit DiffExpr(long n) : DiffExpr(ParamScalar(n)) {}
    explicit DiffExpr(JetVar v) { terms_[{{v, 1}}] = ParamScalar::one(); }

    static DiffExpr u(int i, int j) { return DiffExpr(JetVar::u(i, j)); }
    static DiffExpr E() { return DiffExpr(JetVar::e()); }
    static DiffExpr g() { return DiffExpr(JetVar::g()); }
    static DiffExpr constant(long n) { return DiffExpr(n); }
    static DiffExpr scalar(ParamScalar c) { return DiffExpr(std::move(c)); }

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const DiffExpr& o) const { return terms_ == o.terms_; }

    DiffExpr operator-() const;
    DiffExpr operator+(const DiffExpr& o) const;
    DiffExpr operator-(const DiffExpr& o) const;
    DiffExpr operator*(const DiffExpr& o) const;
    DiffExpr operator*(const ParamScalar& c) const;
    DiffExpr operator*(const Rational& q) const { return *this * ParamScalar(q); }
    DiffExpr& operator+=(const DiffExpr& o) { return *this = *this + o; }
    DiffExpr& operator-=(const DiffExpr& o) { return *this = *this - o; }
    DiffExpr& operator*=(const DiffExpr& o) { return *this = *this * o; }
    DiffExpr pow(int e) const;

    bool contains(JetVar v) const;
    /// largest i such that u(i,1) occurs with i >= min_i, if any
    std::optional<int> max_t_order(int min_i) const;
    /// largest x-order of any u(i,*) present
    int max_x_order() const;

    DiffExpr total_derivative(Dir d, const GammaRules* rules = nullptr) const;
    /// partial derivative with respect to a single jet symbol
    DiffExpr partial(JetVar v) const;
    DiffExpr substitute(JetVar v, const DiffExpr& repl) const;
    DiffExpr reduce(Ruleset r) const;

    Rational eval_exact(const std::map<JetVar, Rational>& point,
                        const Rational& mu = Rational(0), const Rational& s = Rational(1),
                        const Rational& beta = Rational(0),
                        const Rational& C = Rational(0)) const;

    const std::map<Monomial, ParamScalar>& terms() const { return terms_; }
    std::string str() const;

private:
    std::map<Monomial, ParamScalar> terms_;
    void prune();
};

inline DiffExpr operator*(const ParamScalar& c, const DiffExpr& e) { return e * c; }

/// phi = u^2 u_xx - 2 u^2 u_x + u u_x^2, the flux of the conservation form
/// of the equation and the dt-coefficient of omega_1.
DiffExpr phi_expr();

/// Right side of the equation solved for u_t - u_xxt:
/// F = u^2 u_xxx - u^2 u_xx - 3 u u_x^2 - 2 u^2 u_x + 4 u u_x u_xx + u_x^3.
DiffExpr pde_F();

/// Exact rational expression: pair of DiffExpr, denominator nonzero.
/// Equality is decided by cross-multiplication.
class RatExpr {
public:
    RatExpr() : num_(), den_(DiffExpr(1L)) {}
    RatExpr(DiffExpr n, DiffExpr d = DiffExpr(1L)) : num_(std::move(n)), den_(std::move(d)) {
        if (den_.is_zero()) throw std::domain_error("RatExpr: zero denominator");
    }

    const DiffExpr& num() const { return num_; }
    const DiffExpr& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    bool operator==(const RatExpr& o) const { return (num_ * o.den_) == (o.num_ * den_); }

    RatExpr operator-() const { return {-num_, den_}; }
    RatExpr operator+(const RatExpr& o) const {
        return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
    }
    RatExpr operator-(const RatExpr& o) const { return *this + (-o); }
    RatExpr operator*(const RatExpr& o) const { return {num_ * o.num_, den_ * o.den_}; }
    RatExpr operator/(const RatExpr& o) const {
        if (o.num_.is_zero()) throw std::domain_error("RatExpr: division by zero");
        return {num_ * o.den_, den_ * o.num_};
    }

    RatExpr total_derivative(Dir d, const GammaRules* rules = nullptr) const {
        // quotient rule
        DiffExpr np = num_.total_derivative(d, rules);
        DiffExpr dp = den_.total_derivative(d, rules);
        return {np * den_ - num_ * dp, den_ * den_};
    }
    RatExpr reduce(Ruleset r) const { return {num_.reduce(r), den_.reduce(r)}; }

    std::string str() const;

private:
    DiffExpr num_, den_;
};

}  // namespace pss
