#include "pss/jetring.hpp"

#include <algorithm>

namespace pss {

std::string JetVar::str() const {
    switch (kind) {
        case Exp: return "E";
        case Gamma: return "g";
        default: break;
    }
    if (xo == 0 && to == 0) return "u";
    std::string sub;
    if (xo > 0 && xo <= 3)
        sub.append(static_cast<std::size_t>(xo), 'x');
    else if (xo > 3)
        sub = std::to_string(int(xo)) + "x";
    if (to == 1) sub += "t";
    return "u_" + sub;
}

void DiffExpr::prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
}

DiffExpr DiffExpr::operator-() const {
    DiffExpr r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

DiffExpr DiffExpr::operator+(const DiffExpr& o) const {
    DiffExpr r = *this;
    for (const auto& [m, c] : o.terms_) {
        auto it = r.terms_.find(m);
        if (it == r.terms_.end())
            r.terms_[m] = c;
        else
            it->second += c;
    }
    r.prune();
    return r;
}

DiffExpr DiffExpr::operator-(const DiffExpr& o) const { return *this + (-o); }

namespace {
DiffExpr::Monomial mono_mul(const DiffExpr::Monomial& a, const DiffExpr::Monomial& b) {
    DiffExpr::Monomial r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first)
            r.push_back(a[i++]);
        else if (b[j].first < a[i].first)
            r.push_back(b[j++]);
        else {
            r.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i, ++j;
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
}
}  // namespace

DiffExpr DiffExpr::operator*(const DiffExpr& o) const {
    DiffExpr r;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) {
            ParamScalar c = ca * cb;
            if (c.is_zero()) continue;
            auto m = mono_mul(ma, mb);
            auto it = r.terms_.find(m);
            if (it == r.terms_.end())
                r.terms_[std::move(m)] = std::move(c);
            else
                it->second += c;
        }
    r.prune();
    return r;
}

DiffExpr DiffExpr::operator*(const ParamScalar& c) const {
    if (c.is_zero()) return {};
    DiffExpr r = *this;
    for (auto& [m, k] : r.terms_) k *= c;
    r.prune();
    return r;
}

DiffExpr DiffExpr::pow(int e) const {
    DiffExpr r(1L);
    for (int i = 0; i < e; ++i) r *= *this;
    return r;
}

bool DiffExpr::contains(JetVar v) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [var, e] : m)
            if (var == v) return true;
    return false;
}

std::optional<int> DiffExpr::max_t_order(int min_i) const {
    std::optional<int> best;
    for (const auto& [m, c] : terms_)
        for (const auto& [var, e] : m)
            if (var.kind == JetVar::U && var.to == 1 && var.xo >= min_i)
                if (!best || int(var.xo) > *best) best = int(var.xo);
    return best;
}

int DiffExpr::max_x_order() const {
    int best = 0;
    for (const auto& [m, c] : terms_)
        for (const auto& [var, e] : m)
            if (var.kind == JetVar::U) best = std::max(best, int(var.xo));
    return best;
}

DiffExpr DiffExpr::total_derivative(Dir d, const GammaRules* rules) const {
    auto dvar = [&](JetVar v) -> DiffExpr {
        switch (v.kind) {
            case JetVar::Exp:
                return d == Dir::X ? DiffExpr::E() : DiffExpr();
            case JetVar::Gamma: {
                const DiffExpr* r = (d == Dir::X) ? (rules ? rules->gx : nullptr)
                                                  : (rules ? rules->gt : nullptr);
                if (!r) throw std::domain_error("total_derivative: no substitution rule for g");
                return *r;
            }
            default: break;
        }
        if (d == Dir::X) return DiffExpr::u(v.xo + 1, v.to);
        if (v.to == 1) throw std::domain_error("total_derivative: second t-derivative of a jet variable");
        return DiffExpr::u(v.xo, 1);
    };

    DiffExpr out;
    for (const auto& [m, c] : terms_) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            // d(var^e) = e var^(e-1) dvar, times the other factors
            Monomial rest;
            rest.reserve(m.size());
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (j == k) {
                    if (m[j].second > 1) rest.emplace_back(m[j].first, m[j].second - 1);
                } else {
                    rest.push_back(m[j]);
                }
            }
            DiffExpr factor;
            factor.terms_[rest] = c * ParamScalar(Rational(m[k].second));
            out += factor * dvar(m[k].first);
        }
    }
    return out;
}

DiffExpr DiffExpr::partial(JetVar v) const {
    DiffExpr out;
    for (const auto& [m, c] : terms_) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (!(m[k].first == v)) continue;
            Monomial rest;
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (j == k) {
                    if (m[j].second > 1) rest.emplace_back(m[j].first, m[j].second - 1);
                } else {
                    rest.push_back(m[j]);
                }
            }
            DiffExpr term;
            term.terms_[rest] = c * ParamScalar(Rational(m[k].second));
            out += term;
        }
    }
    return out;
}

DiffExpr DiffExpr::substitute(JetVar v, const DiffExpr& repl) const {
    DiffExpr out;
    for (const auto& [m, c] : terms_) {
        DiffExpr term;
        Monomial rest;
        int e = 0;
        for (const auto& [var, exp] : m) {
            if (var == v)
                e = exp;
            else
                rest.push_back({var, exp});
        }
        term.terms_[rest] = c;
        if (e > 0) term *= repl.pow(e);
        out += term;
    }
    return out;
}

DiffExpr DiffExpr::reduce(Ruleset r) const {
    DiffExpr cur = *this;
    const int min_i = (r == Ruleset::Pde) ? 2 : 1;
    while (auto i = cur.max_t_order(min_i)) {
        DiffExpr repl;
        if (r == Ruleset::Pde) {
            // u(i,1) -> u(i-2,1) - D_x^{i-2} F
            DiffExpr f = pde_F();
            for (int k = 0; k < *i - 2; ++k) f = f.total_derivative(Dir::X);
            repl = DiffExpr::u(*i - 2, 1) - f;
        } else {
            // u(i,1) -> u(i-1,1) - D_x^{i-1} phi
            DiffExpr p = phi_expr();
            for (int k = 0; k < *i - 1; ++k) p = p.total_derivative(Dir::X);
            repl = DiffExpr::u(*i - 1, 1) - p;
        }
        cur = cur.substitute(JetVar::u(*i, 1), repl);
    }
    return cur;
}

Rational DiffExpr::eval_exact(const std::map<JetVar, Rational>& point, const Rational& mu,
                              const Rational& s, const Rational& beta, const Rational& C) const {
    auto ipow = [](const Rational& b, int e) {
        Rational r(1);
        for (int i = 0; i < e; ++i) r *= b;
        return r;
    };
    Rational acc(0);
    for (const auto& [m, c] : terms_) {
        Rational t = c.eval_exact(mu, s, beta, C);
        for (const auto& [var, e] : m) {
            auto it = point.find(var);
            if (it == point.end()) throw std::invalid_argument("eval_exact: unbound variable " + var.str());
            t *= ipow(it->second, e);
        }
        acc += t;
    }
    return acc;
}

std::string DiffExpr::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string t = "(" + c.str() + ")";
        for (const auto& [var, e] : m) {
            t += "*" + var.str();
            if (e != 1) t += "^" + std::to_string(e);
        }
        if (!first) out += " + ";
        out += t;
        first = false;
    }
    return out;
}

std::string RatExpr::str() const {
    if (den_ == DiffExpr(1L)) return num_.str();
    return "[" + num_.str() + "] / [" + den_.str() + "]";
}

DiffExpr phi_expr() {
    DiffExpr u = DiffExpr::u(0, 0), ux = DiffExpr::u(1, 0), uxx = DiffExpr::u(2, 0);
    return u * u * uxx - u * u * ux * Rational(2) + u * ux * ux;
}

DiffExpr pde_F() {
    DiffExpr u = DiffExpr::u(0, 0), ux = DiffExpr::u(1, 0), uxx = DiffExpr::u(2, 0),
             uxxx = DiffExpr::u(3, 0);
    return u * u * uxxx - u * u * uxx - u * ux * ux * Rational(3) - u * u * ux * Rational(2) +
           u * ux * uxx * Rational(4) + ux * ux * ux;
}

}  // namespace pss
