#pragma once

#include <array>
#include <map>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pss {

using Rational = boost::multiprecision::cpp_rational;

/// Exact scalar of the parameter ring: polynomials in mu, s, beta, C with
/// rational coefficients, reduced modulo s^2 = 1 + mu^2. The parameter
/// eta = mu + s has exact inverse s - mu under the relation; no localization
/// is needed. beta and C are free constants used by the immersion checks.
class ParamScalar {
public:
    // exponents of (mu, s, beta, C); s-degree is <= 1 after normalization
    using Key = std::array<int, 4>;

    ParamScalar() = default;
    explicit ParamScalar(Rational r) {
        if (r != 0) terms_[{0, 0, 0, 0}] = std::move(r);
    }
    explicit ParamScalar(long n) : ParamScalar(Rational(n)) {}

    static ParamScalar zero() { return ParamScalar(); }
    static ParamScalar one() { return ParamScalar(1L); }
    static ParamScalar mu() { return monomial({1, 0, 0, 0}); }
    static ParamScalar s() { return monomial({0, 1, 0, 0}); }
    static ParamScalar beta() { return monomial({0, 0, 1, 0}); }
    static ParamScalar bigC() { return monomial({0, 0, 0, 1}); }
    /// eta = mu + eps*s
    static ParamScalar eta(int eps) { return mu() + s() * Rational(eps); }
    /// eta^{-1} = eps*s - mu, exact under s^2 = 1 + mu^2
    static ParamScalar eta_inv(int eps) { return s() * Rational(eps) - mu(); }

    static ParamScalar monomial(Key k, Rational c = Rational(1)) {
        ParamScalar p;
        p.terms_[k] = std::move(c);
        p.normalize();
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool operator==(const ParamScalar& o) const { return terms_ == o.terms_; }

    ParamScalar operator-() const {
        ParamScalar r = *this;
        for (auto& [k, c] : r.terms_) c = -c;
        return r;
    }
    ParamScalar operator+(const ParamScalar& o) const {
        ParamScalar r = *this;
        for (const auto& [k, c] : o.terms_) r.terms_[k] += c;
        r.prune();
        return r;
    }
    ParamScalar operator-(const ParamScalar& o) const { return *this + (-o); }
    ParamScalar operator*(const ParamScalar& o) const {
        ParamScalar r;
        for (const auto& [ka, ca] : terms_)
            for (const auto& [kb, cb] : o.terms_) {
                Key k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ka[3] + kb[3]};
                r.terms_[k] += ca * cb;
            }
        r.normalize();
        return r;
    }
    ParamScalar operator*(const Rational& q) const {
        if (q == 0) return {};
        ParamScalar r = *this;
        for (auto& [k, c] : r.terms_) c *= q;
        return r;
    }
    ParamScalar& operator+=(const ParamScalar& o) { return *this = *this + o; }
    ParamScalar& operator-=(const ParamScalar& o) { return *this = *this - o; }
    ParamScalar& operator*=(const ParamScalar& o) { return *this = *this * o; }

    ParamScalar pow(int e) const {
        ParamScalar r = one();
        for (int i = 0; i < e; ++i) r *= *this;
        return r;
    }

    /// Numeric value with s = eps-free sqrt(1+mu^2); the branch sign was
    /// already multiplied into the s coefficients at construction time.
    double eval(double mu_v, double beta_v = 0.0, double C_v = 0.0) const {
        const double s_v = std::sqrt(1.0 + mu_v * mu_v);
        double acc = 0.0;
        for (const auto& [k, c] : terms_)
            acc += static_cast<double>(c) * std::pow(mu_v, k[0]) * std::pow(s_v, k[1]) *
                   std::pow(beta_v, k[2]) * std::pow(C_v, k[3]);
        return acc;
    }

    /// Exact evaluation at a rational point. Only consistent when the supplied
    /// (mu, s) satisfy s^2 = 1 + mu^2, e.g. mu = 0, s = 1.
    Rational eval_exact(const Rational& mu_v, const Rational& s_v,
                        const Rational& beta_v = Rational(0),
                        const Rational& C_v = Rational(0)) const {
        auto ipow = [](const Rational& b, int e) {
            Rational r(1);
            for (int i = 0; i < e; ++i) r *= b;
            return r;
        };
        Rational acc(0);
        for (const auto& [k, c] : terms_)
            acc += c * ipow(mu_v, k[0]) * ipow(s_v, k[1]) * ipow(beta_v, k[2]) * ipow(C_v, k[3]);
        return acc;
    }

    const std::map<Key, Rational>& terms() const { return terms_; }

    std::string str() const {
        if (terms_.empty()) return "0";
        static const char* names[4] = {"mu", "s", "beta", "C"};
        std::string out;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            std::string t = c.str();
            for (int i = 0; i < 4; ++i) {
                if (k[i] == 0) continue;
                t += "*";
                t += names[i];
                if (k[i] != 1) t += "^" + std::to_string(k[i]);
            }
            if (!first && t[0] != '-') out += "+";
            out += t;
            first = false;
        }
        return out;
    }

private:
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = (it->second == 0) ? terms_.erase(it) : std::next(it);
    }
    // rewrite s^e, e >= 2, via s^2 = 1 + mu^2 until s-degree <= 1
    void normalize() {
        bool again = true;
        while (again) {
            again = false;
            std::map<Key, Rational> next;
            for (auto& [k, c] : terms_) {
                if (k[1] >= 2) {
                    Key a{k[0], k[1] - 2, k[2], k[3]};       // *1
                    Key b{k[0] + 2, k[1] - 2, k[2], k[3]};   // *mu^2
                    next[a] += c;
                    next[b] += c;
                    if (k[1] - 2 >= 2) again = true;
                } else {
                    next[k] += c;
                }
            }
            terms_ = std::move(next);
        }
        prune();
    }

    std::map<Key, Rational> terms_;
};

inline ParamScalar operator*(const Rational& q, const ParamScalar& p) { return p * q; }

}  // namespace pss
