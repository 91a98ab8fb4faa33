#include "pss/evalbridge.hpp"

#include <cmath>
#include <stdexcept>

namespace pss {

namespace {

std::vector<CompiledExpr::Term> flatten(const DiffExpr& e, const Bindings& b,
                                        std::array<bool, 8>& used) {
    std::vector<CompiledExpr::Term> out;
    out.reserve(e.terms().size());
    for (const auto& [mono, coeff] : e.terms()) {
        CompiledExpr::Term t{};
        t.coeff = coeff.eval(b.mu, b.beta, b.C);
        for (const auto& [var, exp] : mono) {
            if (var.kind == JetVar::Exp) {
                t.e_exp += exp;
                used[static_cast<int>(Input::X)] = true;
                continue;
            }
            if (var.kind == JetVar::Gamma)
                throw std::invalid_argument("compile: unbound symbol g");
            Input in;
            if (var.to == 0) {
                if (var.xo > 3) throw std::invalid_argument("compile: x-order > 3 unsupported");
                in = static_cast<Input>(static_cast<int>(Input::U) + var.xo);
            } else {
                if (var.xo > 2) throw std::invalid_argument("compile: t-jet x-order > 2 unsupported");
                in = static_cast<Input>(static_cast<int>(Input::Ut) + var.xo);
            }
            t.pw[static_cast<int>(in)] = static_cast<std::uint8_t>(exp);
            used[static_cast<int>(in)] = true;
        }
        if (t.e_exp > 0) used[static_cast<int>(Input::X)] = true;
        out.push_back(t);
    }
    return out;
}

}  // namespace

CompiledExpr compile(const RatExpr& e, const Bindings& b) {
    CompiledExpr c;
    c.div_eps_ = b.div_eps;
    c.num_ = flatten(e.num(), b, c.used_);
    if (!(e.den() == DiffExpr(1L))) c.den_ = flatten(e.den(), b, c.used_);
    return c;
}

double CompiledExpr::eval_terms(const std::vector<Term>& terms, const std::array<double, 8>& in) {
    double acc = 0.0;
    for (const auto& t : terms) {
        double v = t.coeff;
        for (int i = 0; i < 8; ++i) {
            double base = in[i];
            for (int p = 0; p < t.pw[i]; ++p) v *= base;
        }
        if (t.e_exp) v *= std::exp(t.e_exp * in[static_cast<int>(Input::X)]);
        acc += v;
    }
    return acc;
}

double CompiledExpr::eval_point(const std::array<double, 8>& in, std::size_t index) const {
    double n = eval_terms(num_, in);
    if (den_.empty()) return n;
    double d = eval_terms(den_, in);
    if (std::abs(d) < div_eps_) throw DivisionGuardError(index, d);
    return n / d;
}

std::vector<double> CompiledExpr::eval_field(const FieldView& f) const {
    std::size_t n = 0;
    for (int i = 0; i < 8; ++i) {
        auto sp = f.get(static_cast<Input>(i));
        if (used_[i]) {
            if (sp.empty()) throw std::invalid_argument("eval_field: missing required input array");
            if (n == 0)
                n = sp.size();
            else if (sp.size() != n)
                throw std::invalid_argument("eval_field: input arrays not conformable");
        }
    }
    if (n == 0 && !f.x.empty()) n = f.x.size();  // constant expression over given nodes
    std::vector<double> out(n);
    std::array<double, 8> in{};
    for (std::size_t j = 0; j < n; ++j) {
        for (int i = 0; i < 8; ++i) {
            auto sp = f.get(static_cast<Input>(i));
            in[i] = used_[i] ? sp[j] : 0.0;
        }
        out[j] = eval_point(in, j);
    }
    return out;
}

}  // namespace pss
