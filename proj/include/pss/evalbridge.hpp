#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pss/jetring.hpp"

namespace pss {

/// Numeric inputs of a compiled expression, one value per grid point.
enum class Input : std::uint8_t { X = 0, U, Ux, Uxx, Uxxx, Ut, Uxt, Uxxt, Count };

struct Bindings {
    double mu = 0.0;
    double beta = 0.0;
    double C = 0.0;
    double div_eps = 1e-12;
};

struct FieldView {
    std::span<const double> x, u, ux, uxx, uxxx, ut, uxt, uxxt;
    std::span<const double> get(Input i) const {
        switch (i) {
            case Input::X: return x;
            case Input::U: return u;
            case Input::Ux: return ux;
            case Input::Uxx: return uxx;
            case Input::Uxxx: return uxxx;
            case Input::Ut: return ut;
            case Input::Uxt: return uxt;
            default: return uxxt;
        }
    }
};

struct DivisionGuardError : std::runtime_error {
    std::size_t index;
    double value;
    DivisionGuardError(std::size_t i, double v)
        : std::runtime_error("guarded division tripped at index " + std::to_string(i)),
          index(i), value(v) {}
};

/// Flattened evaluation program: a sum of coefficient * product-of-powers
/// terms for the numerator and (optionally) the denominator, with e^x
/// folded into a per-term exponential of x.
class CompiledExpr {
public:
    struct Term {
        double coeff;
        int e_exp;                       // power of e^x
        std::array<std::uint8_t, 8> pw;  // powers of the 8 inputs
    };

    double eval_point(const std::array<double, 8>& in, std::size_t index = 0) const;
    std::vector<double> eval_field(const FieldView& f) const;

    bool uses(Input i) const { return used_[static_cast<int>(i)]; }
    bool has_denominator() const { return !den_.empty(); }

private:
    friend CompiledExpr compile(const RatExpr& e, const Bindings& b);
    std::vector<Term> num_, den_;
    std::array<bool, 8> used_{};
    double div_eps_ = 1e-12;

    static double eval_terms(const std::vector<Term>& terms, const std::array<double, 8>& in);
};

CompiledExpr compile(const RatExpr& e, const Bindings& b);
inline CompiledExpr compile(const DiffExpr& e, const Bindings& b) { return compile(RatExpr(e), b); }

}  // namespace pss
