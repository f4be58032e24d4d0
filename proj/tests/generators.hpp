#pragma once

#include "jetreduce/expr.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace jetreduce::testing {

/// Seeded random expression trees over a fixed symbol set.
class ExprGen {
public:
    explicit ExprGen(unsigned seed, std::vector<std::string> symbols = {"a", "b", "c", "x", "y"})
        : rng_(seed), symbols_(std::move(symbols)) {}

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Expr leaf() {
        if (uniform(0, 3) == 0) {
            int v = uniform(-4, 4);
            return Expr(v == 0 ? 1 : v);
        }
        return sym(symbols_[uniform(0, static_cast<int>(symbols_.size()) - 1)]);
    }

    /// Polynomial-ish tree of bounded depth.
    Expr poly(int depth) {
        if (depth <= 0) return leaf();
        switch (uniform(0, 3)) {
            case 0: return poly(depth - 1) + poly(depth - 1);
            case 1: return poly(depth - 1) * poly(depth - 1);
            case 2: return poly(depth - 1) - poly(depth - 1);
            default: return pow(poly(depth - 1), uniform(1, 2));
        }
    }

    /// Rational expression; denominators avoid identically-zero trees.
    Expr rational(int depth) {
        if (depth <= 0) return leaf();
        switch (uniform(0, 4)) {
            case 0: return rational(depth - 1) + rational(depth - 1);
            case 1: return rational(depth - 1) * rational(depth - 1);
            case 2: return rational(depth - 1) - rational(depth - 1);
            case 3: return rational(depth - 1) / nonzero_denominator(depth - 1);
            default: return pow(rational(depth - 1), uniform(-1, 2) == 0 ? 2 : 1);
        }
    }

    /// z never occurs elsewhere, so z + p cannot vanish identically.
    Expr nonzero_denominator(int depth) { return sym("z") + poly(depth); }

    std::mt19937& rng() { return rng_; }

private:
    std::mt19937 rng_;
    std::vector<std::string> symbols_;
};

/// Exact evaluation at a rational point (oracle independent of the
/// normal-form code). Returns nullopt on division by zero; kernels unsupported.
inline std::optional<Rational> evaluate(const Expr& e, const std::map<std::string, Rational>& at) {
    switch (e.kind()) {
        case Kind::Number: return e.number();
        case Kind::Symbol: {
            auto it = at.find(e.name());
            if (it == at.end()) throw std::out_of_range("unbound symbol " + e.name());
            return it->second;
        }
        case Kind::Add: {
            Rational s = 0;
            for (const auto& o : e.ops()) {
                auto v = evaluate(o, at);
                if (!v) return std::nullopt;
                s += *v;
            }
            return s;
        }
        case Kind::Mul: {
            Rational p = 1;
            for (const auto& o : e.ops()) {
                auto v = evaluate(o, at);
                if (!v) return std::nullopt;
                p *= *v;
            }
            return p;
        }
        case Kind::Pow: {
            auto b = evaluate(e.op(0), at);
            if (!b) return std::nullopt;
            long k = e.exponent();
            if (k < 0 && sgn(*b) == 0) return std::nullopt;
            Rational r = 1;
            for (long i = 0; i < (k < 0 ? -k : k); ++i) r *= *b;
            return k < 0 ? Rational(1 / r) : r;
        }
        default: throw std::invalid_argument("evaluate: unsupported node");
    }
}

/// Random rational point for the given symbols.
inline std::map<std::string, Rational> random_point(std::mt19937& rng, const std::vector<std::string>& names) {
    std::uniform_int_distribution<int> num(-97, 97), den(1, 13);
    std::map<std::string, Rational> at;
    for (const auto& n : names) {
        Rational q(num(rng), den(rng));
        q.canonicalize();
        at[n] = q;
    }
    return at;
}

}  // namespace jetreduce::testing
