#include "jetreduce/calculus.hpp"

#include <unordered_map>

namespace jetreduce {

Expr diff(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case Kind::Number: return Expr(0);
        case Kind::Symbol: return Expr(e.name() == var ? 1 : 0);
        case Kind::Add: {
            std::vector<Expr> terms;
            for (const auto& t : e.ops()) terms.push_back(diff(t, var));
            return add(std::move(terms));
        }
        case Kind::Mul: {
            auto fs = e.ops();
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                Expr d = diff(fs[i], var);
                if (d.is_zero_literal()) continue;
                std::vector<Expr> prod(fs.begin(), fs.end());
                prod[i] = d;
                terms.push_back(mul(std::move(prod)));
            }
            return add(std::move(terms));
        }
        case Kind::Pow: {
            const Expr& b = e.op(0);
            Expr db = diff(b, var);
            if (db.is_zero_literal()) return Expr(0);
            return mul({Expr(e.exponent()), pow(b, e.exponent() - 1), db});
        }
        case Kind::Func: {
            const Expr& u = e.op(0);
            Expr du = diff(u, var);
            if (du.is_zero_literal()) return Expr(0);
            switch (e.fn()) {
                case Fn::Exp: return e * du;
                case Fn::Ln: return du / u;
                case Fn::Sqrt: return du / (Expr(2) * e);
                case Fn::Sin: return func(Fn::Cos, u) * du;
                case Fn::Cos: return -(func(Fn::Sin, u) * du);
                case Fn::Tan: return (Expr(1) + pow(e, 2)) * du;
                case Fn::Arctan: return du / (Expr(1) + pow(u, 2));
            }
            break;
        }
        case Kind::Apply:
        case Kind::Diff:
            if (!e.depends_on(var)) return Expr(0);
            throw UnsupportedForm("cannot differentiate " + format(e) + " with respect to " + var);
    }
    throw UnsupportedForm("unsupported kernel head");
}

namespace {

struct Substituter {
    std::unordered_map<Expr, Expr, ExprHash> table;
    std::unordered_map<Expr, Expr, ExprHash> memo;

    Expr run(const Expr& e) {
        if (auto it = table.find(e); it != table.end()) return it->second;
        if (e.ops().empty()) return e;
        if (auto it = memo.find(e); it != memo.end()) return it->second;
        std::vector<Expr> ops;
        bool changed = false;
        for (const auto& o : e.ops()) {
            ops.push_back(run(o));
            changed = changed || ops.back() != o;
        }
        Expr out = e;
        if (changed) {
            switch (e.kind()) {
                case Kind::Add: out = add(std::move(ops)); break;
                case Kind::Mul: out = mul(std::move(ops)); break;
                case Kind::Pow: out = pow(ops[0], e.exponent()); break;
                case Kind::Func: out = func(e.fn(), ops[0]); break;
                case Kind::Apply: out = Expr::apply(e.name(), std::move(ops)); break;
                case Kind::Diff: out = Expr::diff(ops[0], e.diff_vars()); break;
                default: break;
            }
        }
        memo.emplace(e, out);
        return out;
    }
};

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings) {
    if (bindings.empty()) return e;
    Substituter s;
    for (const auto& [from, to] : bindings) s.table.emplace(from, to);
    return s.run(e);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& symbols) {
    Bindings b;
    for (const auto& [name, value] : symbols) b.emplace_back(sym(name), value);
    return substitute(e, b);
}

}  // namespace jetreduce
