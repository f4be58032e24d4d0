#include "jetreduce/expr.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace jetreduce {

struct Node {
    Kind kind = Kind::Number;
    Rational num;
    std::string name;
    std::vector<Expr> ops;
    long exp = 0;
    Fn fn = Fn::Exp;
    std::vector<std::string> vars;
    std::size_t hash = 0;
    std::size_t size = 1;
};

namespace {

constexpr std::string_view kFnNames[] = {"exp", "ln", "sqrt", "sin", "cos", "tan", "arctan"};

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_rational(const Rational& q) {
    std::hash<std::string> hs;
    return hs(q.get_str());
}

int cmp_rational(const Rational& a, const Rational& b) {
    int c = cmp(a, b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

const Rational kZero(0);

}  // namespace

std::string_view fn_name(Fn f) { return kFnNames[static_cast<int>(f)]; }

bool fn_from_name(std::string_view name, Fn& out) {
    for (int i = 0; i < 7; ++i) {
        if (kFnNames[i] == name) {
            out = static_cast<Fn>(i);
            return true;
        }
    }
    return false;
}

Expr make_node(Node&& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911u;
    std::size_t sz = 1;
    switch (n.kind) {
        case Kind::Number: h = mix(h, hash_rational(n.num)); break;
        case Kind::Symbol: h = mix(h, std::hash<std::string>{}(n.name)); break;
        case Kind::Pow: h = mix(h, std::hash<long>{}(n.exp)); break;
        case Kind::Func: h = mix(h, static_cast<std::size_t>(n.fn)); break;
        case Kind::Apply: h = mix(h, std::hash<std::string>{}(n.name)); break;
        case Kind::Diff:
            for (const auto& v : n.vars) h = mix(h, std::hash<std::string>{}(v));
            break;
        default: break;
    }
    for (const auto& o : n.ops) {
        h = mix(h, o.hash());
        sz += o.size();
    }
    n.hash = h;
    n.size = sz;
    return Expr(std::make_shared<const Node>(std::move(n)));
}

namespace {

Expr number_node(const Rational& q) {
    Node n;
    n.kind = Kind::Number;
    n.num = q;
    n.num.canonicalize();
    return make_node(std::move(n));
}

Expr compound(Kind k, std::vector<Expr> ops) {
    Node n;
    n.kind = k;
    n.ops = std::move(ops);
    return make_node(std::move(n));
}

Expr pow_node(Expr base, long k) {
    Node n;
    n.kind = Kind::Pow;
    n.ops = {std::move(base)};
    n.exp = k;
    return make_node(std::move(n));
}

}  // namespace

Expr::Expr() : Expr(Rational(0)) {}
Expr::Expr(int v) : Expr(Rational(v)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}
Expr::Expr(const Rational& v) : node_(number_node(v).node_) {}

Expr Expr::symbol(std::string name) {
    Node n;
    n.kind = Kind::Symbol;
    n.name = std::move(name);
    return make_node(std::move(n));
}

Expr Expr::apply(std::string fname, std::vector<Expr> args) {
    Node n;
    n.kind = Kind::Apply;
    n.name = std::move(fname);
    n.ops = std::move(args);
    return make_node(std::move(n));
}

Expr Expr::diff(Expr applied, std::vector<std::string> vars) {
    if (applied.kind() != Kind::Apply)
        throw UnsupportedForm("diff: first argument must be an unknown function application");
    if (vars.empty()) return applied;
    // Mixed partials commute: order variables by their position in the argument list.
    auto position = [&](const std::string& v) {
        auto args = applied.ops();
        for (std::size_t i = 0; i < args.size(); ++i)
            if (args[i].is_symbol() && args[i].name() == v) return static_cast<long>(i);
        return static_cast<long>(args.size());
    };
    std::stable_sort(vars.begin(), vars.end(), [&](const auto& a, const auto& b) {
        long pa = position(a), pb = position(b);
        return pa != pb ? pa < pb : a < b;
    });
    Node n;
    n.kind = Kind::Diff;
    n.ops = {std::move(applied)};
    n.vars = std::move(vars);
    return make_node(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero_literal() const { return kind() == Kind::Number && sgn(node_->num) == 0; }
bool Expr::is_one_literal() const { return kind() == Kind::Number && node_->num == 1; }
const Rational& Expr::number() const { return node_->kind == Kind::Number ? node_->num : kZero; }
const std::string& Expr::name() const { return node_->name; }
std::span<const Expr> Expr::ops() const { return node_->ops; }
long Expr::exponent() const { return node_->exp; }
Fn Expr::fn() const { return node_->fn; }
const std::vector<std::string>& Expr::diff_vars() const { return node_->vars; }
std::size_t Expr::hash() const { return node_->hash; }
std::size_t Expr::size() const { return node_->size; }

bool Expr::depends_on(const std::string& s) const {
    switch (kind()) {
        case Kind::Number: return false;
        case Kind::Symbol: return name() == s;
        case Kind::Diff:
            for (const auto& v : diff_vars())
                if (v == s) return true;
            break;
        default: break;
    }
    for (const auto& o : ops())
        if (o.depends_on(s)) return true;
    return false;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.raw() == b.raw()) return true;
    if (a.hash() != b.hash() || a.size() != b.size()) return false;
    return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
    if (a.raw() == b.raw()) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
        case Kind::Number: return cmp_rational(a.number(), b.number());
        case Kind::Symbol: {
            int c = a.name().compare(b.name());
            return c < 0 ? -1 : (c > 0 ? 1 : 0);
        }
        case Kind::Pow: {
            int c = compare(a.op(0), b.op(0));
            if (c != 0) return c;
            return a.exponent() < b.exponent() ? -1 : (a.exponent() > b.exponent() ? 1 : 0);
        }
        case Kind::Func:
            if (a.fn() != b.fn()) return a.fn() < b.fn() ? -1 : 1;
            break;
        case Kind::Apply: {
            int c = a.name().compare(b.name());
            if (c != 0) return c < 0 ? -1 : 1;
            break;
        }
        case Kind::Diff:
            if (a.diff_vars() != b.diff_vars()) return a.diff_vars() < b.diff_vars() ? -1 : 1;
            break;
        default: break;
    }
    auto ao = a.ops(), bo = b.ops();
    std::size_t n = std::min(ao.size(), bo.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = compare(ao[i], bo[i]);
        if (c != 0) return c;
    }
    if (ao.size() != bo.size()) return ao.size() < bo.size() ? -1 : 1;
    return 0;
}

std::pair<Rational, Expr> split_coefficient(const Expr& e) {
    if (e.is_number()) return {e.number(), Expr(1)};
    if (e.kind() == Kind::Mul && e.op(0).is_number()) {
        auto ops = e.ops();
        if (ops.size() == 2) return {ops[0].number(), ops[1]};
        return {ops[0].number(), compound(Kind::Mul, std::vector<Expr>(ops.begin() + 1, ops.end()))};
    }
    return {Rational(1), e};
}

Expr add(std::vector<Expr> terms) {
    Rational constant = 0;
    std::map<Expr, Rational, ExprLess> coeffs;
    std::function<void(const Expr&, const Rational&)> absorb = [&](const Expr& t, const Rational& m) {
        if (t.kind() == Kind::Add) {
            for (const auto& o : t.ops()) absorb(o, m);
        } else if (t.is_number()) {
            constant += m * t.number();
        } else {
            auto [k, rest] = split_coefficient(t);
            if (rest.kind() == Kind::Add) {
                absorb(rest, m * k);
            } else {
                coeffs[rest] += m * k;
            }
        }
    };
    for (const auto& t : terms) absorb(t, Rational(1));

    std::vector<Expr> out;
    for (auto& [rest, k] : coeffs) {
        if (sgn(k) == 0) continue;
        out.push_back(k == 1 ? rest : mul({Expr(k), rest}));
    }
    if (sgn(constant) != 0) out.push_back(Expr(constant));
    if (out.empty()) return Expr(0);
    if (out.size() == 1) return out.front();
    std::sort(out.begin(), out.end(), ExprLess{});
    return compound(Kind::Add, std::move(out));
}

Expr mul(std::vector<Expr> factors) {
    Rational coeff = 1;
    std::map<Expr, long, ExprLess> powers;
    bool zero = false;
    std::function<void(const Expr&)> absorb = [&](const Expr& f) {
        switch (f.kind()) {
            case Kind::Mul:
                for (const auto& o : f.ops()) absorb(o);
                break;
            case Kind::Number:
                coeff *= f.number();
                if (sgn(coeff) == 0) zero = true;
                break;
            case Kind::Pow: powers[f.op(0)] += f.exponent(); break;
            default: powers[f] += 1; break;
        }
    };
    for (const auto& f : factors) absorb(f);
    if (zero) return Expr(0);

    std::vector<Expr> out;
    for (auto& [base, k] : powers) {
        if (k == 0) continue;
        Expr p = pow(base, k);
        if (p.is_number()) {
            coeff *= p.number();
        } else {
            out.push_back(std::move(p));
        }
    }
    if (out.empty()) return Expr(coeff);
    std::sort(out.begin(), out.end(), ExprLess{});
    if (coeff != 1) {
        auto sum = std::find_if(out.begin(), out.end(), [](const Expr& f) { return f.kind() == Kind::Add; });
        if (sum != out.end()) {
            std::vector<Expr> terms;
            for (const auto& t : sum->ops()) terms.push_back(mul({Expr(coeff), t}));
            *sum = add(std::move(terms));
            if (out.size() == 1) return out.front();
            return mul(std::move(out));
        }
    }
    if (coeff != 1) out.insert(out.begin(), Expr(coeff));
    if (out.size() == 1) return out.front();
    return compound(Kind::Mul, std::move(out));
}

Expr pow(const Expr& base, long k) {
    if (k == 0) return Expr(1);
    if (k == 1) return base;
    switch (base.kind()) {
        case Kind::Number: {
            const Rational& q = base.number();
            if (sgn(q) == 0) {
                if (k < 0) throw std::domain_error("division by zero");
                return Expr(0);
            }
            unsigned long n = static_cast<unsigned long>(k < 0 ? -k : k);
            Integer num, den;
            mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), n);
            mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), n);
            Rational r = k < 0 ? Rational(den, num) : Rational(num, den);
            r.canonicalize();
            return Expr(r);
        }
        case Kind::Pow: return pow(base.op(0), base.exponent() * k);
        case Kind::Mul: {
            std::vector<Expr> fs;
            for (const auto& f : base.ops()) fs.push_back(pow(f, k));
            return mul(std::move(fs));
        }
        default: return pow_node(base, k);
    }
}

Expr func(Fn f, const Expr& arg) {
    if (arg.is_number()) {
        const Rational& q = arg.number();
        bool zero = sgn(q) == 0;
        switch (f) {
            case Fn::Exp:
                if (zero) return Expr(1);
                break;
            case Fn::Ln:
                if (q == 1) return Expr(0);
                break;
            case Fn::Sin:
            case Fn::Tan:
            case Fn::Arctan:
                if (zero) return Expr(0);
                break;
            case Fn::Cos:
                if (zero) return Expr(1);
                break;
            case Fn::Sqrt:
                if (sgn(q) >= 0 && mpz_perfect_square_p(q.get_num_mpz_t()) &&
                    mpz_perfect_square_p(q.get_den_mpz_t())) {
                    Integer n, d;
                    mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
                    mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
                    return Expr(Rational(n, d));
                }
                break;
        }
    }
    if (f == Fn::Exp && arg.kind() == Kind::Func && arg.fn() == Fn::Ln) return arg.op(0);
    Node n;
    n.kind = Kind::Func;
    n.fn = f;
    n.ops = {arg};
    return make_node(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({Expr(-1), b})}); }
Expr operator-(const Expr& a) { return mul({Expr(-1), a}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, -1)}); }

std::vector<std::string> symbols_of(const Expr& e) {
    std::set<std::string> out;
    std::function<void(const Expr&)> walk = [&](const Expr& x) {
        if (x.is_symbol()) out.insert(x.name());
        if (x.kind() == Kind::Diff)
            for (const auto& v : x.diff_vars()) out.insert(v);
        for (const auto& o : x.ops()) walk(o);
    };
    walk(e);
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec { kAddPrec = 1, kMulPrec = 2, kPowPrec = 3, kAtomPrec = 4 };

struct Printer {
    Style style;

    static int precedence(const Expr& e) {
        switch (e.kind()) {
            case Kind::Number: {
                const Rational& q = e.number();
                if (sgn(q) < 0) return kAddPrec;
                return q.get_den() == 1 ? kAtomPrec : kMulPrec;
            }
            case Kind::Add: return kAddPrec;
            case Kind::Mul: return split_coefficient(e).first < 0 ? kAddPrec : kMulPrec;
            case Kind::Pow: return e.exponent() < 0 ? kMulPrec : kPowPrec;
            default: return kAtomPrec;
        }
    }

    std::string wrap(const Expr& e, int need) const {
        std::string s = print(e);
        if (precedence(e) < need) {
            return style == Style::Latex ? "\\left(" + s + "\\right)" : "(" + s + ")";
        }
        return s;
    }

    std::string symbol(const std::string& n) const {
        if (style == Style::Plain) return n;
        auto lb = n.find('[');
        if (lb == std::string::npos) {
            if (n.size() > 1) {
                auto us = n.find('_');
                if (us != std::string::npos) return n.substr(0, us) + "_{" + n.substr(us + 1) + "}";
            }
            return n;
        }
        return n.substr(0, lb) + "_{" + n.substr(lb + 1, n.size() - lb - 2) + "}";
    }

    std::string number(const Rational& q) const {
        if (style == Style::Latex && q.get_den() != 1) {
            Rational a = abs(q);
            std::string s = "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}";
            return sgn(q) < 0 ? "-" + s : s;
        }
        return q.get_str();
    }

    std::string print_mul(const Expr& e) const {
        auto [c, rest] = split_coefficient(e);
        std::vector<Expr> facs;
        if (rest.kind() == Kind::Mul) {
            facs.assign(rest.ops().begin(), rest.ops().end());
        } else {
            facs.push_back(rest);
        }
        std::vector<std::string> num, den;
        Rational a = abs(c);
        const std::string sep = style == Style::Latex ? " " : "*";
        for (const auto& f : facs) {
            if (f.kind() == Kind::Pow && f.exponent() < 0) {
                den.push_back(wrap(pow(f.op(0), -f.exponent()), kPowPrec));
            } else {
                num.push_back(wrap(f, kMulPrec));
            }
        }
        if (a.get_num() != 1 || num.empty()) num.insert(num.begin(), a.get_num().get_str());
        if (a.get_den() != 1) den.insert(den.begin(), a.get_den().get_str());
        auto join = [&](const std::vector<std::string>& v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
            return s;
        };
        std::string out;
        if (den.empty()) {
            out = join(num);
        } else if (style == Style::Latex) {
            out = "\\frac{" + join(num) + "}{" + join(den) + "}";
        } else {
            std::string d = join(den);
            if (den.size() > 1) d = "(" + d + ")";
            out = join(num) + "/" + d;
        }
        return sgn(c) < 0 ? "-" + out : out;
    }

    std::string print(const Expr& e) const {
        switch (e.kind()) {
            case Kind::Number: return number(e.number());
            case Kind::Symbol: return symbol(e.name());
            case Kind::Add: {
                std::vector<Expr> terms(e.ops().begin(), e.ops().end());
                // Constant goes last for readability.
                std::stable_partition(terms.begin(), terms.end(), [](const Expr& t) { return !t.is_number(); });
                std::string s;
                for (std::size_t i = 0; i < terms.size(); ++i) {
                    auto [c, rest] = split_coefficient(terms[i]);
                    if (i == 0) {
                        s = print(terms[i]);
                    } else if (sgn(c) < 0) {
                        s += " - " + print(mul({Expr(Rational(-c)), rest}));
                    } else {
                        s += " + " + print(terms[i]);
                    }
                }
                return s;
            }
            case Kind::Mul: return print_mul(e);
            case Kind::Pow: {
                if (e.exponent() < 0) {
                    std::string d = wrap(pow(e.op(0), -e.exponent()), kPowPrec);
                    return style == Style::Latex ? "\\frac{1}{" + d + "}" : "1/" + d;
                }
                std::string b = wrap(e.op(0), kAtomPrec);
                if (style == Style::Latex) return "{" + b + "}^{" + std::to_string(e.exponent()) + "}";
                return b + "^" + std::to_string(e.exponent());
            }
            case Kind::Func: {
                std::string n(fn_name(e.fn()));
                if (style == Style::Latex) {
                    if (e.fn() == Fn::Sqrt) return "\\sqrt{" + print(e.op(0)) + "}";
                    return "\\" + n + "\\left(" + print(e.op(0)) + "\\right)";
                }
                return n + "(" + print(e.op(0)) + ")";
            }
            case Kind::Apply: {
                std::string s = e.name() + "(";
                for (std::size_t i = 0; i < e.ops().size(); ++i) s += (i ? "," : "") + print(e.op(i));
                return s + ")";
            }
            case Kind::Diff: {
                if (style == Style::Latex) {
                    std::string s = "\\frac{\\partial^{" + std::to_string(e.diff_vars().size()) + "} " +
                                    e.op(0).name() + "}{";
                    for (const auto& v : e.diff_vars()) s += "\\partial " + v;
                    return s + "}";
                }
                std::string s = "diff(" + print(e.op(0));
                for (const auto& v : e.diff_vars()) s += "," + v;
                return s + ")";
            }
        }
        return "?";
    }
};

}  // namespace

std::string format(const Expr& e, Style style) { return Printer{style}.print(e); }

}  // namespace jetreduce
