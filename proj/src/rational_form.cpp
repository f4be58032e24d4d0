#include "jetreduce/rational_form.hpp"

#include "jetreduce/deadline.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace jetreduce {

struct AtomTable::Impl {
    mutable std::shared_mutex mutex;
    std::deque<Expr> atoms;
    std::deque<std::string> keys;
    std::unordered_map<Expr, VarId, ExprHash> ids;
};

AtomTable& AtomTable::instance() {
    static AtomTable table;
    return table;
}

AtomTable::Impl& AtomTable::impl() const {
    static Impl impl;
    return impl;
}

VarId AtomTable::id_of(const Expr& atom) {
    auto& d = impl();
    {
        std::shared_lock lock(d.mutex);
        auto it = d.ids.find(atom);
        if (it != d.ids.end()) return it->second;
    }
    std::unique_lock lock(d.mutex);
    auto it = d.ids.find(atom);
    if (it != d.ids.end()) return it->second;
    VarId id = static_cast<VarId>(d.atoms.size());
    d.atoms.push_back(atom);
    d.keys.push_back(format(atom));
    d.ids.emplace(atom, id);
    return id;
}

Expr AtomTable::atom(VarId id) const {
    auto& d = impl();
    std::shared_lock lock(d.mutex);
    return d.atoms.at(id);
}

const std::string& AtomTable::key(VarId id) const {
    auto& d = impl();
    std::shared_lock lock(d.mutex);
    // deque elements are never relocated by push_back.
    return d.keys.at(id);
}

namespace {

const SymbolTable& empty_table() {
    static const SymbolTable t;
    return t;
}

/// Allocation-independent leading monomial: variables ordered by atom key.
bool key_order_less(const Monomial& a, const Monomial& b) {
    auto& atoms = AtomTable::instance();
    auto keyed = [&](const Monomial& m) {
        std::vector<std::pair<std::string, std::uint32_t>> k;
        for (const auto& [v, e] : m) k.emplace_back(atoms.key(v), e);
        std::sort(k.begin(), k.end());
        return k;
    };
    auto ka = keyed(a), kb = keyed(b);
    if (mono_total_degree(a) != mono_total_degree(b)) return mono_total_degree(a) < mono_total_degree(b);
    auto i = ka.begin(), j = kb.begin();
    for (;;) {
        if (i == ka.end()) return j != kb.end();
        if (j == kb.end()) return false;
        if (i->first != j->first) return i->first > j->first;
        if (i->second != j->second) return i->second < j->second;
        ++i;
        ++j;
    }
}

}  // namespace

Normalizer::Normalizer() : Normalizer(empty_table()) {}

Normalizer::Normalizer(const SymbolTable& table) {
    for (const auto& rel : table.relations()) {
        VarId s = AtomTable::instance().symbol_id(rel.symbol);
        RationalForm sq = (*this)(rel.square);
        if (!sq.den.is_constant() || sq.num.contains(s))
            throw UnsupportedForm("radical relation for '" + rel.symbol + "' must be polynomial and free of it");
        add_relation(s, sq.num * (1 / sq.den.constant_value()));
    }
}

void Normalizer::add_relation(VarId s, const Poly& square) { relations_[s] = square; }

RationalForm Normalizer::operator()(const Expr& e) {
    switch (e.kind()) {
        case Kind::Number: return constant(e.number());
        case Kind::Symbol: return {Poly::variable(AtomTable::instance().id_of(e)), Poly(Rational(1))};
        case Kind::Add: {
            RationalForm acc = constant(0);
            for (const auto& t : e.ops()) acc = add(acc, (*this)(t));
            return acc;
        }
        case Kind::Mul: {
            RationalForm acc = constant(1);
            for (const auto& f : e.ops()) {
                acc = mul(acc, (*this)(f));
                if (acc.is_zero()) return acc;
            }
            return acc;
        }
        case Kind::Pow: return pow((*this)(e.op(0)), e.exponent());
        case Kind::Func: {
            RationalForm arg = (*this)(e.op(0));
            Expr canon = func(e.fn(), to_expr(arg));
            if (canon.kind() != Kind::Func) return (*this)(canon);
            VarId id = AtomTable::instance().id_of(canon);
            if (canon.fn() == Fn::Sqrt && !relations_.count(id) && arg.den.is_constant()) {
                bool nested = false;
                for (VarId v : arg.num.variables()) nested = nested || relations_.count(v);
                if (!nested) add_relation(id, arg.num * (1 / arg.den.constant_value()));
            }
            return {Poly::variable(id), Poly(Rational(1))};
        }
        case Kind::Apply:
        case Kind::Diff:
            throw UnsupportedForm("unconverted derivative or function application: " + format(e));
    }
    throw UnsupportedForm("unknown node");
}

Poly Normalizer::reduce_relations(const Poly& p) const {
    if (relations_.empty()) return p;
    Poly cur = p;
    for (const auto& [s, r] : relations_) {
        if (cur.degree(s) < 2) continue;
        auto cs = cur.coefficients(s);
        Poly out;
        std::vector<Poly> rpow{Poly(Rational(1))};
        for (const auto& [d, c] : cs) {
            while (rpow.size() <= d / 2) rpow.push_back(rpow.back() * r);
            Poly t = c * rpow[d / 2];
            if (d % 2) t = t * Poly::variable(s);
            out += t;
        }
        cur = std::move(out);
    }
    return cur;
}

RationalForm Normalizer::make(Poly num, Poly den) const {
    if (den.is_zero()) throw std::domain_error("division by zero");
    if (!relations_.empty()) {
        num = reduce_relations(num);
        den = reduce_relations(den);
        for (const auto& [s, r] : relations_) {
            if (!den.contains(s)) continue;
            Poly d0 = den.coefficient(s, 0), d1 = den.coefficient(s, 1);
            Poly conj = d0 - d1 * Poly::variable(s);
            num = reduce_relations(num * conj);
            den = reduce_relations(d0 * d0 - d1 * d1 * r);
            if (den.is_zero()) throw std::domain_error("division by zero (radical conjugate vanishes)");
        }
    }
    if (num.is_zero()) return {Poly(), Poly(Rational(1))};
    if (!den.is_constant()) {
        Poly g = gcd(num, den);
        if (!g.is_constant()) {
            num = divide_exact(num, g);
            den = divide_exact(den, g);
        }
    }
    const Rational& c = den.lead_coefficient();
    if (c != 1) {
        Rational inv = 1 / c;
        num *= inv;
        den *= inv;
    }
    return {std::move(num), std::move(den)};
}

RationalForm Normalizer::add(const RationalForm& a, const RationalForm& b) const {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den == b.den) return make(a.num + b.num, a.den);
    if (a.den.is_constant()) return make(a.num * b.den * (1 / a.den.constant_value()) + b.num, b.den);
    if (b.den.is_constant()) return make(b.num * a.den * (1 / b.den.constant_value()) + a.num, a.den);
    Poly g = gcd(a.den, b.den);
    Poly bq = g.is_constant() ? b.den : divide_exact(b.den, g);
    Poly aq = g.is_constant() ? a.den : divide_exact(a.den, g);
    return make(a.num * bq + b.num * aq, a.den * bq);
}

RationalForm Normalizer::sub(const RationalForm& a, const RationalForm& b) const { return add(a, neg(b)); }

RationalForm Normalizer::mul(const RationalForm& a, const RationalForm& b) const {
    if (a.is_zero() || b.is_zero()) return constant(0);
    if (a.is_constant()) return make(b.num * (a.num.constant_value() / a.den.constant_value()), b.den);
    if (b.is_constant()) return make(a.num * (b.num.constant_value() / b.den.constant_value()), a.den);
    Poly g1 = gcd(a.num, b.den), g2 = gcd(b.num, a.den);
    Poly an = g1.is_constant() ? a.num : divide_exact(a.num, g1);
    Poly bd = g1.is_constant() ? b.den : divide_exact(b.den, g1);
    Poly bn = g2.is_constant() ? b.num : divide_exact(b.num, g2);
    Poly ad = g2.is_constant() ? a.den : divide_exact(a.den, g2);
    return make(an * bn, ad * bd);
}

RationalForm Normalizer::inv(const RationalForm& a) const {
    if (a.is_zero()) throw std::domain_error("division by zero");
    return make(a.den, a.num);
}

RationalForm Normalizer::div(const RationalForm& a, const RationalForm& b) const { return mul(a, inv(b)); }

RationalForm Normalizer::pow(const RationalForm& a, long k) const {
    if (k == 0) return constant(1);
    if (k < 0) return pow(inv(a), -k);
    if (relations_.empty()) return {a.num.pow(static_cast<std::uint32_t>(k)), a.den.pow(static_cast<std::uint32_t>(k))};
    RationalForm out = constant(1);
    for (long i = 0; i < k; ++i) out = mul(out, a);
    return out;
}

std::optional<RationalForm> Normalizer::sqrt_via_relation(const RationalForm& r) const {
    for (const auto& [s, val] : relations_) {
        RationalForm q = div(r, RationalForm{val, Poly(Rational(1))});
        if (q.num.contains(s) || q.den.contains(s)) continue;
        auto n = sqrt_exact(q.num);
        auto d = sqrt_exact(q.den);
        if (n && d) return mul(make(*n, *d), RationalForm{Poly::variable(s), Poly(Rational(1))});
    }
    return std::nullopt;
}

Expr Normalizer::to_expr(const Poly& p) const {
    auto& atoms = AtomTable::instance();
    std::vector<Expr> terms;
    terms.reserve(p.size());
    for (const auto& [m, c] : p.terms()) {
        std::vector<Expr> fs{Expr(c)};
        for (const auto& [v, e] : m) fs.push_back(jetreduce::pow(atoms.atom(v), static_cast<long>(e)));
        terms.push_back(jetreduce::mul(std::move(fs)));
    }
    return jetreduce::add(std::move(terms));
}

Expr Normalizer::to_expr(const RationalForm& r) const {
    if (r.num.is_zero()) return Expr(0);
    // Scale so the rendering does not depend on atom allocation order.
    const Poly& ref = r.den.is_constant() ? r.num : r.den;
    auto lead = ref.terms().begin();
    for (auto it = ref.terms().begin(); it != ref.terms().end(); ++it)
        if (key_order_less(lead->first, it->first)) lead = it;
    Rational scale = r.den.is_constant() ? Rational(1 / r.den.constant_value()) : Rational(1 / lead->second);
    if (r.den.is_constant()) return to_expr(r.num * scale);
    Expr n = to_expr(r.num * scale);
    Expr d = to_expr(r.den * scale);
    return jetreduce::mul({n, jetreduce::pow(d, -1)});
}

RationalForm normalize(const Expr& e, const SymbolTable& table) { return Normalizer(table)(e); }
bool is_zero(const Expr& e, const SymbolTable& table) { return Normalizer(table)(e).is_zero(); }
Expr simplify(const Expr& e, const SymbolTable& table) {
    Normalizer n(table);
    return n.to_expr(n(e));
}

}  // namespace jetreduce
