#include "jetreduce/integrate.hpp"

#include "jetreduce/deadline.hpp"

#include <utility>

namespace jetreduce {

namespace {

using RF = RationalForm;

/// Dense polynomial in the integration variable, coefficients in the field
/// of rational functions of the remaining atoms. c[k] multiplies v^k.
struct UPoly {
    std::vector<RF> c;
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const RF& lead() const { return c.back(); }
};

class Ring {
public:
    Ring(Normalizer& n, VarId v) : n_(n), v_(v) {}

    UPoly trim(UPoly p) const {
        while (!p.c.empty() && p.c.back().is_zero()) p.c.pop_back();
        return p;
    }

    UPoly from_poly(const Poly& p) const {
        UPoly out;
        for (const auto& [d, coef] : p.coefficients(v_)) {
            if (out.c.size() <= d) out.c.resize(d + 1);
            out.c[d] = n_.make(coef, Poly(Rational(1)));
        }
        return trim(std::move(out));
    }

    UPoly one() const { return UPoly{{n_.constant(1)}}; }

    UPoly add(const UPoly& a, const UPoly& b) const {
        UPoly out;
        out.c.resize(std::max(a.c.size(), b.c.size()));
        for (std::size_t i = 0; i < out.c.size(); ++i) {
            if (i < a.c.size() && i < b.c.size()) {
                out.c[i] = n_.add(a.c[i], b.c[i]);
            } else {
                out.c[i] = i < a.c.size() ? a.c[i] : b.c[i];
            }
        }
        return trim(std::move(out));
    }

    UPoly scale(const UPoly& a, const RF& r) const {
        if (r.is_zero()) return {};
        UPoly out = a;
        for (auto& x : out.c) x = n_.mul(x, r);
        return trim(std::move(out));
    }

    UPoly sub(const UPoly& a, const UPoly& b) const { return add(a, scale(b, n_.constant(-1))); }

    UPoly mul(const UPoly& a, const UPoly& b) const {
        if (a.is_zero() || b.is_zero()) return {};
        UPoly out;
        out.c.resize(a.c.size() + b.c.size() - 1);
        for (std::size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c.size(); ++j)
                if (!b.c[j].is_zero()) out.c[i + j] = n_.add(out.c[i + j], n_.mul(a.c[i], b.c[j]));
        }
        return trim(std::move(out));
    }

    UPoly power(const UPoly& a, int k) const {
        UPoly out = one();
        for (int i = 0; i < k; ++i) out = mul(out, a);
        return out;
    }

    std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) const {
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        UPoly q, r = a;
        if (a.degree() >= b.degree()) q.c.resize(a.degree() - b.degree() + 1);
        RF inv_lead = n_.inv(b.lead());
        while (!r.is_zero() && r.degree() >= b.degree()) {
            check_deadline();
            int shift = r.degree() - b.degree();
            RF f = n_.mul(r.lead(), inv_lead);
            q.c[shift] = f;
            UPoly t;
            t.c.resize(shift);
            t.c.insert(t.c.end(), b.c.begin(), b.c.end());
            r = sub(r, scale(t, f));
        }
        return {trim(std::move(q)), std::move(r)};
    }

    UPoly quo(const UPoly& a, const UPoly& b) const { return divmod(a, b).first; }
    UPoly rem(const UPoly& a, const UPoly& b) const { return divmod(a, b).second; }

    UPoly derivative(const UPoly& a) const {
        UPoly out;
        for (std::size_t k = 1; k < a.c.size(); ++k)
            out.c.push_back(n_.mul(a.c[k], n_.constant(static_cast<long>(k))));
        return trim(std::move(out));
    }

    UPoly monic(const UPoly& a) const { return a.is_zero() ? a : scale(a, n_.inv(a.lead())); }

    UPoly gcd(UPoly a, UPoly b) const {
        while (!b.is_zero()) {
            UPoly r = rem(a, b);
            a = std::move(b);
            b = std::move(r);
        }
        return monic(a);
    }

    /// s with s*a = gcd(a, b) (mod b).
    UPoly inverse_mod(const UPoly& a, const UPoly& b) const {
        UPoly r0 = a, r1 = b, s0 = one(), s1;
        while (!r1.is_zero()) {
            auto [q, r] = divmod(r0, r1);
            UPoly s2 = sub(s0, mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        if (r0.degree() != 0) throw UnsupportedForm("partial fractions: factors are not coprime");
        return scale(s0, n_.inv(r0.lead()));
    }

    RF to_rf(const UPoly& p) const {
        RF out;
        for (std::size_t k = 0; k < p.c.size(); ++k) {
            if (p.c[k].is_zero()) continue;
            out = n_.add(out, n_.mul(p.c[k], RF{Poly::variable(v_, static_cast<std::uint32_t>(k)), Poly(Rational(1))}));
        }
        return out;
    }

    Expr to_expr(const UPoly& p) const { return n_.to_expr(to_rf(p)); }

    /// Polynomial with the same roots as p, free of coefficient denominators.
    Expr log_argument(const UPoly& p) const { return n_.to_expr(RF{to_rf(p).num, Poly(Rational(1))}); }

    Normalizer& norm() const { return n_; }
    VarId var() const { return v_; }

private:
    Normalizer& n_;
    VarId v_;
};

std::optional<RF> sqrt_form(const RF& r, const Normalizer& n) {
    if (r.is_zero()) return r;
    auto a = sqrt_exact(r.num);
    auto b = sqrt_exact(r.den);
    if (a && b) return n.make(*a, *b);
    return n.sqrt_via_relation(r);
}

/// Yun: a = prod out[i]^(i+1) for monic a.
std::vector<UPoly> squarefree(const Ring& R, const UPoly& a) {
    UPoly da = R.derivative(a);
    UPoly g = R.gcd(a, da);
    UPoly b = R.quo(a, g), c = R.quo(da, g);
    UPoly d = R.sub(c, R.derivative(b));
    std::vector<UPoly> out;
    while (b.degree() > 0) {
        UPoly ai = R.gcd(b, d);
        out.push_back(ai);
        b = R.quo(b, ai);
        c = R.quo(d, ai);
        d = R.sub(c, R.derivative(b));
    }
    return out;
}

/// Split a monic squarefree polynomial into factors of degree <= 2.
std::vector<UPoly> split(const Ring& R, const UPoly& f, const std::vector<UPoly>& hints) {
    Normalizer& n = R.norm();
    std::vector<UPoly> out, work{f};
    while (!work.empty()) {
        check_deadline();
        UPoly p = std::move(work.back());
        work.pop_back();
        if (p.degree() <= 0) continue;
        if (p.degree() == 1) {
            out.push_back(std::move(p));
            continue;
        }
        if (p.c[0].is_zero()) {
            UPoly x{{RF{}, n.constant(1)}};
            work.push_back(x);
            work.push_back(R.quo(p, x));
            continue;
        }
        if (p.degree() == 2) {
            const RF& P = p.c[1];
            const RF& Q = p.c[0];
            RF disc = n.sub(n.mul(P, P), n.mul(n.constant(4), Q));
            if (auto r = sqrt_form(disc, n)) {
                RF half = n.constant(Rational(1, 2));
                work.push_back(UPoly{{n.mul(half, n.sub(P, *r)), n.constant(1)}});
                work.push_back(UPoly{{n.mul(half, n.add(P, *r)), n.constant(1)}});
            } else {
                out.push_back(std::move(p));
            }
            continue;
        }
        bool done = false;
        for (const auto& h : hints) {
            UPoly g = R.gcd(p, h);
            if (g.degree() > 0 && g.degree() < p.degree()) {
                work.push_back(R.quo(p, g));
                work.push_back(std::move(g));
                done = true;
                break;
            }
        }
        if (!done) throw UnsupportedForm("denominator outside supported factor class");
    }
    return out;
}

void collect_denominators(const Expr& e, std::vector<Expr>& out) {
    if (e.kind() == Kind::Pow && e.exponent() < 0) out.push_back(e.op(0));
    for (const auto& o : e.ops()) collect_denominators(o, out);
}

class Integrator {
public:
    Integrator(const Ring& R, std::vector<Expr>& terms) : R_(R), n_(R.norm()), terms_(terms) {}

    /// Integral of r / g^m for deg r < deg g <= 2, g monic.
    void term(const UPoly& r, const UPoly& g, int m) {
        if (r.is_zero()) return;
        if (g.degree() == 1) {
            const RF& c = r.c[0];
            if (m == 1) {
                emit(c, func(Fn::Ln, R_.log_argument(g)));
            } else {
                emit(n_.div(c, n_.constant(1 - m)), pow(R_.to_expr(g), 1 - m));
            }
            return;
        }
        const RF& P = g.c[1];
        const RF& Q = g.c[0];
        RF alpha = r.c.size() > 1 ? r.c[1] : RF{};
        RF beta = r.c[0];
        if (!alpha.is_zero()) {
            RF half_alpha = n_.mul(alpha, n_.constant(Rational(1, 2)));
            if (m == 1) {
                emit(half_alpha, func(Fn::Ln, R_.log_argument(g)));
            } else {
                emit(n_.div(half_alpha, n_.constant(1 - m)), pow(R_.to_expr(g), 1 - m));
            }
            beta = n_.sub(beta, n_.mul(half_alpha, P));
        }
        if (beta.is_zero()) return;
        RF delta = n_.sub(n_.mul(n_.constant(4), Q), n_.mul(P, P));
        UPoly lin{{P, n_.constant(2)}};
        RF coef = beta;
        for (int k = m; k > 1; --k) {
            // J(k) = (2v+P)/((k-1) delta g^(k-1)) + 2(2k-3)/((k-1) delta) J(k-1)
            RF denom = n_.mul(n_.constant(k - 1), delta);
            emit(n_.div(coef, denom), R_.to_expr(lin) * pow(R_.to_expr(g), 1 - k));
            coef = n_.mul(coef, n_.div(n_.constant(2 * (2 * k - 3)), denom));
        }
        auto exact = sqrt_exact(delta.num);
        auto exact_den = sqrt_exact(delta.den);
        if (!(exact && exact_den)) {
            if (auto root = n_.sqrt_via_relation(delta)) {
                // root = k * s with s a declared radical: keep s as a visible divisor.
                VarId rad = 0;
                for (VarId x : root->num.variables())
                    if (n_.is_radical(x)) rad = x;
                Expr s_atom = AtomTable::instance().atom(rad);
                RF k = n_.div(*root, RF{Poly::variable(rad), Poly(Rational(1))});
                Expr arg = n_.to_expr(n_.div(R_.to_rf(lin), k)) / s_atom;
                terms_.push_back(n_.to_expr(n_.div(n_.mul(coef, n_.constant(2)), k)) / s_atom * func(Fn::Arctan, arg));
                return;
            }
        }
        RF s;
        if (exact && exact_den) {
            s = n_.make(*exact, *exact_den);
        } else {
            Expr num = n_.to_expr(delta.num * delta.den);
            s = n_(func(Fn::Sqrt, num) / n_.to_expr(delta.den));
        }
        RF arg = n_.div(R_.to_rf(lin), s);
        emit(n_.div(n_.mul(coef, n_.constant(2)), s), func(Fn::Arctan, n_.to_expr(arg)));
    }

    void emit(const RF& c, const Expr& e) {
        if (!c.is_zero()) terms_.push_back(n_.to_expr(c) * e);
    }

private:
    const Ring& R_;
    Normalizer& n_;
    std::vector<Expr>& terms_;
};

}  // namespace

Expr integrate_rational_univariate(const Expr& e, const std::string& v, Normalizer& norm) {
    auto& atoms = AtomTable::instance();
    VarId id = atoms.symbol_id(v);
    RF r = norm(e);
    for (const Poly* p : {&r.num, &r.den})
        for (VarId x : p->variables())
            if (x != id && atoms.atom(x).depends_on(v))
                throw UnsupportedForm("integrand is not rational in " + v + ": " + format(atoms.atom(x)));
    if (r.is_zero()) return Expr(0);

    Ring R(norm, id);
    UPoly num = R.from_poly(r.num), den = R.from_poly(r.den);
    RF lead = den.lead();
    num = R.scale(num, norm.inv(lead));
    den = R.monic(den);

    std::vector<Expr> terms;
    auto [q, rest] = R.divmod(num, den);
    for (std::size_t k = 0; k < q.c.size(); ++k)
        if (!q.c[k].is_zero())
            terms.push_back(norm.to_expr(norm.div(q.c[k], norm.constant(static_cast<long>(k + 1)))) *
                            pow(sym(v), static_cast<long>(k + 1)));
    if (rest.is_zero()) return add(std::move(terms));

    std::vector<Expr> denominators;
    collect_denominators(e, denominators);
    std::vector<UPoly> hints;
    for (const auto& d : denominators) {
        RF h = norm(d);
        if (h.num.contains(id)) hints.push_back(R.monic(R.from_poly(h.num)));
        if (h.den.contains(id)) hints.push_back(R.monic(R.from_poly(h.den)));
    }

    std::vector<std::pair<UPoly, int>> factors;
    auto parts = squarefree(R, den);
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (auto& g : split(R, parts[i], hints)) factors.emplace_back(R.monic(g), static_cast<int>(i + 1));

    Integrator integ(R, terms);
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const auto& [g, m] = factors[j];
        UPoly pj = R.power(g, m);
        UPoly others = R.one();
        for (std::size_t l = 0; l < factors.size(); ++l)
            if (l != j) others = R.mul(others, R.power(factors[l].first, factors[l].second));
        UPoly nj = R.rem(R.mul(rest, R.inverse_mod(others, pj)), pj);
        // g-adic digits: nj = sum d_k g^k, term d_k / g^(m-k).
        for (int k = 0; k < m && !nj.is_zero(); ++k) {
            auto [qq, digit] = R.divmod(nj, g);
            integ.term(digit, g, m - k);
            nj = std::move(qq);
        }
    }
    return add(std::move(terms));
}

Expr integrate_rational_univariate(const Expr& e, const std::string& v, const SymbolTable& table) {
    Normalizer norm(table);
    return integrate_rational_univariate(e, v, norm);
}

}  // namespace jetreduce
