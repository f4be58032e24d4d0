#include "jetreduce/poly.hpp"

#include "jetreduce/deadline.hpp"

#include <algorithm>

namespace jetreduce {

// ---------------------------------------------------------------------------
// Deadline

namespace {
thread_local std::optional<std::chrono::steady_clock::time_point> t_deadline;
thread_local unsigned t_poll = 0;
}  // namespace

DeadlineScope::DeadlineScope(std::optional<std::chrono::steady_clock::duration> budget) : previous_(t_deadline) {
    if (budget) {
        auto d = std::chrono::steady_clock::now() + *budget;
        t_deadline = previous_ ? std::min(*previous_, d) : d;
    }
}

DeadlineScope::~DeadlineScope() { t_deadline = previous_; }

void check_deadline() {
    if (!t_deadline) return;
    if ((++t_poll & 63u) != 0) return;
    if (std::chrono::steady_clock::now() > *t_deadline) throw Timeout();
}

// ---------------------------------------------------------------------------
// Monomials

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
    auto i = a.begin(), j = b.begin();
    for (;;) {
        if (i == a.end()) return j != b.end();
        if (j == b.end()) return false;
        if (i->first != j->first) return i->first > j->first;
        if (i->second != j->second) return i->second < j->second;
        ++i;
        ++j;
    }
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.reserve(a.size() + b.size());
    auto i = a.begin(), j = b.begin();
    while (i != a.end() || j != b.end()) {
        if (j == b.end() || (i != a.end() && i->first < j->first)) {
            out.push_back(*i++);
        } else if (i == a.end() || j->first < i->first) {
            out.push_back(*j++);
        } else {
            out.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    return out;
}

std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial out;
    auto i = a.begin();
    for (const auto& [v, e] : b) {
        while (i != a.end() && i->first < v) out.push_back(*i++);
        if (i == a.end() || i->first != v || i->second < e) return std::nullopt;
        if (i->second > e) out.emplace_back(v, i->second - e);
        ++i;
    }
    while (i != a.end()) out.push_back(*i++);
    return out;
}

Monomial mono_gcd(const Monomial& a, const Monomial& b) {
    Monomial out;
    auto i = a.begin(), j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            out.emplace_back(i->first, std::min(i->second, j->second));
            ++i;
            ++j;
        }
    }
    return out;
}

std::uint32_t mono_degree(const Monomial& m, VarId v) {
    for (const auto& [x, e] : m)
        if (x == v) return e;
    return 0;
}

std::uint32_t mono_total_degree(const Monomial& m) {
    std::uint32_t d = 0;
    for (const auto& p : m) d += p.second;
    return d;
}

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(const Rational& c) {
    if (sgn(c) != 0) terms_.emplace(Monomial{}, c);
}

Poly Poly::variable(VarId v, std::uint32_t e) {
    Poly p;
    if (e == 0) return Poly(Rational(1));
    p.terms_.emplace(Monomial{{v, e}}, Rational(1));
    return p;
}

Poly Poly::term(const Monomial& m, const Rational& c) {
    Poly p;
    p.add_term(m, c);
    return p;
}

bool Poly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

Rational Poly::constant_value() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

std::uint32_t Poly::degree(VarId v) const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, mono_degree(m, v));
    return d;
}

std::uint32_t Poly::total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, mono_total_degree(m));
    return d;
}

std::set<VarId> Poly::variables() const {
    std::set<VarId> out;
    for (const auto& [m, c] : terms_)
        for (const auto& p : m) out.insert(p.first);
    return out;
}

bool Poly::contains(VarId v) const {
    for (const auto& [m, c] : terms_)
        if (mono_degree(m, v) > 0) return true;
    return false;
}

std::map<std::uint32_t, Poly> Poly::coefficients(VarId v) const {
    std::map<std::uint32_t, Poly> out;
    for (const auto& [m, c] : terms_) {
        Monomial rest;
        std::uint32_t d = 0;
        for (const auto& p : m) {
            if (p.first == v) {
                d = p.second;
            } else {
                rest.push_back(p);
            }
        }
        out[d].add_term(rest, c);
    }
    return out;
}

Poly Poly::coefficient(VarId v, std::uint32_t d) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        if (mono_degree(m, v) != d) continue;
        Monomial rest;
        for (const auto& p : m)
            if (p.first != v) rest.push_back(p);
        out.add_term(rest, c);
    }
    return out;
}

Poly Poly::from_coefficients(VarId v, const std::map<std::uint32_t, Poly>& cs) {
    Poly out;
    for (const auto& [d, p] : cs) out += p.mul_monomial(d ? Monomial{{v, d}} : Monomial{}, Rational(1));
    return out;
}

Poly Poly::derivative(VarId v) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
        std::uint32_t d = mono_degree(m, v);
        if (d == 0) continue;
        Monomial r;
        for (const auto& p : m) {
            if (p.first != v) {
                r.push_back(p);
            } else if (d > 1) {
                r.emplace_back(v, d - 1);
            }
        }
        out.add_term(r, c * d);
    }
    return out;
}

Poly Poly::substitute(VarId v, const Poly& p) const {
    auto cs = coefficients(v);
    Poly out;
    Poly power(Rational(1));
    std::uint32_t at = 0;
    for (const auto& [d, c] : cs) {
        while (at < d) {
            power = power * p;
            ++at;
        }
        out += c * power;
    }
    return out;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly& Poly::operator*=(const Rational& c) {
    if (sgn(c) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, x] : terms_) x *= c;
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    check_deadline();
    Poly out;
    if (a.is_zero() || b.is_zero()) return out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add_term(mono_mul(ma, mb), ca * cb);
    return out;
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

Poly Poly::pow(std::uint32_t k) const {
    Poly out(Rational(1));
    Poly base = *this;
    while (k) {
        if (k & 1u) out = out * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return out;
}

Poly Poly::mul_monomial(const Monomial& m, const Rational& c) const {
    Poly out;
    if (sgn(c) == 0) return out;
    for (const auto& [mm, cc] : terms_) out.terms_.emplace_hint(out.terms_.end(), mono_mul(mm, m), cc * c);
    return out;
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    Rational inv = 1 / lead_coefficient();
    return *this * inv;
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_.begin()->first;
    for (const auto& [m, c] : terms_) {
        g = mono_gcd(g, m);
        if (g.empty()) break;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Division and gcd

std::optional<Poly> try_divide(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("division by zero polynomial");
    if (b.is_constant()) return a * (1 / b.constant_value());
    Poly q, r = a;
    const Monomial& lb = b.lead_monomial();
    const Rational& cb = b.lead_coefficient();
    // A quotient term can never exceed deg_v(a) in any variable.
    std::map<VarId, std::uint32_t> bound;
    for (const auto& [m, c] : a.terms())
        for (const auto& [v, e] : m) bound[v] = std::max(bound[v], e);
    while (!r.is_zero()) {
        check_deadline();
        auto t = mono_div(r.lead_monomial(), lb);
        if (!t) return std::nullopt;
        Rational c = r.lead_coefficient() / cb;
        for (const auto& [v, e] : *t)
            if (e > bound[v]) return std::nullopt;
        q += Poly::term(*t, c);
        r -= b.mul_monomial(*t, c);
    }
    return q;
}

Poly divide_exact(const Poly& a, const Poly& b) {
    auto q = try_divide(a, b);
    if (!q) throw NotDivisible();
    return *q;
}

Poly prem(const Poly& a, const Poly& b, VarId v) {
    std::uint32_t db = b.degree(v);
    Poly lcb = b.coefficient(v, db);
    Poly r = a;
    while (!r.is_zero()) {
        check_deadline();
        std::uint32_t dr = r.degree(v);
        if (dr < db) break;
        Poly lcr = r.coefficient(v, dr);
        Poly shifted = b * lcr;
        if (dr > db) shifted = shifted.mul_monomial(Monomial{{v, dr - db}}, Rational(1));
        r = r * lcb - shifted;
    }
    return r;
}

namespace {

Poly monomial_poly(const Monomial& m) { return Poly::term(m, Rational(1)); }

/// Scale to integer coefficients with unit integer content and positive lead.
Poly integer_primitive(const Poly& p) {
    if (p.is_zero()) return p;
    Integer den = 1, num = 0;
    for (const auto& [m, c] : p.terms()) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
    }
    Rational scale(den, num);
    scale.canonicalize();
    if (sgn(p.lead_coefficient()) < 0) scale = -scale;
    return scale == 1 ? p : p * scale;
}

Poly primitive_part(const Poly& p, VarId v) {
    Poly c = content(p, v);
    return integer_primitive(c.is_constant() ? p : divide_exact(p, c));
}

Integer integer_content(const Poly& p) {
    Integer g = 0;
    for (const auto& [m, c] : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    return g;
}

Integer max_norm(const Poly& p) {
    Integer n = 0;
    for (const auto& [m, c] : p.terms())
        if (abs(c.get_num()) > n) n = abs(c.get_num());
    return n;
}

Poly evaluate_at(const Poly& p, VarId v, const Integer& x) {
    Poly out;
    for (const auto& [m, c] : p.terms()) {
        Monomial rest;
        Integer scale = 1;
        for (const auto& [u, e] : m) {
            if (u == v) {
                mpz_pow_ui(scale.get_mpz_t(), x.get_mpz_t(), e);
            } else {
                rest.emplace_back(u, e);
            }
        }
        out += Poly::term(rest, c * Rational(scale));
    }
    return out;
}

/// Rebuild a polynomial in v from its image at v = x (symmetric base-x digits).
Poly interpolate(Poly h, VarId v, const Integer& x) {
    Poly out;
    Integer half = x / 2;
    Rational inv_x(Integer(1), x);
    for (std::uint32_t i = 0; !h.is_zero(); ++i) {
        check_deadline();
        Poly digit;
        for (const auto& [m, c] : h.terms()) {
            Integer r;
            mpz_fdiv_r(r.get_mpz_t(), c.get_num_mpz_t(), x.get_mpz_t());
            if (r > half) r -= x;
            if (r != 0) digit += Poly::term(m, Rational(r));
        }
        if (!digit.is_zero()) {
            Monomial shift;
            if (i > 0) shift.emplace_back(v, i);
            out += digit.mul_monomial(shift, Rational(1));
        }
        h = (h - digit) * inv_x;
    }
    return out;
}

/// Heuristic gcd of integer polynomials by evaluation and interpolation.
std::optional<Poly> heuristic_gcd(Poly f, Poly g, const std::vector<VarId>& vars, std::size_t level) {
    Integer cf = integer_content(f), cg = integer_content(g), c;
    mpz_gcd(c.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
    if (level == vars.size()) return Poly(Rational(c));
    f *= Rational(Integer(1), cf);
    g *= Rational(Integer(1), cg);
    VarId v = vars[level];

    Integer fn = max_norm(f), gn = max_norm(g);
    Integer b = 2 * std::min(fn, gn) + 29;
    Integer x = std::min(b, Integer(99 * sqrt(b)));
    Integer lf = fn / abs(f.lead_coefficient().get_num()), lg = gn / abs(g.lead_coefficient().get_num());
    x = std::max(x, Integer(2 * std::min(lf, lg) + 2));

    for (int attempt = 0; attempt < 6; ++attempt) {
        Poly ff = evaluate_at(f, v, x), gg = evaluate_at(g, v, x);
        if (!ff.is_zero() && !gg.is_zero()) {
            auto h = heuristic_gcd(ff, gg, vars, level + 1);
            if (!h) return std::nullopt;
            Poly cand = interpolate(*h, v, x);
            if (!cand.is_zero()) {
                cand *= Rational(Integer(1), integer_content(cand));
                if (try_divide(f, cand) && try_divide(g, cand)) return cand * Rational(c);
            }
        }
        Integer r = sqrt(sqrt(x));
        x = 73794 * x * r / 27011;
    }
    return std::nullopt;
}

}  // namespace

Poly content(const Poly& a, VarId v) {
    Poly g;
    for (const auto& [d, c] : a.coefficients(v)) {
        g = gcd(g, c);
        if (g.is_constant() && !g.is_zero()) return Poly(Rational(1));
    }
    return g;
}

Poly gcd(const Poly& a, const Poly& b) {
    check_deadline();
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly(Rational(1));
    if (a.is_monomial() || b.is_monomial())
        return monomial_poly(mono_gcd(a.monomial_content(), b.monomial_content()));
    if (a == b) return a.monic();

    // Pull out monomial content first; it is cheap and common.
    Monomial ma = a.monomial_content(), mb = b.monomial_content();
    Monomial mg = mono_gcd(ma, mb);
    Poly A = ma.empty() ? a : divide_exact(a, monomial_poly(ma));
    Poly B = mb.empty() ? b : divide_exact(b, monomial_poly(mb));
    Poly mgp = monomial_poly(mg);
    if (A.is_constant() || B.is_constant()) return mgp;

    auto va = A.variables(), vb = B.variables();
    for (VarId v : va) {
        if (!vb.count(v)) {
            Poly g = B;
            for (const auto& [d, c] : A.coefficients(v)) {
                g = gcd(g, c);
                if (g.is_constant()) break;
            }
            return (g * mgp).monic();
        }
    }
    for (VarId v : vb) {
        if (!va.count(v)) {
            Poly g = A;
            for (const auto& [d, c] : B.coefficients(v)) {
                g = gcd(g, c);
                if (g.is_constant()) break;
            }
            return (g * mgp).monic();
        }
    }
    // Cheap divisibility shortcuts.
    if (auto q = try_divide(A, B)) return (B * mgp).monic();
    if (auto q = try_divide(B, A)) return (A * mgp).monic();

    {
        std::set<VarId> all = va;
        all.insert(vb.begin(), vb.end());
        std::vector<VarId> vars(all.begin(), all.end());
        if (auto h = heuristic_gcd(integer_primitive(A), integer_primitive(B), vars, 0)) return (*h * mgp).monic();
    }
    // Main variable: the one of smallest maximal degree.
    VarId v = *va.begin();
    std::uint32_t best = ~0u;
    for (VarId x : va) {
        std::uint32_t d = std::max(A.degree(x), B.degree(x));
        if (d < best) {
            best = d;
            v = x;
        }
    }
    Poly ca = content(A, v), cb = content(B, v);
    Poly pa = ca.is_constant() ? A : divide_exact(A, ca);
    Poly pb = cb.is_constant() ? B : divide_exact(B, cb);
    Poly cg = gcd(ca, cb);
    if (pa.degree(v) < pb.degree(v)) std::swap(pa, pb);
    pa = integer_primitive(pa);
    pb = integer_primitive(pb);
    for (;;) {
        Poly r = prem(pa, pb, v);
        if (r.is_zero()) break;
        if (r.degree(v) == 0) {
            pb = Poly(Rational(1));
            break;
        }
        pa = std::move(pb);
        pb = primitive_part(r, v);
    }
    return (primitive_part(pb, v) * cg * mgp).monic();
}

std::optional<Poly> sqrt_exact(const Poly& p) {
    if (p.is_zero()) return Poly();
    const Monomial& lm = p.lead_monomial();
    const Rational& lc = p.lead_coefficient();
    if (sgn(lc) < 0) return std::nullopt;
    if (!mpz_perfect_square_p(lc.get_num_mpz_t()) || !mpz_perfect_square_p(lc.get_den_mpz_t())) return std::nullopt;
    Monomial root_m;
    for (const auto& [v, e] : lm) {
        if (e % 2) return std::nullopt;
        root_m.emplace_back(v, e / 2);
    }
    Integer n, d;
    mpz_sqrt(n.get_mpz_t(), lc.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), lc.get_den_mpz_t());
    Rational root_c(n, d);
    Poly q = Poly::term(root_m, root_c);
    Poly r = p - q * q;
    Monomial last = root_m;
    while (!r.is_zero()) {
        check_deadline();
        auto t = mono_div(r.lead_monomial(), root_m);
        if (!t) return std::nullopt;
        if (!MonomialLess{}(*t, last)) return std::nullopt;
        for (const auto& [v, e] : *t)
            if (2 * e > p.degree(v)) return std::nullopt;
        Rational c = r.lead_coefficient() / (root_c * 2);
        Poly tp = Poly::term(*t, c);
        r -= q * tp * Rational(2) + tp * tp;
        q += tp;
        last = *t;
    }
    return q;
}

}  // namespace jetreduce
