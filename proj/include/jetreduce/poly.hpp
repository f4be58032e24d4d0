#pragma once

#include "jetreduce/expr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace jetreduce {

using VarId = std::uint32_t;

/// Sparse exponent vector, sorted by variable id, no zero exponents.
using Monomial = std::vector<std::pair<VarId, std::uint32_t>>;

/// Lexicographic order; a smaller variable id is more significant.
struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
/// a / b if b divides a.
std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b);
Monomial mono_gcd(const Monomial& a, const Monomial& b);
std::uint32_t mono_degree(const Monomial& m, VarId v);
std::uint32_t mono_total_degree(const Monomial& m);

/// Sparse multivariate polynomial over the rationals.
class Poly {
public:
    using Terms = std::map<Monomial, Rational, MonomialLess>;

    Poly() = default;
    explicit Poly(const Rational& c);
    static Poly variable(VarId v, std::uint32_t e = 1);
    static Poly term(const Monomial& m, const Rational& c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_value() const;
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Leading term under MonomialLess.
    const Monomial& lead_monomial() const { return terms_.rbegin()->first; }
    const Rational& lead_coefficient() const { return terms_.rbegin()->second; }

    std::uint32_t degree(VarId v) const;
    std::uint32_t total_degree() const;
    std::set<VarId> variables() const;
    bool contains(VarId v) const;

    /// Coefficients with respect to v: degree -> coefficient (free of v).
    std::map<std::uint32_t, Poly> coefficients(VarId v) const;
    Poly coefficient(VarId v, std::uint32_t d) const;
    static Poly from_coefficients(VarId v, const std::map<std::uint32_t, Poly>& cs);

    Poly derivative(VarId v) const;
    /// Replace variable v by the polynomial p.
    Poly substitute(VarId v, const Poly& p) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Rational& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    Poly operator-() const;
    Poly pow(std::uint32_t k) const;
    Poly mul_monomial(const Monomial& m, const Rational& c) const;

    /// Scale so that the lead coefficient is 1.
    Poly monic() const;
    /// gcd of all monomials.
    Monomial monomial_content() const;

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

private:
    void add_term(const Monomial& m, const Rational& c);
    Terms terms_;
};

class NotDivisible : public std::runtime_error {
public:
    NotDivisible() : std::runtime_error("polynomial division is not exact") {}
};

/// Exact quotient a / b; throws NotDivisible otherwise.
Poly divide_exact(const Poly& a, const Poly& b);
std::optional<Poly> try_divide(const Poly& a, const Poly& b);

/// Monic greatest common divisor (gcd(0, 0) = 0).
Poly gcd(const Poly& a, const Poly& b);
/// gcd of the coefficients of a with respect to v.
Poly content(const Poly& a, VarId v);
/// Pseudo-remainder of a by b in v.
Poly prem(const Poly& a, const Poly& b, VarId v);

/// Exact polynomial square root, if one exists.
std::optional<Poly> sqrt_exact(const Poly& p);

}  // namespace jetreduce
