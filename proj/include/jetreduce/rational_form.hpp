#pragma once

#include "jetreduce/expr.hpp"
#include "jetreduce/poly.hpp"
#include "jetreduce/symbols.hpp"

#include <map>
#include <string>
#include <vector>

namespace jetreduce {

/// Process-wide registry mapping atoms (symbols and kernel applications with
/// canonical arguments) to polynomial variable ids. Thread-safe.
class AtomTable {
public:
    static AtomTable& instance();
    VarId id_of(const Expr& atom);
    /// Returns the variable id for symbol `name`.
    VarId symbol_id(const std::string& name) { return id_of(sym(name)); }
    Expr atom(VarId id) const;
    /// Allocation-independent sort key (the printed atom).
    const std::string& key(VarId id) const;

private:
    AtomTable() = default;
    struct Impl;
    Impl& impl() const;
};

/// numerator / denominator, coprime, denominator free of radical symbols.
struct RationalForm {
    Poly num;
    Poly den{Rational(1)};

    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.is_constant() && den.is_constant(); }
    bool depends_on(VarId v) const { return num.contains(v) || den.contains(v); }
};

/// Rational normal form over Q with kernels as opaque atoms and radical side
/// relations `s^2 = r` (declared in the symbol table, or implied by a sqrt
/// kernel of a polynomial argument).
class Normalizer {
public:
    Normalizer();
    explicit Normalizer(const SymbolTable& table);

    RationalForm operator()(const Expr& e);
    bool is_zero(const Expr& e) { return (*this)(e).is_zero(); }
    Expr to_expr(const RationalForm& r) const;
    Expr to_expr(const Poly& p) const;
    Expr simplify(const Expr& e) { return to_expr((*this)(e)); }

    RationalForm make(Poly num, Poly den) const;
    RationalForm constant(const Rational& c) const { return {Poly(c), Poly(Rational(1))}; }
    RationalForm add(const RationalForm& a, const RationalForm& b) const;
    RationalForm sub(const RationalForm& a, const RationalForm& b) const;
    RationalForm mul(const RationalForm& a, const RationalForm& b) const;
    RationalForm div(const RationalForm& a, const RationalForm& b) const;
    RationalForm neg(const RationalForm& a) const { return {-a.num, a.den}; }
    RationalForm inv(const RationalForm& a) const;
    RationalForm pow(const RationalForm& a, long k) const;

    /// Reduce p modulo the radical relations (degree < 2 in each radical).
    Poly reduce_relations(const Poly& p) const;
    bool is_radical(VarId v) const { return relations_.count(v) != 0; }
    const std::map<VarId, Poly>& relations() const { return relations_; }
    /// If r = c^2 * (registered radical value) return c * radical.
    std::optional<RationalForm> sqrt_via_relation(const RationalForm& r) const;

private:
    void add_relation(VarId s, const Poly& square);
    std::map<VarId, Poly> relations_;
};

RationalForm normalize(const Expr& e, const SymbolTable& table = {});
bool is_zero(const Expr& e, const SymbolTable& table = {});
/// Rational normal form rendered back as an expression.
Expr simplify(const Expr& e, const SymbolTable& table = {});

}  // namespace jetreduce
