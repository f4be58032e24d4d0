#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jetreduce {

using Rational = mpq_class;
using Integer = mpz_class;

/// Thrown when an operation meets a construct outside the supported class.
class UnsupportedForm : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Kind : std::uint8_t {
    Number,
    Symbol,
    Add,
    Mul,
    Pow,    // integer exponent only
    Func,   // one of the fixed transcendental kernels
    Apply,  // unknown function application, e.g. w(t,x)
    Diff,   // derivative kernel diff(w(t,x), t, x)
};

enum class Fn : std::uint8_t { Exp, Ln, Sqrt, Sin, Cos, Tan, Arctan };

std::string_view fn_name(Fn f);
bool fn_from_name(std::string_view name, Fn& out);

struct Node;

/// Immutable expression tree with hash-consistent structural equality.
///
/// All construction goes through the canonicalizing builders below, so two
/// trees that differ only in operand order, grouping of nested sums/products
/// or unmerged like terms compare equal.
class Expr {
public:
    Expr();  // zero
    Expr(int v);
    Expr(long v);
    Expr(const Rational& v);

    static Expr symbol(std::string name);
    static Expr apply(std::string fname, std::vector<Expr> args);
    static Expr diff(Expr applied, std::vector<std::string> vars);

    Kind kind() const;
    bool is_number() const { return kind() == Kind::Number; }
    bool is_symbol() const { return kind() == Kind::Symbol; }
    bool is_zero_literal() const;
    bool is_one_literal() const;

    const Rational& number() const;
    /// Symbol name or applied-function name.
    const std::string& name() const;
    std::span<const Expr> ops() const;
    const Expr& op(std::size_t i) const { return ops()[i]; }
    long exponent() const;
    Fn fn() const;
    const std::vector<std::string>& diff_vars() const;

    std::size_t hash() const;
    /// Number of nodes in the tree.
    std::size_t size() const;

    bool depends_on(const std::string& sym) const;

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    const Node* raw() const { return node_.get(); }

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;

    friend Expr make_node(Node&& n);
};

/// Total, deterministic structural order (independent of allocation order).
int compare(const Expr& a, const Expr& b);

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, long k);
Expr func(Fn f, const Expr& arg);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

inline Expr sym(std::string name) { return Expr::symbol(std::move(name)); }

/// Collect every symbol name occurring in e (sorted, unique).
std::vector<std::string> symbols_of(const Expr& e);

/// Split a product into (numeric coefficient, remaining factor).
std::pair<Rational, Expr> split_coefficient(const Expr& e);

enum class Style { Plain, Latex };
std::string format(const Expr& e, Style style = Style::Plain);

}  // namespace jetreduce
