#pragma once

#include "jetreduce/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jetreduce {

using MultiIndex = std::vector<int>;

int order(const MultiIndex& k);

/// All multi-indices of length m and order r, lexicographically descending:
/// (2,0), (1,1), (0,2).
std::vector<MultiIndex> multi_indices(std::size_t m, int r);

/// "W[1,0]" for (1,0).
std::string jet_name(const MultiIndex& k);
/// Inverse of jet_name; nullopt for other symbol names.
std::optional<MultiIndex> parse_jet_name(std::string_view name);

class JetSpace {
public:
    JetSpace() = default;
    /// `args` is the full argument list of the unknown; `active` the subset
    /// (in argument order) that jet indices range over.
    JetSpace(std::string unknown, std::vector<std::string> args, std::vector<std::string> active, int max_order);

    const std::string& unknown() const { return unknown_; }
    const std::vector<std::string>& arguments() const { return args_; }
    const std::vector<std::string>& variables() const { return active_; }
    std::size_t dim() const { return active_.size(); }
    int max_order() const { return max_order_; }
    /// Arguments of the unknown that are not active.
    std::vector<std::string> inactive() const;

    Expr jet(const MultiIndex& k) const { return sym(jet_name(k)); }
    Expr zero_jet() const { return jet(MultiIndex(dim(), 0)); }
    /// Multi-index of a jet symbol of this space.
    std::optional<MultiIndex> index_of(const Expr& e) const;
    /// Jets of order 0..max_order, grouped by order, each group lexicographically descending.
    std::vector<MultiIndex> indices() const;

    /// D_i e = de/dx_i + sum over jets W[k] in e of de/dW[k] * W[k + e_i].
    Expr total_derivative(const Expr& e, std::size_t i) const;

    /// Replace derivative kernels of the unknown by jet symbols of this space.
    Expr to_jet(const Expr& e) const;
    /// Replace jet symbols by derivative kernels of the unknown.
    Expr from_jet(const Expr& e) const;
    /// The unknown applied to its arguments, e.g. w(t,x).
    Expr applied() const;

private:

    std::string unknown_;
    std::vector<std::string> args_;
    std::vector<std::string> active_;
    int max_order_ = 0;
};

struct JetForm {
    Expr expr;
    JetSpace space;
};

/// Detects the unknown, its active arguments (those some derivative is taken
/// against; all arguments if no derivative occurs) and the order, then converts.
/// Throws UnsupportedForm for several unknowns or inconsistent argument lists.
JetForm to_jet(const Expr& e);

}  // namespace jetreduce
