#pragma once

#include "jetreduce/expr.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jetreduce {

enum class SymbolKind { IndependentVariable, JetVariable, Parameter, GradientSymbol, BoundVariable };

struct SymbolInfo {
    std::string name;
    SymbolKind kind;
};

/// Side relation `symbol^2 = value` for a declared radical.
struct RadicalRelation {
    std::string symbol;
    Expr square;
};

/// Declared symbols in declaration order, plus radical side relations.
///
/// Names are unique and a symbol's kind is fixed when it is first declared.
class SymbolTable {
public:
    /// Returns false (and leaves the table unchanged) if `name` already exists
    /// with the same kind; throws if it exists with a different kind.
    bool declare(const std::string& name, SymbolKind kind);
    void add_relation(const std::string& symbol, Expr square);

    bool contains(const std::string& name) const { return index_.count(name) != 0; }
    std::optional<SymbolKind> kind_of(const std::string& name) const;
    const std::vector<SymbolInfo>& symbols() const { return entries_; }
    const std::vector<RadicalRelation>& relations() const { return relations_; }
    std::vector<std::string> names_of(SymbolKind kind) const;

    /// When strict, the parser rejects identifiers that are not declared.
    bool strict = false;

private:
    std::vector<SymbolInfo> entries_;
    std::map<std::string, std::size_t> index_;
    std::vector<RadicalRelation> relations_;
};

}  // namespace jetreduce
