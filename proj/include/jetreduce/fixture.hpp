#pragma once

#include "jetreduce/reducer.hpp"
#include "jetreduce/symbols.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetreduce {

class FixtureError : public std::runtime_error {
public:
    FixtureError(const std::string& msg, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}
    std::size_t line;
};

/// Line-based problem description:
///
///     # comment
///     pde: diff(w(t,x),t,x) = diff(w(t,x),t)*diff(w(t,x),x)/w(t,x)
///     unknown: w(t,x)
///     param: a
///     param: s: s^2 = 4*a*k - b^2
///     subset: [1,1] [0,2]
///     invariant: x
///
/// `unknown` and `subset` are optional; `param` and `invariant` repeat.
struct Fixture {
    std::string pde;
    std::string unknown;
    std::vector<std::string> params;
    std::optional<CandidateSubset> subset;
    std::vector<std::string> invariants;

    /// Parameters and radical relations declared by the `param` lines.
    SymbolTable symbols() const;
};

Fixture parse_fixture(std::string_view text);
Fixture load_fixture(const std::filesystem::path& path);
std::string write_fixture(const Fixture& f);

/// Adds "a" or "s: s^2 = 4*a*k - b^2" to the table.
void declare_param(SymbolTable& table, std::string_view spec);

/// "[1,1] [0,2]" -> {(1,1), (0,2)}.
CandidateSubset parse_subset(std::string_view text);
std::string write_subset(const CandidateSubset& c);

/// Problem for f.pde with its parameters; checks f.unknown if given.
PDEProblem fixture_problem(const Fixture& f);

/// f.invariants in jet coordinates of p.
std::vector<Expr> fixture_invariants(const Fixture& f, const PDEProblem& p);

}  // namespace jetreduce
