#pragma once

#include "jetreduce/fixture.hpp"
#include "jetreduce/reducer.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetreduce {

class DegenerateSpec : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// PDE D_i(V) = 0, or D_i(V) + g(x_i) V = 0 when `g` is set.
struct OperatorSpec {
    std::string unknown = "w";
    std::vector<std::string> variables{"t", "x"};
    /// Inner operator over the variables and jets of order < n.
    Expr inner;
    std::size_t outer = 0;
    std::optional<Expr> g;
};

struct Generated {
    OperatorSpec spec;
    PDEProblem problem;
    std::vector<Expr> invariants;
};

/// Cleared numerator of the composed operator, with its known invariants
/// {x_j : j != i} and V (times exp of the antiderivative of g).
/// Throws DegenerateSpec when the composition vanishes or loses order.
Generated compose(const OperatorSpec& spec);

struct SampleConfig {
    int max_order = 2;
    std::size_t variables = 2;
    /// Upper bound on jets per template term.
    int complexity = 1;
    std::size_t count = 20;
};

/// Deterministic corpus for `seed`; every problem verifies on its known
/// invariants. Throws std::invalid_argument for max_order < 2 or empty bounds.
std::vector<Generated> sample(unsigned seed, const SampleConfig& cfg = {});

/// Fixture text for a generated problem (derivative notation).
Fixture to_fixture(const Generated& g);

}  // namespace jetreduce
