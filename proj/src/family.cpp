#include "jetreduce/family.hpp"

#include "jetreduce/integrate.hpp"
#include "jetreduce/rational_form.hpp"
#include "jetreduce/verifier.hpp"

#include <random>

namespace jetreduce {

namespace {

int max_jet_order(const Expr& e) {
    int n = -1;
    for (const auto& s : symbols_of(e))
        if (auto k = parse_jet_name(s)) n = std::max(n, order(*k));
    return n;
}

/// exp(G) with integer multiples of logarithms turned into powers.
Expr exp_of(const Expr& g) {
    std::vector<Expr> terms = g.kind() == Kind::Add ? std::vector<Expr>(g.ops().begin(), g.ops().end())
                                                    : std::vector<Expr>{g};
    std::vector<Expr> factors, rest;
    for (const auto& t : terms) {
        auto [c, body] = split_coefficient(t);
        if (body.kind() == Kind::Func && body.fn() == Fn::Ln && c.get_den() == 1 && c.get_num().fits_slong_p())
            factors.push_back(pow(body.op(0), c.get_num().get_si()));
        else
            rest.push_back(t);
    }
    if (!rest.empty()) factors.push_back(func(Fn::Exp, add(rest)));
    return mul(factors);
}

Expr strip_ln(const Expr& v) {
    return v.kind() == Kind::Func && v.fn() == Fn::Ln ? v.op(0) : v;
}

class Drawer {
public:
    Drawer(std::seed_seq& seq, const SampleConfig& cfg) : rng_(seq), cfg_(cfg) {
        for (std::size_t i = 0; i < cfg.variables; ++i) vars_.push_back(i == 0 ? "t" : i == 1 ? "x" : "x" + std::to_string(i));
        for (int r = 0; r < cfg.max_order; ++r)
            for (const auto& k : multi_indices(cfg.variables, r)) jets_.push_back(k);
    }

    OperatorSpec draw() {
        OperatorSpec s;
        s.variables = vars_;
        Expr num = term();
        if (pick(0, 1)) num = num + term();
        Expr v = pick(0, 1) ? num : num / term();
        s.outer = static_cast<std::size_t>(pick(0, static_cast<int>(vars_.size()) - 1));
        int form = pick(0, 9);
        if (form < 2) {
            v = func(Fn::Ln, v);
        } else if (form < 4) {
            Expr xi = sym(vars_[s.outer]);
            static const int ks[] = {-2, -1, 1, 2};
            int k = ks[pick(0, 3)];
            s.g = form == 2 ? Expr(k) : Expr(k) / xi;
        }
        s.inner = v;
        return s;
    }

private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Expr factor() {
        if (pick(0, 5) == 0) return sym(vars_[static_cast<std::size_t>(pick(0, static_cast<int>(vars_.size()) - 1))]);
        return sym(jet_name(jets_[static_cast<std::size_t>(pick(0, static_cast<int>(jets_.size()) - 1))]));
    }

    Expr term() {
        static const int cs[] = {1, 1, 2, -1, 3};
        Expr t = Expr(cs[pick(0, 4)]);
        int n = pick(1, cfg_.complexity + 1);
        for (int i = 0; i < n; ++i) t = t * factor();
        return t;
    }

    std::mt19937 rng_;
    SampleConfig cfg_;
    std::vector<std::string> vars_;
    std::vector<MultiIndex> jets_;
};

}  // namespace

Generated compose(const OperatorSpec& spec) {
    if (spec.outer >= spec.variables.size()) throw DegenerateSpec("outer direction out of range");
    int inner_order = max_jet_order(spec.inner);
    if (inner_order < 0) throw DegenerateSpec("inner operator depends on no jet");
    int n = inner_order + 1;
    JetSpace space(spec.unknown, spec.variables, spec.variables, n);

    Expr d = space.total_derivative(spec.inner, spec.outer);
    if (spec.g) d = d + *spec.g * spec.inner;
    Normalizer norm;
    RationalForm r = norm(d);
    if (r.is_zero()) throw DegenerateSpec("composed operator vanishes identically");
    Expr lhs = norm.to_expr(r.num);

    PDEProblem p;
    try {
        p = make_problem(space.from_jet(lhs));
    } catch (const UnsupportedForm& e) {
        throw DegenerateSpec(e.what());
    }
    if (p.order() != n || p.dim() != spec.variables.size())
        throw DegenerateSpec("composed equation does not keep order " + std::to_string(n) + " in every variable");

    Generated out{spec, std::move(p), {}};
    for (std::size_t j = 0; j < spec.variables.size(); ++j)
        if (j != spec.outer) out.invariants.push_back(sym(spec.variables[j]));
    if (spec.g) {
        Expr big_g = integrate_rational_univariate(*spec.g, spec.variables[spec.outer]);
        out.invariants.push_back(spec.inner * exp_of(big_g));
    } else {
        out.invariants.push_back(strip_ln(spec.inner));
    }
    return out;
}

std::vector<Generated> sample(unsigned seed, const SampleConfig& cfg) {
    if (cfg.max_order < 2) throw std::invalid_argument("max order must be at least 2");
    if (cfg.variables < 1 || cfg.complexity < 1 || cfg.count < 1)
        throw std::invalid_argument("sample bounds must be positive");
    std::vector<Generated> corpus;
    for (std::size_t i = 0; i < cfg.count; ++i) {
        for (unsigned attempt = 0;; ++attempt) {
            std::seed_seq seq{seed, static_cast<unsigned>(i), attempt};
            Drawer drawer(seq, cfg);
            OperatorSpec spec = drawer.draw();
            if (max_jet_order(spec.inner) != cfg.max_order - 1) continue;
            try {
                Generated g = compose(spec);
                if (verify_claim(g.problem, g.invariants).status != VerdictStatus::Verified) continue;
                corpus.push_back(std::move(g));
                break;
            } catch (const DegenerateSpec&) {
            } catch (const UnsupportedForm&) {
            }
        }
    }
    return corpus;
}

Fixture to_fixture(const Generated& g) {
    Fixture f;
    f.pde = format(g.problem.space.from_jet(g.problem.lhs)) + " = 0";
    f.unknown = format(g.problem.space.applied());
    for (const auto& e : g.invariants) f.invariants.push_back(format(g.problem.space.from_jet(e)));
    return f;
}

}  // namespace jetreduce
