#include "jetreduce/reducer.hpp"

#include "jetreduce/algebra.hpp"
#include "jetreduce/calculus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace jetreduce {

PDEProblem make_problem(const Expr& equation, const SymbolTable& params) {
    JetForm jf = to_jet(equation);
    PDEProblem p{jf.expr, jf.space, params};
    if (p.order() < 2) throw UnsupportedForm("first-order equation is already a PDE for its integral");
    Normalizer norm(params);
    if (norm.is_zero(p.lhs)) throw UnsupportedForm("equation is identically zero");

    auto& st = p.symbols;
    for (const auto& v : p.space.variables()) st.declare(v, SymbolKind::IndependentVariable);
    for (const auto& v : p.space.inactive()) st.declare(v, SymbolKind::Parameter);
    for (const auto& k : p.space.indices()) st.declare(jet_name(k), SymbolKind::JetVariable);
    for (const auto& z : coordinates(p)) st.declare(gradient_name(z), SymbolKind::GradientSymbol);
    for (const auto& s : symbols_of(p.lhs))
        if (!st.contains(s)) st.declare(s, SymbolKind::Parameter);
    return p;
}

std::vector<std::string> coordinates(const PDEProblem& p) {
    std::vector<std::string> out = p.space.variables();
    for (const auto& k : p.space.indices())
        if (order(k) < p.order()) out.push_back(jet_name(k));
    return out;
}

std::string gradient_name(const std::string& coordinate) {
    if (auto k = parse_jet_name(coordinate)) {
        std::string s = "I_W";
        for (std::size_t i = 0; i < k->size(); ++i) {
            if (i) s += '_';
            s += std::to_string((*k)[i]);
        }
        return s;
    }
    return "I_" + coordinate;
}

std::optional<std::string> coordinate_of_gradient(std::string_view name) {
    if (name.size() < 3 || name.substr(0, 2) != "I_") return std::nullopt;
    std::string_view rest = name.substr(2);
    if (rest.size() > 1 && rest[0] == 'W' &&
        std::all_of(rest.begin() + 1, rest.end(), [](char ch) { return std::isdigit(ch) || ch == '_'; })) {
        std::string inner(rest.substr(1));
        std::replace(inner.begin(), inner.end(), '_', ',');
        std::string jet = "W[" + inner + "]";
        if (parse_jet_name(jet)) return jet;
    }
    return std::string(rest);
}

bool is_gradient_symbol(const Expr& atom) { return atom.is_symbol() && atom.name().starts_with("I_"); }

std::vector<Expr> integral_system(const PDEProblem& p) {
    if (p.order() < 2) throw UnsupportedForm("integral system needs order >= 2");
    const auto& vars = p.space.variables();
    std::vector<Expr> rels;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        std::vector<Expr> terms{sym(gradient_name(vars[i]))};
        for (const auto& k : p.space.indices()) {
            if (order(k) >= p.order()) continue;
            MultiIndex up = k;
            ++up[i];
            terms.push_back(sym(gradient_name(jet_name(k))) * p.space.jet(up));
        }
        rels.push_back(add(std::move(terms)));
    }
    return rels;
}

std::vector<CandidateSubset> candidate_subsets(const PDEProblem& p, std::size_t cap) {
    auto top = multi_indices(p.dim(), p.order());
    std::vector<bool> present;
    for (const auto& k : top) present.push_back(p.lhs.depends_on(jet_name(k)));
    const std::size_t m = p.dim();
    std::vector<CandidateSubset> out;
    if (m > top.size()) return out;
    std::vector<std::size_t> pick(m);
    for (std::size_t i = 0; i < m; ++i) pick[i] = i;
    while (out.size() < cap) {
        bool meets = false;
        for (std::size_t i : pick) meets = meets || present[i];
        if (meets) {
            CandidateSubset c;
            for (std::size_t i : pick) c.push_back(top[i]);
            out.push_back(std::move(c));
        }
        // Next combination in lexicographic order of positions.
        std::size_t i = m;
        while (i > 0 && pick[i - 1] == top.size() - m + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

Elimination eliminate(const PDEProblem& p, const CandidateSubset& c, Normalizer& norm) {
    std::vector<std::string> names;
    for (const auto& k : c) names.push_back(jet_name(k));
    LinearSolution sol = linsolve(integral_system(p), names, norm, is_gradient_symbol);

    Bindings b;
    for (const auto& [name, value] : sol.values) b.emplace_back(sym(name), value);
    RationalForm r = norm(substitute(p.lhs, b));

    Elimination out;
    out.values = std::move(sol.values);
    for (auto& a : sol.assumptions)
        if (std::find(out.assumptions.begin(), out.assumptions.end(), a) == out.assumptions.end())
            out.assumptions.push_back(std::move(a));
    out.raw = norm.to_expr(r.num);
    auto& atoms = AtomTable::instance();
    for (const auto& [m, coef] : r.num.terms()) {
        int d = 0;
        for (const auto& [v, e] : m)
            if (is_gradient_symbol(atoms.atom(v))) d += static_cast<int>(e);
        out.degree = std::max(out.degree, d);
    }
    return out;
}

namespace {

struct Cascade {
    Normalizer& norm;
    std::vector<std::string> coords;
    std::map<VarId, std::size_t> gradient_index;
    std::vector<Poly> eqs;
    std::vector<std::string> independent;
    std::vector<VarId> zeroed;

    std::vector<VarId> gradients_in(const Poly& eq) const {
        std::vector<VarId> out;
        for (VarId v : eq.variables())
            if (gradient_index.count(v)) out.push_back(v);
        return out;
    }

    void split_on(const std::string& v) {
        auto& atoms = AtomTable::instance();
        VarId id = atoms.symbol_id(v);
        std::vector<Poly> next;
        for (const auto& eq : eqs) {
            for (VarId x : eq.variables()) {
                Expr a = atoms.atom(x);
                if (x != id && !a.is_symbol() && a.depends_on(v))
                    throw UnsupportedForm("equation is not polynomial in " + v);
            }
            for (auto& [d, coef] : eq.coefficients(id))
                if (!coef.is_zero()) next.push_back(std::move(coef));
        }
        eqs = std::move(next);
    }

    /// Returns a newly forced coordinate, if any.
    std::optional<std::string> force_one() {
        for (const auto& eq : eqs) {
            auto g = gradients_in(eq);
            if (g.empty()) throw UnsupportedForm("inconsistent: equation without gradient terms");
            if (g.size() != 1) continue;
            VarId gv = g.front();
            std::string z = coords[gradient_index.at(gv)];
            independent.push_back(z);
            zeroed.push_back(gv);
            std::vector<Poly> next;
            for (const auto& e : eqs) {
                Poly r = e.substitute(gv, Poly());
                if (!r.is_zero()) next.push_back(std::move(r));
            }
            eqs = std::move(next);
            return z;
        }
        return std::nullopt;
    }
};

}  // namespace

ReducedSystem split(const Elimination& elim, const PDEProblem& p, const CandidateSubset& c, Normalizer& norm) {
    ReducedSystem rs;
    rs.candidate = c;
    rs.assumptions = elim.assumptions;
    if (elim.degree > 1) {
        rs.status = ReductionStatus::Nonlinear;
        rs.reason = "reduced, unsolved (nonlinear)";
        rs.equations = {elim.raw};
        return rs;
    }
    auto& atoms = AtomTable::instance();
    Cascade cs{norm, coordinates(p), {}, {}, {}, {}};
    for (std::size_t i = 0; i < cs.coords.size(); ++i)
        cs.gradient_index[atoms.symbol_id(gradient_name(cs.coords[i]))] = i;
    Poly raw = norm(elim.raw).num;
    if (raw.is_zero()) {
        rs.reason = "elimination leaves no condition";
        return rs;
    }
    cs.eqs.push_back(raw);

    std::vector<std::string> pending;
    for (const auto& k : multi_indices(p.dim(), p.order()))
        if (std::find(c.begin(), c.end(), k) == c.end()) pending.push_back(jet_name(k));
    try {
        for (;;) {
            while (auto z = cs.force_one()) pending.push_back(*z);
            if (pending.empty()) break;
            std::string v = pending.front();
            pending.erase(pending.begin());
            cs.split_on(v);
        }
    } catch (const UnsupportedForm& e) {
        rs.reason = e.what();
        rs.independent_of = cs.independent;
        return rs;
    }
    rs.independent_of = cs.independent;

    bool jet_left = false;
    for (const auto& z : cs.coords) {
        if (std::find(cs.independent.begin(), cs.independent.end(), z) != cs.independent.end()) continue;
        rs.remaining.push_back(z);
        jet_left = jet_left || parse_jet_name(z).has_value();
    }
    if (!jet_left) {
        rs.reason = "no jet dependence";
        return rs;
    }

    for (const auto& [name, value] : elim.values) {
        if (!p.lhs.depends_on(name)) continue;
        Poly d = norm(value).den;
        for (VarId g : cs.zeroed) d = d.substitute(g, Poly());
        if (d.is_zero()) {
            rs.reason = "value of " + name + " is undefined once forced gradients vanish";
            return rs;
        }
    }

    // Normalize by the first gradient coefficient (coordinate order) and dedupe.
    std::vector<std::vector<std::pair<std::size_t, RationalForm>>> seen;
    for (const auto& eq : cs.eqs) {
        std::vector<std::pair<std::size_t, VarId>> gs;
        for (VarId g : cs.gradients_in(eq)) gs.emplace_back(cs.gradient_index.at(g), g);
        std::sort(gs.begin(), gs.end());
        Poly lead = eq.coefficient(gs.front().second, 1);
        std::vector<std::pair<std::size_t, RationalForm>> form;
        for (const auto& [i, g] : gs) form.emplace_back(i, norm.make(eq.coefficient(g, 1), lead));
        bool dup = std::any_of(seen.begin(), seen.end(), [&](const auto& f) {
            if (f.size() != form.size()) return false;
            for (std::size_t j = 0; j < f.size(); ++j)
                if (f[j].first != form[j].first || f[j].second.num != form[j].second.num ||
                    f[j].second.den != form[j].second.den)
                    return false;
            return true;
        });
        if (dup) continue;
        std::vector<Expr> terms;
        for (const auto& [i, coef] : form) terms.push_back(norm.to_expr(coef) * sym(gradient_name(cs.coords[i])));
        rs.equations.push_back(add(std::move(terms)));
        seen.push_back(std::move(form));
    }
    rs.status = ReductionStatus::Reduced;
    return rs;
}

ReducedSystem reduce(const PDEProblem& p, const CandidateSubset& c) {
    Normalizer norm(p.symbols);
    try {
        Elimination e = eliminate(p, c, norm);
        return split(e, p, c, norm);
    } catch (const SingularSystem& e) {
        ReducedSystem rs;
        rs.candidate = c;
        rs.reason = e.what();
        return rs;
    } catch (const UnsupportedForm& e) {
        ReducedSystem rs;
        rs.candidate = c;
        rs.reason = e.what();
        return rs;
    }
}

std::string format_subset(const CandidateSubset& c) {
    std::string s = "{";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ", ";
        s += jet_name(c[i]);
    }
    return s + "}";
}

}  // namespace jetreduce
