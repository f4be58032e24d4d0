#include "jetreduce/algebra.hpp"

#include <algorithm>

namespace jetreduce {

namespace {

void require_polynomial_in(const RationalForm& r, VarId v, const std::string& name) {
    for (VarId x : r.num.variables()) {
        if (x == v) continue;
        Expr atom = AtomTable::instance().atom(x);
        if (!atom.is_symbol() && atom.depends_on(name))
            throw UnsupportedForm("expression is not polynomial in " + name + ": " + format(atom));
    }
    for (VarId x : r.den.variables()) {
        if (x == v) continue;
        Expr atom = AtomTable::instance().atom(x);
        if (!atom.is_symbol() && atom.depends_on(name))
            throw UnsupportedForm("expression is not polynomial in " + name + ": " + format(atom));
    }
}

}  // namespace

PolyCoeffs poly_coeffs(const Expr& e, const std::string& v, Normalizer& norm) {
    RationalForm r = norm(e);
    VarId id = AtomTable::instance().symbol_id(v);
    require_polynomial_in(r, id, v);
    PolyCoeffs out;
    bool den_has_v = r.den.contains(id);
    std::uint32_t deg = r.num.degree(id);
    auto cs = r.num.coefficients(id);
    for (std::uint32_t d = 0; d <= deg; ++d) {
        auto it = cs.find(d);
        if (it == cs.end()) {
            out.coeffs.emplace_back(0);
        } else if (den_has_v) {
            out.coeffs.push_back(norm.to_expr(it->second));
        } else {
            out.coeffs.push_back(norm.to_expr(norm.make(it->second, r.den)));
        }
    }
    if (r.num.is_zero()) out.coeffs = {Expr(0)};
    if (den_has_v) out.cleared = norm.to_expr(r.den);
    return out;
}

PolyCoeffs poly_coeffs(const Expr& e, const std::string& v, const SymbolTable& table) {
    Normalizer norm(table);
    return poly_coeffs(e, v, norm);
}

const Expr& LinearSolution::at(const std::string& name) const {
    for (const auto& [n, v] : values)
        if (n == name) return v;
    throw std::out_of_range("no solution entry for " + name);
}

LinearSolution linsolve(const std::vector<Expr>& eqs, const std::vector<std::string>& unknowns, Normalizer& norm,
                        const PivotPreference& prefer) {
    const std::size_t n = unknowns.size();
    if (eqs.size() != n) throw std::invalid_argument("linsolve: system must be square");
    auto& atoms = AtomTable::instance();
    std::vector<VarId> ids;
    for (const auto& u : unknowns) ids.push_back(atoms.symbol_id(u));

    // Augmented matrix [A | -b] with rows A x + b = 0.
    std::vector<std::vector<RationalForm>> m(n, std::vector<RationalForm>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        RationalForm r = norm(eqs[i]);
        Poly rest = r.num;
        for (std::size_t j = 0; j < n; ++j) {
            if (r.den.contains(ids[j])) throw UnsupportedForm("equation is not linear in " + unknowns[j]);
            if (rest.degree(ids[j]) > 1) throw UnsupportedForm("equation is not linear in " + unknowns[j]);
            Poly c = rest.coefficient(ids[j], 1);
            for (VarId u : ids)
                if (c.contains(u)) throw UnsupportedForm("equation has products of unknowns");
            m[i][j] = norm.make(c, r.den);
            rest = rest.coefficient(ids[j], 0);
        }
        m[i][n] = norm.make(-rest, r.den);
    }

    auto score = [&](const RationalForm& p) {
        bool mono = p.num.is_monomial() && p.den.is_monomial();
        bool preferred = mono && prefer;
        if (preferred) {
            for (VarId v : p.num.variables())
                if (!prefer(atoms.atom(v))) preferred = false;
            if (p.num.variables().empty()) preferred = false;
        }
        int cls = p.is_constant() ? 0 : preferred ? 1 : mono ? 2 : 3;
        return std::make_pair(cls, p.num.size() + p.den.size());
    };

    LinearSolution sol;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = n;
        for (std::size_t row = col; row < n; ++row) {
            if (m[row][col].is_zero()) continue;
            if (best == n || score(m[row][col]) < score(m[best][col])) best = row;
        }
        if (best == n) throw SingularSystem("singular system: no pivot for " + unknowns[col]);
        std::swap(m[col], m[best]);
        RationalForm piv = m[col][col];
        if (!piv.is_constant()) sol.assumptions.push_back(norm.to_expr(piv));
        RationalForm inv = norm.inv(piv);
        for (std::size_t k = col; k <= n; ++k) m[col][k] = norm.mul(m[col][k], inv);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || m[row][col].is_zero()) continue;
            RationalForm f = m[row][col];
            for (std::size_t k = col; k <= n; ++k) {
                if (m[col][k].is_zero()) continue;
                m[row][k] = norm.sub(m[row][k], norm.mul(f, m[col][k]));
            }
        }
    }
    for (std::size_t j = 0; j < n; ++j) sol.values.emplace_back(unknowns[j], norm.to_expr(m[j][n]));
    return sol;
}

LinearSolution linsolve(const std::vector<Expr>& eqs, const std::vector<std::string>& unknowns,
                        const SymbolTable& table, const PivotPreference& prefer) {
    Normalizer norm(table);
    return linsolve(eqs, unknowns, norm, prefer);
}

}  // namespace jetreduce
