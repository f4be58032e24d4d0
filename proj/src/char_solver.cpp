#include "jetreduce/char_solver.hpp"

#include "jetreduce/algebra.hpp"
#include "jetreduce/calculus.hpp"
#include "jetreduce/deadline.hpp"
#include "jetreduce/integrate.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace jetreduce {

std::size_t VectorField::nonzero_count() const {
    return static_cast<std::size_t>(
        std::count_if(coefficients.begin(), coefficients.end(), [](const Expr& a) { return !a.is_zero_literal(); }));
}

std::string VectorField::to_string() const {
    std::string s;
    for (std::size_t j = 0; j < coordinates.size(); ++j) {
        if (coefficients[j].is_zero_literal()) continue;
        if (!s.empty()) s += " + ";
        if (!coefficients[j].is_one_literal()) s += "(" + format(coefficients[j]) + ")*";
        s += "d/d" + coordinates[j];
    }
    return s.empty() ? "0" : s;
}

VectorField field_of(const Expr& eq, const std::vector<std::string>& coordinates, Normalizer& norm) {
    VectorField f;
    f.coordinates = coordinates;
    Bindings zero;
    for (const auto& z : coordinates) zero.emplace_back(sym(gradient_name(z)), Expr(0));
    for (const auto& s : symbols_of(eq)) {
        if (!s.starts_with("I_")) continue;
        auto z = coordinate_of_gradient(s);
        if (!z || std::find(coordinates.begin(), coordinates.end(), *z) == coordinates.end())
            throw UnsupportedForm("gradient symbol " + s + " outside the field coordinates");
    }
    if (!norm.is_zero(substitute(eq, zero))) throw UnsupportedForm("equation is not homogeneous in gradients");
    for (const auto& z : coordinates) {
        PolyCoeffs pc = poly_coeffs(eq, gradient_name(z), norm);
        if (pc.coeffs.size() > 2) throw UnsupportedForm("equation is nonlinear in " + gradient_name(z));
        Expr a = pc.coeffs.size() == 2 ? norm.simplify(pc.coeffs[1] / pc.cleared) : Expr(0);
        for (const auto& s : symbols_of(a))
            if (s.starts_with("I_")) throw UnsupportedForm("equation is nonlinear in gradients");
        f.coefficients.push_back(a);
    }
    return f;
}

Expr apply_field(const VectorField& f, const Expr& phi) {
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < f.coordinates.size(); ++j) {
        if (f.coefficients[j].is_zero_literal()) continue;
        terms.push_back(f.coefficients[j] * diff(phi, f.coordinates[j]));
    }
    return add(std::move(terms));
}

namespace {

/// Σ c_i ln(u_i) with rational c_i, or nullopt.
std::optional<std::vector<std::pair<Rational, Expr>>> log_terms(const Expr& e) {
    std::vector<Expr> terms;
    if (e.kind() == Kind::Add)
        terms.assign(e.ops().begin(), e.ops().end());
    else if (!e.is_zero_literal())
        terms.push_back(e);
    std::vector<std::pair<Rational, Expr>> out;
    for (const auto& t : terms) {
        auto [c, rest] = split_coefficient(t);
        if (rest.kind() != Kind::Func || rest.fn() != Fn::Ln) return std::nullopt;
        out.emplace_back(c, rest.op(0));
    }
    return out;
}

bool has_kernel(const Expr& e) {
    if (e.kind() == Kind::Func) return true;
    return std::any_of(e.ops().begin(), e.ops().end(), has_kernel);
}

/// Normal form unless e carries kernels, whose arguments read better as built.
Expr tidy(const Expr& e, Normalizer& norm) { return has_kernel(e) ? e : norm.simplify(e); }

/// phi / m when phi = m * Σ c_i ln(u_i) with m free of x and y.
std::optional<Expr> drop_constant_factor(const Expr& phi, const std::string& x, const std::string& y) {
    if (phi.kind() != Kind::Add && phi.kind() != Kind::Mul) return std::nullopt;
    const Expr& first = phi.kind() == Kind::Add ? phi.op(0) : phi;
    if (first.kind() != Kind::Mul) return std::nullopt;
    std::vector<Expr> rest;
    for (const auto& f : first.ops())
        if (f.kind() != Kind::Number && !(f.kind() == Kind::Func && f.fn() == Fn::Ln)) rest.push_back(f);
    Expr m = mul(std::move(rest));
    if (m.kind() == Kind::Number || m.depends_on(x) || m.depends_on(y)) return std::nullopt;
    std::vector<Expr> terms;
    for (const auto& t : phi.kind() == Kind::Add ? phi.ops() : std::span<const Expr>(&phi, 1)) terms.push_back(t / m);
    return add(std::move(terms));
}

/// Σ c_i ln(u_i) -> Π u_i^{k_i} with coprime integer k_i, oriented so that
/// the factors in y get positive exponents; other input unchanged. A common
/// factor free of x and y is dropped first.
Expr tidy_logs(const Expr& phi, const std::string& x, const std::string& y, Normalizer& norm) {
    auto logs = log_terms(phi);
    if (!logs) {
        if (auto scaled = drop_constant_factor(phi, x, y)) {
            if (log_terms(*scaled)) return tidy_logs(*scaled, x, y, norm);
        }
    }
    if (!logs || logs->empty()) return phi;
    Integer l = 1;
    for (const auto& [c, u] : *logs) l = lcm(l, Integer(c.get_den()));
    Integer g = 0;
    for (const auto& [c, u] : *logs) g = gcd(g, Integer(c.get_num() * (l / c.get_den())));
    Rational toward_y = 0;
    for (const auto& [c, u] : *logs)
        if (u.depends_on(y)) toward_y += c;
    if (toward_y < 0 || (toward_y == 0 && logs->front().first < 0)) g = -g;
    std::vector<Expr> factors;
    for (const auto& [c, u] : *logs) {
        Integer k = c.get_num() * (l / c.get_den()) / g;
        if (!k.fits_slong_p()) return phi;
        factors.push_back(pow(u, k.get_si()));
    }
    return norm.simplify(mul(std::move(factors)));
}

/// p = px * py with px free of y and py free of x, or nullopt.
std::optional<std::pair<Poly, Poly>> split_poly(const Poly& p, VarId x, VarId y) {
    Poly px = content(p, y);
    auto py = try_divide(p, px);
    if (!py || py->contains(x)) return std::nullopt;
    return std::make_pair(px, *py);
}

/// True when x or y only occur as plain polynomial variables.
bool rational_in(const RationalForm& r, VarId x, VarId y, const std::string& xs, const std::string& ys) {
    auto& atoms = AtomTable::instance();
    for (const Poly* p : {&r.num, &r.den})
        for (VarId v : p->variables()) {
            if (v == x || v == y) continue;
            Expr a = atoms.atom(v);
            if (a.depends_on(xs) || a.depends_on(ys)) return false;
        }
    return true;
}

std::optional<Expr> quadrature(const Expr& integrand, const std::string& v, Normalizer& norm) {
    try {
        return integrate_rational_univariate(integrand, v, norm);
    } catch (const UnsupportedForm&) {
        return std::nullopt;
    }
}

std::optional<OdeSolution> finish(const Expr& phi, const std::string& x, const std::string& y, const char* method,
                                  Normalizer& norm) {
    return OdeSolution{tidy_logs(phi, x, y, norm), method};
}

}  // namespace

std::optional<OdeSolution> ode_separable(const Expr& rhs, const std::string& x, const std::string& y,
                                         Normalizer& norm) {
    auto& atoms = AtomTable::instance();
    VarId xi = atoms.symbol_id(x), yi = atoms.symbol_id(y);
    RationalForm r = norm(rhs);
    if (r.is_zero()) return OdeSolution{sym(y), "H1 separable"};
    if (!rational_in(r, xi, yi, x, y)) return std::nullopt;
    if (!r.depends_on(yi)) {
        auto q = quadrature(rhs, x, norm);
        if (!q) return std::nullopt;
        return finish(sym(y) - *q, x, y, "H1 separable", norm);
    }
    if (!r.depends_on(xi)) {
        auto q = quadrature(1 / rhs, y, norm);
        if (!q) return std::nullopt;
        return finish(sym(x) - *q, x, y, "H1 separable", norm);
    }
    auto num = split_poly(r.num, xi, yi);
    auto den = split_poly(r.den, xi, yi);
    if (!num || !den) return std::nullopt;
    Expr fx = norm.to_expr(norm.make(num->first, den->first));
    Expr gy = norm.to_expr(norm.make(num->second, den->second));
    auto qy = quadrature(1 / gy, y, norm);
    if (!qy) return std::nullopt;
    auto qx = quadrature(fx, x, norm);
    if (!qx) return std::nullopt;
    return finish(*qy - *qx, x, y, "H1 separable", norm);
}

std::optional<OdeSolution> ode_linear(const Expr& rhs, const std::string& x, const std::string& y, Normalizer& norm) {
    auto& atoms = AtomTable::instance();
    VarId xi = atoms.symbol_id(x), yi = atoms.symbol_id(y);
    RationalForm r = norm(rhs);
    if (!rational_in(r, xi, yi, x, y) || r.den.contains(yi) || r.num.degree(yi) != 1) return std::nullopt;
    Expr p = norm.to_expr(norm.make(r.num.coefficient(yi, 1), r.den));
    Expr q = norm.to_expr(norm.make(r.num.coefficient(yi, 0), r.den));
    auto l = quadrature(p, x, norm);
    if (!l) return std::nullopt;
    // exp(-∫p) must be a product of integer powers.
    auto logs = log_terms(*l);
    if (!logs) return std::nullopt;
    std::vector<Expr> factors;
    for (const auto& [c, u] : *logs) {
        if (c.get_den() != 1 || !c.get_num().fits_slong_p()) return std::nullopt;
        factors.push_back(pow(u, -c.get_num().get_si()));
    }
    Expr mu = norm.simplify(mul(std::move(factors)));
    if (norm.is_zero(q)) return finish(sym(y) * mu, x, y, "H2 linear", norm);
    auto iq = quadrature(q * mu, x, norm);
    if (!iq) return std::nullopt;
    return finish(norm.simplify(sym(y) * mu) - *iq, x, y, "H2 linear", norm);
}

std::optional<OdeSolution> ode_homogeneous(const Expr& rhs, const std::string& x, const std::string& y,
                                           Normalizer& norm) {
    Expr lam = sym("_lambda"), v = sym("_v");
    Expr scaled = substitute(rhs, Bindings{{sym(x), lam * sym(x)}, {sym(y), lam * sym(y)}});
    if (!norm.is_zero(scaled - rhs)) return std::nullopt;
    Expr h = norm.simplify(substitute(rhs, Bindings{{sym(y), v * sym(x)}}));
    if (h.depends_on(x)) return std::nullopt;
    Expr back = sym(y) / sym(x);
    Expr denom = norm.simplify(h - v);
    if (denom.is_zero_literal()) return OdeSolution{norm.simplify(back), "H3 homogeneous"};
    auto qv = quadrature(1 / denom, "_v", norm);
    if (!qv) return std::nullopt;
    Expr phi = substitute(*qv, Bindings{{v, back}}) - func(Fn::Ln, sym(x));
    return finish(phi, x, y, "H3 homogeneous", norm);
}

std::optional<OdeSolution> ode_autonomous(const Expr& rhs, const std::string& x, const std::string& y,
                                          Normalizer& norm) {
    if (rhs.depends_on(x) || norm.is_zero(rhs)) return std::nullopt;
    auto q = quadrature(1 / rhs, y, norm);
    if (!q) return std::nullopt;
    return finish(sym(x) - *q, x, y, "H4 autonomous", norm);
}

std::optional<OdeSolution> solve_ode(const Expr& rhs, const std::string& x, const std::string& y, Normalizer& norm) {
    for (auto h : {ode_separable, ode_linear, ode_homogeneous, ode_autonomous}) {
        check_deadline();
        if (auto s = h(rhs, x, y, norm)) return s;
    }
    return std::nullopt;
}

namespace {

struct CharInvariant {
    Expr expr;
    std::string provenance;
    /// Coordinate this invariant replaces (the coordinate itself when frozen).
    std::string target;
    /// Coordinate whose slot the invariant takes in reports.
    std::string slot;
    bool frozen = false;
    /// target = inverse, written with `constant` standing for this invariant.
    std::optional<Expr> inverse;
    std::string constant;
};

struct Characteristics {
    std::vector<CharInvariant> invariants;
    std::string reference;
    std::vector<std::string> unsolved;
};

std::set<std::string> symbol_set(const Expr& e) {
    auto v = symbols_of(e);
    return {v.begin(), v.end()};
}

Characteristics characteristics(const VectorField& f, Normalizer& norm, int& counter) {
    Characteristics out;
    std::vector<std::size_t> moving;
    for (std::size_t j = 0; j < f.coordinates.size(); ++j) {
        if (norm.is_zero(f.coefficients[j])) {
            out.invariants.push_back({sym(f.coordinates[j]), "coordinate", f.coordinates[j], f.coordinates[j], true, {}, {}});
        } else {
            moving.push_back(j);
        }
    }
    if (moving.empty()) return out;
    auto by_size = [&](std::size_t a, std::size_t b) {
        auto sa = f.coefficients[a].size(), sb = f.coefficients[b].size();
        return sa != sb ? sa < sb : a < b;
    };
    std::stable_sort(moving.begin(), moving.end(), by_size);
    std::size_t ref = moving.front();
    out.reference = f.coordinates[ref];
    std::vector<std::size_t> pending(moving.begin() + 1, moving.end());
    std::set<std::string> moving_names;
    for (std::size_t j : moving) moving_names.insert(f.coordinates[j]);

    Bindings inverses;
    Bindings constants;
    bool progress = true;
    while (progress && !pending.empty()) {
        progress = false;
        for (auto it = pending.begin(); it != pending.end();) {
            check_deadline();
            const std::string& z = f.coordinates[*it];
            Expr r = f.coefficients[*it] / f.coefficients[ref];
            for (std::size_t round = 0; round <= inverses.size(); ++round) r = substitute(r, inverses);
            r = norm.simplify(r);
            bool coupled = false;
            for (const auto& s : symbol_set(r))
                if (moving_names.count(s) && s != z && s != out.reference) coupled = true;
            if (coupled) {
                ++it;
                continue;
            }
            progress = true;
            auto sol = solve_ode(r, out.reference, z, norm);
            if (!sol) {
                out.unsolved.push_back(z);
                it = pending.erase(it);
                continue;
            }
            CharInvariant ci;
            ci.target = z;
            ci.slot = z;
            ci.provenance = sol->method;
            ci.expr = tidy(substitute(sol->invariant, constants), norm);
            ci.constant = "_c" + std::to_string(++counter);
            try {
                PolyCoeffs pc = poly_coeffs(sol->invariant - sym(ci.constant), z, norm);
                if (pc.coeffs.size() == 2) ci.inverse = norm.simplify(-pc.coeffs[0] / pc.coeffs[1]);
            } catch (const UnsupportedForm&) {
            }
            if (!ci.inverse && moving.size() == 2) {
                // A single pair may keep z and eliminate the reference instead.
                try {
                    PolyCoeffs pc = poly_coeffs(sol->invariant - sym(ci.constant), out.reference, norm);
                    if (pc.coeffs.size() == 2) {
                        ci.inverse = norm.simplify(-pc.coeffs[0] / pc.coeffs[1]);
                        ci.target = out.reference;
                        out.reference = z;
                    }
                } catch (const UnsupportedForm&) {
                }
            }
            if (ci.inverse) inverses.emplace_back(sym(ci.target), *ci.inverse);
            constants.emplace_back(sym(ci.constant), ci.expr);
            out.invariants.push_back(std::move(ci));
            it = pending.erase(it);
        }
    }
    for (std::size_t j : pending) out.unsolved.push_back(f.coordinates[j]);
    // Report in coordinate order.
    std::map<std::string, std::size_t> pos;
    for (std::size_t j = 0; j < f.coordinates.size(); ++j) pos[f.coordinates[j]] = j;
    std::stable_sort(out.invariants.begin(), out.invariants.end(),
                     [&](const CharInvariant& a, const CharInvariant& b) { return pos[a.slot] < pos[b.slot]; });
    return out;
}

/// Splits Σ c_i ∂_i = 0, required for all values of `dropped`, into one
/// field per monomial in the dropped coordinates.
std::optional<std::vector<std::vector<Expr>>> split_on(const std::vector<Expr>& coefs,
                                                       const std::set<std::string>& dropped, Normalizer& norm) {
    auto& atoms = AtomTable::instance();
    std::set<VarId> ids;
    for (const auto& d : dropped) ids.insert(atoms.symbol_id(d));
    std::vector<RationalForm> forms;
    for (const auto& c : coefs) {
        forms.push_back(norm(c));
        for (const Poly* p : {&forms.back().num, &forms.back().den})
            for (VarId v : p->variables()) {
                if (ids.count(v)) continue;
                Expr a = atoms.atom(v);
                for (const auto& d : dropped)
                    if (a.depends_on(d)) return std::nullopt;
            }
    }
    Poly common(Rational(1));
    for (const auto& f : forms) {
        if (f.is_zero()) continue;
        Poly g = gcd(common, f.den);
        common = common * divide_exact(f.den, g);
    }
    std::map<std::vector<std::uint32_t>, std::vector<Poly>> groups;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (forms[i].is_zero()) continue;
        Poly n = forms[i].num * divide_exact(common, forms[i].den);
        for (const auto& [m, c] : n.terms()) {
            std::vector<std::uint32_t> key;
            for (VarId d : ids) key.push_back(mono_degree(m, d));
            Monomial rest;
            for (const auto& [v, e] : m)
                if (!ids.count(v)) rest.emplace_back(v, e);
            auto& g = groups[key];
            g.resize(coefs.size());
            g[i] += Poly::term(rest, c);
        }
    }
    std::vector<std::vector<Expr>> out;
    for (auto& [key, polys] : groups) {
        std::vector<Expr> row;
        for (const auto& p : polys) row.push_back(norm.to_expr(p));
        out.push_back(std::move(row));
    }
    return out;
}

bool is_jet_dependent(const Expr& e) {
    for (const auto& s : symbols_of(e))
        if (parse_jet_name(s)) return true;
    return false;
}

}  // namespace

std::vector<Invariant> invariants_of(const VectorField& f, Normalizer& norm) {
    int counter = 0;
    std::vector<Invariant> out;
    for (auto& ci : characteristics(f, norm, counter).invariants) out.push_back({ci.expr, ci.provenance});
    return out;
}

bool functionally_independent(const std::vector<Expr>& invariants, const std::vector<std::string>& coordinates,
                              Normalizer& norm) {
    std::vector<std::vector<RationalForm>> m;
    for (const auto& phi : invariants) {
        std::vector<RationalForm> row;
        for (const auto& z : coordinates) row.push_back(norm(diff(phi, z)));
        m.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < coordinates.size() && rank < m.size(); ++col) {
        check_deadline();
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][col].is_zero()) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t i = rank + 1; i < m.size(); ++i) {
            if (m[i][col].is_zero()) continue;
            RationalForm factor = norm.div(m[i][col], m[rank][col]);
            for (std::size_t k = col; k < coordinates.size(); ++k)
                m[i][k] = norm.sub(m[i][k], norm.mul(factor, m[rank][k]));
        }
        ++rank;
    }
    return rank == invariants.size();
}

std::vector<VectorField> fields_of(const ReducedSystem& rs, Normalizer& norm) {
    std::vector<VectorField> out;
    for (const auto& eq : rs.equations) out.push_back(field_of(eq, rs.remaining, norm));
    return out;
}

SolveResult solve_system(const ReducedSystem& rs, const PDEProblem& p) {
    SolveResult res;
    if (rs.status != ReductionStatus::Reduced) {
        res.failure = "candidate not reduced: " + rs.reason;
        return res;
    }
    Normalizer norm(p.symbols);
    std::vector<VectorField> original;
    try {
        original = fields_of(rs, norm);
    } catch (const UnsupportedForm& e) {
        res.failure = std::string("field extraction: ") + e.what();
        return res;
    }

    std::vector<std::string> coords = rs.remaining;
    std::map<std::string, Expr> defs;
    std::map<std::string, std::string> provenance;
    for (const auto& z : coords) {
        defs[z] = sym(z);
        provenance[z] = "coordinate";
    }
    std::vector<VectorField> fields = original;
    int counter = 0;
    for (;;) {
        check_deadline();
        std::erase_if(fields, [&](const VectorField& f) {
            return std::all_of(f.coefficients.begin(), f.coefficients.end(),
                               [&](const Expr& a) { return norm.is_zero(a); });
        });
        if (fields.empty()) break;
        std::stable_sort(fields.begin(), fields.end(),
                         [](const VectorField& a, const VectorField& b) { return a.nonzero_count() < b.nonzero_count(); });
        const VectorField x = fields.front();
        Characteristics ch = characteristics(x, norm, counter);

        std::vector<std::string> next_coords;
        std::map<std::string, Expr> next_defs;
        Bindings to_new, inverses;
        for (const auto& ci : ch.invariants) {
            if (ci.frozen) {
                next_coords.push_back(ci.target);
                next_defs[ci.target] = defs.at(ci.target);
                continue;
            }
            std::string y = "_y" + std::to_string(++counter);
            next_coords.push_back(y);
            next_defs[y] = substitute(ci.expr, defs);
            provenance[y] = ci.provenance;
            to_new.emplace_back(sym(ci.constant), sym(y));
        }
        for (const auto& ci : ch.invariants)
            if (ci.inverse) inverses.emplace_back(sym(ci.target), substitute(*ci.inverse, to_new));
        std::set<std::string> dropped(ch.unsolved.begin(), ch.unsolved.end());
        dropped.insert(ch.reference);
        std::set<std::string> eliminated;
        for (const auto& ci : ch.invariants)
            if (!ci.frozen) eliminated.insert(ci.target);

        std::vector<VectorField> next_fields;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            const VectorField& z = fields[k];
            std::vector<Expr> coefs;
            for (const auto& ci : ch.invariants) {
                Expr c = ci.frozen ? z.coefficients[static_cast<std::size_t>(
                                         std::find(z.coordinates.begin(), z.coordinates.end(), ci.target) -
                                         z.coordinates.begin())]
                                   : apply_field(z, ci.expr);
                for (std::size_t round = 0; round <= inverses.size(); ++round) c = substitute(c, inverses);
                c = norm.simplify(c);
                for (const auto& s : symbol_set(c))
                    if (eliminated.count(s)) {
                        res.failure = "cannot rewrite field " + z.to_string() + " in the invariants of " +
                                      x.to_string();
                        return res;
                    }
                coefs.push_back(c);
            }
            auto parts = split_on(coefs, dropped, norm);
            if (!parts) {
                res.failure = "field " + z.to_string() + " is not polynomial in the dropped coordinates";
                return res;
            }
            for (auto& row : *parts) next_fields.push_back({next_coords, std::move(row)});
        }
        coords = std::move(next_coords);
        defs = std::move(next_defs);
        fields = std::move(next_fields);
    }

    FirstIntegral fi;
    fi.candidate = rs.candidate;
    fi.assumptions = rs.assumptions;
    std::vector<Expr> kept;
    for (const auto& c : coords) {
        check_deadline();
        Expr phi = tidy(defs.at(c), norm);
        if (symbols_of(phi).empty()) continue;
        bool ok = std::all_of(original.begin(), original.end(),
                              [&](const VectorField& f) { return norm.is_zero(apply_field(f, phi)); });
        if (!ok) continue;
        kept.push_back(phi);
        if (!functionally_independent(kept, rs.remaining, norm)) {
            kept.pop_back();
            continue;
        }
        fi.invariants.push_back({phi, provenance.at(c)});
    }
    if (!std::any_of(fi.invariants.begin(), fi.invariants.end(),
                     [](const Invariant& i) { return is_jet_dependent(i.expr); })) {
        res.failure = "no jet-dependent invariant";
        return res;
    }
    res.integral = std::move(fi);
    return res;
}

}  // namespace jetreduce
