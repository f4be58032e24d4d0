#include "jetreduce/fixture.hpp"

#include "jetreduce/parse.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace jetreduce {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

void declare_param(SymbolTable& table, std::string_view spec) {
    spec = trim(spec);
    auto colon = spec.find(':');
    std::string name(trim(spec.substr(0, colon)));
    if (name.empty()) throw std::invalid_argument("empty parameter name");
    table.declare(name, SymbolKind::Parameter);
    if (colon == std::string_view::npos) return;
    std::string_view rel = trim(spec.substr(colon + 1));
    auto eq = rel.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("relation for " + name + " needs '='");
    Expr lhs = parse(rel.substr(0, eq));
    if (lhs != pow(sym(name), 2)) throw std::invalid_argument("relation must have the form " + name + "^2 = ...");
    table.add_relation(name, parse(rel.substr(eq + 1)));
}

CandidateSubset parse_subset(std::string_view text) {
    CandidateSubset out;
    text = trim(text);
    while (!text.empty()) {
        if (text.front() != '[') throw std::invalid_argument("subset entries look like [1,0]");
        auto close = text.find(']');
        if (close == std::string_view::npos) throw std::invalid_argument("unterminated subset entry");
        auto k = parse_jet_name("W" + std::string(text.substr(0, close + 1)));
        if (!k) throw std::invalid_argument("bad multi-index " + std::string(text.substr(0, close + 1)));
        out.push_back(*k);
        text = trim(text.substr(close + 1));
    }
    if (out.empty()) throw std::invalid_argument("empty subset");
    return out;
}

std::string write_subset(const CandidateSubset& c) {
    std::string s;
    for (const auto& k : c) {
        if (!s.empty()) s += ' ';
        s += jet_name(k).substr(1);
    }
    return s;
}

SymbolTable Fixture::symbols() const {
    SymbolTable t;
    for (const auto& p : params) declare_param(t, p);
    return t;
}

Fixture parse_fixture(std::string_view text) {
    Fixture f;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::string_view l = trim(line);
        if (l.empty() || l.front() == '#') continue;
        auto colon = l.find(':');
        if (colon == std::string_view::npos) throw FixtureError("expected 'key: value'", no);
        std::string_view key = trim(l.substr(0, colon));
        std::string value(trim(l.substr(colon + 1)));
        try {
            if (key == "pde") {
                f.pde = value;
            } else if (key == "unknown") {
                f.unknown = value;
            } else if (key == "param") {
                SymbolTable probe;
                declare_param(probe, value);
                f.params.push_back(value);
            } else if (key == "subset") {
                f.subset = parse_subset(value);
            } else if (key == "invariant") {
                parse(value);
                f.invariants.push_back(value);
            } else {
                throw FixtureError("unknown key '" + std::string(key) + "'", no);
            }
        } catch (const FixtureError&) {
            throw;
        } catch (const std::exception& e) {
            throw FixtureError(e.what(), no);
        }
    }
    if (f.pde.empty()) throw FixtureError("missing 'pde:' line", no);
    return f;
}

Fixture load_fixture(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_fixture(ss.str());
}

std::string write_fixture(const Fixture& f) {
    std::string out = "pde: " + f.pde + "\n";
    if (!f.unknown.empty()) out += "unknown: " + f.unknown + "\n";
    for (const auto& p : f.params) out += "param: " + p + "\n";
    if (f.subset) out += "subset: " + write_subset(*f.subset) + "\n";
    for (const auto& i : f.invariants) out += "invariant: " + i + "\n";
    return out;
}

PDEProblem fixture_problem(const Fixture& f) {
    SymbolTable t = f.symbols();
    PDEProblem p = make_problem(parse_equation(f.pde, t), t);
    if (!f.unknown.empty()) {
        Expr u = parse(f.unknown);
        std::vector<Expr> args;
        for (const auto& a : p.space.arguments()) args.push_back(sym(a));
        if (u != Expr::apply(p.space.unknown(), args))
            throw UnsupportedForm("declared unknown " + f.unknown + " does not match the equation");
    }
    return p;
}

std::vector<Expr> fixture_invariants(const Fixture& f, const PDEProblem& p) {
    std::vector<Expr> out;
    for (const auto& text : f.invariants) out.push_back(p.space.to_jet(parse(text)));
    return out;
}

}  // namespace jetreduce
