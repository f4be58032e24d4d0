#include "jetreduce/jet.hpp"

#include "jetreduce/calculus.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace jetreduce {

int order(const MultiIndex& k) {
    int s = 0;
    for (int v : k) s += v;
    return s;
}

std::vector<MultiIndex> multi_indices(std::size_t m, int r) {
    if (m == 0) throw std::invalid_argument("multi_indices: m must be positive");
    std::vector<MultiIndex> out;
    MultiIndex cur(m, 0);
    // Fill positions left to right with the largest remaining value first.
    auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
        if (pos + 1 == m) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, r);
    return out;
}

std::string jet_name(const MultiIndex& k) {
    std::string s = "W[";
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(k[i]);
    }
    return s + "]";
}

std::optional<MultiIndex> parse_jet_name(std::string_view name) {
    if (name.size() < 4 || name.substr(0, 2) != "W[" || name.back() != ']') return std::nullopt;
    MultiIndex k;
    std::string_view body = name.substr(2, name.size() - 3);
    while (true) {
        int v = 0;
        auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc() || v < 0) return std::nullopt;
        k.push_back(v);
        body.remove_prefix(static_cast<std::size_t>(p - body.data()));
        if (body.empty()) break;
        if (body.front() != ',') return std::nullopt;
        body.remove_prefix(1);
    }
    return k;
}

JetSpace::JetSpace(std::string unknown, std::vector<std::string> args, std::vector<std::string> active, int max_order)
    : unknown_(std::move(unknown)), args_(std::move(args)), active_(std::move(active)), max_order_(max_order) {
    for (const auto& a : active_)
        if (std::find(args_.begin(), args_.end(), a) == args_.end())
            throw std::invalid_argument("active variable " + a + " is not an argument of " + unknown_);
}

std::vector<std::string> JetSpace::inactive() const {
    std::vector<std::string> out;
    for (const auto& a : args_)
        if (std::find(active_.begin(), active_.end(), a) == active_.end()) out.push_back(a);
    return out;
}

std::optional<MultiIndex> JetSpace::index_of(const Expr& e) const {
    if (!e.is_symbol()) return std::nullopt;
    auto k = parse_jet_name(e.name());
    if (!k || k->size() != dim()) return std::nullopt;
    return k;
}

std::vector<MultiIndex> JetSpace::indices() const {
    std::vector<MultiIndex> out;
    for (int r = 0; r <= max_order_; ++r) {
        auto level = multi_indices(dim(), r);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

Expr JetSpace::total_derivative(const Expr& e, std::size_t i) const {
    if (i >= dim()) throw std::out_of_range("total_derivative: direction out of range");
    std::vector<Expr> terms{diff(e, active_[i])};
    for (const auto& name : symbols_of(e)) {
        auto k = index_of(sym(name));
        if (!k) continue;
        Expr d = diff(e, name);
        if (d.is_zero_literal()) continue;
        MultiIndex up = *k;
        ++up[i];
        terms.push_back(d * jet(up));
    }
    return add(std::move(terms));
}

Expr JetSpace::applied() const {
    std::vector<Expr> a;
    for (const auto& n : args_) a.push_back(sym(n));
    return Expr::apply(unknown_, std::move(a));
}

namespace {

void collect_kernels(const Expr& e, std::set<Expr, ExprLess>& out) {
    if (e.kind() == Kind::Apply || e.kind() == Kind::Diff) {
        out.insert(e);
        return;
    }
    for (const auto& o : e.ops()) collect_kernels(o, out);
}

const Expr& applied_of(const Expr& kernel) { return kernel.kind() == Kind::Diff ? kernel.op(0) : kernel; }

}  // namespace

Expr JetSpace::to_jet(const Expr& e) const {
    std::set<Expr, ExprLess> kernels;
    collect_kernels(e, kernels);
    Expr w = applied();
    Bindings b;
    for (const auto& k : kernels) {
        if (applied_of(k) != w) throw UnsupportedForm("unexpected function application " + format(k));
        MultiIndex idx(dim(), 0);
        if (k.kind() == Kind::Diff) {
            for (const auto& v : k.diff_vars()) {
                auto it = std::find(active_.begin(), active_.end(), v);
                if (it == active_.end()) throw UnsupportedForm("derivative with respect to inactive variable " + v);
                ++idx[static_cast<std::size_t>(it - active_.begin())];
            }
        }
        b.emplace_back(k, jet(idx));
    }
    return substitute(e, b);
}

Expr JetSpace::from_jet(const Expr& e) const {
    Expr w = applied();
    Bindings b;
    for (const auto& name : symbols_of(e)) {
        auto k = index_of(sym(name));
        if (!k) continue;
        std::vector<std::string> vars;
        for (std::size_t i = 0; i < dim(); ++i)
            for (int j = 0; j < (*k)[i]; ++j) vars.push_back(active_[i]);
        b.emplace_back(sym(name), Expr::diff(w, std::move(vars)));
    }
    return substitute(e, b);
}

JetForm to_jet(const Expr& e) {
    std::set<Expr, ExprLess> kernels;
    collect_kernels(e, kernels);
    if (kernels.empty()) throw UnsupportedForm("no unknown function in equation");
    Expr w = applied_of(*kernels.begin());
    std::set<std::string> differentiated;
    int n = 0;
    for (const auto& k : kernels) {
        const Expr& a = applied_of(k);
        if (a.name() != w.name()) throw UnsupportedForm("multiple unknown functions: " + w.name() + ", " + a.name());
        if (a != w) throw UnsupportedForm("unknown " + w.name() + " applied to different arguments");
        if (k.kind() == Kind::Diff) {
            n = std::max(n, static_cast<int>(k.diff_vars().size()));
            differentiated.insert(k.diff_vars().begin(), k.diff_vars().end());
        }
    }
    std::vector<std::string> args, active;
    for (const auto& a : w.ops()) {
        args.push_back(a.name());
        if (differentiated.empty() || differentiated.count(a.name())) active.push_back(a.name());
    }
    JetSpace space(w.name(), args, active, n);
    return {space.to_jet(e), space};
}

}  // namespace jetreduce
