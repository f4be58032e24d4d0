#include "jetreduce/parse.hpp"

#include <cctype>

namespace jetreduce {

bool SymbolTable::declare(const std::string& name, SymbolKind kind) {
    auto it = index_.find(name);
    if (it != index_.end()) {
        if (entries_[it->second].kind != kind)
            throw std::invalid_argument("symbol '" + name + "' already declared with a different kind");
        return false;
    }
    index_.emplace(name, entries_.size());
    entries_.push_back({name, kind});
    return true;
}

void SymbolTable::add_relation(const std::string& symbol, Expr square) {
    if (!contains(symbol)) declare(symbol, SymbolKind::Parameter);
    for (auto& r : relations_) {
        if (r.symbol == symbol) {
            r.square = std::move(square);
            return;
        }
    }
    relations_.push_back({symbol, std::move(square)});
}

std::optional<SymbolKind> SymbolTable::kind_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return entries_[it->second].kind;
}

std::vector<std::string> SymbolTable::names_of(SymbolKind kind) const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (e.kind == kind) out.push_back(e.name);
    return out;
}

namespace {

class Parser {
public:
    Parser(std::string_view text, const SymbolTable& tab) : s_(text), tab_(tab) {}

    Expr parse_all() {
        Expr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    std::string_view s_;
    const SymbolTable& tab_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Expr expr() {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+')) {
                terms.push_back(term());
            } else if (accept('-')) {
                terms.push_back(-term());
            } else {
                break;
            }
        }
        return add(std::move(terms));
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (accept('*')) {
                e = e * unary();
            } else if (accept('/')) {
                std::size_t at = pos_;
                Expr d = unary();
                if (d.is_zero_literal()) throw ParseError("division by zero", at);
                e = e / d;
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (accept('^')) {
            std::size_t at = pos_;
            Expr ex = unary();
            if (!ex.is_number() || ex.number().get_den() != 1 || !ex.number().get_num().fits_slong_p())
                throw ParseError("exponent must be an integer", at);
            long k = ex.number().get_num().get_si();
            if (base.is_zero_literal() && k < 0) throw ParseError("division by zero", at);
            return pow(base, k);
        }
        return base;
    }

    std::string identifier() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    Expr primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Expr(Rational(Integer(std::string(s_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            std::string id = identifier();
            skip();
            if (pos_ < s_.size() && s_[pos_] == '[') return indexed(id, start);
            if (pos_ < s_.size() && s_[pos_] == '(') return call(id, start);
            if (tab_.strict && !tab_.contains(id)) throw ParseError("unknown symbol '" + id + "'", start);
            return sym(id);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    Expr indexed(const std::string& id, std::size_t start) {
        expect('[');
        std::string name = id + "[";
        bool first = true;
        while (!accept(']')) {
            if (!first) expect(',');
            skip();
            std::size_t s0 = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (s0 == pos_) fail("expected nonnegative integer index");
            name += (first ? "" : ",") + std::string(s_.substr(s0, pos_ - s0));
            first = false;
        }
        name += "]";
        if (tab_.strict && !tab_.contains(name) && !tab_.contains(id))
            throw ParseError("unknown symbol '" + name + "'", start);
        return sym(name);
    }

    Expr call(const std::string& id, std::size_t start) {
        expect('(');
        if (id == "diff") {
            Expr f = expr();
            if (f.kind() != Kind::Apply) throw ParseError("diff expects an unknown function application", start);
            std::vector<std::string> vars;
            while (accept(',')) {
                std::size_t at = pos_;
                std::string v = identifier();
                if (v.empty()) throw ParseError("expected differentiation variable", at);
                bool is_arg = false;
                for (const auto& a : f.ops())
                    if (a.is_symbol() && a.name() == v) is_arg = true;
                if (!is_arg) throw ParseError("'" + v + "' is not an argument of " + f.name(), at);
                vars.push_back(v);
            }
            expect(')');
            if (vars.empty()) throw ParseError("diff needs at least one variable", start);
            return Expr::diff(f, std::move(vars));
        }
        std::vector<Expr> args{expr()};
        while (accept(',')) args.push_back(expr());
        expect(')');
        Fn f;
        if (fn_from_name(id, f)) {
            if (args.size() != 1) throw ParseError(id + " takes one argument", start);
            return func(f, args[0]);
        }
        for (const auto& a : args)
            if (!a.is_symbol()) throw ParseError("arguments of '" + id + "' must be variables", start);
        return Expr::apply(id, std::move(args));
    }
};

}  // namespace

Expr parse(std::string_view text, const SymbolTable& symtab) { return Parser(text, symtab).parse_all(); }

Expr parse_equation(std::string_view text, const SymbolTable& symtab) {
    auto eq = text.find('=');
    if (eq == std::string_view::npos) return parse(text, symtab);
    if (text.find('=', eq + 1) != std::string_view::npos) throw ParseError("more than one '='", eq);
    Expr lhs = parse(text.substr(0, eq), symtab);
    Expr rhs;
    try {
        rhs = parse(text.substr(eq + 1), symtab);
    } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()).substr(0, std::string(e.what()).rfind(" at position")),
                         e.position + eq + 1);
    }
    return lhs - rhs;
}

}  // namespace jetreduce
