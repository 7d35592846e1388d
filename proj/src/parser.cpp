// Copyright 2026 The qml-nbe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qml/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace qml {

namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    SourceSpan span;
};

const std::set<std::string, std::less<>> kKeywords = {
    "let", "in", "qif", "then", "else", "false", "true", "zero", "def", "main", "Q1", "Q2"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Number: return "number '" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        const SourceSpan at{line, col};
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            out.push_back(Token{Tok::Ident, std::string(src.substr(i, j - i)), 0.0, at});
            advance(j - i);
            continue;
        }
        const bool digit_next = i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]));
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && digit_next)) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                    j = k;
                }
            }
            std::string text(src.substr(i, j - i));
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                throw QmlError(ErrorKind::Syntax, "malformed number '" + text + "'", at);
            }
            out.push_back(Token{Tok::Number, std::move(text), value, at});
            advance(j - i);
            continue;
        }
        static const std::string_view kSymbols = "(),:=[]{}*+-/";
        if (kSymbols.find(c) != std::string_view::npos) {
            out.push_back(Token{Tok::Sym, std::string(1, c), 0.0, at});
            advance(1);
            continue;
        }
        throw QmlError(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", at);
    }
    out.push_back(Token{Tok::End, "", 0.0, SourceSpan{line, col}});
    return out;
}

class Parser {
public:
    Parser(std::string_view src, bool scoped) : toks_(lex(src)), scoped_(scoped) {}

    SourceProgram program() {
        SourceProgram prog;
        while (is_ident("def")) prog.defs.push_back(definition());
        if (is_ident("main")) {
            next();
            expect_sym("[");
            Context ctx = context_until("]");
            expect_sym("]");
            expect_sym("=");
            scope_.clear();
            for (const auto& b : ctx) scope_.push_back(b.name);
            prog.main = term();
            prog.main_context = std::move(ctx);
        }
        expect_end();
        return prog;
    }

    Term standalone_term() {
        Term t = term();
        expect_end();
        return t;
    }

    QType standalone_type() {
        QType t = type();
        expect_end();
        return t;
    }

    Context standalone_context() {
        Context ctx = context_until("");
        expect_end();
        return ctx;
    }

    Amplitude standalone_amplitude() {
        const SourceSpan at = peek().span;
        Amplitude a = amp_expr();
        expect_end();
        return finite(a, at);
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }

    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    bool is_sym(std::string_view s, std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Sym && peek(ahead).text == s;
    }

    bool is_ident(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }

    bool is_plain_ident(std::size_t ahead = 0) const {
        return peek(ahead).kind == Tok::Ident && !kKeywords.contains(peek(ahead).text);
    }

    [[noreturn]] void fail(std::string_view expected) const {
        throw QmlError(ErrorKind::Syntax, "expected " + std::string(expected) + ", found " + describe(peek()),
                       peek().span);
    }

    void expect_sym(std::string_view s) {
        if (!is_sym(s)) fail("'" + std::string(s) + "'");
        next();
    }

    void expect_keyword(std::string_view s) {
        if (!is_ident(s)) fail("'" + std::string(s) + "'");
        next();
    }

    void expect_end() {
        if (peek().kind != Tok::End) fail("end of input");
    }

    std::string identifier() {
        if (!is_plain_ident()) fail("identifier");
        return next().text;
    }

    // --- types and contexts

    QType type() {
        QType acc = type_atom();
        while (is_sym("*")) {
            next();
            acc = QType::tensor(acc, type_atom());
        }
        return acc;
    }

    QType type_atom() {
        if (is_ident("Q1")) {
            next();
            return QType::q1();
        }
        if (is_ident("Q2")) {
            next();
            return QType::q2();
        }
        if (is_sym("(")) {
            next();
            QType t = type();
            expect_sym(")");
            return t;
        }
        fail("type");
    }

    Context context_until(std::string_view closer) {
        std::vector<Binding> entries;
        std::set<std::string> seen;
        const bool at_end = closer.empty() ? peek().kind == Tok::End : is_sym(closer);
        if (at_end) return Context{};
        for (;;) {
            const SourceSpan at = peek().span;
            std::string name = identifier();
            expect_sym(":");
            QType t = type();
            if (!seen.insert(name).second) throw QmlError(ErrorKind::Shadowing, name, at);
            entries.push_back(Binding{std::move(name), std::move(t)});
            if (!is_sym(",")) break;
            next();
        }
        return Context(std::move(entries));
    }

    // --- definitions

    Definition definition() {
        const SourceSpan at = peek().span;
        expect_keyword("def");
        const SourceSpan name_at = peek().span;
        std::string name = identifier();
        if (defs_.contains(name)) throw QmlError(ErrorKind::Shadowing, name, name_at);
        std::vector<Binding> params;
        std::set<std::string> seen;
        while (is_sym("(")) {
            next();
            const SourceSpan p_at = peek().span;
            std::string p = identifier();
            expect_sym(":");
            QType t = type();
            expect_sym(")");
            if (!seen.insert(p).second) throw QmlError(ErrorKind::Shadowing, p, p_at);
            params.push_back(Binding{std::move(p), std::move(t)});
        }
        expect_sym("=");
        scope_.clear();
        for (const auto& b : params) scope_.push_back(b.name);
        Term body = term();
        defs_.insert(name);
        return Definition{std::move(name), std::move(params), std::move(body), at};
    }

    // --- terms

    void bind(const std::string& name, SourceSpan at) {
        if (scoped_ && std::find(scope_.begin(), scope_.end(), name) != scope_.end()) {
            throw QmlError(ErrorKind::Shadowing, name, at);
        }
        scope_.push_back(name);
    }

    Term term() {
        const SourceSpan at = peek().span;
        if (is_ident("let")) {
            next();
            Pattern pat = pattern();
            expect_sym("=");
            Term bound = term();
            expect_keyword("in");
            const std::size_t mark = scope_.size();
            for (const auto& n : pat.names()) bind(n, at);
            Term body = term();
            scope_.resize(mark);
            return Term::let(std::move(pat), std::move(bound), std::move(body)).with_span(at);
        }
        if (is_ident("qif")) {
            next();
            Term c = term();
            expect_keyword("then");
            Term a = term();
            expect_keyword("else");
            Term b = term();
            return Term::ifq(std::move(c), std::move(a), std::move(b)).with_span(at);
        }
        return sum();
    }

    Pattern pattern() {
        if (is_sym("(")) {
            next();
            const SourceSpan at = peek().span;
            std::string a = identifier();
            expect_sym(",");
            std::string b = identifier();
            expect_sym(")");
            if (a == b) throw QmlError(ErrorKind::Shadowing, a, at);
            return Pattern::pair(std::move(a), std::move(b));
        }
        return Pattern::var(identifier());
    }

    Term sum() {
        Term acc = prod();
        while (is_sym("+")) {
            const SourceSpan at = next().span;
            acc = Term::sup(acc, prod()).with_span(at);
        }
        return acc;
    }

    Term prod() {
        if (is_sym("{")) {
            const SourceSpan at = next().span;
            const SourceSpan amp_at = peek().span;
            Amplitude a = finite(amp_expr(), amp_at);
            expect_sym("}");
            expect_sym("*");
            return Term::scale(a, prod()).with_span(at);
        }
        return atom();
    }

    bool atom_starts() const {
        return is_sym("(") || is_ident("false") || is_ident("true") || is_ident("zero") || is_plain_ident();
    }

    Term atom() {
        const SourceSpan at = peek().span;
        if (is_sym("(")) {
            next();
            if (is_sym(")")) {
                next();
                return Term::unit().with_span(at);
            }
            Term first = term();
            if (is_sym(",")) {
                next();
                Term second = term();
                expect_sym(")");
                return Term::pair(std::move(first), std::move(second)).with_span(at);
            }
            expect_sym(")");
            return first;
        }
        if (is_ident("false")) {
            next();
            return Term::false_().with_span(at);
        }
        if (is_ident("true")) {
            next();
            return Term::true_().with_span(at);
        }
        if (is_ident("zero")) {
            next();
            expect_sym("[");
            QType t = type();
            expect_sym("]");
            return Term::zero(std::move(t)).with_span(at);
        }
        if (is_plain_ident()) {
            std::string name = next().text;
            if (!scoped_ || std::find(scope_.begin(), scope_.end(), name) != scope_.end()) {
                return Term::var(std::move(name)).with_span(at);
            }
            if (!defs_.contains(name)) throw QmlError(ErrorKind::UnknownIdentifier, name, at);
            std::vector<Term> args;
            while (atom_starts()) args.push_back(atom());
            return Term::call(std::move(name), std::move(args)).with_span(at);
        }
        fail("term");
    }

    // --- amplitude expressions

    static Amplitude finite(Amplitude a, SourceSpan at) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw QmlError(ErrorKind::Syntax, "expected finite amplitude", at);
        }
        return a;
    }

    Amplitude amp_expr() {
        Amplitude acc = amp_term();
        while (is_sym("+") || is_sym("-")) {
            const bool plus = next().text == "+";
            Amplitude rhs = amp_term();
            acc = plus ? acc + rhs : acc - rhs;
        }
        return acc;
    }

    Amplitude amp_term() {
        Amplitude acc = amp_unary();
        while (is_sym("*") || is_sym("/")) {
            const bool mul = next().text == "*";
            Amplitude rhs = amp_unary();
            acc = mul ? acc * rhs : acc / rhs;
        }
        return acc;
    }

    Amplitude amp_unary() {
        if (is_sym("-")) {
            next();
            return -amp_unary();
        }
        if (is_sym("+")) {
            next();
            return amp_unary();
        }
        return amp_primary();
    }

    Amplitude amp_primary() {
        if (peek().kind == Tok::Number) return Amplitude(next().number, 0.0);
        if (is_ident("i")) {
            next();
            return Amplitude(0.0, 1.0);
        }
        if (is_ident("sqrt")) {
            next();
            expect_sym("(");
            Amplitude a = amp_expr();
            expect_sym(")");
            if (a.imag() == 0.0 && a.real() >= 0.0) return Amplitude(std::sqrt(a.real()), 0.0);
            return std::sqrt(a);
        }
        if (is_sym("(")) {
            next();
            Amplitude a = amp_expr();
            expect_sym(")");
            return a;
        }
        fail("amplitude");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    bool scoped_;
    std::vector<std::string> scope_;
    std::set<std::string> defs_;
};

// --- inlining

struct Inliner {
    std::map<std::string, const Definition*> defs;
    std::map<std::string, Term> expanded;  // def name -> body with calls expanded
    std::set<std::string> taken;

    std::string fresh(const std::string& base) {
        std::string n = fresh_name(base, taken);
        taken.insert(n);
        return n;
    }

    // Renames every binder of `t` apart; `ren` maps free names.
    Term rename(const Term& t, std::map<std::string, std::string> ren) {
        switch (t.kind()) {
            case TermKind::Var: {
                auto it = ren.find(t.name());
                return it == ren.end() ? t : Term::var(it->second).with_span(t.span().value_or(SourceSpan{}));
            }
            case TermKind::Let: {
                Term bound = rename(t.child(0), ren);
                const Pattern& p = t.pattern();
                Pattern np = p;
                np.first = fresh(p.first);
                ren[p.first] = np.first;
                if (p.second) {
                    np.second = fresh(*p.second);
                    ren[*p.second] = *np.second;
                }
                Term body = rename(t.child(1), ren);
                Term out = Term::let(np, bound, body);
                return t.span() ? out.with_span(*t.span()) : out;
            }
            default: {
                Term out = t;
                for (std::size_t i = 0; i < t.arity(); ++i) out = out.with_child(i, rename(t.child(i), ren));
                return out;
            }
        }
    }

    Term expand(const Term& t) {
        if (t.is(TermKind::Call)) {
            const Definition& d = *defs.at(t.name());
            if (t.arity() != d.params.size()) {
                throw QmlError(ErrorKind::ArityMismatch,
                               t.name() + " expects " + std::to_string(d.params.size()) + " argument(s), got " +
                                   std::to_string(t.arity()),
                               t.span());
            }
            std::vector<Term> args;
            for (const auto& a : t.children()) args.push_back(expand(a));
            std::map<std::string, std::string> ren;
            std::vector<std::string> names;
            for (const auto& p : d.params) {
                names.push_back(fresh(p.name));
                ren[p.name] = names.back();
            }
            Term acc = rename(expanded.at(d.name), ren);
            for (std::size_t k = args.size(); k-- > 0;) acc = Term::let(Pattern::var(names[k]), args[k], acc);
            return acc;
        }
        Term out = t;
        for (std::size_t i = 0; i < t.arity(); ++i) out = out.with_child(i, expand(t.child(i)));
        return out;
    }
};

}  // namespace

SourceProgram parse_program(std::string_view text) { return Parser(text, true).program(); }

Term parse_term(std::string_view text) { return Parser(text, false).standalone_term(); }

QType parse_type(std::string_view text) { return Parser(text, false).standalone_type(); }

Context parse_context(std::string_view text) { return Parser(text, false).standalone_context(); }

Amplitude parse_amplitude(std::string_view text) { return Parser(text, false).standalone_amplitude(); }

Program inline_defs(const SourceProgram& program) {
    if (!program.main || !program.main_context) {
        throw QmlError(ErrorKind::Syntax, "expected 'main'");
    }
    Inliner in;
    in.taken = all_names(*program.main);
    in.taken.merge(program.main_context->names());
    for (const auto& d : program.defs) {
        in.taken.merge(all_names(d.body));
        for (const auto& p : d.params) in.taken.insert(p.name);
    }
    for (const auto& d : program.defs) {
        in.defs[d.name] = &d;
        in.expanded.emplace(d.name, in.expand(d.body));
    }
    return Program{*program.main_context, in.expand(*program.main)};
}

Program load_program(std::string_view text) { return inline_defs(parse_program(text)); }

}  // namespace qml
