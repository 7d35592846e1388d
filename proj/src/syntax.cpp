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

#include "qml/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <utility>

namespace qml {

// ---------------------------------------------------------------------------
// Errors

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::Shadowing: return "ShadowingError";
        case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::TypeClash: return "TypeClash";
        case ErrorKind::TypeMismatch: return "TypeMismatch";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::UnusedVariable: return "UnusedVariable";
        case ErrorKind::NotOrthogonal: return "NotOrthogonal";
        case ErrorKind::NotNormalised: return "NotNormalised";
        case ErrorKind::NotClassical: return "NotClassical";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::NoMatch: return "NoMatch";
        case ErrorKind::SideCondition: return "SideCondition";
        case ErrorKind::FinalMismatch: return "FinalMismatch";
    }
    return "Error";
}

QmlError::QmlError(ErrorKind kind, std::string detail, std::optional<SourceSpan> span)
    : std::runtime_error(std::string(to_string(kind)) + "(" + detail + ")"),
      kind_(kind),
      detail_(std::move(detail)),
      span_(span) {}

Amplitude checked_amplitude(Amplitude a) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
        throw QmlError(ErrorKind::TypeMismatch, "non-finite amplitude");
    }
    return a;
}

// ---------------------------------------------------------------------------
// QType

struct QType::Rep {
    Kind kind;
    std::size_t dim;
    std::optional<QType> left;
    std::optional<QType> right;
};

QType::QType() : QType(q1()) {}

QType::QType(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

QType QType::q1() {
    static const auto rep = std::make_shared<const Rep>(Rep{Kind::Q1, 1, std::nullopt, std::nullopt});
    return QType(rep);
}

QType QType::q2() {
    static const auto rep = std::make_shared<const Rep>(Rep{Kind::Q2, 2, std::nullopt, std::nullopt});
    return QType(rep);
}

QType QType::tensor(QType left, QType right) {
    const std::size_t d = left.dim() * right.dim();
    return QType(std::make_shared<const Rep>(Rep{Kind::Tensor, d, std::move(left), std::move(right)}));
}

QType::Kind QType::kind() const { return rep_->kind; }

const QType& QType::left() const {
    assert(rep_->kind == Kind::Tensor);
    return *rep_->left;
}

const QType& QType::right() const {
    assert(rep_->kind == Kind::Tensor);
    return *rep_->right;
}

std::size_t QType::dim() const { return rep_->dim; }

bool operator==(const QType& a, const QType& b) {
    if (a.rep_ == b.rep_) return true;
    if (a.kind() != b.kind()) return false;
    if (a.kind() != QType::Kind::Tensor) return true;
    return a.left() == b.left() && a.right() == b.right();
}

std::string to_string(const QType& type) {
    switch (type.kind()) {
        case QType::Kind::Q1: return "Q1";
        case QType::Kind::Q2: return "Q2";
        case QType::Kind::Tensor: {
            // `*` is left-associative, so only a tensor on the right needs parens.
            std::string rhs = to_string(type.right());
            if (type.right().is_tensor()) rhs = "(" + rhs + ")";
            return to_string(type.left()) + " * " + rhs;
        }
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Context

Context::Context(std::initializer_list<Binding> entries) : Context(std::vector<Binding>(entries)) {}

Context::Context(std::vector<Binding> entries) {
    for (auto& b : entries) {
        if (contains(b.name)) throw QmlError(ErrorKind::Shadowing, b.name);
        entries_.push_back(std::move(b));
    }
}

Context Context::extended(std::string name, QType type) const {
    if (contains(name)) throw QmlError(ErrorKind::Shadowing, name);
    Context out = *this;
    out.entries_.push_back(Binding{std::move(name), std::move(type)});
    return out;
}

Context Context::without(std::string_view name) const {
    Context out;
    for (const auto& b : entries_) {
        if (b.name != name) out.entries_.push_back(b);
    }
    return out;
}

const QType* Context::find(std::string_view name) const {
    for (const auto& b : entries_) {
        if (b.name == name) return &b.type;
    }
    return nullptr;
}

std::optional<std::size_t> Context::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name == name) return i;
    }
    return std::nullopt;
}

std::set<std::string> Context::names() const {
    std::set<std::string> out;
    for (const auto& b : entries_) out.insert(b.name);
    return out;
}

std::string to_string(const Context& ctx) {
    std::string out;
    for (const auto& b : ctx) {
        if (!out.empty()) out += ", ";
        out += b.name + " : " + to_string(b.type);
    }
    return out;
}

MergedContext merge_contexts(const Context& g, const Context& d) {
    MergedContext out;
    std::vector<Binding> entries;
    for (const auto& b : d) {
        if (!g.contains(b.name)) {
            entries.push_back(b);
            out.slots.push_back(Slot::Right);
        }
    }
    for (const auto& b : g) {
        if (const QType* other = d.find(b.name)) {
            if (!(*other == b.type)) throw QmlError(ErrorKind::TypeClash, b.name);
            out.slots.push_back(Slot::Shared);
        } else {
            out.slots.push_back(Slot::Left);
        }
        entries.push_back(b);
    }
    out.context = Context(std::move(entries));
    return out;
}

QType context_as_type(const Context& ctx) {
    QType acc = QType::q1();
    for (const auto& b : ctx) acc = QType::tensor(acc, b.type);
    return acc;
}

// ---------------------------------------------------------------------------
// Pattern

Pattern Pattern::var(std::string name) { return Pattern{std::move(name), std::nullopt}; }

Pattern Pattern::pair(std::string a, std::string b) { return Pattern{std::move(a), std::move(b)}; }

std::vector<std::string> Pattern::names() const {
    if (second) return {first, *second};
    return {first};
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
    TermKind kind;
    std::string name;
    Pattern pattern;
    Amplitude amp;
    QType annot;
    std::vector<Term> kids;
    std::optional<SourceSpan> span;
};

Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

namespace {

template <typename... Kids>
std::vector<Term> kids_of(Kids&&... kids) {
    std::vector<Term> v;
    v.reserve(sizeof...(Kids));
    (v.push_back(std::forward<Kids>(kids)), ...);
    return v;
}

}  // namespace

Term Term::var(std::string name) {
    return Term(std::make_shared<const Node>(Node{TermKind::Var, std::move(name), {}, {}, {}, {}, {}}));
}

Term Term::unit() {
    static const Term t(std::make_shared<const Node>(Node{TermKind::Unit, {}, {}, {}, {}, {}, {}}));
    return t;
}

Term Term::pair(Term first, Term second) {
    return Term(std::make_shared<const Node>(
        Node{TermKind::Pair, {}, {}, {}, {}, kids_of(std::move(first), std::move(second)), {}}));
}

Term Term::let(Pattern pattern, Term bound, Term body) {
    return Term(std::make_shared<const Node>(
        Node{TermKind::Let, {}, std::move(pattern), {}, {}, kids_of(std::move(bound), std::move(body)), {}}));
}

Term Term::ifq(Term cond, Term then_branch, Term else_branch) {
    return Term(std::make_shared<const Node>(Node{
        TermKind::IfQ, {}, {}, {}, {},
        kids_of(std::move(cond), std::move(then_branch), std::move(else_branch)), {}}));
}

Term Term::boolean(bool value) {
    static const Term f(std::make_shared<const Node>(Node{TermKind::False, {}, {}, {}, {}, {}, {}}));
    static const Term t(std::make_shared<const Node>(Node{TermKind::True, {}, {}, {}, {}, {}, {}}));
    return value ? t : f;
}

Term Term::zero(QType type) {
    return Term(std::make_shared<const Node>(Node{TermKind::Zero, {}, {}, {}, std::move(type), {}, {}}));
}

Term Term::scale(Amplitude amplitude, Term body) {
    return Term(std::make_shared<const Node>(
        Node{TermKind::Scale, {}, {}, checked_amplitude(amplitude), {}, kids_of(std::move(body)), {}}));
}

Term Term::sup(Term left, Term right) {
    return Term(std::make_shared<const Node>(
        Node{TermKind::Sup, {}, {}, {}, {}, kids_of(std::move(left), std::move(right)), {}}));
}

Term Term::call(std::string name, std::vector<Term> args) {
    return Term(std::make_shared<const Node>(Node{TermKind::Call, std::move(name), {}, {}, {}, std::move(args), {}}));
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Pattern& Term::pattern() const { return node_->pattern; }
Amplitude Term::amplitude() const { return node_->amp; }
const QType& Term::annotation() const { return node_->annot; }
std::span<const Term> Term::children() const { return node_->kids; }

const Term& Term::child(std::size_t i) const {
    assert(i < node_->kids.size());
    return node_->kids[i];
}

Term Term::with_child(std::size_t i, Term replacement) const {
    assert(i < node_->kids.size());
    Node copy = *node_;
    copy.kids[i] = std::move(replacement);
    return Term(std::make_shared<const Node>(std::move(copy)));
}

Term Term::with_span(SourceSpan span) const {
    Node copy = *node_;
    copy.span = span;
    return Term(std::make_shared<const Node>(std::move(copy)));
}

const std::optional<SourceSpan>& Term::span() const { return node_->span; }

bool structurally_equal(const Term& a, const Term& b, double tolerance) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case TermKind::Var:
            return a.name() == b.name();
        case TermKind::Call:
            if (a.name() != b.name()) return false;
            break;
        case TermKind::Let:
            if (!(a.pattern() == b.pattern())) return false;
            break;
        case TermKind::Zero:
            return a.annotation() == b.annotation();
        case TermKind::Scale:
            if (std::abs(a.amplitude() - b.amplitude()) > tolerance) return false;
            break;
        default:
            break;
    }
    if (a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i) {
        if (!structurally_equal(a.child(i), b.child(i), tolerance)) return false;
    }
    return true;
}

namespace {

void collect_free(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (t.kind()) {
        case TermKind::Var:
            if (!bound.contains(t.name())) out.insert(t.name());
            return;
        case TermKind::Let: {
            collect_free(t.child(0), bound, out);
            std::vector<std::string> added;
            for (const auto& n : t.pattern().names()) {
                if (bound.insert(n).second) added.push_back(n);
            }
            collect_free(t.child(1), bound, out);
            for (const auto& n : added) bound.erase(n);
            return;
        }
        default:
            for (const auto& c : t.children()) collect_free(c, bound, out);
    }
}

void collect_names(const Term& t, std::set<std::string>& out) {
    if (t.is(TermKind::Var) || t.is(TermKind::Call)) out.insert(t.name());
    if (t.is(TermKind::Let)) {
        for (const auto& n : t.pattern().names()) out.insert(n);
    }
    for (const auto& c : t.children()) collect_names(c, out);
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
    std::set<std::string> bound;
    std::set<std::string> out;
    collect_free(t, bound, out);
    return out;
}

std::set<std::string> all_names(const Term& t) {
    std::set<std::string> out;
    collect_names(t, out);
    return out;
}

bool contains_quantum_syntax(const Term& t) {
    if (t.is(TermKind::Zero) || t.is(TermKind::Scale) || t.is(TermKind::Sup)) return true;
    for (const auto& c : t.children()) {
        if (contains_quantum_syntax(c)) return true;
    }
    return false;
}

std::string fresh_name(std::string_view base, const std::set<std::string>& taken) {
    std::string candidate(base);
    if (!taken.contains(candidate)) return candidate;
    candidate += "'";
    if (!taken.contains(candidate)) return candidate;
    for (int k = 2;; ++k) {
        std::string next = candidate + std::to_string(k);
        if (!taken.contains(next)) return next;
    }
}

Term identity_term(const Context& ctx) {
    Term acc = Term::unit();
    for (const auto& b : ctx) acc = Term::pair(acc, Term::var(b.name));
    return acc;
}

Term let_star(const Context& ctx, const Term& bound, const Term& body) {
    std::set<std::string> taken = all_names(bound);
    taken.merge(all_names(body));
    taken.merge(ctx.names());

    // Build outside-in: the last context entry is destructured first.
    Term current_bound = bound;
    std::vector<std::pair<Pattern, Term>> lets;
    for (auto it = ctx.entries().rbegin(); it != ctx.entries().rend(); ++it) {
        std::string rest = fresh_name(it->name + "_r", taken);
        taken.insert(rest);
        lets.emplace_back(Pattern::pair(rest, it->name), current_bound);
        current_bound = Term::var(rest);
    }
    Term acc = body;
    for (auto it = lets.rbegin(); it != lets.rend(); ++it) acc = Term::let(it->first, it->second, acc);
    return acc;
}

// ---------------------------------------------------------------------------
// CVal / substitution

CVal CVal::var(std::string name) { return CVal(Term::var(std::move(name))); }
CVal CVal::unit() { return CVal(Term::unit()); }
CVal CVal::boolean(bool value) { return CVal(Term::boolean(value)); }
CVal CVal::pair(const CVal& a, const CVal& b) { return CVal(Term::pair(a.term(), b.term())); }

std::optional<CVal> CVal::from_term(const Term& t) {
    switch (t.kind()) {
        case TermKind::Var:
        case TermKind::Unit:
        case TermKind::False:
        case TermKind::True:
            return CVal(t);
        case TermKind::Pair:
            if (CVal::from_term(t.child(0)) && CVal::from_term(t.child(1))) return CVal(t);
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

namespace {

Term substitute_map(const Term& t, const std::map<std::string, Term>& sub) {
    switch (t.kind()) {
        case TermKind::Var: {
            auto it = sub.find(t.name());
            return it == sub.end() ? t : it->second;
        }
        case TermKind::Let: {
            Term bound = substitute_map(t.child(0), sub);
            std::map<std::string, Term> inner = sub;
            for (const auto& n : t.pattern().names()) inner.erase(n);
            Term body = inner.empty() ? t.child(1) : substitute_map(t.child(1), inner);
            return t.with_child(0, bound).with_child(1, body);
        }
        default: {
            Term out = t;
            for (std::size_t i = 0; i < t.arity(); ++i) out = out.with_child(i, substitute_map(t.child(i), sub));
            return out;
        }
    }
}

}  // namespace

Term substitute(const Term& body, const CVal& val, const Pattern& pat) {
    std::map<std::string, Term> sub;
    if (pat.is_pair()) {
        if (!val.term().is(TermKind::Pair)) {
            throw QmlError(ErrorKind::ShapeMismatch, "pair pattern " + to_source(pat) + " against " + to_source(val.term()));
        }
        sub.emplace(pat.first, val.term().child(0));
        sub.emplace(*pat.second, val.term().child(1));
    } else {
        sub.emplace(pat.first, val.term());
    }
    return substitute_map(body, sub);
}

// ---------------------------------------------------------------------------
// QVal

struct QVal::Node {
    Kind kind;
    std::optional<CVal> value;
    QType type;
    Amplitude amp;
    std::vector<QVal> kids;
};

QVal::QVal(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

QVal QVal::leaf(CVal value) {
    return QVal(std::make_shared<const Node>(Node{Kind::Leaf, std::move(value), {}, {}, {}}));
}

QVal QVal::zero(QType type) {
    return QVal(std::make_shared<const Node>(Node{Kind::Zero, std::nullopt, std::move(type), {}, {}}));
}

QVal QVal::sum(QVal left, QVal right) {
    std::vector<QVal> kids;
    kids.push_back(std::move(left));
    kids.push_back(std::move(right));
    return QVal(std::make_shared<const Node>(Node{Kind::Sum, std::nullopt, {}, {}, std::move(kids)}));
}

QVal QVal::scale(Amplitude amplitude, QVal inner) {
    std::vector<QVal> kids;
    kids.push_back(std::move(inner));
    return QVal(std::make_shared<const Node>(
        Node{Kind::Scale, std::nullopt, {}, checked_amplitude(amplitude), std::move(kids)}));
}

QVal::Kind QVal::kind() const { return node_->kind; }
const CVal& QVal::value() const { return *node_->value; }
const QType& QVal::zero_type() const { return node_->type; }
const QVal& QVal::left() const { return node_->kids.at(0); }
const QVal& QVal::right() const { return node_->kids.at(1); }
const QVal& QVal::inner() const { return node_->kids.at(0); }
Amplitude QVal::amplitude() const { return node_->amp; }

Term QVal::to_term() const {
    switch (kind()) {
        case Kind::Leaf: return value().term();
        case Kind::Zero: return Term::zero(zero_type());
        case Kind::Sum: return Term::sup(left().to_term(), right().to_term());
        case Kind::Scale: return Term::scale(amplitude(), inner().to_term());
    }
    return Term::unit();
}

}  // namespace qml
