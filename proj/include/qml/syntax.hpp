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

// Types, contexts and terms of the pure QML fragment, plus the syntactic
// algebra on them (context merge, identity terms, let*, substitution).
//
// All values here are immutable handles over shared nodes: copying is cheap
// and sharing across threads is safe.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qml/error.hpp"

namespace qml {

using Amplitude = std::complex<double>;

/// Default numeric tolerance for every approximate comparison in the library.
inline constexpr double kDefaultTolerance = 1e-9;

/// Throws TypeMismatch unless both components are finite.
Amplitude checked_amplitude(Amplitude a);

// ---------------------------------------------------------------------------
// Types

class QType {
public:
    enum class Kind { Q1, Q2, Tensor };

    /// Q1.
    QType();

    static QType q1();
    static QType q2();
    static QType tensor(QType left, QType right);

    Kind kind() const;
    bool is_tensor() const { return kind() == Kind::Tensor; }
    /// Only valid on tensors.
    const QType& left() const;
    const QType& right() const;

    /// Size of the classical basis: 1, 2, or the product for tensors.
    std::size_t dim() const;

    friend bool operator==(const QType& a, const QType& b);

private:
    struct Rep;
    explicit QType(std::shared_ptr<const Rep> rep);
    std::shared_ptr<const Rep> rep_;
};

std::string to_string(const QType& type);

// ---------------------------------------------------------------------------
// Contexts

struct Binding {
    std::string name;
    QType type;

    friend bool operator==(const Binding&, const Binding&) = default;
};

/// Ordered variable environment. Names are unique; order fixes the basis
/// layout of con(ctx).
class Context {
public:
    Context() = default;
    Context(std::initializer_list<Binding> entries);
    explicit Context(std::vector<Binding> entries);

    /// Appends a binding; throws Shadowing if the name is already present.
    Context extended(std::string name, QType type) const;
    Context without(std::string_view name) const;

    const std::vector<Binding>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    const QType* find(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::set<std::string> names() const;

    friend bool operator==(const Context&, const Context&) = default;

private:
    std::vector<Binding> entries_;
};

std::string to_string(const Context& ctx);

/// Which operand(s) of a context merge a slot of the result came from.
enum class Slot { Left, Right, Shared };

struct MergedContext {
    Context context;
    std::vector<Slot> slots;  // parallel to context.entries()
};

/// g ⊗ d. The result lists d's exclusive variables first (in d's order)
/// followed by g's variables (in g's order), which is what the recursion on
/// the last entry of g produces. Throws TypeClash on conflicting types.
MergedContext merge_contexts(const Context& g, const Context& d);

/// con(•) = Q1, con(Γ, x:σ) = con(Γ) ⊗ σ.
QType context_as_type(const Context& ctx);

// ---------------------------------------------------------------------------
// Terms

enum class TermKind { Var, Unit, Pair, Let, IfQ, False, True, Zero, Scale, Sup, Call };

struct Pattern {
    std::string first;
    std::optional<std::string> second;

    static Pattern var(std::string name);
    static Pattern pair(std::string a, std::string b);

    bool is_pair() const { return second.has_value(); }
    std::vector<std::string> names() const;

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// QML term. Children are addressed by index:
///   Pair(0, 1)  Let(0 = bound, 1 = body)  IfQ(0 = cond, 1 = then, 2 = else)
///   Scale(0)    Sup(0, 1)                 Call(args...)
/// Call nodes only exist between parsing and definition inlining.
class Term {
public:
    static Term var(std::string name);
    static Term unit();
    static Term pair(Term first, Term second);
    static Term let(Pattern pattern, Term bound, Term body);
    static Term ifq(Term cond, Term then_branch, Term else_branch);
    static Term boolean(bool value);
    static Term false_() { return boolean(false); }
    static Term true_() { return boolean(true); }
    static Term zero(QType type);
    static Term scale(Amplitude amplitude, Term body);
    static Term sup(Term left, Term right);
    static Term call(std::string name, std::vector<Term> args);

    TermKind kind() const;
    bool is(TermKind k) const { return kind() == k; }

    /// Variable or callee name.
    const std::string& name() const;
    const Pattern& pattern() const;
    Amplitude amplitude() const;
    /// Type annotation of a zero vector.
    const QType& annotation() const;

    std::span<const Term> children() const;
    const Term& child(std::size_t i) const;
    std::size_t arity() const { return children().size(); }

    Term with_child(std::size_t i, Term replacement) const;
    Term with_span(SourceSpan span) const;
    const std::optional<SourceSpan>& span() const;

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// Structural equality ignoring spans; amplitudes compared within `tolerance`.
bool structurally_equal(const Term& a, const Term& b, double tolerance = 0.0);

std::set<std::string> free_vars(const Term& t);
/// Every identifier that occurs anywhere in `t`, bound or free.
std::set<std::string> all_names(const Term& t);
bool contains_quantum_syntax(const Term& t);

/// `base` if untaken, else the first of base', base'2, base'3, ... not in
/// `taken`.
std::string fresh_name(std::string_view base, const std::set<std::string>& taken);

/// 1_• = (), 1_{Γ,x:σ} = (1_Γ, x).
Term identity_term(const Context& ctx);

/// let* • = u in t ≡ t; let* Γ,x:σ = u in t ≡ let (x_r, x) = u in let* Γ = x_r in t.
/// The x_r names are freshened against u, t and ctx.
Term let_star(const Context& ctx, const Term& bound, const Term& body);

// ---------------------------------------------------------------------------
// Values

/// Classical value term: x | () | false | true | (v, w).
class CVal {
public:
    static CVal var(std::string name);
    static CVal unit();
    static CVal boolean(bool value);
    static CVal pair(const CVal& a, const CVal& b);
    static std::optional<CVal> from_term(const Term& t);

    const Term& term() const { return term_; }

private:
    explicit CVal(Term t) : term_(std::move(t)) {}
    Term term_;
};

/// u[val/p]. Throws ShapeMismatch if a pair pattern meets a non-pair value.
Term substitute(const Term& body, const CVal& val, const Pattern& pat);

/// Quantum value tree: val v | 0 | v + w | κ * v.
class QVal {
public:
    enum class Kind { Leaf, Zero, Sum, Scale };

    static QVal leaf(CVal value);
    static QVal zero(QType type);
    static QVal sum(QVal left, QVal right);
    static QVal scale(Amplitude amplitude, QVal inner);

    Kind kind() const;
    const CVal& value() const;
    const QType& zero_type() const;
    const QVal& left() const;
    const QVal& right() const;
    /// The scaled subtree of a Scale node.
    const QVal& inner() const;
    Amplitude amplitude() const;

    Term to_term() const;

private:
    struct Node;
    explicit QVal(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Pretty printing (emits the concrete grammar accepted by the parser)

struct PrintOptions {
    /// Significant digits for amplitudes. 17 round-trips doubles exactly.
    int precision = 17;
};

std::string format_amplitude(Amplitude a, int precision = 17);
std::string to_source(const Pattern& p);
std::string to_source(const Term& t, PrintOptions options = {});

}  // namespace qml
