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

#include "qml/normalizer.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <string>

#include "qml/typecheck.hpp"

namespace qml {

CVal quote_classical(const QType& type, std::size_t index) {
    switch (type.kind()) {
        case QType::Kind::Q1:
            return CVal::unit();
        case QType::Kind::Q2:
            return CVal::boolean(index == 1);
        case QType::Kind::Tensor: {
            const std::size_t n = type.right().dim();
            return CVal::pair(quote_classical(type.left(), index / n), quote_classical(type.right(), index % n));
        }
    }
    return CVal::unit();
}

std::size_t basis_index(const QType& type, const CVal& value) {
    const Term& t = value.term();
    switch (t.kind()) {
        case TermKind::Unit:
            if (type.kind() == QType::Kind::Q1) return 0;
            break;
        case TermKind::False:
        case TermKind::True:
            if (type.kind() == QType::Kind::Q2) return t.is(TermKind::True) ? 1 : 0;
            break;
        case TermKind::Pair:
            if (type.is_tensor()) {
                const auto a = basis_index(type.left(), *CVal::from_term(t.child(0)));
                const auto b = basis_index(type.right(), *CVal::from_term(t.child(1)));
                return a * type.right().dim() + b;
            }
            break;
        default:
            break;
    }
    throw QmlError(ErrorKind::TypeMismatch, to_source(t) + " is not a closed value of type " + to_string(type));
}

ProbDist fst_dist(const Vector& v) {
    if (!v.type.is_tensor()) throw QmlError(ErrorKind::TypeMismatch, "fst of " + to_string(v.type));
    const std::size_t n = v.type.right().dim();
    ProbDist p{v.type.left(), std::vector<double>(v.type.left().dim())};
    for (std::size_t x = 0; x < p.probs.size(); ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < n; ++y) s += std::norm(v.amps[x * n + y]);
        p.probs[x] = std::sqrt(s);
    }
    return p;
}

ProbDist pinv(const ProbDist& p, double tolerance) {
    ProbDist out = p;
    for (auto& x : out.probs) x = std::abs(x) <= tolerance ? 0.0 : 1.0 / x;
    return out;
}

Vector prob_scale(const ProbDist& p, const Vector& v) {
    if (!(p.type == v.type)) throw QmlError(ErrorKind::TypeMismatch, "distribution and vector types differ");
    Vector out = v;
    for (std::size_t i = 0; i < out.dim(); ++i) out.amps[i] *= p.probs[i];
    return out;
}

QVal qval_bind(const QVal& v, const QType& result, const std::function<QVal(const CVal&)>& f) {
    switch (v.kind()) {
        case QVal::Kind::Leaf: return f(v.value());
        case QVal::Kind::Zero: return QVal::zero(result);
        case QVal::Kind::Sum: return QVal::sum(qval_bind(v.left(), result, f), qval_bind(v.right(), result, f));
        case QVal::Kind::Scale: return QVal::scale(v.amplitude(), qval_bind(v.inner(), result, f));
    }
    return QVal::zero(result);
}

QVal prob_scale(const ProbDist& p, const QVal& v) {
    return qval_bind(v, p.type, [&](const CVal& x) {
        return QVal::scale(p.probs.at(basis_index(p.type, x)), QVal::leaf(x));
    });
}

Vector qval_vector(const QType& type, const QVal& v) {
    switch (v.kind()) {
        case QVal::Kind::Leaf: return Vector::basis(type, basis_index(type, v.value()));
        case QVal::Kind::Zero: return Vector::zeros(type);
        case QVal::Kind::Sum: return qval_vector(type, v.left()) + qval_vector(type, v.right());
        case QVal::Kind::Scale: return v.amplitude() * qval_vector(type, v.inner());
    }
    return Vector::zeros(type);
}

QVal quote_quantum(const Vector& v, double tolerance) {
    const QType& type = v.type;
    switch (type.kind()) {
        case QType::Kind::Q1:
            return QVal::scale(v.amps[0], QVal::leaf(CVal::unit()));
        case QType::Kind::Q2:
            return QVal::sum(QVal::scale(v.amps[1], QVal::leaf(CVal::boolean(true))),
                             QVal::scale(v.amps[0], QVal::leaf(CVal::boolean(false))));
        case QType::Kind::Tensor:
            break;
    }
    const QType& left = type.left();
    const QType& right = type.right();
    const std::size_t n = right.dim();
    const ProbDist p = fst_dist(v);
    const ProbDist inv = pinv(p, tolerance);
    std::vector<Amplitude> first(p.probs.begin(), p.probs.end());
    const QVal outer = quote_quantum(Vector(left, std::move(first)), tolerance);
    return qval_bind(outer, type, [&](const CVal& x) {
        const std::size_t xi = basis_index(left, x);
        Vector row = Vector::zeros(right);
        for (std::size_t y = 0; y < n; ++y) row.amps[y] = inv.probs[xi] * v.amps[xi * n + y];
        return qval_bind(quote_quantum(row, tolerance), type,
                         [&](const CVal& y) { return QVal::leaf(CVal::pair(x, y)); });
    });
}

namespace {

std::optional<Term> prune_rec(const QVal& v, double tol) {
    switch (v.kind()) {
        case QVal::Kind::Leaf:
            return v.value().term();
        case QVal::Kind::Zero:
            return std::nullopt;
        case QVal::Kind::Scale: {
            const Amplitude k = v.amplitude();
            if (std::abs(k) <= tol) return std::nullopt;
            auto inner = prune_rec(v.inner(), tol);
            if (!inner) return std::nullopt;
            if (std::abs(k - Amplitude(1.0)) <= tol) return inner;
            return Term::scale(k, *inner);
        }
        case QVal::Kind::Sum: {
            auto a = prune_rec(v.left(), tol);
            auto b = prune_rec(v.right(), tol);
            if (!a) return b;
            if (!b) return a;
            return Term::sup(*a, *b);
        }
    }
    return std::nullopt;
}

}  // namespace

Term prune(const QVal& v, const QType& type, double tolerance) {
    auto t = prune_rec(v, tolerance);
    return t ? *t : Term::zero(type);
}

Term quote_value(const Vector& v, double tolerance) { return prune(quote_quantum(v, tolerance), v.type, tolerance); }

namespace {

struct Flattened {
    Context flat;
    std::vector<std::pair<Pattern, std::string>> lets;  // outermost first
};

void flatten_entry(const std::string& name, const QType& type, std::set<std::string>& taken,
                   std::vector<Binding>& flat, std::vector<std::pair<Pattern, std::string>>& lets) {
    if (!type.is_tensor()) {
        flat.push_back(Binding{name, type});
        return;
    }
    std::string a = fresh_name(name + "1", taken);
    taken.insert(a);
    std::string b = fresh_name(name + "2", taken);
    taken.insert(b);
    lets.emplace_back(Pattern::pair(a, b), name);
    flatten_entry(a, type.left(), taken, flat, lets);
    flatten_entry(b, type.right(), taken, flat, lets);
}

Flattened flatten(const Context& ctx) {
    std::set<std::string> taken = ctx.names();
    std::vector<Binding> flat;
    Flattened out;
    for (const auto& b : ctx) flatten_entry(b.name, b.type, taken, flat, out.lets);
    out.flat = Context(std::move(flat));
    return out;
}

// Recursion on the last entry of the flattened context. `cols` holds one
// leaf term per environment of ctx[0..k).
Term quote_flat(const Context& ctx, std::size_t k, const std::vector<Term>& cols) {
    if (k == 0) return cols.at(0);
    const Binding& last = ctx.entries()[k - 1];
    if (last.type.kind() == QType::Kind::Q1) return quote_flat(ctx, k - 1, cols);
    std::vector<Term> h0;
    std::vector<Term> h1;
    for (std::size_t g = 0; g < cols.size() / 2; ++g) {
        h0.push_back(cols[2 * g]);
        h1.push_back(cols[2 * g + 1]);
    }
    return Term::ifq(Term::var(last.name), quote_flat(ctx, k - 1, h1), quote_flat(ctx, k - 1, h0));
}

Term quote_with_leaves(const Context& ctx, const std::vector<Term>& leaves) {
    const Flattened f = flatten(ctx);
    Term body = quote_flat(f.flat, f.flat.size(), leaves);
    for (auto it = f.lets.rbegin(); it != f.lets.rend(); ++it) {
        body = Term::let(it->first, Term::var(it->second), body);
    }
    return body;
}

}  // namespace

Term quote_open(const Context& ctx, const LinMap& m, double tolerance) {
    if (!(m.in_type == context_as_type(ctx))) {
        throw QmlError(ErrorKind::TypeMismatch, "map input " + to_string(m.in_type) + " for context " + to_string(ctx));
    }
    std::vector<Term> leaves;
    leaves.reserve(m.cols());
    for (const auto& col : m.columns) leaves.push_back(quote_value(col, tolerance));
    return quote_with_leaves(ctx, leaves);
}

Term quote_open_classical(const Context& ctx, const ClassicalTable& table) {
    if (!(table.in_type == context_as_type(ctx))) {
        throw QmlError(ErrorKind::TypeMismatch,
                       "table input " + to_string(table.in_type) + " for context " + to_string(ctx));
    }
    std::vector<Term> leaves;
    leaves.reserve(table.map.size());
    for (std::size_t v : table.map) leaves.push_back(quote_classical(table.out_type, v).term());
    return quote_with_leaves(ctx, leaves);
}

Term nf(const Context& ctx, const Term& t, const NormalizeOptions& options) {
    if (options.classical) return quote_open_classical(ctx, eval_classical(ctx, t));
    return quote_open(ctx, eval_quantum(ctx, t), options.tolerance);
}

EquivResult equiv(const Context& ctx, const Term& t, const Term& u, const NormalizeOptions& options) {
    TypecheckOptions topt;
    topt.strict = false;
    topt.classical = options.classical;
    topt.tolerance = options.tolerance;
    const Judgement jt = infer(ctx, t, topt);
    const Judgement ju = infer(ctx, u, topt);
    if (!(jt.type == ju.type)) {
        throw QmlError(ErrorKind::TypeMismatch, to_string(jt.type) + " vs " + to_string(ju.type));
    }
    EquivResult r;
    if (options.classical) {
        const ClassicalTable a = eval_classical(jt);
        const ClassicalTable b = eval_classical(ju);
        r.equivalent = a.map == b.map;
        r.nf_left = quote_open_classical(ctx, a);
        r.nf_right = quote_open_classical(ctx, b);
    } else {
        const LinMap a = eval_quantum(jt);
        const LinMap b = eval_quantum(ju);
        r.equivalent = maps_close(a, b, options.tolerance);
        r.nf_left = quote_open(ctx, a, options.tolerance);
        r.nf_right = quote_open(ctx, b, options.tolerance);
    }
    r.normal_forms_agree = structurally_equal(r.nf_left, r.nf_right, options.tolerance);
    return r;
}

namespace {

Term delta_hat_rec(const Context& g, const Context& d, std::set<std::string>& taken) {
    if (g.empty()) return Term::pair(Term::unit(), identity_term(d));
    const Binding& x = g.entries().back();
    const Context g0 = g.without(x.name);
    const std::string gn = fresh_name("g", taken);
    taken.insert(gn);
    const std::string dn = fresh_name("d", taken);
    taken.insert(dn);

    if (!d.contains(x.name)) {
        Term inner = delta_hat_rec(g0, d, taken);
        return Term::let(Pattern::pair(gn, dn), inner,
                         Term::pair(Term::pair(Term::var(gn), Term::var(x.name)), Term::var(dn)));
    }
    const Context d0 = d.without(x.name);
    Term inner = delta_hat_rec(g0, d0, taken);
    const Term right = [&]() -> Term {
        if (d.entries().back().name == x.name) return Term::pair(Term::var(dn), Term::var(x.name));
        // Reinsert x at its position in Δ, destructuring the rest apart.
        std::vector<Binding> renamed;
        std::vector<Term> ids;
        for (const auto& b : d) {
            if (b.name == x.name) {
                ids.push_back(Term::var(x.name));
                continue;
            }
            std::string n = fresh_name(b.name, taken);
            taken.insert(n);
            renamed.push_back(Binding{n, b.type});
            ids.push_back(Term::var(n));
        }
        Term id = Term::unit();
        for (const auto& v : ids) id = Term::pair(id, v);
        Term body = let_star(Context(renamed), Term::var(dn), id);
        taken.merge(all_names(body));
        return body;
    }();
    return Term::let(Pattern::pair(gn, dn), inner,
                     Term::pair(Term::pair(Term::var(gn), Term::var(x.name)), right));
}

}  // namespace

Term delta_hat(const Context& g, const Context& d) {
    std::set<std::string> taken = g.names();
    taken.merge(d.names());
    return delta_hat_rec(g, d, taken);
}

}  // namespace qml
