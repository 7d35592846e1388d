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

#include "qml/typecheck.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "qml/normalizer.hpp"

namespace qml {

namespace {

Context restrict_to(const Context& ctx, const std::set<std::string>& names) {
    std::vector<Binding> out;
    for (const auto& b : ctx) {
        if (names.contains(b.name)) out.push_back(b);
    }
    return Context(std::move(out));
}

std::string fmt_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// Zero map regardless of input; may swallow any variable.
bool denotes_zero(const Term& t) {
    switch (t.kind()) {
        case TermKind::Zero: return true;
        case TermKind::Scale: return denotes_zero(t.child(0));
        case TermKind::Sup: return denotes_zero(t.child(0)) && denotes_zero(t.child(1));
        case TermKind::Pair: return denotes_zero(t.child(0)) || denotes_zero(t.child(1));
        case TermKind::Let: return denotes_zero(t.child(0)) || denotes_zero(t.child(1));
        case TermKind::IfQ: return denotes_zero(t.child(0)) || (denotes_zero(t.child(1)) && denotes_zero(t.child(2)));
        default: return false;
    }
}

struct Result {
    QType type;
    double norm2;
};

class Checker {
public:
    explicit Checker(const TypecheckOptions& opt, const Context& ctx) : opt_(opt), scope_(ctx.names()) {}

    Result go(const Context& ctx, const Term& t, std::optional<SourceSpan> near) {
        if (t.span()) near = t.span();
        if (!denotes_zero(t)) {
            const auto fv = free_vars(t);
            for (const auto& b : ctx) {
                if (!fv.contains(b.name) && b.type.kind() != QType::Kind::Q1) {
                    throw QmlError(ErrorKind::UnusedVariable, b.name, near);
                }
            }
        }
        switch (t.kind()) {
            case TermKind::Var: {
                const QType* ty = ctx.find(t.name());
                if (!ty) throw QmlError(ErrorKind::UnknownVariable, t.name(), near);
                return {*ty, 1.0};
            }
            case TermKind::Unit:
                return {QType::q1(), 1.0};
            case TermKind::False:
            case TermKind::True:
                return {QType::q2(), 1.0};
            case TermKind::Pair: {
                auto [c0, c1] = split(ctx, free_vars(t.child(0)), free_vars(t.child(1)));
                Result r0 = go(c0, t.child(0), near);
                Result r1 = go(c1, t.child(1), near);
                return {QType::tensor(r0.type, r1.type), r0.norm2 * r1.norm2};
            }
            case TermKind::Let:
                return let(ctx, t, near);
            case TermKind::IfQ:
                return ifq(ctx, t, near);
            case TermKind::Zero:
                quantum_only(t, near);
                return {t.annotation(), 0.0};
            case TermKind::Scale: {
                quantum_only(t, near);
                Result r = go(ctx, t.child(0), near);
                return {r.type, std::norm(t.amplitude()) * r.norm2};
            }
            case TermKind::Sup: {
                quantum_only(t, near);
                Result r0 = go(ctx, t.child(0), near);
                Result r1 = go(ctx, t.child(1), near);
                if (!(r0.type == r1.type)) {
                    throw QmlError(ErrorKind::TypeMismatch,
                                   "summands have types " + to_string(r0.type) + " and " + to_string(r1.type), near);
                }
                if (opt_.strict && !orthogonal(ctx, t.child(0), t.child(1), opt_.tolerance)) {
                    throw QmlError(ErrorKind::NotOrthogonal,
                                   to_source(t.child(0), {12}) + ", " + to_source(t.child(1), {12}), near);
                }
                return {r0.type, r0.norm2 + r1.norm2};
            }
            case TermKind::Call:
                throw QmlError(ErrorKind::UnknownIdentifier, t.name(), near);
        }
        throw QmlError(ErrorKind::TypeMismatch, "unknown term", near);
    }

private:
    void quantum_only(const Term& t, std::optional<SourceSpan> near) const {
        if (opt_.classical) throw QmlError(ErrorKind::NotClassical, to_source(t, {12}), near);
    }

    static std::pair<Context, Context> split(const Context& ctx, const std::set<std::string>& a,
                                             const std::set<std::string>& b) {
        return {restrict_to(ctx, a), restrict_to(ctx, b)};
    }

    Result let(const Context& ctx, const Term& t, std::optional<SourceSpan> near) {
        const Term& bound = t.child(0);
        const Term& body = t.child(1);
        const Pattern& pat = t.pattern();
        Result rb = go(restrict_to(ctx, free_vars(bound)), bound, near);

        std::vector<Binding> binds;
        if (pat.is_pair()) {
            if (!rb.type.is_tensor()) {
                throw QmlError(ErrorKind::TypeMismatch,
                               "pattern " + to_source(pat) + " against type " + to_string(rb.type), near);
            }
            binds.push_back({pat.first, rb.type.left()});
            binds.push_back({*pat.second, rb.type.right()});
        } else {
            binds.push_back({pat.first, rb.type});
        }
        for (const auto& b : binds) {
            if (scope_.contains(b.name)) throw QmlError(ErrorKind::Shadowing, b.name, near);
        }
        auto body_fv = free_vars(body);
        for (const auto& b : binds) body_fv.erase(b.name);
        Context body_ctx = restrict_to(ctx, body_fv);
        for (const auto& b : binds) {
            body_ctx = body_ctx.extended(b.name, b.type);
            scope_.insert(b.name);
        }
        Result ru = go(body_ctx, body, near);
        for (const auto& b : binds) scope_.erase(b.name);
        return {ru.type, rb.norm2 * ru.norm2};
    }

    Result ifq(const Context& ctx, const Term& t, std::optional<SourceSpan> near) {
        const Term& cond = t.child(0);
        const Term& a = t.child(1);
        const Term& b = t.child(2);
        auto branch_fv = free_vars(a);
        branch_fv.merge(free_vars(b));
        auto [cc, cb] = split(ctx, free_vars(cond), branch_fv);
        Result rc = go(cc, cond, near);
        if (!(rc.type == QType::q2())) {
            throw QmlError(ErrorKind::TypeMismatch, "condition has type " + to_string(rc.type), near);
        }
        Result ra = go(cb, a, near);
        Result rb = go(cb, b, near);
        if (!(ra.type == rb.type)) {
            throw QmlError(ErrorKind::TypeMismatch,
                           "branches have types " + to_string(ra.type) + " and " + to_string(rb.type), near);
        }
        if (opt_.strict && !opt_.classical) {
            if (!orthogonal(cb, a, b, opt_.tolerance)) {
                throw QmlError(ErrorKind::NotOrthogonal, to_source(a, {12}) + ", " + to_source(b, {12}), near);
            }
            if (std::abs(ra.norm2 - rb.norm2) > opt_.tolerance) {
                throw QmlError(ErrorKind::NotNormalised,
                               "branch norms " + fmt_real(ra.norm2) + " and " + fmt_real(rb.norm2), near);
            }
        }
        return {ra.type, rc.norm2 * ra.norm2};
    }

    const TypecheckOptions& opt_;
    std::set<std::string> scope_;
};

}  // namespace

std::pair<Context, Context> context_split(const Context& ctx, const std::set<std::string>& t_free,
                                          const std::set<std::string>& u_free) {
    for (const auto& set : {&t_free, &u_free}) {
        for (const auto& n : *set) {
            if (!ctx.contains(n)) throw QmlError(ErrorKind::UnknownVariable, n);
        }
    }
    for (const auto& b : ctx) {
        if (!t_free.contains(b.name) && !u_free.contains(b.name) && b.type.kind() != QType::Kind::Q1) {
            throw QmlError(ErrorKind::UnusedVariable, b.name);
        }
    }
    return {restrict_to(ctx, t_free), restrict_to(ctx, u_free)};
}

Judgement infer(const Context& ctx, const Term& t, const TypecheckOptions& options) {
    Checker checker(options, ctx);
    Result r = checker.go(ctx, t, t.span());
    const bool strict = options.strict && !options.classical;
    if (strict && std::abs(r.norm2 - 1.0) > options.tolerance) {
        throw QmlError(ErrorKind::NotNormalised, "squared norm " + fmt_real(r.norm2), t.span());
    }
    Judgement j{ctx, t, r.type, false, false, {}, 1.0};
    j.strict = strict;
    j.classical = options.classical;
    for (const auto& n : free_vars(t)) {
        if (ctx.contains(n)) j.used.insert(n);
    }
    j.norm2 = r.norm2;
    return j;
}

Judgement infer(const Context& ctx, const Term& t, bool strict, double tolerance) {
    TypecheckOptions opt;
    opt.strict = strict;
    opt.tolerance = tolerance;
    return infer(ctx, t, opt);
}

// ---------------------------------------------------------------------------
// Inner products

IPResult inner_product(const Term& t, const Term& u, double tolerance) {
    if (t.is(TermKind::Zero) || u.is(TermKind::Zero)) return Amplitude(0.0);
    if (t.is(TermKind::Scale)) {
        IPResult r = inner_product(t.child(0), u, tolerance);
        if (!r) return std::nullopt;
        return std::conj(t.amplitude()) * *r;
    }
    if (u.is(TermKind::Scale)) {
        IPResult r = inner_product(t, u.child(0), tolerance);
        if (!r) return std::nullopt;
        return u.amplitude() * *r;
    }
    if (t.is(TermKind::Sup)) {
        IPResult a = inner_product(t.child(0), u, tolerance);
        if (!a) return std::nullopt;
        IPResult b = inner_product(t.child(1), u, tolerance);
        if (!b) return std::nullopt;
        return *a + *b;
    }
    if (u.is(TermKind::Sup)) {
        IPResult a = inner_product(t, u.child(0), tolerance);
        if (!a) return std::nullopt;
        IPResult b = inner_product(t, u.child(1), tolerance);
        if (!b) return std::nullopt;
        return *a + *b;
    }
    if (structurally_equal(t, u)) return Amplitude(1.0);
    const bool tb = t.is(TermKind::False) || t.is(TermKind::True);
    const bool ub = u.is(TermKind::False) || u.is(TermKind::True);
    if (tb && ub) return Amplitude(t.kind() == u.kind() ? 1.0 : 0.0);
    if (t.is(TermKind::Pair) && u.is(TermKind::Pair)) {
        IPResult a = inner_product(t.child(0), u.child(0), tolerance);
        if (a && std::abs(*a) <= tolerance) return Amplitude(0.0);
        IPResult b = inner_product(t.child(1), u.child(1), tolerance);
        if (b && std::abs(*b) <= tolerance) return Amplitude(0.0);
        if (!a || !b) return std::nullopt;
        return *a * *b;
    }
    return std::nullopt;
}

bool orthogonal_syntactic(const Term& t, const Term& u, double tolerance) {
    IPResult r = inner_product(t, u, tolerance);
    return r && std::abs(*r) <= tolerance;
}

namespace {

void collect_leaves(const Term& t, std::vector<Term>& out) {
    switch (t.kind()) {
        case TermKind::Let:
            collect_leaves(t.child(1), out);
            return;
        case TermKind::IfQ:
            collect_leaves(t.child(1), out);
            collect_leaves(t.child(2), out);
            return;
        default:
            out.push_back(t);
    }
}

}  // namespace

bool orthogonal(const Context& ctx, const Term& t, const Term& u, double tolerance) {
    if (orthogonal_syntactic(t, u, tolerance)) return true;
    std::vector<Term> lt;
    std::vector<Term> lu;
    try {
        NormalizeOptions opt;
        opt.tolerance = tolerance;
        collect_leaves(nf(ctx, t, opt), lt);
        collect_leaves(nf(ctx, u, opt), lu);
    } catch (const QmlError&) {
        return false;
    }
    for (const auto& a : lt) {
        for (const auto& b : lu) {
            if (!orthogonal_syntactic(a, b, tolerance)) return false;
        }
    }
    return true;
}

}  // namespace qml
