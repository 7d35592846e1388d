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

#include "qml/semantics.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <optional>
#include <string>

namespace qml {

Vector::Vector(QType t, std::vector<Amplitude> a) : type(std::move(t)), amps(std::move(a)) {
    if (amps.size() != type.dim()) {
        throw QmlError(ErrorKind::TypeMismatch, "vector of length " + std::to_string(amps.size()) +
                                                    " for type " + to_string(type));
    }
}

Vector Vector::zeros(const QType& type) { return Vector(type, std::vector<Amplitude>(type.dim())); }

Vector Vector::basis(const QType& type, std::size_t index) {
    Vector v = zeros(type);
    v.amps.at(index) = 1.0;
    return v;
}

double Vector::norm2() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
}

Vector operator+(const Vector& v, const Vector& w) {
    if (!(v.type == w.type)) throw QmlError(ErrorKind::TypeMismatch, "vector sum");
    Vector out = v;
    for (std::size_t i = 0; i < out.dim(); ++i) out.amps[i] += w.amps[i];
    return out;
}

Vector operator*(Amplitude k, const Vector& v) {
    Vector out = v;
    for (auto& a : out.amps) a *= k;
    return out;
}

Vector kron(const Vector& v, const Vector& w) {
    Vector out = Vector::zeros(QType::tensor(v.type, w.type));
    const std::size_t n = w.dim();
    for (std::size_t a = 0; a < v.dim(); ++a) {
        if (v.amps[a] == Amplitude(0.0)) continue;
        for (std::size_t b = 0; b < n; ++b) out.amps[a * n + b] = v.amps[a] * w.amps[b];
    }
    return out;
}

Vector vec_bind(const Vector& v, const QType& out, const std::function<Vector(std::size_t)>& f) {
    Vector acc = Vector::zeros(out);
    for (std::size_t a = 0; a < v.dim(); ++a) {
        if (v.amps[a] == Amplitude(0.0)) continue;
        Vector fa = f(a);
        if (!(fa.type == out)) throw QmlError(ErrorKind::TypeMismatch, "bind continuation");
        for (std::size_t i = 0; i < acc.dim(); ++i) acc.amps[i] += v.amps[a] * fa.amps[i];
    }
    return acc;
}

Amplitude vec_inner(const Vector& v, const Vector& w) {
    if (!(v.type == w.type)) {
        throw QmlError(ErrorKind::TypeMismatch, to_string(v.type) + " vs " + to_string(w.type));
    }
    Amplitude s = 0.0;
    for (std::size_t i = 0; i < v.dim(); ++i) s += std::conj(v.amps[i]) * w.amps[i];
    return s;
}

bool vectors_close(const Vector& v, const Vector& w, double tolerance) {
    if (!(v.type == w.type)) return false;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (std::abs(v.amps[i] - w.amps[i]) > tolerance) return false;
    }
    return true;
}

bool maps_close(const LinMap& f, const LinMap& g, double tolerance) {
    if (!(f.in_type == g.in_type) || !(f.out_type == g.out_type)) return false;
    for (std::size_t c = 0; c < f.cols(); ++c) {
        if (!vectors_close(f.columns[c], g.columns[c], tolerance)) return false;
    }
    return true;
}

bool is_isometry(const LinMap& m, double tolerance) {
    for (std::size_t a = 0; a < m.cols(); ++a) {
        for (std::size_t b = a; b < m.cols(); ++b) {
            const Amplitude z = vec_inner(m.columns[a], m.columns[b]);
            const Amplitude want = a == b ? 1.0 : 0.0;
            if (std::abs(z - want) > tolerance) return false;
        }
    }
    return true;
}

bool morphisms_orthogonal(const LinMap& f, const LinMap& g, double tolerance) {
    if (!(f.in_type == g.in_type) || !(f.out_type == g.out_type)) {
        throw QmlError(ErrorKind::TypeMismatch, "morphisms of different types");
    }
    for (const auto& fa : f.columns) {
        for (const auto& gb : g.columns) {
            if (std::abs(vec_inner(fa, gb)) > tolerance) return false;
        }
    }
    return true;
}

std::vector<std::size_t> decompose_env(const Context& ctx, std::size_t index) {
    std::vector<std::size_t> out(ctx.size());
    for (std::size_t k = ctx.size(); k-- > 0;) {
        const std::size_t d = ctx.entries()[k].type.dim();
        out[k] = index % d;
        index /= d;
    }
    return out;
}

std::size_t compose_env(const Context& ctx, const std::vector<std::size_t>& values) {
    std::size_t index = 0;
    for (std::size_t k = 0; k < ctx.size(); ++k) index = index * ctx.entries()[k].type.dim() + values.at(k);
    return index;
}

std::vector<std::pair<std::size_t, std::size_t>> delta_split(const Context& g, const Context& d) {
    const MergedContext merged = merge_contexts(g, d);
    const Context& m = merged.context;
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const std::size_t n = context_as_type(m).dim();
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto vals = decompose_env(m, i);
        std::vector<std::size_t> gv(g.size());
        std::vector<std::size_t> dv(d.size());
        for (std::size_t k = 0; k < m.size(); ++k) {
            const auto& name = m.entries()[k].name;
            if (merged.slots[k] != Slot::Right) gv[*g.index_of(name)] = vals[k];
            if (merged.slots[k] != Slot::Left) dv[*d.index_of(name)] = vals[k];
        }
        out.emplace_back(compose_env(g, gv), compose_env(d, dv));
    }
    return out;
}

namespace {

// Evaluates at one basis environment (variable -> type, index); the
// denotation is the linear extension.
using Env = std::map<std::string, std::pair<QType, std::size_t>, std::less<>>;

class Evaluator {
public:
    Vector go(const Term& t, Env& env) {
        switch (t.kind()) {
            case TermKind::Var: {
                const auto& [type, idx] = env.at(t.name());
                return Vector::basis(type, idx);
            }
            case TermKind::Unit:
                return Vector::basis(QType::q1(), 0);
            case TermKind::False:
                return Vector::basis(QType::q2(), 0);
            case TermKind::True:
                return Vector::basis(QType::q2(), 1);
            case TermKind::Pair:
                return kron(go(t.child(0), env), go(t.child(1), env));
            case TermKind::Let: {
                const Vector bound = go(t.child(0), env);
                const Pattern& p = t.pattern();
                std::optional<Vector> acc;
                for (std::size_t a = 0; a < bound.dim(); ++a) {
                    if (bound.amps[a] == Amplitude(0.0)) continue;
                    Env inner = bind(env, p, bound.type, a);
                    Vector r = bound.amps[a] * go(t.child(1), inner);
                    acc = acc ? *acc + r : r;
                }
                if (acc) return *acc;
                Env inner = bind(env, p, bound.type, 0);
                return Vector::zeros(go(t.child(1), inner).type);
            }
            case TermKind::IfQ: {
                const Vector c = go(t.child(0), env);
                Vector then_v = go(t.child(1), env);
                Vector else_v = go(t.child(2), env);
                return c.amps[1] * then_v + c.amps[0] * else_v;
            }
            case TermKind::Zero:
                return Vector::zeros(t.annotation());
            case TermKind::Scale:
                return t.amplitude() * go(t.child(0), env);
            case TermKind::Sup:
                return go(t.child(0), env) + go(t.child(1), env);
            case TermKind::Call:
                break;
        }
        throw QmlError(ErrorKind::UnknownIdentifier, t.name());
    }

private:
    static Env bind(const Env& env, const Pattern& p, const QType& type, std::size_t a) {
        Env inner = env;
        if (p.is_pair()) {
            const std::size_t n = type.right().dim();
            inner.insert_or_assign(p.first, std::pair{type.left(), a / n});
            inner.insert_or_assign(*p.second, std::pair{type.right(), a % n});
        } else {
            inner.insert_or_assign(p.first, std::pair{type, a});
        }
        return inner;
    }
};

}  // namespace

LinMap eval_quantum(const Judgement& j) {
    LinMap m;
    m.in_type = context_as_type(j.ctx);
    m.out_type = j.type;
    const std::size_t n = m.in_type.dim();
    m.columns.reserve(n);
    Evaluator ev;
    for (std::size_t c = 0; c < n; ++c) {
        const auto vals = decompose_env(j.ctx, c);
        Env env;
        for (std::size_t k = 0; k < j.ctx.size(); ++k) {
            env.insert_or_assign(j.ctx.entries()[k].name, std::pair{j.ctx.entries()[k].type, vals[k]});
        }
        m.columns.push_back(ev.go(j.term, env));
    }
    return m;
}

ClassicalTable eval_classical(const Judgement& j) {
    if (contains_quantum_syntax(j.term)) throw QmlError(ErrorKind::NotClassical, to_source(j.term, {12}));
    const LinMap m = eval_quantum(j);
    ClassicalTable table{m.in_type, m.out_type, {}};
    table.map.reserve(m.cols());
    for (const auto& col : m.columns) {
        std::size_t hit = col.dim();
        for (std::size_t i = 0; i < col.dim(); ++i) {
            if (col.amps[i] == Amplitude(1.0)) {
                hit = i;
            } else if (col.amps[i] != Amplitude(0.0)) {
                hit = col.dim();
                break;
            }
        }
        assert(hit < col.dim());
        table.map.push_back(hit);
    }
    return table;
}

LinMap eval_quantum(const Context& ctx, const Term& t) { return eval_quantum(infer(ctx, t, false)); }

ClassicalTable eval_classical(const Context& ctx, const Term& t) {
    TypecheckOptions opt;
    opt.classical = true;
    return eval_classical(infer(ctx, t, opt));
}

Vector eval_closed(const Term& t) { return eval_quantum(Context{}, t).columns.at(0); }

LinMap lift(const ClassicalTable& table) {
    LinMap m{table.in_type, table.out_type, {}};
    for (std::size_t v : table.map) m.columns.push_back(Vector::basis(table.out_type, v));
    return m;
}

}  // namespace qml
