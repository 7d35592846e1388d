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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "generator.hpp"
#include "oracle.hpp"
#include "qml/equations.hpp"
#include "qml/normalizer.hpp"
#include "qml/parser.hpp"
#include "qml/semantics.hpp"
#include "qml/typecheck.hpp"

namespace {

using namespace qml;
using testing::Flavor;
using testing::Sample;
using testing::TermGenerator;

constexpr double kAmpTol = 1e-9;    // amplitudes, denotations, isometry
constexpr double kQuoteTol = 1e-8;  // quote properties: two float sqrt layers

const double s = 1 / std::numbers::sqrt2;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failure; later ones only bump the count.
class Tally {
public:
    void check(bool ok, const std::string& what) {
        ++total_;
        if (ok) return;
        if (std::getenv("QML_ACCEPTANCE_VERBOSE")) std::fprintf(stderr, "  failure: %s\n", what.c_str());
        if (failed_++ == 0) first_ = what;
    }
    Outcome done(const std::string& summary) const {
        if (failed_ == 0) return {true, summary};
        return {false, std::to_string(failed_) + "/" + std::to_string(total_) + " failed; first: " + first_};
    }

private:
    int total_ = 0;
    int failed_ = 0;
    std::string first_;
};

std::string read_file(const std::string& name) {
    std::ifstream in(std::string(QML_TEST_DATA) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double max_diff(const LinMap& a, const LinMap& b) {
    double d = 0;
    for (std::size_t c = 0; c < a.cols(); ++c) {
        for (std::size_t r = 0; r < a.rows(); ++r) d = std::max(d, std::abs(a.at(r, c) - b.at(r, c)));
    }
    return d;
}

std::string src(const Term& t) { return to_source(t, {12}); }

Outcome hadamard_self_inverse() {
    Tally t;
    const Program hh = load_program(read_file("hh.qml"));
    const Program id = load_program(read_file("id.qml"));
    const EquivResult r = equiv(hh.context, hh.term, id.term);
    t.check(r.equivalent, "equiv reports DISTINCT");
    t.check(r.normal_forms_agree, "normal forms differ");
    t.check(src(r.nf_left) == "qif x then true else false", "nf(had(had x)) = " + src(r.nf_left));
    t.check(src(r.nf_right) == "qif x then true else false", "nf(x) = " + src(r.nf_right));
    t.check(max_diff(eval_quantum(hh.context, hh.term), eval_quantum(id.context, id.term)) <= kAmpTol,
            "denotations differ");
    return t.done("EQUIV; both normal forms are 'qif x then true else false'");
}

Outcome scaled_sum_is_false() {
    Tally t;
    const Program p = load_program(read_file("false_sum.qml"));
    const Term n = nf(p.context, p.term);
    t.check(src(n) == "false", "nf = " + src(n));
    const Vector v = eval_closed(p.term);
    t.check(std::abs(v[0] - 1.0) <= kAmpTol && std::abs(v[1]) <= kAmpTol, "residual amplitudes off");
    return t.done("nf is 'false'; residual amplitudes within 1e-9 of (1, 0)");
}

Outcome bell_state() {
    Tally t;
    const Program p = load_program(read_file("bell.qml"));
    const Vector v = eval_quantum(infer(p.context, p.term, false)).columns.at(0);
    const double want[4] = {0.7071067811865476, 0, 0, 0.7071067811865476};
    for (int i = 0; i < 4; ++i) {
        t.check(std::abs(v[i] - want[i]) <= kAmpTol, "amplitude " + std::to_string(i));
    }
    return t.done("amplitudes (0.7071067811865476, 0, 0, 0.7071067811865476)");
}

Outcome rejection_suite() {
    Tally t;
    auto kind = [](const Context& ctx, const Term& term) -> std::string {
        try {
            infer(ctx, term);
            return "accepted";
        } catch (const QmlError& e) {
            return e.what();
        }
    };
    const Program m = load_program(read_file("measure.qml"));
    const std::string km = kind(m.context, m.term);
    t.check(km == "UnusedVariable(y)", "discarding program: " + km);
    const Program n = load_program(read_file("notorth.qml"));
    const std::string kn = kind(n.context, n.term);
    t.check(kn.rfind("NotOrthogonal", 0) == 0, "constant qif: " + kn);
    return t.done("UnusedVariable(y); NotOrthogonal");
}

Outcome soundness_fuzz() {
    Tally t;
    TermGenerator gen(0x5eed0005);
    std::size_t terms = 0, instances = 0;
    for (const Sample& sm : gen.corpus(Flavor::Loose, 1000)) {
        ++terms;
        const LinMap before = eval_quantum(sm.ctx, sm.term);
        for (const RuleApp& app : enumerate_rule_instances(sm.ctx, sm.term)) {
            ++instances;
            const Term after = apply_rule(sm.ctx, sm.term, app);
            t.check(max_diff(before, eval_quantum(sm.ctx, after)) <= kAmpTol,
                    to_string(app) + " on " + src(sm.term));
        }
    }
    t.check(instances >= terms, "too few rule instances: " + std::to_string(instances));
    return t.done(std::to_string(terms) + " terms, " + std::to_string(instances) + " rule instances");
}

Outcome inversion_fuzz() {
    Tally t;
    TermGenerator gen(0x5eed0006);
    std::size_t n = 0;
    for (const Sample& sm : gen.corpus(Flavor::Strict, 1000)) {
        ++n;
        const Term once = nf(sm.ctx, sm.term);
        t.check(max_diff(eval_quantum(sm.ctx, once), eval_quantum(sm.ctx, sm.term)) <= kAmpTol,
                "denotation of nf differs for " + src(sm.term));
        const Term twice = nf(sm.ctx, once);
        t.check(structurally_equal(twice, once, kAmpTol), "nf not idempotent for " + src(sm.term));
    }
    return t.done(std::to_string(n) + " strict terms");
}

Outcome quote_properties() {
    Tally t;
    TermGenerator gen(0x5eed0007);
    const QType q1 = QType::q1(), q2 = QType::q2();
    const std::vector<QType> types = {q1, q2, QType::tensor(q2, q2), QType::tensor(QType::tensor(q2, q2), q2),
                                      QType::tensor(q2, QType::tensor(q2, q2))};
    auto close = [](const Vector& a, const Vector& b) { return vectors_close(a, b, kQuoteTol); };
    auto den = [](const Vector& v) { return qval_vector(v.type, quote_quantum(v)); };
    std::size_t n = 0;
    for (const QType& ty : types) {
        for (int i = 0; i < 500; ++i, ++n) {
            const Vector v = gen.unit_vector(ty);
            const Vector w = gen.unit_vector(ty);
            const Amplitude k = gen.amplitude();
            const std::string tag = to_string(ty) + " #" + std::to_string(i);
            t.check(close(den(k * v), k * den(v)), "scaling, " + tag);
            t.check(close(den(v + w), den(v) + den(w)), "additivity, " + tag);
            t.check(std::abs(vec_inner(den(v), den(w)) - vec_inner(v, w)) <= kQuoteTol, "inner product, " + tag);
            const IPResult syn = inner_product(quote_quantum(v).to_term(), quote_quantum(w).to_term());
            t.check(syn && std::abs(*syn - vec_inner(v, w)) <= kQuoteTol, "syntactic inner product, " + tag);
            const Vector a = gen.unit_vector(q2);
            const Vector pair = kron(a, v);
            const Term both = Term::pair(quote_value(a), quote_value(v));
            t.check(close(eval_closed(quote_value(pair)), eval_closed(both)), "tensor, " + tag);
        }
    }
    return t.done(std::to_string(n) + " vectors over 5 types up to Q2*Q2*Q2");
}

Outcome isometry_gate() {
    Tally t;
    TermGenerator gen(0x5eed0008);
    std::size_t strict = 0, rejected_non_iso = 0, n = 0;
    auto strict_ok = [](const Sample& sm) {
        try {
            infer(sm.ctx, sm.term, true);
            return true;
        } catch (const QmlError&) {
            return false;
        }
    };
    std::vector<Sample> corpus = gen.corpus(Flavor::Strict, 1000);
    for (Sample& sm : gen.corpus(Flavor::Loose, 1000)) corpus.push_back(std::move(sm));
    for (const Sample& sm : corpus) {
        ++n;
        const bool accepted = strict_ok(sm);
        const bool iso = is_isometry(eval_quantum(sm.ctx, sm.term), kAmpTol);
        if (accepted) {
            ++strict;
            t.check(iso, "strict-accepted but not an isometry: " + src(sm.term));
        }
        if (!iso) {
            t.check(!accepted, "non-isometry accepted: " + src(sm.term));
            ++rejected_non_iso;
        }
    }
    return t.done(std::to_string(n) + " terms; " + std::to_string(strict) + " strict-accepted, all isometries; " +
                  std::to_string(rejected_non_iso) + " non-isometries, all rejected");
}

Outcome classical_oracle() {
    Tally t;
    TermGenerator gen(0x5eed0009);
    const auto corpus = gen.corpus(Flavor::Classical, 600);
    NormalizeOptions o;
    o.classical = true;
    std::size_t pairs = 0, same = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Sample& a = corpus[i];
        const auto ta = testing::classical_table(a.ctx, a.term, a.type);
        t.check(eval_classical(a.ctx, a.term).map == ta, "eval_classical differs from oracle on " + src(a.term));
        // partners: a random corpus term at the same judgement, and a rewritten copy
        std::vector<Term> partners;
        for (std::size_t j = i + 1; j < corpus.size() && partners.empty(); ++j) {
            if (corpus[j].ctx == a.ctx && corpus[j].type == a.type) partners.push_back(corpus[j].term);
        }
        partners.push_back(nf(a.ctx, a.term, o));
        partners.push_back(Term::ifq(Term::true_(), a.term, a.term));
        for (const Term& b : partners) {
            bool eq_lib = false;
            try {
                eq_lib = equiv(a.ctx, a.term, b, o).equivalent;
            } catch (const QmlError& e) {
                t.check(false, std::string("equiv threw ") + e.what());
                continue;
            }
            const bool eq_oracle = ta == testing::classical_table(a.ctx, b, a.type);
            ++pairs;
            same += eq_oracle;
            t.check(eq_lib == eq_oracle, "verdict differs: " + src(a.term) + " vs " + src(b));
        }
    }
    return t.done(std::to_string(pairs) + " pairs (" + std::to_string(same) + " equal), exact agreement");
}

Outcome derivation_replay() {
    Tally t;
    const DerivationScript d = parse_derivation(read_file("hh.deriv"));
    bool ok = false;
    try {
        ok = check_derivation(d.context, d.start, d.steps, d.end);
    } catch (const QmlError& e) {
        t.check(false, e.what());
    }
    t.check(ok, "final term differs");
    const Program hh = load_program(read_file("hh.qml"));
    t.check(equiv(hh.context, hh.term, d.start).equivalent, "start term is not had(had x)");
    return t.done(std::to_string(d.steps.size()) + " steps from had(had x) to x");
}

Outcome monad_laws() {
    Tally t;
    TermGenerator gen(0x5eed0011);
    std::size_t n = 0;
    for (int i = 0; i < 300; ++i, ++n) {
        const QType a = gen.small_type(8), b = gen.small_type(8), c = gen.small_type(8);
        std::vector<Vector> fv, gv;
        for (std::size_t k = 0; k < a.dim(); ++k) fv.push_back(gen.random_vector(b));
        for (std::size_t k = 0; k < b.dim(); ++k) gv.push_back(gen.random_vector(c));
        const Vector v = gen.random_vector(a);
        auto f = [&](std::size_t k) { return fv[k]; };
        auto g = [&](std::size_t k) { return gv[k]; };
        for (std::size_t k = 0; k < a.dim(); ++k) {
            t.check(vectors_close(vec_bind(Vector::basis(a, k), b, f), fv[k], kAmpTol), "vector left unit");
        }
        t.check(vectors_close(vec_bind(v, a, [&](std::size_t k) { return Vector::basis(a, k); }), v, kAmpTol),
                "vector right unit");
        t.check(vectors_close(vec_bind(vec_bind(v, b, f), c, g),
                              vec_bind(v, c, [&](std::size_t k) { return vec_bind(f(k), c, g); }), kAmpTol),
                "vector associativity");

        // the same laws on value trees, compared through their denotations
        std::vector<QVal> fq, gq;
        for (const auto& x : fv) fq.push_back(quote_quantum(x));
        for (const auto& x : gv) gq.push_back(quote_quantum(x));
        auto fk = [&](const CVal& x) { return fq[basis_index(a, x)]; };
        auto gk = [&](const CVal& x) { return gq[basis_index(b, x)]; };
        const QVal qv = quote_quantum(v);
        for (std::size_t k = 0; k < a.dim(); ++k) {
            const QVal ret = QVal::leaf(quote_classical(a, k));
            t.check(vectors_close(qval_vector(b, qval_bind(ret, b, fk)), fv[k], kAmpTol), "value left unit");
        }
        t.check(vectors_close(qval_vector(a, qval_bind(qv, a, [](const CVal& x) { return QVal::leaf(x); })), v,
                              kAmpTol),
                "value right unit");
        const QVal lhs = qval_bind(qval_bind(qv, b, fk), c, gk);
        const QVal rhs = qval_bind(qv, c, [&](const CVal& x) { return qval_bind(fk(x), c, gk); });
        t.check(vectors_close(qval_vector(c, lhs), qval_vector(c, rhs), kAmpTol), "value associativity");
        t.check(vectors_close(qval_vector(c, lhs), vec_bind(vec_bind(v, b, f), c, g), 1e-8), "value vs vector bind");
    }
    return t.done(std::to_string(n) + " random (v, f, g) triples on vectors and value trees");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"hadamard self-inverse", hadamard_self_inverse},
        {"scaled sum simplifies to false", scaled_sum_is_false},
        {"bell state", bell_state},
        {"rejection suite", rejection_suite},
        {"soundness fuzz", soundness_fuzz},
        {"inversion/adequacy fuzz", inversion_fuzz},
        {"quote properties", quote_properties},
        {"isometry gate", isometry_gate},
        {"classical oracle", classical_oracle},
        {"derivation replay", derivation_replay},
        {"kleisli/monad laws", monad_laws},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("[%s] %2zu %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
