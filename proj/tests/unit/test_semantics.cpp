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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generator.hpp"
#include "oracle.hpp"
#include "qml/parser.hpp"
#include "qml/semantics.hpp"
#include "qml/typecheck.hpp"

namespace qml {
namespace {

const QType q1 = QType::q1();
const QType q2 = QType::q2();
const QType q22 = QType::tensor(q2, q2);
constexpr double kEps = 1e-9;
const double s = 1 / std::numbers::sqrt2;

LinMap from_columns(QType in, QType out, std::vector<std::vector<Amplitude>> cols) {
    LinMap m{in, out, {}};
    for (auto& c : cols) m.columns.emplace_back(out, std::move(c));
    return m;
}

TEST(Vector, Basics) {
    const Vector e1 = Vector::basis(q2, 1);
    EXPECT_EQ(e1.amps, (std::vector<Amplitude>{0, 1}));
    EXPECT_EQ(Vector::zeros(q22).dim(), 4u);
    const Vector k = kron(Vector::basis(q2, 1), Vector::basis(q2, 0));
    EXPECT_EQ(k.amps, (std::vector<Amplitude>{0, 0, 1, 0}));
    EXPECT_EQ(k.type, q22);
    EXPECT_DOUBLE_EQ((Amplitude(2) * e1 + Vector::basis(q2, 0)).norm2(), 5.0);
}

TEST(VecInner, ConjugateLinearInFirstArgument) {
    const Vector a(q2, {1, 0});
    const Vector b(q2, {0, 1});
    const Vector c(q2, {Amplitude(0, 1), 0});
    EXPECT_EQ(vec_inner(a, b), Amplitude(0));
    EXPECT_EQ(vec_inner(a, a), Amplitude(1));
    EXPECT_EQ(vec_inner(c, a), Amplitude(0, -1));
    EXPECT_THROW(vec_inner(a, Vector::zeros(q22)), QmlError);
}

TEST(IsIsometry, Examples) {
    const LinMap h = from_columns(q2, q2, {{s, s}, {s, -s}});
    EXPECT_TRUE(is_isometry(h));
    EXPECT_FALSE(is_isometry(from_columns(q1, q2, {{0, 0}})));
    EXPECT_TRUE(is_isometry(from_columns(q2, q2, {{1, 0}, {0, 1}})));
    EXPECT_TRUE(is_isometry(from_columns(q2, q22, {{1, 0, 0, 0}, {0, 0, 0, 1}})));
}

TEST(MorphismsOrthogonal, Examples) {
    const LinMap t = from_columns(q1, q2, {{0, 1}});
    const LinMap f = from_columns(q1, q2, {{1, 0}});
    EXPECT_TRUE(morphisms_orthogonal(t, f));
    const LinMap id = from_columns(q2, q2, {{1, 0}, {0, 1}});
    EXPECT_FALSE(morphisms_orthogonal(id, id));
    const LinMap neg = from_columns(q2, q2, {{0, 1}, {1, 0}});
    // <not e0 | id e1> = <e1|e1> = 1
    EXPECT_FALSE(morphisms_orthogonal(neg, id));
}

TEST(Env, DecomposeCompose) {
    const Context g{{"x", q2}, {"u", q1}, {"y", q22}};
    EXPECT_EQ(context_as_type(g).dim(), 8u);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(compose_env(g, decompose_env(g, i)), i);
    EXPECT_EQ(decompose_env(g, 6), (std::vector<std::size_t>{1, 0, 2}));
}

TEST(DeltaSplit, Examples) {
    const Context x{{"x", q2}};
    using P = std::pair<std::size_t, std::size_t>;
    EXPECT_EQ(delta_split(x, x), (std::vector<P>{{0, 0}, {1, 1}}));
    EXPECT_EQ(delta_split(x, Context{}), (std::vector<P>{{0, 0}, {1, 0}}));
    const Context c{{"c", q2}};
    // merged order is (x, c): right-exclusive first
    EXPECT_EQ(delta_split(c, x), (std::vector<P>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
}

TEST(DeltaSplit, InjectiveOnSharedDiagonal) {
    const Context g{{"x", q2}, {"y", q2}};
    const Context d{{"y", q2}, {"z", q2}};
    const auto split = delta_split(g, d);
    std::set<std::pair<std::size_t, std::size_t>> seen(split.begin(), split.end());
    EXPECT_EQ(seen.size(), split.size());
}

TEST(EvalClassical, Examples) {
    const ClassicalTable t = eval_classical(Context{}, Term::true_());
    EXPECT_EQ(t.map, std::vector<std::size_t>{1});
    const ClassicalTable id = eval_classical(Context{{"x", q2}}, Term::var("x"));
    EXPECT_EQ(id.map, (std::vector<std::size_t>{0, 1}));
    const ClassicalTable n = eval_classical(Context{{"x", q2}}, parse_term("qif x then false else true"));
    EXPECT_EQ(n.map, (std::vector<std::size_t>{1, 0}));
}

TEST(EvalQuantum, PlusState) {
    const Vector v = eval_closed(parse_term("{1/sqrt(2)}*false + {1/sqrt(2)}*true"));
    EXPECT_NEAR(std::abs(v[0] - s), 0, kEps);
    EXPECT_NEAR(std::abs(v[1] - s), 0, kEps);
}

TEST(EvalQuantum, HadamardBody) {
    const LinMap m = eval_quantum(Context{{"x", q2}},
                                  parse_term("qif x then {1/sqrt(2)}*false + {-1/sqrt(2)}*true "
                                             "else {1/sqrt(2)}*false + {1/sqrt(2)}*true"));
    const Amplitude want[2][2] = {{s, s}, {s, -s}};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(m.at(r, c) - want[r][c]), 0, kEps);
    }
    // H^2 = I
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const Amplitude sq = m.at(r, 0) * m.at(0, c) + m.at(r, 1) * m.at(1, c);
            EXPECT_NEAR(std::abs(sq - Amplitude(r == c ? 1 : 0)), 0, kEps);
        }
    }
}

TEST(EvalQuantum, ZeroColumn) {
    const Vector v = eval_closed(Term::zero(q2));
    EXPECT_EQ(v.amps, (std::vector<Amplitude>{0, 0}));
}

TEST(EvalQuantum, Bell) {
    const Program p = load_program(
        "def qnot (x : Q2) = qif x then false else true\n"
        "def cnot (c : Q2) (x : Q2) = qif c then (true, qnot x) else (false, x)\n"
        "main [] = cnot ({1/sqrt(2)}*false + {1/sqrt(2)}*true) false");
    const Vector v = eval_closed(p.term);
    const double want[4] = {0.7071067811865476, 0, 0, 0.7071067811865476};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(v[i] - want[i]), 0, kEps);
}

TEST(EvalQuantum, LiftOfClassical) {
    testing::TermGenerator gen(21);
    for (int i = 0; i < 200; ++i) {
        const auto sm = gen.accepted(testing::Flavor::Classical);
        ASSERT_TRUE(sm);
        EXPECT_TRUE(maps_close(eval_quantum(sm->ctx, sm->term), lift(eval_classical(sm->ctx, sm->term)), 0.0))
            << to_source(sm->term);
    }
}

TEST(EvalQuantum, AgreesWithReferenceInterpreter) {
    testing::TermGenerator gen(22);
    for (int i = 0; i < 400; ++i) {
        const auto sm = gen.accepted(testing::Flavor::Loose);
        ASSERT_TRUE(sm);
        const LinMap m = eval_quantum(sm->ctx, sm->term);
        const auto ref = testing::quantum_matrix(sm->ctx, sm->term, sm->type);
        ASSERT_EQ(m.cols(), ref.size());
        for (std::size_t c = 0; c < m.cols(); ++c) {
            for (std::size_t r = 0; r < m.rows(); ++r) {
                EXPECT_NEAR(std::abs(m.at(r, c) - ref[c][r]), 0, kEps) << to_source(sm->term);
            }
        }
    }
}

TEST(EvalQuantum, Linearity) {
    testing::TermGenerator gen(23);
    for (int i = 0; i < 200; ++i) {
        const auto a = gen.accepted(testing::Flavor::Loose);
        ASSERT_TRUE(a);
        const Amplitude k = gen.amplitude();
        const LinMap m = eval_quantum(a->ctx, a->term);
        const LinMap mk = eval_quantum(a->ctx, Term::scale(k, a->term));
        const LinMap m2 = eval_quantum(a->ctx, Term::sup(a->term, a->term));
        for (std::size_t c = 0; c < m.cols(); ++c) {
            for (std::size_t r = 0; r < m.rows(); ++r) {
                EXPECT_NEAR(std::abs(mk.at(r, c) - k * m.at(r, c)), 0, kEps);
                EXPECT_NEAR(std::abs(m2.at(r, c) - 2.0 * m.at(r, c)), 0, kEps);
            }
        }
    }
}

TEST(MonadLaws, VectorBind) {
    testing::TermGenerator gen(24);
    for (int i = 0; i < 100; ++i) {
        const QType a = gen.small_type(4);
        const QType b = gen.small_type(4);
        const QType c = gen.small_type(4);
        const Vector v = gen.random_vector(a);
        std::vector<Vector> fv, gv;
        for (std::size_t k = 0; k < a.dim(); ++k) fv.push_back(gen.random_vector(b));
        for (std::size_t k = 0; k < b.dim(); ++k) gv.push_back(gen.random_vector(c));
        auto f = [&](std::size_t k) { return fv[k]; };
        auto g = [&](std::size_t k) { return gv[k]; };
        auto ret = [&](std::size_t k) { return Vector::basis(a, k); };
        for (std::size_t k = 0; k < a.dim(); ++k) EXPECT_TRUE(vectors_close(vec_bind(Vector::basis(a, k), b, f), fv[k]));
        EXPECT_TRUE(vectors_close(vec_bind(v, a, ret), v));
        const Vector lhs = vec_bind(vec_bind(v, b, f), c, g);
        const Vector rhs = vec_bind(v, c, [&](std::size_t k) { return vec_bind(f(k), c, g); });
        EXPECT_TRUE(vectors_close(lhs, rhs));
    }
}

}  // namespace
}  // namespace qml
