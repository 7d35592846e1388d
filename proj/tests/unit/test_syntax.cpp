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

#include "generator.hpp"
#include "qml/parser.hpp"
#include "qml/syntax.hpp"
#include "qml/typecheck.hpp"

namespace qml {
namespace {

const QType q1 = QType::q1();
const QType q2 = QType::q2();

TEST(QTypeTest, Dimensions) {
    EXPECT_EQ(q1.dim(), 1u);
    EXPECT_EQ(q2.dim(), 2u);
    EXPECT_EQ(QType::tensor(q2, QType::tensor(q2, q2)).dim(), 8u);
    EXPECT_EQ(QType::tensor(q1, q2).dim(), 2u);
}

TEST(QTypeTest, Printing) {
    EXPECT_EQ(to_string(QType::tensor(QType::tensor(q2, q2), q2)), "Q2 * Q2 * Q2");
    EXPECT_EQ(to_string(QType::tensor(q2, QType::tensor(q1, q2))), "Q2 * (Q1 * Q2)");
}

TEST(ContextTest, DuplicateNamesRejected) {
    try {
        Context c{{"x", q2}, {"x", q2}};
        FAIL() << "expected Shadowing";
    } catch (const QmlError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Shadowing);
        EXPECT_EQ(e.detail(), "x");
    }
}

TEST(MergeContexts, SharedVariable) {
    const MergedContext m = merge_contexts(Context{{"x", q2}}, Context{{"x", q2}});
    EXPECT_EQ(m.context, (Context{{"x", q2}}));
    ASSERT_EQ(m.slots.size(), 1u);
    EXPECT_EQ(m.slots[0], Slot::Shared);
}

TEST(MergeContexts, LeftUnit) {
    const MergedContext m = merge_contexts(Context{}, Context{{"y", q1}});
    EXPECT_EQ(m.context, (Context{{"y", q1}}));
    EXPECT_EQ(m.slots, std::vector<Slot>{Slot::Right});
}

TEST(MergeContexts, TypeClash) {
    try {
        merge_contexts(Context{{"x", q2}}, Context{{"x", q1}});
        FAIL();
    } catch (const QmlError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::TypeClash);
        EXPECT_EQ(e.detail(), "x");
    }
}

TEST(MergeContexts, IdempotentAndDimensionDivides) {
    const Context g{{"x", q2}, {"y", q2}};
    const MergedContext m = merge_contexts(g, g);
    EXPECT_EQ(m.context, g);
    for (Slot s : m.slots) EXPECT_EQ(s, Slot::Shared);

    const Context d{{"y", q2}, {"z", q2}};
    const MergedContext gd = merge_contexts(g, d);
    const MergedContext dg = merge_contexts(d, g);
    EXPECT_EQ(gd.context.names(), dg.context.names());
    const std::size_t prod = context_as_type(g).dim() * context_as_type(d).dim();
    EXPECT_EQ(prod % context_as_type(gd.context).dim(), 0u);
}

TEST(ContextAsType, LeftNested) {
    EXPECT_EQ(context_as_type(Context{}), q1);
    EXPECT_EQ(context_as_type(Context{{"x", q2}}), QType::tensor(q1, q2));
    EXPECT_EQ(context_as_type(Context{{"x", q2}, {"y", q1}}), QType::tensor(QType::tensor(q1, q2), q1));
}

TEST(IdentityTerm, Shapes) {
    EXPECT_EQ(to_source(identity_term(Context{})), "()");
    EXPECT_EQ(to_source(identity_term(Context{{"x", q2}})), "((), x)");
    EXPECT_EQ(to_source(identity_term(Context{{"x", q2}, {"y", q2}})), "(((), x), y)");
}

TEST(IdentityTerm, TypechecksAtContextType) {
    const Context g{{"x", q2}, {"y", QType::tensor(q2, q2)}, {"z", q1}};
    const Judgement j = infer(g, identity_term(g));
    EXPECT_EQ(j.type, context_as_type(g));
}

TEST(LetStar, EmptyContextIsBody) {
    const Term body = Term::true_();
    EXPECT_TRUE(structurally_equal(let_star(Context{}, Term::var("u"), body), body));
}

TEST(LetStar, OneVariable) {
    const Term t = let_star(Context{{"x", q2}}, Term::var("u"), Term::var("x"));
    ASSERT_TRUE(t.is(TermKind::Let));
    EXPECT_TRUE(t.pattern().is_pair());
    EXPECT_EQ(*t.pattern().second, "x");
    EXPECT_TRUE(structurally_equal(t.child(1), Term::var("x")));
}

TEST(LetStar, TwoVariablesComposeWithIdentity) {
    const Context g{{"x", q2}, {"y", q2}};
    const Context outer{{"a", q2}, {"b", q2}};
    const Term t = let_star(g, identity_term(outer), Term::pair(Term::var("x"), Term::var("y")));
    ASSERT_TRUE(t.is(TermKind::Let));
    EXPECT_EQ(*t.pattern().second, "y");
    ASSERT_TRUE(t.child(1).is(TermKind::Let));
    EXPECT_EQ(*t.child(1).pattern().second, "x");
    EXPECT_EQ(infer(outer, t).type, QType::tensor(q2, q2));
}

TEST(Substitute, DuplicatesUnderSharing) {
    const Term r = substitute(Term::pair(Term::var("x"), Term::var("x")), CVal::boolean(true), Pattern::var("x"));
    EXPECT_EQ(to_source(r), "(true, true)");
}

TEST(Substitute, DirectReplacement) {
    const Term body = parse_term("qif x then false else true");
    EXPECT_EQ(to_source(substitute(body, CVal::boolean(true), Pattern::var("x"))), "qif true then false else true");
}

TEST(Substitute, SecondProjection) {
    const CVal v = CVal::pair(CVal::boolean(false), CVal::boolean(true));
    EXPECT_EQ(to_source(substitute(Term::var("y"), v, Pattern::pair("x", "y"))), "true");
}

TEST(Substitute, ShapeMismatch) {
    try {
        substitute(Term::var("y"), CVal::boolean(true), Pattern::pair("x", "y"));
        FAIL();
    } catch (const QmlError& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
    }
}

TEST(Substitute, PreservesTyping) {
    const Context d{{"c", q2}};
    const Term u = parse_term("qif c then (true, p) else (false, p)");
    const Term r = substitute(u, CVal::boolean(false), Pattern::var("p"));
    EXPECT_EQ(infer(d, r, false).type, QType::tensor(q2, q2));
}

TEST(Amplitude, NonFiniteRejected) {
    EXPECT_THROW(checked_amplitude({std::nan(""), 0}), QmlError);
    EXPECT_THROW(Term::scale({INFINITY, 0}, Term::true_()), QmlError);
}

TEST(FreshName, AvoidsTaken) {
    EXPECT_EQ(fresh_name("x", {"y"}), "x");
    const std::string n = fresh_name("x", {"x", "x'"});
    EXPECT_NE(n, "x");
    EXPECT_NE(n, "x'");
}

TEST(Printer, Amplitudes) {
    EXPECT_EQ(format_amplitude({0.5, 0}), "0.5");
    EXPECT_EQ(format_amplitude({0, -2}), "-2*i");
    EXPECT_EQ(format_amplitude({1, 1}), "1+1*i");
    EXPECT_EQ(format_amplitude({1, -0.25}), "1-0.25*i");
    EXPECT_EQ(format_amplitude({0, 0}), "0");
}

TEST(Printer, PrecedenceAndAssociativity) {
    const Term a = Term::sup(Term::sup(Term::true_(), Term::false_()), Term::true_());
    EXPECT_EQ(to_source(a), "true + false + true");
    const Term b = Term::sup(Term::true_(), Term::sup(Term::false_(), Term::true_()));
    EXPECT_EQ(to_source(b), "true + (false + true)");
    const Term c = Term::scale(0.5, Term::sup(Term::true_(), Term::false_()));
    EXPECT_EQ(to_source(c), "{0.5} * (true + false)");
    EXPECT_EQ(to_source(Term::zero(QType::tensor(q2, q2))), "zero[Q2 * Q2]");
}

TEST(Printer, RoundTripOnGeneratedTerms) {
    testing::TermGenerator gen(11);
    for (auto flavor : {testing::Flavor::Loose, testing::Flavor::Strict, testing::Flavor::Classical}) {
        for (int i = 0; i < 300; ++i) {
            const testing::Sample s = gen.draw(flavor);
            const std::string src = to_source(s.term);
            const Term back = parse_term(src);
            EXPECT_TRUE(structurally_equal(back, s.term)) << src;
            EXPECT_EQ(to_source(back), src);
        }
    }
}

TEST(FreeVars, LetBindsPattern) {
    const Term t = parse_term("let (a, b) = x in (a, y)");
    EXPECT_EQ(free_vars(t), (std::set<std::string>{"x", "y"}));
    EXPECT_TRUE(all_names(t).contains("b"));
}

TEST(QuantumSyntax, Detection) {
    EXPECT_FALSE(contains_quantum_syntax(parse_term("qif x then (true, y) else (false, y)")));
    EXPECT_TRUE(contains_quantum_syntax(parse_term("(x, zero[Q2])")));
    EXPECT_TRUE(contains_quantum_syntax(parse_term("{1}*x")));
}

TEST(QValTest, InjectsIntoTerms) {
    const QVal v = QVal::sum(QVal::scale(0.5, QVal::leaf(CVal::boolean(false))), QVal::zero(q2));
    EXPECT_EQ(to_source(v.to_term()), "{0.5} * false + zero[Q2]");
}

}  // namespace
}  // namespace qml
