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

// Typing judgements Γ ⊢ t : σ (classical and quantum) and the strict
// judgement Γ ⊢° t : σ, together with the syntactic inner product used for
// its orthogonality side conditions.

#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>

#include "qml/syntax.hpp"

namespace qml {

struct TypecheckOptions {
    /// Enforce orthogonality and normalisation (⊢° instead of ⊢).
    bool strict = true;
    /// Reject zero/scale/sum (the classical fragment only).
    bool classical = false;
    double tolerance = kDefaultTolerance;
};

struct Judgement {
    Context ctx;
    Term term;
    QType type;
    bool strict = false;
    bool classical = false;
    /// Variables of ctx the term actually uses; the rest are all Q1.
    std::set<std::string> used;
    /// Squared norm every input basis state is mapped to. Strict judgements
    /// denote sqrt(norm2) times an isometry, and norm2 = 1 at top level.
    double norm2 = 1.0;
};

/// Throws TypeMismatch, UnknownVariable, UnusedVariable, Shadowing,
/// TypeClash, NotClassical, NotOrthogonal or NotNormalised. Errors carry
/// the span of the offending subterm when it has one.
Judgement infer(const Context& ctx, const Term& t, const TypecheckOptions& options = {});
Judgement infer(const Context& ctx, const Term& t, bool strict, double tolerance = kDefaultTolerance);

/// Restricts ctx to the variables used by t and by u respectively (shared
/// ones go to both). Throws UnusedVariable for a non-Q1 variable in neither
/// set and UnknownVariable for names missing from ctx.
std::pair<Context, Context> context_split(const Context& ctx, const std::set<std::string>& t_free,
                                          const std::set<std::string>& u_free);

/// ⟨t|u⟩, or nullopt when no clause applies (the "?" result).
using IPResult = std::optional<Amplitude>;

IPResult inner_product(const Term& t, const Term& u, double tolerance = kDefaultTolerance);

/// t ⊥ u: the syntactic inner product is a known ε-zero. Failing that, the
/// check is retried once on the normal forms of t and u in ctx, comparing
/// every pair of value leaves.
bool orthogonal(const Context& ctx, const Term& t, const Term& u, double tolerance = kDefaultTolerance);

/// Purely syntactic orthogonality, without the normal-form retry.
bool orthogonal_syntactic(const Term& t, const Term& u, double tolerance = kDefaultTolerance);

}  // namespace qml
