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

// Normalisation by evaluation: quote denotations back into canonical terms,
// and decide equivalence with them.

#pragma once

#include <functional>

#include "qml/semantics.hpp"
#include "qml/syntax.hpp"

namespace qml {

/// Non-negative weights over the basis of `type`.
struct ProbDist {
    QType type;
    std::vector<double> probs;
};

/// q^σ on a basis element: (), false/true, pairs.
CVal quote_classical(const QType& type, std::size_t index);

/// fst v x = sqrt(Σ_y |v(x,y)|²). Throws TypeMismatch unless v is a tensor.
ProbDist fst_dist(const Vector& v);

/// Entrywise reciprocal, with entries |p x| ≤ tolerance sent to 0.
ProbDist pinv(const ProbDist& p, double tolerance = kDefaultTolerance);

/// p*v, entrywise.
Vector prob_scale(const ProbDist& p, const Vector& v);
/// p*v = v >>= λx.(p x)*(val x), for closed values over p.type.
QVal prob_scale(const ProbDist& p, const QVal& v);

/// (val x) >>= f = f x; 0 >>= f = 0; (v+w) >>= f = (v >>= f) + (w >>= f);
/// (κ*v) >>= f = κ*(v >>= f). `result` types the zero case.
QVal qval_bind(const QVal& v, const QType& result, const std::function<QVal(const CVal&)>& f);

/// Basis index of a closed classical value of the given type.
std::size_t basis_index(const QType& type, const CVal& value);

/// Denotation of a closed quantum value.
Vector qval_vector(const QType& type, const QVal& v);

/// q^σ v, unsimplified: Q1 ↦ (v 0)*(); Q2 ↦ (v 1)*true + (v 0)*false; a
/// tensor becomes a value tree whose first level carries fst v and whose
/// second level carries v(x,y)/fst v x.
QVal quote_quantum(const Vector& v, double tolerance = kDefaultTolerance);

/// Drops ε-zero summands and amplitude-1 scalings; an all-zero tree becomes
/// zero[σ].
Term prune(const QVal& v, const QType& type, double tolerance = kDefaultTolerance);

/// prune ∘ quote_quantum.
Term quote_value(const Vector& v, double tolerance = kDefaultTolerance);

/// q_Γ^σ: canonical term for a map out of con(Γ). Tensor variables are
/// destructured first; then each Q2 variable becomes a qif (the last one
/// outermost, then-branch = true) and Q1 variables are dropped.
Term quote_open(const Context& ctx, const LinMap& m, double tolerance = kDefaultTolerance);
Term quote_open_classical(const Context& ctx, const ClassicalTable& table);

struct NormalizeOptions {
    bool classical = false;
    double tolerance = kDefaultTolerance;
};

/// q_Γ^σ(⟦Γ ⊢ t : σ⟧). Typechecks non-strictly first.
Term nf(const Context& ctx, const Term& t, const NormalizeOptions& options = {});

struct EquivResult {
    /// Denotations agree entrywise within tolerance.
    bool equivalent = false;
    /// The normal forms agree structurally (amplitudes within tolerance).
    bool normal_forms_agree = false;
    Term nf_left = Term::unit();
    Term nf_right = Term::unit();
};

/// Throws TypeMismatch when t and u have different types.
EquivResult equiv(const Context& ctx, const Term& t, const Term& u, const NormalizeOptions& options = {});

/// δ̂_{Γ,Δ}: a term in Γ⊗Δ of type con(Γ)⊗con(Δ) that denotes δ_{Γ,Δ}.
Term delta_hat(const Context& g, const Context& d);

}  // namespace qml
