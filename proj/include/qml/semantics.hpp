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

// Denotations. Classical terms denote finite functions between basis sets;
// quantum terms denote linear maps between the free vector spaces on them.
//
// Basis layout: Q1 = {0}, Q2 = {0 = false, 1 = true}, and an element (a, b)
// of σ⊗τ has index a·dim(τ) + b. An environment for Γ is an element of
// con(Γ), so its first variable is the most significant digit.

#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "qml/syntax.hpp"
#include "qml/typecheck.hpp"

namespace qml {

struct Vector {
    QType type;
    std::vector<Amplitude> amps;  // length type.dim()

    Vector() = default;
    Vector(QType t, std::vector<Amplitude> a);
    static Vector zeros(const QType& type);
    /// return a: the point mass at basis index a.
    static Vector basis(const QType& type, std::size_t index);

    std::size_t dim() const { return amps.size(); }
    Amplitude operator[](std::size_t i) const { return amps[i]; }
    double norm2() const;
};

Vector operator+(const Vector& v, const Vector& w);
Vector operator*(Amplitude k, const Vector& v);
/// v ⊗ w over v.type ⊗ w.type.
Vector kron(const Vector& v, const Vector& w);

/// f*(v) = Σ_a v(a)·f(a); `out` is the result type.
Vector vec_bind(const Vector& v, const QType& out, const std::function<Vector(std::size_t)>& f);

/// Σ_a conj(v a)·(w a). Throws TypeMismatch on differing types.
Amplitude vec_inner(const Vector& v, const Vector& w);

bool vectors_close(const Vector& v, const Vector& w, double tolerance = kDefaultTolerance);

/// Dense matrix; column c is the image of input basis element c.
struct LinMap {
    QType in_type;
    QType out_type;
    std::vector<Vector> columns;

    std::size_t rows() const { return out_type.dim(); }
    std::size_t cols() const { return in_type.dim(); }
    Amplitude at(std::size_t row, std::size_t col) const { return columns[col].amps[row]; }
};

bool maps_close(const LinMap& f, const LinMap& g, double tolerance = kDefaultTolerance);

/// M†M = I entrywise within tolerance.
bool is_isometry(const LinMap& m, double tolerance = kDefaultTolerance);

/// ⟨f e_a | g e_b⟩ = 0 for all basis pairs. Throws TypeMismatch.
bool morphisms_orthogonal(const LinMap& f, const LinMap& g, double tolerance = kDefaultTolerance);

/// Per-variable basis indices of an environment index, and back.
std::vector<std::size_t> decompose_env(const Context& ctx, std::size_t index);
std::size_t compose_env(const Context& ctx, const std::vector<std::size_t>& values);

/// δ_{Γ,Δ}: for each index of con(Γ⊗Δ), the pair of indices into con(Γ) and
/// con(Δ). Shared variables are duplicated.
std::vector<std::pair<std::size_t, std::size_t>> delta_split(const Context& g, const Context& d);

/// Total function con(Γ) → σ on basis indices.
struct ClassicalTable {
    QType in_type;
    QType out_type;
    std::vector<std::size_t> map;
};

/// Requires a classical judgement. Throws NotClassical otherwise.
ClassicalTable eval_classical(const Judgement& j);
LinMap eval_quantum(const Judgement& j);

/// Typecheck (non-strict) then evaluate.
LinMap eval_quantum(const Context& ctx, const Term& t);
ClassicalTable eval_classical(const Context& ctx, const Term& t);

/// Column of a closed term.
Vector eval_closed(const Term& t);

/// Columns are basis vectors following the table.
LinMap lift(const ClassicalTable& table);

}  // namespace qml
