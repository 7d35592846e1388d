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


// Random well-typed terms for property tests. Terms are drawn from a
// typed grammar and then filtered through the checker, so every sample
// handed out is accepted at the requested judgement.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qml/semantics.hpp"
#include "qml/syntax.hpp"

namespace qml::testing {

enum class Flavor {
    Classical,  // no zero/scale/sum
    Strict,     // biased towards orthogonal branches and unit superpositions
    Loose,      // arbitrary scalars, sums and zeros
};

struct Sample {
    Context ctx;
    Term term;
    QType type;
};

struct GenLimits {
    int max_depth = 4;
    /// Size of the variable pool x, y, z (all Q2).
    int max_vars = 3;
};

class TermGenerator {
public:
    explicit TermGenerator(std::uint64_t seed, GenLimits limits = {});

    /// Unfiltered draw; ctx is exactly the free variables in pool order.
    Sample draw(Flavor flavor);
    /// First draw accepted by the checker (strict for Flavor::Strict,
    /// classical for Classical, non-strict for Loose).
    std::optional<Sample> accepted(Flavor flavor, int max_tries = 500);
    /// n accepted samples; throws if the acceptance rate is hopeless.
    std::vector<Sample> corpus(Flavor flavor, std::size_t n);

    QType small_type(std::size_t max_dim);
    Vector unit_vector(const QType& type);
    Vector random_vector(const QType& type);
    Amplitude amplitude();
    double uniform(double lo, double hi);
    int below(int n);
    std::mt19937_64& engine() { return rng_; }

private:
    Term gen(const QType& type, int depth);
    Term leaf(const QType& type);
    Term value(const QType& type);
    std::pair<Term, Term> orthogonal_pair(const QType& type, int depth);
    std::pair<Term, Term> orthogonal_values(const QType& type);
    Term let_term(const QType& type, int depth);
    Term ifq_term(const QType& type, int depth);
    Term unit_sup(const QType& type, int depth);
    std::string fresh();
    bool coin(double p);

    std::mt19937_64 rng_;
    GenLimits limits_;
    Flavor flavor_ = Flavor::Strict;
    std::vector<Binding> scope_;
    std::set<std::string> used_names_;
    int counter_ = 0;
};

/// True iff the checker accepts the sample at the flavor's judgement.
bool accepts(const Sample& s, Flavor flavor);

}  // namespace qml::testing
