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

// The equational theory as named rewrite rules.
//
//   LET_VAL        let p = val in u              ≡  u[val/p]
//   BETA_PAIR      let (x,y) = (t,u) in e        ≡  let x = t in let y = u in e
//   BETA_IF_FALSE  qif false then t else u       ≡  u
//   BETA_IF_TRUE   qif true then t else u        ≡  t
//   ETA_UNIT       ()                            ≡  t            (t : Q1, t classical)
//   ETA_LET        let x = t in x                ≡  t
//   ETA_PAIR       let (x,y) = t in (x,y)        ≡  t
//   ETA_IF         qif t then true else false    ≡  t
//   CC_LET_LET     let p = t in let q = u in e   ≡  let q = u in let p = t in e
//   CC_LET_IF      let p = qif t then u0 else u1 in e
//                                                ≡  qif t then let p = u0 in e else let p = u1 in e
//   Q_IF_SUP       qif (λ*t0 + κ*t1) then u0 else u1
//                                                ≡  λ*(qif t0 then u0 else u1) + κ*(qif t1 then u0 else u1)
//   SUP_COMM       t + u                         ≡  u + t
//   SUP_ZERO       t + zero[σ]                   ≡  t
//   SUP_ASSOC      t + (u + v)                   ≡  (t + u) + v
//   SCALE_DIST     λ*(t + u)                     ≡  λ*t + λ*u
//   SCALE_COMBINE  λ*t + κ*t                     ≡  (λ+κ)*t
//   SCALE_ZERO     0*t                           ≡  zero[σ]
//   SCALE_MUL      λ*(κ*t)                       ≡  (λκ)*t
//   SCALE_ONE      1*t                           ≡  t
//
// A bare summand t matches as 1*t. Directions whose right side would need a
// term that the left side does not determine are rejected with NoMatch.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qml/syntax.hpp"

namespace qml {

enum class RuleId {
    LET_VAL,
    BETA_PAIR,
    BETA_IF_FALSE,
    BETA_IF_TRUE,
    ETA_UNIT,
    ETA_LET,
    ETA_PAIR,
    ETA_IF,
    CC_LET_LET,
    CC_LET_IF,
    Q_IF_SUP,
    SUP_COMM,
    SUP_ZERO,
    SUP_ASSOC,
    SCALE_DIST,
    SCALE_COMBINE,
    SCALE_ZERO,
    SCALE_MUL,
    SCALE_ONE,
};

inline constexpr RuleId kAllRules[] = {
    RuleId::LET_VAL,    RuleId::BETA_PAIR,  RuleId::BETA_IF_FALSE, RuleId::BETA_IF_TRUE, RuleId::ETA_UNIT,
    RuleId::ETA_LET,    RuleId::ETA_PAIR,   RuleId::ETA_IF,        RuleId::CC_LET_LET,   RuleId::CC_LET_IF,
    RuleId::Q_IF_SUP,   RuleId::SUP_COMM,   RuleId::SUP_ZERO,      RuleId::SUP_ASSOC,    RuleId::SCALE_DIST,
    RuleId::SCALE_COMBINE, RuleId::SCALE_ZERO, RuleId::SCALE_MUL,  RuleId::SCALE_ONE,
};

enum class Direction { L2R, R2L };

std::string_view to_string(RuleId rule);
std::string_view to_string(Direction dir);
std::optional<RuleId> parse_rule_id(std::string_view name);

using Path = std::vector<std::size_t>;

/// "root" for the empty path, else dot-separated child indices.
std::string path_to_string(const Path& path);
/// Throws SyntaxError.
Path parse_path(std::string_view text);

struct RuleApp {
    RuleId rule;
    Direction direction = Direction::L2R;
    Path path;

    friend bool operator==(const RuleApp&, const RuleApp&) = default;
};

std::string to_string(const RuleApp& app);

struct EquationOptions {
    /// Typecheck inputs and results with ⊢° rather than ⊢.
    bool strict = false;
    double tolerance = kDefaultTolerance;
};

/// Throws NoMatch when the path is invalid or the addressed subterm does not
/// fit the rule, SideCondition when a side condition fails or the result does
/// not typecheck at the same type, and typing errors for an ill-typed t.
Term apply_rule(const Context& ctx, const Term& t, const RuleApp& app, const EquationOptions& options = {});

/// Subterm at `path`; throws NoMatch when it does not exist.
const Term& subterm_at(const Term& t, const Path& path);
Term replace_at(const Term& t, const Path& path, const Term& replacement);

/// Folds apply_rule over the steps.
Term replay_derivation(const Context& ctx, const Term& start, const std::vector<RuleApp>& steps,
                       const EquationOptions& options = {});

/// True iff the replayed result equals `end` structurally (amplitudes within
/// tolerance). Errors from individual steps propagate.
bool check_derivation(const Context& ctx, const Term& start, const std::vector<RuleApp>& steps, const Term& end,
                      const EquationOptions& options = {});

/// Every (rule, direction, path) whose application succeeds on t.
std::vector<RuleApp> enumerate_rule_instances(const Context& ctx, const Term& t,
                                              const EquationOptions& options = {});

/// Text form:
///   context: x : Q2        (optional)
///   start:
///     <term>
///   RULE <id> <L2R|R2L> at <path>
///   ...
///   end:
///     <term>
struct DerivationScript {
    Context context;
    Term start = Term::unit();
    std::vector<RuleApp> steps;
    Term end = Term::unit();
};

DerivationScript parse_derivation(std::string_view text);
std::string format_derivation(const DerivationScript& script);

}  // namespace qml
