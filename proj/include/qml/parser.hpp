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

// Concrete syntax for .qml files.
//
//   program  := def* main?
//   def      := "def" IDENT param* "=" term
//   param    := "(" IDENT ":" type ")"
//   main     := "main" "[" ctx "]" "=" term
//   ctx      := e | IDENT ":" type ("," IDENT ":" type)*
//   type     := "Q1" | "Q2" | type "*" type | "(" type ")"
//   term     := "let" pat "=" term "in" term
//             | "qif" term "then" term "else" term
//             | sum
//   sum      := prod ("+" prod)*
//   prod     := "{" ampexpr "}" "*" prod | atom
//   atom     := "(" term "," term ")" | "(" term ")" | "()" | "false" | "true"
//             | "zero" "[" type "]" | IDENT | IDENT atom+
//   pat      := IDENT | "(" IDENT "," IDENT ")"
//
// `--` starts a comment that runs to end of line.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qml/syntax.hpp"

namespace qml {

struct Definition {
    std::string name;
    std::vector<Binding> params;
    Term body;
    SourceSpan span;
};

/// A parsed file before definitions are expanded. Bodies may contain Call
/// nodes referring to earlier definitions.
struct SourceProgram {
    std::vector<Definition> defs;
    std::optional<Context> main_context;
    std::optional<Term> main;
};

/// A closed-over-its-context program with every call expanded.
struct Program {
    Context context;
    Term term;
};

/// Throws SyntaxError, ShadowingError or UnknownIdentifier.
SourceProgram parse_program(std::string_view text);

/// Parses a single term. Identifiers are not resolved: every IDENT becomes a
/// variable and juxtaposition is rejected.
Term parse_term(std::string_view text);
QType parse_type(std::string_view text);
/// `x : Q2, y : Q1`; may be empty.
Context parse_context(std::string_view text);
/// The body of a `{...}` literal, without braces.
Amplitude parse_amplitude(std::string_view text);

/// Replaces each call `f a1 .. an` by `let x1 = a1 in .. let xn = an in body`
/// with parameters and inner binders renamed apart. Throws ArityMismatch, or
/// SyntaxError when the program has no main.
Program inline_defs(const SourceProgram& program);

/// parse_program followed by inline_defs.
Program load_program(std::string_view text);

}  // namespace qml
