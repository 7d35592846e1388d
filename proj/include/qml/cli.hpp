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

// The `qml` command line:
//
//   qml check  FILE           typecheck main
//   qml eval   FILE           denotation matrix
//   qml nf     FILE           normal form
//   qml equiv  FILE FILE      EQUIV / DISTINCT plus both normal forms
//   qml ip     FILE FILE      syntactic inner product of two closed terms
//   qml derive FILE           replay a derivation script
//
// Flags: --classical, --no-strict, --tol X (default from QML_TOL, else 1e-9),
// --json. Exit codes: 0 success / EQUIV, 1 DISTINCT / rejection, 2 usage or
// parse error.

#pragma once

#include <iosfwd>
#include <string>

#include "qml/semantics.hpp"

namespace qml {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitUsage = 2;

/// 12 significant digits, -0 printed as 0.
std::string format_number(double x);

/// `a+bi` text for one amplitude; the imaginary part is dropped when it is
/// within tolerance of zero.
std::string format_entry(Amplitude a, double tolerance = kDefaultTolerance);

/// One line per output basis element, entries separated by single spaces.
std::string format_matrix_text(const LinMap& m, double tolerance = kDefaultTolerance);

/// {"in_type": .., "out_type": .., "matrix": [[[re, im], ..], ..]} with the
/// same rounded numbers as the text form.
std::string format_matrix_json(const LinMap& m);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qml
