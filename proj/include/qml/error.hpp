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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qml {

/// Every failure the library reports is a QmlError tagged with one of these.
enum class ErrorKind {
    Syntax,
    Shadowing,
    UnknownIdentifier,
    ArityMismatch,
    TypeClash,
    TypeMismatch,
    UnknownVariable,
    UnusedVariable,
    NotOrthogonal,
    NotNormalised,
    NotClassical,
    ShapeMismatch,
    NoMatch,
    SideCondition,
    FinalMismatch,
};

std::string_view to_string(ErrorKind kind);

/// 1-based source position. Terms built programmatically carry none.
struct SourceSpan {
    int line = 0;
    int column = 0;
};

class QmlError : public std::runtime_error {
public:
    QmlError(ErrorKind kind, std::string detail, std::optional<SourceSpan> span = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    /// The payload without the kind prefix, e.g. the offending variable name.
    const std::string& detail() const noexcept { return detail_; }
    const std::optional<SourceSpan>& span() const noexcept { return span_; }

private:
    ErrorKind kind_;
    std::string detail_;
    std::optional<SourceSpan> span_;
};

}  // namespace qml
