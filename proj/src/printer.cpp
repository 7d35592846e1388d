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

#include <cmath>
#include <cstdio>
#include <string>

#include "qml/syntax.hpp"

namespace qml {

namespace {

std::string format_real(double x, int precision) {
    if (x == 0.0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    return buf;
}

enum class Level { Term = 0, Sum = 1, Prod = 2, Atom = 3 };

Level level_of(const Term& t) {
    switch (t.kind()) {
        case TermKind::Let:
        case TermKind::IfQ: return Level::Term;
        case TermKind::Sup: return Level::Sum;
        case TermKind::Scale: return Level::Prod;
        case TermKind::Call: return t.arity() == 0 ? Level::Atom : Level::Prod;
        default: return Level::Atom;
    }
}

void emit(const Term& t, Level ctx, const PrintOptions& opt, std::string& out);

void emit_at(const Term& t, Level ctx, const PrintOptions& opt, std::string& out) {
    if (level_of(t) < ctx) {
        out += '(';
        emit(t, Level::Term, opt, out);
        out += ')';
    } else {
        emit(t, ctx, opt, out);
    }
}

void emit(const Term& t, Level ctx, const PrintOptions& opt, std::string& out) {
    switch (t.kind()) {
        case TermKind::Var:
            out += t.name();
            return;
        case TermKind::Unit:
            out += "()";
            return;
        case TermKind::False:
            out += "false";
            return;
        case TermKind::True:
            out += "true";
            return;
        case TermKind::Zero:
            out += "zero[" + to_string(t.annotation()) + "]";
            return;
        case TermKind::Pair:
            out += '(';
            emit_at(t.child(0), Level::Term, opt, out);
            out += ", ";
            emit_at(t.child(1), Level::Term, opt, out);
            out += ')';
            return;
        case TermKind::Let:
            out += "let " + to_source(t.pattern()) + " = ";
            emit_at(t.child(0), Level::Term, opt, out);
            out += " in ";
            emit_at(t.child(1), Level::Term, opt, out);
            return;
        case TermKind::IfQ:
            out += "qif ";
            emit_at(t.child(0), Level::Term, opt, out);
            out += " then ";
            emit_at(t.child(1), Level::Term, opt, out);
            out += " else ";
            emit_at(t.child(2), Level::Term, opt, out);
            return;
        case TermKind::Scale:
            out += "{" + format_amplitude(t.amplitude(), opt.precision) + "} * ";
            emit_at(t.child(0), Level::Prod, opt, out);
            return;
        case TermKind::Sup:
            emit_at(t.child(0), Level::Sum, opt, out);
            out += " + ";
            emit_at(t.child(1), Level::Prod, opt, out);
            return;
        case TermKind::Call:
            out += t.name();
            for (const auto& a : t.children()) {
                out += ' ';
                emit_at(a, Level::Atom, opt, out);
            }
            return;
    }
    (void)ctx;
}

}  // namespace

std::string format_amplitude(Amplitude a, int precision) {
    const double re = a.real();
    const double im = a.imag();
    if (im == 0.0) return format_real(re, precision);
    std::string imag = format_real(std::abs(im), precision) + "*i";
    if (re == 0.0) return (im < 0 ? "-" : "") + imag;
    return format_real(re, precision) + (im < 0 ? "-" : "+") + imag;
}

std::string to_source(const Pattern& p) {
    if (p.is_pair()) return "(" + p.first + ", " + *p.second + ")";
    return p.first;
}

std::string to_source(const Term& t, PrintOptions options) {
    std::string out;
    emit(t, Level::Term, options, out);
    return out;
}

}  // namespace qml
