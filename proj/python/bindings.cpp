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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qml/equations.hpp"
#include "qml/normalizer.hpp"
#include "qml/parser.hpp"
#include "qml/semantics.hpp"
#include "qml/typecheck.hpp"

namespace py = pybind11;

namespace {

qml::TypecheckOptions tc_options(bool strict, bool classical, double tol) {
    qml::TypecheckOptions o;
    o.strict = strict;
    o.classical = classical;
    o.tolerance = tol;
    return o;
}

std::string check(const std::string& source, bool strict, bool classical, double tol) {
    const qml::Program p = qml::load_program(source);
    return qml::to_string(qml::infer(p.context, p.term, tc_options(strict, classical, tol)).type);
}

std::vector<std::vector<std::complex<double>>> eval(const std::string& source, bool strict, bool classical,
                                                    double tol) {
    const qml::Program p = qml::load_program(source);
    const qml::Judgement j = qml::infer(p.context, p.term, tc_options(strict, classical, tol));
    const qml::LinMap m = classical ? qml::lift(qml::eval_classical(j)) : qml::eval_quantum(j);
    std::vector<std::vector<std::complex<double>>> rows(m.rows(), std::vector<std::complex<double>>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m.at(r, c);
    }
    return rows;
}

std::string normal_form(const std::string& source, bool classical, double tol, int precision) {
    const qml::Program p = qml::load_program(source);
    qml::NormalizeOptions o;
    o.classical = classical;
    o.tolerance = tol;
    return qml::to_source(qml::nf(p.context, p.term, o), {precision});
}

py::dict equivalence(const std::string& left, const std::string& right, bool classical, double tol) {
    const qml::Program a = qml::load_program(left);
    const qml::Program b = qml::load_program(right);
    if (!(a.context == b.context)) {
        throw qml::QmlError(qml::ErrorKind::TypeMismatch, "programs declare different contexts");
    }
    qml::NormalizeOptions o;
    o.classical = classical;
    o.tolerance = tol;
    const qml::EquivResult r = qml::equiv(a.context, a.term, b.term, o);
    py::dict d;
    d["equivalent"] = r.equivalent;
    d["normal_forms_agree"] = r.normal_forms_agree;
    d["nf_left"] = qml::to_source(r.nf_left, {12});
    d["nf_right"] = qml::to_source(r.nf_right, {12});
    return d;
}

std::optional<std::complex<double>> inner_product(const std::string& t, const std::string& u, double tol) {
    return qml::inner_product(qml::parse_term(t), qml::parse_term(u), tol);
}

bool check_derivation(const std::string& script, double tol) {
    const qml::DerivationScript s = qml::parse_derivation(script);
    qml::EquationOptions o;
    o.tolerance = tol;
    return qml::check_derivation(s.context, s.start, s.steps, s.end, o);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Typechecking, evaluation and normalisation of pure QML programs";

    py::register_exception<qml::QmlError>(m, "QmlError");

    const double eps = qml::kDefaultTolerance;
    m.attr("DEFAULT_TOLERANCE") = eps;

    m.def("check", &check, py::arg("source"), py::arg("strict") = true, py::arg("classical") = false,
          py::arg("tol") = eps, "Typecheck `main`; returns its type.");
    m.def("eval", &eval, py::arg("source"), py::arg("strict") = false, py::arg("classical") = false,
          py::arg("tol") = eps, "Denotation of `main` as rows of complex amplitudes.");
    m.def("nf", &normal_form, py::arg("source"), py::arg("classical") = false, py::arg("tol") = eps,
          py::arg("precision") = 12, "Normal form of `main` in concrete syntax.");
    m.def("equiv", &equivalence, py::arg("left"), py::arg("right"), py::arg("classical") = false,
          py::arg("tol") = eps, "Decide equivalence of two programs over the same context.");
    m.def("inner_product", &inner_product, py::arg("t"), py::arg("u"), py::arg("tol") = eps,
          "Syntactic inner product of two terms, or None when unknown.");
    m.def("check_derivation", &check_derivation, py::arg("script"), py::arg("tol") = eps,
          "Replay a derivation script; True iff it ends at the stated term.");
}
