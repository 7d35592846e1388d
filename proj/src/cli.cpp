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

#include "qml/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qml/equations.hpp"
#include "qml/normalizer.hpp"
#include "qml/parser.hpp"
#include "qml/typecheck.hpp"

namespace qml {

using json = nlohmann::json;

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    std::string s = buf;
    return s == "-0" ? "0" : s;
}

namespace {

double rounded(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

}  // namespace

std::string format_entry(Amplitude a, double tolerance) {
    const std::string re = format_number(a.real());
    if (std::abs(a.imag()) <= tolerance) return re;
    const std::string im = format_number(std::abs(a.imag()));
    return re + (a.imag() < 0 ? "-" : "+") + im + "i";
}

std::string format_matrix_text(const LinMap& m, double tolerance) {
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ' ';
            out += format_entry(m.at(r, c), tolerance);
        }
        out += '\n';
    }
    return out;
}

namespace {

json matrix_json(const LinMap& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(json::array({rounded(m.at(r, c).real()), rounded(m.at(r, c).imag())}));
        }
        rows.push_back(std::move(row));
    }
    return json{{"in_type", to_string(m.in_type)}, {"out_type", to_string(m.out_type)}, {"matrix", rows}};
}

}  // namespace

std::string format_matrix_json(const LinMap& m) { return matrix_json(m).dump(); }

namespace {

struct Config {
    bool classical = false;
    bool no_strict = false;
    double tolerance = kDefaultTolerance;
    bool json = false;
};

bool is_parse_error(ErrorKind k) {
    return k == ErrorKind::Syntax || k == ErrorKind::Shadowing || k == ErrorKind::UnknownIdentifier ||
           k == ErrorKind::ArityMismatch;
}

struct Failure {
    int code;
};

class Runner {
public:
    Runner(const Config& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

    int check(const std::string& file) {
        const Program p = load(file);
        const Judgement j = typecheck(file, p);
        if (cfg_.json) {
            out_ << json{{"ok", true},
                         {"context", to_string(p.context)},
                         {"type", to_string(j.type)},
                         {"strict", j.strict},
                         {"classical", j.classical}}
                        .dump()
                 << '\n';
        } else {
            const char* mode = j.classical ? "classical" : (j.strict ? "strict" : "non-strict");
            out_ << "ok (" << mode << "): " << to_string(p.context) << (p.context.empty() ? "" : " ") << "|- main : "
                 << to_string(j.type) << '\n';
        }
        return kExitOk;
    }

    int eval(const std::string& file) {
        const Program p = load(file);
        const Judgement j = typecheck(file, p);
        const LinMap m = j.classical ? lift(eval_classical(j)) : eval_quantum(j);
        if (cfg_.json) {
            out_ << format_matrix_json(m) << '\n';
        } else {
            out_ << format_matrix_text(m, cfg_.tolerance);
        }
        return kExitOk;
    }

    int normal_form(const std::string& file) {
        const Program p = load(file);
        typecheck(file, p);
        const Term n = guarded(file, [&] { return nf(p.context, p.term, norm_options()); });
        if (cfg_.json) {
            out_ << json{{"context", to_string(p.context)}, {"nf", show(n)}}.dump() << '\n';
        } else {
            out_ << show(n) << '\n';
        }
        return kExitOk;
    }

    int equivalence(const std::string& left, const std::string& right) {
        const Program a = load(left);
        const Program b = load(right);
        if (!(a.context == b.context)) {
            err_ << "error: " << left << " and " << right << " declare different contexts ("
                 << to_string(a.context) << " vs " << to_string(b.context) << ")\n";
            return kExitUsage;
        }
        typecheck(left, a);
        typecheck(right, b);
        const EquivResult r = guarded(left, [&] { return equiv(a.context, a.term, b.term, norm_options()); });
        const char* verdict = r.equivalent ? "EQUIV" : "DISTINCT";
        if (r.equivalent != r.normal_forms_agree) {
            err_ << "warning: normal forms " << (r.normal_forms_agree ? "agree" : "differ")
                 << " although the denotations " << (r.equivalent ? "agree" : "differ") << '\n';
        }
        if (cfg_.json) {
            out_ << json{{"verdict", verdict},
                         {"nf_left", show(r.nf_left)},
                         {"nf_right", show(r.nf_right)},
                         {"normal_forms_agree", r.normal_forms_agree}}
                        .dump()
                 << '\n';
        } else {
            out_ << verdict << '\n' << "left:  " << show(r.nf_left) << '\n' << "right: " << show(r.nf_right) << '\n';
        }
        return r.equivalent ? kExitOk : kExitRejected;
    }

    int inner(const std::string& left, const std::string& right) {
        const Program a = load(left);
        const Program b = load(right);
        for (const auto* p : {&a, &b}) {
            if (!p->context.empty()) {
                err_ << "error: " << (p == &a ? left : right) << ": ip expects closed terms (main [])\n";
                return kExitUsage;
            }
        }
        const Judgement ja = typecheck(left, a);
        const Judgement jb = typecheck(right, b);
        if (!(ja.type == jb.type)) {
            err_ << "error: TypeMismatch(" << to_string(ja.type) << " vs " << to_string(jb.type) << ")\n";
            return kExitRejected;
        }
        const IPResult r = inner_product(a.term, b.term, cfg_.tolerance);
        if (cfg_.json) {
            json v = r ? json::array({rounded(r->real()), rounded(r->imag())}) : json("?");
            out_ << json{{"inner_product", v}}.dump() << '\n';
        } else {
            out_ << (r ? format_entry(*r, cfg_.tolerance) : std::string("?")) << '\n';
        }
        return kExitOk;
    }

    int derive(const std::string& file) {
        const std::string text = read(file);
        const DerivationScript s = guarded(file, [&] { return parse_derivation(text); });
        EquationOptions opt;
        opt.tolerance = cfg_.tolerance;
        guarded(file, [&] { return infer(s.context, s.start, false, cfg_.tolerance); });
        Term cur = s.start;
        for (std::size_t i = 0; i < s.steps.size(); ++i) {
            try {
                cur = apply_rule(s.context, cur, s.steps[i], opt);
            } catch (const QmlError& e) {
                report_step(file, i, e);
                return kExitRejected;
            }
        }
        const bool same = structurally_equal(cur, s.end, cfg_.tolerance);
        if (cfg_.json) {
            out_ << json{{"valid", same}, {"steps", s.steps.size()}, {"result", show(cur)}}.dump() << '\n';
        } else if (same) {
            out_ << "VALID (" << s.steps.size() << " steps)\n";
        } else {
            out_ << "INVALID\n";
            err_ << file << ": error: " << to_string(ErrorKind::FinalMismatch) << "(got " << show(cur)
                 << ", expected " << show(s.end) << ")\n";
        }
        return same ? kExitOk : kExitRejected;
    }

private:
    NormalizeOptions norm_options() const {
        NormalizeOptions o;
        o.classical = cfg_.classical;
        o.tolerance = cfg_.tolerance;
        return o;
    }

    std::string show(const Term& t) const { return to_source(t, PrintOptions{12}); }

    void report(const std::string& file, const QmlError& e) {
        err_ << file;
        if (e.span()) err_ << ':' << e.span()->line << ':' << e.span()->column;
        err_ << ": error: " << e.what() << '\n';
    }

    void report_step(const std::string& file, std::size_t i, const QmlError& e) {
        if (cfg_.json) {
            out_ << json{{"valid", false}, {"failed_step", i + 1}, {"error", e.what()}}.dump() << '\n';
        } else {
            out_ << "INVALID\n";
        }
        err_ << file << ": step " << (i + 1) << ": error: " << e.what() << '\n';
    }

    template <typename F>
    auto guarded(const std::string& file, F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const QmlError& e) {
            report(file, e);
            throw Failure{is_parse_error(e.kind()) ? kExitUsage : kExitRejected};
        }
    }

    std::string read(const std::string& file) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            err_ << "error: cannot read " << file << '\n';
            throw Failure{kExitUsage};
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    Program load(const std::string& file) {
        const std::string text = read(file);
        return guarded(file, [&] { return load_program(text); });
    }

    Judgement typecheck(const std::string& file, const Program& p) {
        TypecheckOptions o;
        o.classical = cfg_.classical;
        o.strict = !cfg_.no_strict;
        o.tolerance = cfg_.tolerance;
        return guarded(file, [&] { return infer(p.context, p.term, o); });
    }

    const Config& cfg_;
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Typecheck, evaluate and normalise pure QML programs", "qml"};
    app.require_subcommand(1);
    Config cfg;
    app.add_flag("--classical", cfg.classical, "Use the classical fragment and semantics");
    app.add_flag("--no-strict", cfg.no_strict, "Skip orthogonality and normalisation checks");
    auto* tol = app.add_option("--tol", cfg.tolerance, "Numeric tolerance (default 1e-9, or $QML_TOL)")
                    ->check(CLI::PositiveNumber);
    app.add_flag("--json", cfg.json, "Machine-readable output");

    std::string file_a;
    std::string file_b;
    auto* check = app.add_subcommand("check", "Typecheck main")->fallthrough();
    check->add_option("file", file_a, "Program file")->required();
    auto* eval = app.add_subcommand("eval", "Print the denotation of main as a matrix")->fallthrough();
    eval->add_option("file", file_a, "Program file")->required();
    auto* nfc = app.add_subcommand("nf", "Print the normal form of main")->fallthrough();
    nfc->add_option("file", file_a, "Program file")->required();
    auto* eq = app.add_subcommand("equiv", "Decide equivalence of two programs")->fallthrough();
    eq->add_option("left", file_a, "First program")->required();
    eq->add_option("right", file_b, "Second program")->required();
    auto* ip = app.add_subcommand("ip", "Syntactic inner product of two closed terms")->fallthrough();
    ip->add_option("left", file_a, "First program")->required();
    ip->add_option("right", file_b, "Second program")->required();
    auto* der = app.add_subcommand("derive", "Replay a derivation script")->fallthrough();
    der->add_option("file", file_a, "Derivation file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }
    if (tol->count() == 0) {
        if (const char* env = std::getenv("QML_TOL")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end == env || *end != '\0' || !std::isfinite(v) || v <= 0) {
                err << "error: QML_TOL must be a positive number, got '" << env << "'\n";
                return kExitUsage;
            }
            cfg.tolerance = v;
        }
    }

    Runner runner(cfg, out, err);
    try {
        if (*check) return runner.check(file_a);
        if (*eval) return runner.eval(file_a);
        if (*nfc) return runner.normal_form(file_a);
        if (*eq) return runner.equivalence(file_a, file_b);
        if (*ip) return runner.inner(file_a, file_b);
        if (*der) return runner.derive(file_a);
    } catch (const Failure& f) {
        return f.code;
    } catch (const QmlError& e) {
        err << "error: " << e.what() << '\n';
        return kExitRejected;
    }
    return kExitUsage;
}

}  // namespace qml
