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

#include "qml/equations.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "qml/parser.hpp"
#include "qml/typecheck.hpp"

namespace qml {

namespace {

struct RuleName {
    RuleId id;
    std::string_view name;
};

constexpr RuleName kRuleNames[] = {
    {RuleId::LET_VAL, "LET_VAL"},
    {RuleId::BETA_PAIR, "BETA_PAIR"},
    {RuleId::BETA_IF_FALSE, "BETA_IF_FALSE"},
    {RuleId::BETA_IF_TRUE, "BETA_IF_TRUE"},
    {RuleId::ETA_UNIT, "ETA_UNIT"},
    {RuleId::ETA_LET, "ETA_LET"},
    {RuleId::ETA_PAIR, "ETA_PAIR"},
    {RuleId::ETA_IF, "ETA_IF"},
    {RuleId::CC_LET_LET, "CC_LET_LET"},
    {RuleId::CC_LET_IF, "CC_LET_IF"},
    {RuleId::Q_IF_SUP, "Q_IF_SUP"},
    {RuleId::SUP_COMM, "SUP_COMM"},
    {RuleId::SUP_ZERO, "SUP_ZERO"},
    {RuleId::SUP_ASSOC, "SUP_ASSOC"},
    {RuleId::SCALE_DIST, "SCALE_DIST"},
    {RuleId::SCALE_COMBINE, "SCALE_COMBINE"},
    {RuleId::SCALE_ZERO, "SCALE_ZERO"},
    {RuleId::SCALE_MUL, "SCALE_MUL"},
    {RuleId::SCALE_ONE, "SCALE_ONE"},
};

Context restrict_to(const Context& ctx, const std::set<std::string>& names) {
    std::vector<Binding> out;
    for (const auto& b : ctx) {
        if (names.contains(b.name)) out.push_back(b);
    }
    return Context(std::move(out));
}

QType type_in(const Context& ctx, const Term& t) { return infer(restrict_to(ctx, free_vars(t)), t, false).type; }

// Typing context of the subterm at `path`, mirroring the checker's splits.
Context subterm_context(const Context& ctx, const Term& t, const Path& path) {
    Context cur_ctx = ctx;
    const Term* cur = &t;
    for (std::size_t idx : path) {
        const Term& child = cur->child(idx);
        switch (cur->kind()) {
            case TermKind::Pair:
                cur_ctx = restrict_to(cur_ctx, free_vars(child));
                break;
            case TermKind::Let:
                if (idx == 0) {
                    cur_ctx = restrict_to(cur_ctx, free_vars(child));
                } else {
                    const QType bt = type_in(cur_ctx, cur->child(0));
                    const Pattern& p = cur->pattern();
                    auto fv = free_vars(child);
                    for (const auto& n : p.names()) fv.erase(n);
                    Context body = restrict_to(cur_ctx, fv);
                    if (p.is_pair()) {
                        body = body.extended(p.first, bt.left()).extended(*p.second, bt.right());
                    } else {
                        body = body.extended(p.first, bt);
                    }
                    cur_ctx = body;
                }
                break;
            case TermKind::IfQ:
                if (idx == 0) {
                    cur_ctx = restrict_to(cur_ctx, free_vars(child));
                } else {
                    auto fv = free_vars(cur->child(1));
                    fv.merge(free_vars(cur->child(2)));
                    cur_ctx = restrict_to(cur_ctx, fv);
                }
                break;
            default:
                break;
        }
        cur = &child;
    }
    return cur_ctx;
}

struct Scaled {
    Amplitude amp;
    Term body;
    bool explicit_scale;
};

Scaled as_scaled(const Term& t) {
    if (t.is(TermKind::Scale)) return {t.amplitude(), t.child(0), true};
    return {Amplitude(1.0), t, false};
}

Term rescale(const Scaled& s, Term body) { return s.explicit_scale ? Term::scale(s.amp, std::move(body)) : body; }

bool disjoint(const std::vector<std::string>& names, const std::set<std::string>& set) {
    for (const auto& n : names) {
        if (set.contains(n)) return false;
    }
    return true;
}

[[noreturn]] void side_condition(const RuleApp& app, const std::string& what) {
    throw QmlError(ErrorKind::SideCondition, to_string(app) + ": " + what);
}

class Rewriter {
public:
    Rewriter(const RuleApp& app, const Term& sub, std::function<QType()> type_of, std::set<std::string> taken,
             double tol)
        : app_(app), s_(sub), type_of_(std::move(type_of)), taken_(std::move(taken)), tol_(tol) {}

    std::optional<Term> run() {
        const bool l2r = app_.direction == Direction::L2R;
        switch (app_.rule) {
            case RuleId::LET_VAL: return l2r ? let_val() : std::nullopt;
            case RuleId::BETA_PAIR: return l2r ? beta_pair() : beta_pair_back();
            case RuleId::BETA_IF_FALSE:
                if (l2r && s_.is(TermKind::IfQ) && s_.child(0).is(TermKind::False)) return s_.child(2);
                return std::nullopt;
            case RuleId::BETA_IF_TRUE:
                if (l2r && s_.is(TermKind::IfQ) && s_.child(0).is(TermKind::True)) return s_.child(1);
                return std::nullopt;
            case RuleId::ETA_UNIT:
                if (l2r) return std::nullopt;
                if (!(type_of_() == QType::q1())) side_condition(app_, "subterm is not of type Q1");
                if (contains_quantum_syntax(s_)) side_condition(app_, "subterm is not classical");
                return Term::unit();
            case RuleId::ETA_LET: return l2r ? eta_let() : eta_let_back();
            case RuleId::ETA_PAIR: return l2r ? eta_pair() : eta_pair_back();
            case RuleId::ETA_IF: return l2r ? eta_if() : eta_if_back();
            case RuleId::CC_LET_LET: return cc_let_let();
            case RuleId::CC_LET_IF: return l2r ? cc_let_if() : cc_let_if_back();
            case RuleId::Q_IF_SUP: return l2r ? q_if_sup() : q_if_sup_back();
            case RuleId::SUP_COMM:
                if (s_.is(TermKind::Sup)) return Term::sup(s_.child(1), s_.child(0));
                return std::nullopt;
            case RuleId::SUP_ZERO:
                if (l2r) {
                    if (s_.is(TermKind::Sup) && s_.child(1).is(TermKind::Zero)) return s_.child(0);
                    return std::nullopt;
                }
                return Term::sup(s_, Term::zero(type_of_()));
            case RuleId::SUP_ASSOC: return l2r ? sup_assoc() : sup_assoc_back();
            case RuleId::SCALE_DIST: return l2r ? scale_dist() : scale_dist_back();
            case RuleId::SCALE_COMBINE: return l2r ? scale_combine() : std::nullopt;
            case RuleId::SCALE_ZERO:
                if (l2r && s_.is(TermKind::Scale) && std::abs(s_.amplitude()) <= tol_) return Term::zero(type_of_());
                return std::nullopt;
            case RuleId::SCALE_MUL:
                if (l2r && s_.is(TermKind::Scale) && s_.child(0).is(TermKind::Scale)) {
                    return Term::scale(s_.amplitude() * s_.child(0).amplitude(), s_.child(0).child(0));
                }
                return std::nullopt;
            case RuleId::SCALE_ONE:
                if (!l2r) return Term::scale(1.0, s_);
                if (s_.is(TermKind::Scale) && std::abs(s_.amplitude() - Amplitude(1.0)) <= tol_) return s_.child(0);
                return std::nullopt;
        }
        return std::nullopt;
    }

private:
    std::string fresh(const std::string& base) {
        std::string n = fresh_name(base, taken_);
        taken_.insert(n);
        return n;
    }

    std::optional<Term> let_val() {
        if (!s_.is(TermKind::Let)) return std::nullopt;
        auto val = CVal::from_term(s_.child(0));
        if (!val) return std::nullopt;
        if (s_.pattern().is_pair() && !s_.child(0).is(TermKind::Pair)) return std::nullopt;
        return substitute(s_.child(1), *val, s_.pattern());
    }

    std::optional<Term> beta_pair() {
        if (!s_.is(TermKind::Let) || !s_.pattern().is_pair() || !s_.child(0).is(TermKind::Pair)) return std::nullopt;
        const Pattern& p = s_.pattern();
        const Term& bound = s_.child(0);
        return Term::let(Pattern::var(p.first), bound.child(0),
                         Term::let(Pattern::var(*p.second), bound.child(1), s_.child(1)));
    }

    std::optional<Term> beta_pair_back() {
        if (!s_.is(TermKind::Let) || s_.pattern().is_pair()) return std::nullopt;
        const Term& inner = s_.child(1);
        if (!inner.is(TermKind::Let) || inner.pattern().is_pair()) return std::nullopt;
        const std::string& x = s_.pattern().first;
        if (free_vars(inner.child(0)).contains(x)) side_condition(app_, x + " is free in the second bound term");
        return Term::let(Pattern::pair(x, inner.pattern().first), Term::pair(s_.child(0), inner.child(0)),
                         inner.child(1));
    }

    std::optional<Term> eta_let() {
        if (!s_.is(TermKind::Let) || s_.pattern().is_pair()) return std::nullopt;
        const Term& body = s_.child(1);
        if (!body.is(TermKind::Var) || body.name() != s_.pattern().first) return std::nullopt;
        return s_.child(0);
    }

    std::optional<Term> eta_let_back() {
        const std::string x = fresh("x");
        return Term::let(Pattern::var(x), s_, Term::var(x));
    }

    std::optional<Term> eta_pair() {
        if (!s_.is(TermKind::Let) || !s_.pattern().is_pair()) return std::nullopt;
        const Term& body = s_.child(1);
        if (!body.is(TermKind::Pair) || !body.child(0).is(TermKind::Var) || !body.child(1).is(TermKind::Var)) {
            return std::nullopt;
        }
        if (body.child(0).name() != s_.pattern().first || body.child(1).name() != *s_.pattern().second) {
            return std::nullopt;
        }
        return s_.child(0);
    }

    std::optional<Term> eta_pair_back() {
        if (!type_of_().is_tensor()) side_condition(app_, "subterm is not of tensor type");
        const std::string x = fresh("x");
        const std::string y = fresh("y");
        return Term::let(Pattern::pair(x, y), s_, Term::pair(Term::var(x), Term::var(y)));
    }

    std::optional<Term> eta_if() {
        if (s_.is(TermKind::IfQ) && s_.child(1).is(TermKind::True) && s_.child(2).is(TermKind::False)) {
            return s_.child(0);
        }
        return std::nullopt;
    }

    std::optional<Term> eta_if_back() {
        if (!(type_of_() == QType::q2())) side_condition(app_, "subterm is not of type Q2");
        return Term::ifq(s_, Term::true_(), Term::false_());
    }

    std::optional<Term> cc_let_let() {
        if (!s_.is(TermKind::Let) || !s_.child(1).is(TermKind::Let)) return std::nullopt;
        const Term& inner = s_.child(1);
        if (!disjoint(s_.pattern().names(), free_vars(inner.child(0)))) {
            side_condition(app_, "outer pattern binds a variable free in the inner bound term");
        }
        if (!disjoint(inner.pattern().names(), free_vars(s_.child(0)))) {
            side_condition(app_, "inner pattern binds a variable free in the outer bound term");
        }
        return Term::let(inner.pattern(), inner.child(0), Term::let(s_.pattern(), s_.child(0), inner.child(1)));
    }

    std::optional<Term> cc_let_if() {
        if (!s_.is(TermKind::Let) || !s_.child(0).is(TermKind::IfQ)) return std::nullopt;
        const Term& c = s_.child(0);
        const Pattern& p = s_.pattern();
        const Term& e = s_.child(1);
        return Term::ifq(c.child(0), Term::let(p, c.child(1), e), Term::let(p, c.child(2), e));
    }

    std::optional<Term> cc_let_if_back() {
        if (!s_.is(TermKind::IfQ)) return std::nullopt;
        const Term& a = s_.child(1);
        const Term& b = s_.child(2);
        if (!a.is(TermKind::Let) || !b.is(TermKind::Let)) return std::nullopt;
        if (!(a.pattern() == b.pattern()) || !structurally_equal(a.child(1), b.child(1))) return std::nullopt;
        if (!disjoint(a.pattern().names(), free_vars(s_.child(0)))) {
            side_condition(app_, "pattern binds a variable free in the condition");
        }
        return Term::let(a.pattern(), Term::ifq(s_.child(0), a.child(0), b.child(0)), a.child(1));
    }

    std::optional<Term> q_if_sup() {
        if (!s_.is(TermKind::IfQ) || !s_.child(0).is(TermKind::Sup)) return std::nullopt;
        const Scaled l = as_scaled(s_.child(0).child(0));
        const Scaled r = as_scaled(s_.child(0).child(1));
        const Term& u0 = s_.child(1);
        const Term& u1 = s_.child(2);
        return Term::sup(rescale(l, Term::ifq(l.body, u0, u1)), rescale(r, Term::ifq(r.body, u0, u1)));
    }

    std::optional<Term> q_if_sup_back() {
        if (!s_.is(TermKind::Sup)) return std::nullopt;
        const Scaled l = as_scaled(s_.child(0));
        const Scaled r = as_scaled(s_.child(1));
        if (!l.body.is(TermKind::IfQ) || !r.body.is(TermKind::IfQ)) return std::nullopt;
        if (!structurally_equal(l.body.child(1), r.body.child(1)) ||
            !structurally_equal(l.body.child(2), r.body.child(2))) {
            return std::nullopt;
        }
        Term cond = Term::sup(rescale(l, l.body.child(0)), rescale(r, r.body.child(0)));
        return Term::ifq(cond, l.body.child(1), l.body.child(2));
    }

    std::optional<Term> sup_assoc() {
        if (!s_.is(TermKind::Sup) || !s_.child(1).is(TermKind::Sup)) return std::nullopt;
        const Term& r = s_.child(1);
        return Term::sup(Term::sup(s_.child(0), r.child(0)), r.child(1));
    }

    std::optional<Term> sup_assoc_back() {
        if (!s_.is(TermKind::Sup) || !s_.child(0).is(TermKind::Sup)) return std::nullopt;
        const Term& l = s_.child(0);
        return Term::sup(l.child(0), Term::sup(l.child(1), s_.child(1)));
    }

    std::optional<Term> scale_dist() {
        if (!s_.is(TermKind::Scale) || !s_.child(0).is(TermKind::Sup)) return std::nullopt;
        const Amplitude k = s_.amplitude();
        const Term& sum = s_.child(0);
        return Term::sup(Term::scale(k, sum.child(0)), Term::scale(k, sum.child(1)));
    }

    std::optional<Term> scale_dist_back() {
        if (!s_.is(TermKind::Sup)) return std::nullopt;
        const Scaled l = as_scaled(s_.child(0));
        const Scaled r = as_scaled(s_.child(1));
        if (std::abs(l.amp - r.amp) > tol_) return std::nullopt;
        return Term::scale(l.amp, Term::sup(l.body, r.body));
    }

    std::optional<Term> scale_combine() {
        if (!s_.is(TermKind::Sup)) return std::nullopt;
        const Scaled l = as_scaled(s_.child(0));
        const Scaled r = as_scaled(s_.child(1));
        if (!structurally_equal(l.body, r.body)) return std::nullopt;
        return Term::scale(l.amp + r.amp, l.body);
    }

    const RuleApp& app_;
    const Term& s_;
    std::function<QType()> type_of_;
    std::set<std::string> taken_;
    double tol_;
};

void collect_paths(const Term& t, Path& cur, std::vector<Path>& out) {
    out.push_back(cur);
    for (std::size_t i = 0; i < t.arity(); ++i) {
        cur.push_back(i);
        collect_paths(t.child(i), cur, out);
        cur.pop_back();
    }
}

// Applies the rule assuming t already typechecks at `type`.
std::optional<Term> try_apply(const Context& ctx, const Term& t, const QType& type, const RuleApp& app,
                              const EquationOptions& options) {
    const Term& sub = subterm_at(t, app.path);
    auto type_of = [&] {
        const Context sc = subterm_context(ctx, t, app.path);
        return type_in(sc, sub);
    };
    std::set<std::string> taken = all_names(t);
    taken.merge(ctx.names());
    Rewriter rw(app, sub, type_of, std::move(taken), options.tolerance);
    std::optional<Term> replacement = rw.run();
    if (!replacement) return std::nullopt;
    Term result = replace_at(t, app.path, *replacement);
    try {
        const Judgement j = infer(ctx, result, options.strict, options.tolerance);
        if (!(j.type == type)) {
            side_condition(app, "result has type " + to_string(j.type) + ", expected " + to_string(type));
        }
    } catch (const QmlError& e) {
        if (e.kind() == ErrorKind::SideCondition) throw;
        side_condition(app, std::string("result does not typecheck: ") + e.what());
    }
    return result;
}

}  // namespace

std::string_view to_string(RuleId rule) {
    for (const auto& r : kRuleNames) {
        if (r.id == rule) return r.name;
    }
    return "?";
}

std::string_view to_string(Direction dir) { return dir == Direction::L2R ? "L2R" : "R2L"; }

std::optional<RuleId> parse_rule_id(std::string_view name) {
    for (const auto& r : kRuleNames) {
        if (r.name == name) return r.id;
    }
    return std::nullopt;
}

std::string path_to_string(const Path& path) {
    if (path.empty()) return "root";
    std::string out;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(path[i]);
    }
    return out;
}

Path parse_path(std::string_view text) {
    if (text == "root") return {};
    Path out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t dot = text.find('.', start);
        const std::string_view part = text.substr(start, dot == std::string_view::npos ? text.npos : dot - start);
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
            throw QmlError(ErrorKind::Syntax, "expected path, found '" + std::string(text) + "'");
        }
        out.push_back(v);
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return out;
}

std::string to_string(const RuleApp& app) {
    return std::string(to_string(app.rule)) + " " + std::string(to_string(app.direction)) + " at " +
           path_to_string(app.path);
}

const Term& subterm_at(const Term& t, const Path& path) {
    const Term* cur = &t;
    for (std::size_t idx : path) {
        if (idx >= cur->arity()) throw QmlError(ErrorKind::NoMatch, "no subterm at " + path_to_string(path));
        cur = &cur->child(idx);
    }
    return *cur;
}

Term replace_at(const Term& t, const Path& path, const Term& replacement) {
    std::function<Term(const Term&, std::size_t)> go = [&](const Term& cur, std::size_t depth) -> Term {
        if (depth == path.size()) return replacement;
        const std::size_t idx = path[depth];
        if (idx >= cur.arity()) throw QmlError(ErrorKind::NoMatch, "no subterm at " + path_to_string(path));
        return cur.with_child(idx, go(cur.child(idx), depth + 1));
    };
    return go(t, 0);
}

Term apply_rule(const Context& ctx, const Term& t, const RuleApp& app, const EquationOptions& options) {
    const Judgement j = infer(ctx, t, options.strict, options.tolerance);
    subterm_at(t, app.path);
    auto result = try_apply(ctx, t, j.type, app, options);
    if (!result) throw QmlError(ErrorKind::NoMatch, to_string(app));
    return *result;
}

Term replay_derivation(const Context& ctx, const Term& start, const std::vector<RuleApp>& steps,
                       const EquationOptions& options) {
    Term cur = start;
    for (const auto& step : steps) cur = apply_rule(ctx, cur, step, options);
    return cur;
}

bool check_derivation(const Context& ctx, const Term& start, const std::vector<RuleApp>& steps, const Term& end,
                      const EquationOptions& options) {
    infer(ctx, end, options.strict, options.tolerance);
    const Term result = replay_derivation(ctx, start, steps, options);
    return structurally_equal(result, end, options.tolerance);
}

std::vector<RuleApp> enumerate_rule_instances(const Context& ctx, const Term& t, const EquationOptions& options) {
    const Judgement j = infer(ctx, t, options.strict, options.tolerance);
    std::vector<Path> paths;
    Path cur;
    collect_paths(t, cur, paths);
    std::vector<RuleApp> out;
    for (const auto& path : paths) {
        for (RuleId rule : kAllRules) {
            for (Direction dir : {Direction::L2R, Direction::R2L}) {
                RuleApp app{rule, dir, path};
                try {
                    if (try_apply(ctx, t, j.type, app, options)) out.push_back(app);
                } catch (const QmlError&) {
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Script format

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string_view strip_comment(std::string_view s) {
    const auto c = s.find("--");
    return c == std::string_view::npos ? s : s.substr(0, c);
}

bool starts_with_word(std::string_view line, std::string_view word) {
    return line.substr(0, word.size()) == word &&
           (line.size() == word.size() || line[word.size()] == ' ' || line[word.size()] == '\t');
}

Term parse_block(const std::string& text, int first_line, std::string_view what) {
    try {
        return parse_term(text);
    } catch (const QmlError& e) {
        std::optional<SourceSpan> span = e.span();
        if (span) span->line += first_line - 1;
        throw QmlError(e.kind(), std::string(what) + ": " + e.detail(), span);
    }
}

}  // namespace

DerivationScript parse_derivation(std::string_view text) {
    DerivationScript script;
    enum class Section { Header, Start, Rules, End } section = Section::Header;
    std::string start_text;
    std::string end_text;
    int start_line = 0;
    int end_line = 0;
    bool have_start = false;
    bool have_end = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string_view line = trim(raw);
        const std::string_view code = trim(strip_comment(line));
        if (code.substr(0, 8) == "context:" && section == Section::Header) {
            script.context = parse_context(code.substr(8));
            continue;
        }
        if (code.substr(0, 6) == "start:") {
            if (have_start) throw QmlError(ErrorKind::Syntax, "duplicate 'start:'", SourceSpan{lineno, 1});
            section = Section::Start;
            have_start = true;
            start_line = lineno;
            start_text = std::string(line.substr(6)) + "\n";
            continue;
        }
        if (code.substr(0, 4) == "end:") {
            if (!have_start) throw QmlError(ErrorKind::Syntax, "expected 'start:' before 'end:'", SourceSpan{lineno, 1});
            section = Section::End;
            have_end = true;
            end_line = lineno;
            end_text = std::string(line.substr(4)) + "\n";
            continue;
        }
        if (starts_with_word(code, "RULE")) {
            if (!have_start || section == Section::End) {
                throw QmlError(ErrorKind::Syntax, "RULE outside the start/end blocks", SourceSpan{lineno, 1});
            }
            section = Section::Rules;
            std::istringstream words{std::string(code)};
            std::string kw, id, dir, at, path;
            words >> kw >> id >> dir >> at >> path;
            std::string extra;
            if (!(words >> extra).fail() || path.empty() || at != "at") {
                throw QmlError(ErrorKind::Syntax, "expected 'RULE <id> <L2R|R2L> at <path>'", SourceSpan{lineno, 1});
            }
            auto rule = parse_rule_id(id);
            if (!rule) throw QmlError(ErrorKind::Syntax, "unknown rule '" + id + "'", SourceSpan{lineno, 1});
            Direction d;
            if (dir == "L2R") {
                d = Direction::L2R;
            } else if (dir == "R2L") {
                d = Direction::R2L;
            } else {
                throw QmlError(ErrorKind::Syntax, "expected L2R or R2L, found '" + dir + "'", SourceSpan{lineno, 1});
            }
            Path p;
            try {
                p = parse_path(path);
            } catch (const QmlError& e) {
                throw QmlError(ErrorKind::Syntax, e.detail(), SourceSpan{lineno, 1});
            }
            script.steps.push_back(RuleApp{*rule, d, std::move(p)});
            continue;
        }
        switch (section) {
            case Section::Start:
                start_text += raw + "\n";
                break;
            case Section::End:
                end_text += raw + "\n";
                break;
            default:
                if (!code.empty()) {
                    throw QmlError(ErrorKind::Syntax, "unexpected line '" + std::string(code) + "'",
                                   SourceSpan{lineno, 1});
                }
        }
    }
    if (!have_start) throw QmlError(ErrorKind::Syntax, "expected 'start:'");
    if (!have_end) throw QmlError(ErrorKind::Syntax, "expected 'end:'");
    script.start = parse_block(start_text, start_line, "start");
    script.end = parse_block(end_text, end_line, "end");
    return script;
}

std::string format_derivation(const DerivationScript& script) {
    std::string out;
    if (!script.context.empty()) out += "context: " + to_string(script.context) + "\n";
    out += "start:\n  " + to_source(script.start) + "\n";
    for (const auto& s : script.steps) out += "RULE " + to_string(s) + "\n";
    out += "end:\n  " + to_source(script.end) + "\n";
    return out;
}

}  // namespace qml
