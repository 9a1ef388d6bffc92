#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gtm/carrier.hpp"
#include "gtm/machine.hpp"

namespace gtm {

// Textual machine format.
//
//   machine NAME;
//   tapes 0:word, 1:word, 2:rat;
//   inputs 2;                      (or: inputs tapes 1, 4;)
//   work '#' '.' blank '.';
//   labels l0 l1 final lf;
//   l0: right 1 -> l1;
//   l1: if 1 is '#' then l0 else l2;
//   l2: 0 := add(1, 2) -> lf;
//
// `inputs` and `work` may be omitted (no inputs; work alphabet inferred from
// the symbols used, with blank '_'). In the labels section one label may be
// marked `final`; without a marker the last declared label is the final one.
// Subroutine names are resolved against a registry supplied at parse time;
// the format never defines function bodies. Lines starting with '#' outside
// quotes are comments.

struct SourceLocation {
    int line = 0;
    int column = 0;
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    SourceLocation location;
    std::string code;
    std::string message;
};

struct MachineSource {
    std::string text;
    std::string origin = "<memory>";
};

struct ParseResult {
    std::optional<Machine> machine;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return machine.has_value(); }
    bool has_errors() const {
        return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
            return d.severity == Diagnostic::Severity::Error;
        });
    }
};

namespace dsl_detail {

enum class TokKind { Ident, Number, Symbol, Punct, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;   // identifier text, digits, punctuation ("->", ":=", ...)
    char symbol = 0;    // quoted symbol for TokKind::Symbol
    SourceLocation loc;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run(std::vector<Diagnostic>& diags) {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            SourceLocation loc{line_, col_};
            if (pos_ >= text_.size()) {
                out.push_back({TokKind::End, "", 0, loc});
                return out;
            }
            char c = text_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string id;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    id += advance();
                out.push_back({TokKind::Ident, id, 0, loc});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string num;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    num += advance();
                out.push_back({TokKind::Number, num, 0, loc});
            } else if (c == '\'') {
                advance();
                if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '\'') {
                    diags.push_back({Diagnostic::Severity::Error, loc, "syntax",
                                     "unterminated symbol literal"});
                    out.push_back({TokKind::End, "", 0, loc});
                    return out;
                }
                char sym = advance();
                advance();  // closing quote
                out.push_back({TokKind::Symbol, std::string(1, sym), sym, loc});
            } else if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
                advance();
                advance();
                out.push_back({TokKind::Punct, ":=", 0, loc});
            } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                advance();
                advance();
                out.push_back({TokKind::Punct, "->", 0, loc});
            } else if (c == ':' || c == ';' || c == ',' || c == '(' || c == ')') {
                out.push_back({TokKind::Punct, std::string(1, advance()), 0, loc});
            } else {
                diags.push_back({Diagnostic::Severity::Error, loc, "syntax",
                                 std::string("unexpected character '") + c + "'"});
                out.push_back({TokKind::End, "", 0, loc});
                return out;
            }
        }
    }

private:
    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, const SubroutineRegistry& registry,
           const CarrierRegistry& carriers)
        : toks_(std::move(tokens)), registry_(registry), carriers_(carriers) {}

    ParseResult run() {
        ParseResult result;
        try {
            parse_machine();
        } catch (const Abort&) {
            result.diagnostics = std::move(diags_);
            return result;
        }
        result.diagnostics = std::move(diags_);
        if (!result.has_errors()) result.machine = std::move(m_);
        return result;
    }

private:
    struct Abort {};

    [[noreturn]] void fail(const std::string& code, const std::string& msg) {
        diags_.push_back({Diagnostic::Severity::Error, peek().loc, code, msg});
        throw Abort{};
    }
    void error_at(SourceLocation loc, const std::string& code, const std::string& msg) {
        diags_.push_back({Diagnostic::Severity::Error, loc, code, msg});
    }

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_ >= toks_.size() - 1 ? pos_ : pos_++]; }

    bool at_ident(const char* kw) const {
        return peek().kind == TokKind::Ident && peek().text == kw;
    }
    bool at_punct(const char* p) const {
        return peek().kind == TokKind::Punct && peek().text == p;
    }
    void expect_punct(const char* p) {
        if (!at_punct(p)) fail("syntax", std::string("expected '") + p + "'");
        take();
    }
    void expect_keyword(const char* kw) {
        if (!at_ident(kw)) fail("syntax", std::string("expected keyword '") + kw + "'");
        take();
    }
    std::string expect_ident(const char* what) {
        if (peek().kind != TokKind::Ident) fail("syntax", std::string("expected ") + what);
        return take().text;
    }
    int expect_number(const char* what) {
        if (peek().kind != TokKind::Number) fail("syntax", std::string("expected ") + what);
        return std::stoi(take().text);
    }
    char expect_symbol() {
        if (peek().kind != TokKind::Symbol) fail("syntax", "expected a quoted symbol");
        return take().symbol;
    }

    void parse_machine() {
        expect_keyword("machine");
        m_.name = expect_ident("machine name");
        expect_punct(";");
        parse_tapes();
        if (at_ident("inputs")) parse_inputs();
        if (at_ident("work"))
            parse_work();
        else
            infer_work_ = true;
        parse_labels();
        while (peek().kind != TokKind::End) parse_statement();
        finish();
    }

    void parse_tapes() {
        SourceLocation section_loc = peek().loc;
        expect_keyword("tapes");
        std::map<int, std::string> decls;
        for (;;) {
            SourceLocation loc = peek().loc;
            int idx = expect_number("tape index");
            expect_punct(":");
            std::string carrier = expect_ident("carrier id");
            if (!carriers_.has(carrier))
                error_at(loc, "unknown-carrier", "unknown carrier '" + carrier + "'");
            if (!decls.emplace(idx, carrier).second)
                error_at(loc, "duplicate-tape", "tape " + std::to_string(idx) + " declared twice");
            if (at_punct(",")) {
                take();
                continue;
            }
            break;
        }
        expect_punct(";");
        int expected = 0;
        for (const auto& [idx, carrier] : decls) {
            if (idx != expected++) {
                error_at(section_loc, "tape-gap", "tape indices must be contiguous from 0");
                break;
            }
            m_.carriers.push_back(carrier);
        }
    }

    void parse_inputs() {
        expect_keyword("inputs");
        if (at_ident("tapes")) {
            take();
            std::vector<int> tapes;
            for (;;) {
                tapes.push_back(expect_number("input tape index"));
                if (at_punct(",")) {
                    take();
                    continue;
                }
                break;
            }
            m_.input_tapes = std::move(tapes);
        } else {
            int k = expect_number("input count");
            m_.input_tapes = contiguous_input_tapes(k);
        }
        expect_punct(";");
    }

    void parse_work() {
        expect_keyword("work");
        std::string gamma;
        while (peek().kind == TokKind::Symbol) gamma += take().symbol;
        if (gamma.empty()) fail("syntax", "work alphabet needs at least one symbol");
        expect_keyword("blank");
        char blank = expect_symbol();
        expect_punct(";");
        m_.work_alphabet = gamma;
        m_.blank = blank;
    }

    void parse_labels() {
        expect_keyword("labels");
        bool explicit_final = false;
        for (;;) {
            bool is_final = false;
            if (at_ident("final")) {
                take();
                is_final = true;
            }
            if (peek().kind != TokKind::Ident) break;
            SourceLocation loc = peek().loc;
            std::string l = take().text;
            if (m_.has_label(l)) error_at(loc, "duplicate-label", "label '" + l + "' declared twice");
            m_.labels.push_back(l);
            label_locs_.emplace(l, loc);
            if (is_final) {
                if (explicit_final)
                    error_at(loc, "duplicate-final", "more than one final label");
                m_.final_label = l;
                explicit_final = true;
            }
            if (at_punct(";")) break;
        }
        expect_punct(";");
        if (m_.labels.empty()) fail("syntax", "labels section is empty");
        if (!explicit_final) m_.final_label = m_.labels.back();
    }

    int tape_operand() {
        SourceLocation loc = peek().loc;
        int t = expect_number("tape index");
        if (t < 0 || t >= m_.tape_count())
            error_at(loc, "bad-tape", "tape index " + std::to_string(t) + " exceeds highest tape " +
                                          std::to_string(m_.tape_count() - 1));
        return t;
    }

    std::string label_operand() {
        SourceLocation loc = peek().loc;
        std::string l = expect_ident("label");
        if (!m_.has_label(l)) error_at(loc, "unknown-label", "unknown label '" + l + "'");
        return l;
    }

    std::vector<int> arg_list() {
        expect_punct("(");
        std::vector<int> args;
        if (!at_punct(")")) {
            for (;;) {
                args.push_back(tape_operand());
                if (at_punct(",")) {
                    take();
                    continue;
                }
                break;
            }
        }
        expect_punct(")");
        return args;
    }

    // Checks the subroutine against the registry and the tape carriers and
    // records it in the machine table.
    void resolve_fn(SourceLocation loc, const std::string& fn, const std::vector<int>& args,
                    std::optional<int> result_tape) {
        const Subroutine* sub = registry_.find(fn);
        if (!sub) {
            error_at(loc, "unknown-fn", "unknown subroutine '" + fn + "'");
            return;
        }
        if (result_tape && !std::holds_alternative<MultiFunction>(*sub)) {
            error_at(loc, "fn-kind", "'" + fn + "' is a test function, assignments need a multi-function");
            return;
        }
        if (!result_tape && !std::holds_alternative<TestFunction>(*sub)) {
            error_at(loc, "fn-kind", "'" + fn + "' is not a test function");
            return;
        }
        if (subroutine_arity(*sub) != args.size()) {
            error_at(loc, "arity-mismatch",
                     "'" + fn + "' takes " + std::to_string(subroutine_arity(*sub)) +
                         " arguments, got " + std::to_string(args.size()));
            return;
        }
        const auto& want = subroutine_arg_carriers(*sub);
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] < 0 || args[i] >= m_.tape_count()) return;  // reported already
            const std::string& have = m_.carriers[static_cast<std::size_t>(args[i])];
            if (want[i] != have)
                error_at(loc, "carrier-mismatch",
                         "'" + fn + "' argument " + std::to_string(i + 1) + " wants carrier '" +
                             want[i] + "', tape " + std::to_string(args[i]) + " has '" + have + "'");
        }
        if (result_tape) {
            const auto& mf = std::get<MultiFunction>(*sub);
            const std::string& have = m_.carriers[static_cast<std::size_t>(*result_tape)];
            if (mf.result_carrier != have)
                error_at(loc, "carrier-mismatch", "'" + fn + "' produces carrier '" +
                                                      mf.result_carrier + "', tape " +
                                                      std::to_string(*result_tape) + " has '" +
                                                      have + "'");
        }
        m_.subroutines.emplace(fn, *sub);
    }

    void parse_statement() {
        SourceLocation loc = peek().loc;
        std::string label = label_operand();
        if (label == m_.final_label)
            error_at(loc, "stmt-on-final", "statement on final label '" + label + "'");
        expect_punct(":");
        Statement stmt = MoveRight{0, m_.final_label};
        if (at_ident("if")) {
            take();
            if (peek().kind == TokKind::Number) {
                int t = tape_operand();
                expect_keyword("is");
                char sym = expect_symbol();
                used_symbols_.insert(sym);
                expect_keyword("then");
                std::string l1 = label_operand();
                expect_keyword("else");
                std::string l2 = label_operand();
                stmt = BranchSym{t, sym, l1, l2};
            } else {
                SourceLocation fn_loc = peek().loc;
                std::string fn = expect_ident("subroutine name");
                std::vector<int> args = arg_list();
                expect_keyword("then");
                std::string l1 = label_operand();
                expect_keyword("else");
                std::string l2 = label_operand();
                resolve_fn(fn_loc, fn, args, std::nullopt);
                stmt = BranchFn{fn, args, l1, l2};
            }
        } else if (at_ident("right") || at_ident("left")) {
            bool right = take().text == "right";
            int t = tape_operand();
            expect_punct("->");
            std::string next = label_operand();
            if (right)
                stmt = MoveRight{t, next};
            else
                stmt = MoveLeft{t, next};
        } else if (at_ident("write")) {
            take();
            int t = tape_operand();
            char sym = expect_symbol();
            used_symbols_.insert(sym);
            expect_punct("->");
            std::string next = label_operand();
            stmt = WriteSym{t, sym, next};
        } else if (peek().kind == TokKind::Number) {
            int t = tape_operand();
            expect_punct(":=");
            SourceLocation fn_loc = peek().loc;
            std::string fn = expect_ident("subroutine name");
            std::vector<int> args = arg_list();
            expect_punct("->");
            std::string next = label_operand();
            resolve_fn(fn_loc, fn, args, t);
            stmt = Assign{t, fn, args, next};
        } else {
            fail("syntax", "expected a statement body");
        }
        if (at_punct(";")) take();
        if (!m_.statements.emplace(label, std::move(stmt)).second)
            error_at(loc, "duplicate-stmt", "label '" + label + "' already has a statement");
    }

    void finish() {
        if (infer_work_) {
            std::string gamma = "_";
            std::set<char> used(used_symbols_.begin(), used_symbols_.end());
            used.erase('_');
            for (char c : used) gamma += c;
            m_.work_alphabet = gamma;
            m_.blank = '_';
        }
        for (const std::string& l : m_.labels) {
            if (l == m_.final_label) continue;
            if (!m_.statements.count(l))
                error_at(label_locs_.count(l) ? label_locs_.at(l) : SourceLocation{},
                         "stm-not-total",
                         "Stm must be total: non-final label '" + l + "' has no statement");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const SubroutineRegistry& registry_;
    const CarrierRegistry& carriers_;
    Machine m_;
    bool infer_work_ = false;
    std::set<char> used_symbols_;
    std::map<std::string, SourceLocation> label_locs_;
    std::vector<Diagnostic> diags_;
};

} // namespace dsl_detail

inline ParseResult parse_machine(const MachineSource& src, const SubroutineRegistry& registry,
                                 const CarrierRegistry& carriers = CarrierRegistry::standard()) {
    std::vector<Diagnostic> lex_diags;
    dsl_detail::Lexer lexer(src.text);
    std::vector<dsl_detail::Token> toks = lexer.run(lex_diags);
    if (!lex_diags.empty()) {
        ParseResult r;
        r.diagnostics = std::move(lex_diags);
        return r;
    }
    dsl_detail::Parser parser(std::move(toks), registry, carriers);
    return parser.run();
}

// Canonical text; parse(render(m)) is structurally equal to m.
inline std::string render_machine(const Machine& m) {
    std::string out = "machine " + m.name + ";\n";
    out += "tapes ";
    for (int t = 0; t < m.tape_count(); ++t) {
        if (t) out += ", ";
        out += std::to_string(t) + ":" + m.carriers[static_cast<std::size_t>(t)];
    }
    out += ";\n";
    if (m.input_tapes == contiguous_input_tapes(static_cast<int>(m.input_arity()))) {
        out += "inputs " + std::to_string(m.input_arity()) + ";\n";
    } else {
        out += "inputs tapes ";
        for (std::size_t i = 0; i < m.input_tapes.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(m.input_tapes[i]);
        }
        out += ";\n";
    }
    out += "work";
    for (char c : m.work_alphabet) out += std::string(" '") + c + "'";
    out += std::string(" blank '") + m.blank + "';\n";
    out += "labels";
    for (const std::string& l : m.labels) {
        if (l == m.final_label) out += " final";
        out += " " + l;
    }
    out += ";\n";
    auto args_text = [](const std::vector<int>& args) {
        std::string s = "(";
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(args[i]);
        }
        return s + ")";
    };
    for (const std::string& l : m.labels) {
        auto it = m.statements.find(l);
        if (it == m.statements.end()) continue;
        out += l + ": ";
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                if constexpr (std::is_same_v<T, MoveRight>)
                    out += "right " + std::to_string(st.tape) + " -> " + st.next;
                else if constexpr (std::is_same_v<T, MoveLeft>)
                    out += "left " + std::to_string(st.tape) + " -> " + st.next;
                else if constexpr (std::is_same_v<T, WriteSym>)
                    out += "write " + std::to_string(st.tape) + " '" + st.symbol + "' -> " + st.next;
                else if constexpr (std::is_same_v<T, BranchSym>)
                    out += "if " + std::to_string(st.tape) + " is '" + st.symbol + "' then " +
                           st.then_label + " else " + st.else_label;
                else if constexpr (std::is_same_v<T, Assign>)
                    out += std::to_string(st.tape) + " := " + st.fn + args_text(st.args) + " -> " +
                           st.next;
                else
                    out += "if " + st.fn + args_text(st.args) + " then " + st.then_label +
                           " else " + st.else_label;
            },
            it->second);
        out += ";\n";
    }
    return out;
}

// Def.-style well-formedness of an arbitrary machine value, plus reachability
// warnings. All checks are reported as diagnostics; nothing throws.
inline std::vector<Diagnostic> validate_machine(const Machine& m,
                                                const CarrierRegistry& carriers =
                                                    CarrierRegistry::standard()) {
    std::vector<Diagnostic> diags;
    auto error = [&](const std::string& code, const std::string& msg) {
        diags.push_back({Diagnostic::Severity::Error, {0, 0}, code, msg});
    };
    auto warning = [&](const std::string& code, const std::string& msg) {
        diags.push_back({Diagnostic::Severity::Warning, {0, 0}, code, msg});
    };

    if (m.labels.empty()) {
        error("no-labels", "machine has no labels");
        return diags;
    }
    if (!m.has_label(m.final_label)) error("unknown-label", "final label is not declared");

    for (char c : m.work_alphabet)
        if (c == '0' || c == '1')
            error("alphabet-overlap", std::string("work symbol '") + c +
                                          "' is in the input alphabet: Sigma and Gamma must be disjoint");
    for (std::size_t i = 0; i < m.work_alphabet.size(); ++i)
        for (std::size_t j = i + 1; j < m.work_alphabet.size(); ++j)
            if (m.work_alphabet[i] == m.work_alphabet[j])
                error("duplicate-symbol", "work alphabet has duplicate symbols");
    if (m.work_alphabet.find(m.blank) == std::string::npos)
        error("blank-missing", std::string("blank '") + m.blank + "' is not in the work alphabet");

    for (int t : m.input_tapes)
        if (t < 1 || t >= m.tape_count())
            error("bad-tape", "input tape " + std::to_string(t) +
                                  " out of range (tape 0 is the output tape)");
    for (std::size_t i = 0; i < m.input_tapes.size(); ++i)
        for (std::size_t j = i + 1; j < m.input_tapes.size(); ++j)
            if (m.input_tapes[i] == m.input_tapes[j]) error("bad-tape", "duplicate input tape");

    for (int t = 0; t < m.tape_count(); ++t)
        if (!carriers.has(m.carriers[static_cast<std::size_t>(t)]))
            error("unknown-carrier", "tape " + std::to_string(t) + " has unregistered carrier '" +
                                         m.carriers[static_cast<std::size_t>(t)] + "'");

    for (const std::string& l : m.labels) {
        bool has_stmt = m.statements.count(l) != 0;
        if (l == m.final_label && has_stmt)
            error("stmt-on-final", "statement on final label '" + l + "'");
        if (l != m.final_label && !has_stmt)
            error("stm-not-total", "non-final label '" + l + "' has no statement");
    }

    auto check_symbol = [&](char sym, const std::string& at) {
        if (m.work_alphabet.find(sym) == std::string::npos)
            error("unknown-symbol",
                  std::string("symbol '") + sym + "' at label '" + at + "' is not in the work alphabet");
    };
    for (const auto& [label, stmt] : m.statements) {
        if (!m.has_label(label)) error("unknown-label", "statement on undeclared label '" + label + "'");
        for (const std::string& succ : statement_successors(stmt))
            if (!m.has_label(succ))
                error("unknown-label", "label '" + succ + "' referenced at '" + label + "' is not declared");
        std::visit(
            [&](const auto& st) {
                using T = std::decay_t<decltype(st)>;
                auto check_tape = [&](int t) {
                    if (t < 0 || t >= m.tape_count())
                        error("bad-tape", "tape index " + std::to_string(t) + " at label '" +
                                              label + "' exceeds highest tape");
                };
                if constexpr (std::is_same_v<T, MoveRight> || std::is_same_v<T, MoveLeft>) {
                    check_tape(st.tape);
                } else if constexpr (std::is_same_v<T, WriteSym>) {
                    check_tape(st.tape);
                    check_symbol(st.symbol, label);
                } else if constexpr (std::is_same_v<T, BranchSym>) {
                    check_tape(st.tape);
                    check_symbol(st.symbol, label);
                } else if constexpr (std::is_same_v<T, Assign>) {
                    check_tape(st.tape);
                    for (int a : st.args) check_tape(a);
                    auto it = m.subroutines.find(st.fn);
                    if (it == m.subroutines.end()) {
                        error("unknown-fn", "subroutine '" + st.fn + "' at label '" + label +
                                                "' is not in the machine table");
                    } else if (const auto* mf = std::get_if<MultiFunction>(&it->second)) {
                        if (mf->arity() != st.args.size())
                            error("arity-mismatch", "subroutine '" + st.fn + "' arity mismatch at '" +
                                                        label + "'");
                        else
                            for (std::size_t i = 0; i < st.args.size(); ++i)
                                if (st.args[i] >= 0 && st.args[i] < m.tape_count() &&
                                    mf->arg_carriers[i] !=
                                        m.carriers[static_cast<std::size_t>(st.args[i])])
                                    error("carrier-mismatch",
                                          "argument carrier mismatch for '" + st.fn + "' at '" +
                                              label + "'");
                        if (st.tape >= 0 && st.tape < m.tape_count() &&
                            mf->result_carrier != m.carriers[static_cast<std::size_t>(st.tape)])
                            error("carrier-mismatch",
                                  "result carrier mismatch for '" + st.fn + "' at '" + label + "'");
                    } else {
                        error("fn-kind", "assignment uses test function '" + st.fn + "' at '" +
                                             label + "'");
                    }
                } else {  // BranchFn
                    for (int a : st.args) check_tape(a);
                    auto it = m.subroutines.find(st.fn);
                    if (it == m.subroutines.end())
                        error("unknown-fn", "subroutine '" + st.fn + "' at label '" + label +
                                                "' is not in the machine table");
                    else if (!std::holds_alternative<TestFunction>(it->second))
                        error("fn-kind",
                              "branching uses non-test function '" + st.fn + "' at '" + label + "'");
                    else if (std::get<TestFunction>(it->second).arity() != st.args.size())
                        error("arity-mismatch",
                              "test '" + st.fn + "' arity mismatch at '" + label + "'");
                }
            },
            stmt);
    }

    // Reachability from the initial label.
    std::set<std::string> reachable;
    std::vector<std::string> frontier{m.initial_label()};
    while (!frontier.empty()) {
        std::string l = frontier.back();
        frontier.pop_back();
        if (!reachable.insert(l).second) continue;
        auto it = m.statements.find(l);
        if (it == m.statements.end()) continue;
        for (const std::string& succ : statement_successors(it->second))
            if (!reachable.count(succ)) frontier.push_back(succ);
    }
    for (const std::string& l : m.labels)
        if (!reachable.count(l))
            warning("unreachable", "label '" + l + "' is unreachable from the initial label");

    return diags;
}

} // namespace gtm
