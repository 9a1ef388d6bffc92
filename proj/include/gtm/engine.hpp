#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gtm/carrier.hpp"
#include "gtm/machine.hpp"
#include "gtm/random.hpp"

namespace gtm {

// A tape cell holds either a work-alphabet symbol or a carrier element. The
// blank is never stored explicitly: absent cells read as the blank symbol.
using Cell = std::variant<char, CarrierValue>;

struct Tape {
    std::map<long long, Cell> cells;
    long long head = 0;
};

struct Configuration {
    std::string label;
    std::vector<Tape> tapes;

    Cell cell_at(int tape, long long pos, char blank) const {
        const auto& cells = tapes[static_cast<std::size_t>(tape)].cells;
        auto it = cells.find(pos);
        return it == cells.end() ? Cell(blank) : it->second;
    }

    Cell scanned(int tape, char blank) const {
        return cell_at(tape, tapes[static_cast<std::size_t>(tape)].head, blank);
    }

    void write_cell(int tape, long long pos, Cell value, char blank) {
        auto& cells = tapes[static_cast<std::size_t>(tape)].cells;
        if (const char* c = std::get_if<char>(&value); c && *c == blank)
            cells.erase(pos);
        else
            cells.insert_or_assign(pos, std::move(value));
    }
};

// Initial configuration: initial label, all heads at 0, input j in cell 0 of
// its input tape, every other cell blank.
inline Configuration initial_configuration(const Machine& m, std::span<const CarrierValue> inputs) {
    if (inputs.size() != m.input_arity())
        throw MachineError("machine '" + m.name + "' expects " + std::to_string(m.input_arity()) +
                           " inputs, got " + std::to_string(inputs.size()));
    Configuration c;
    c.label = m.initial_label();
    c.tapes.resize(static_cast<std::size_t>(m.tape_count()));
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        int tape = m.input_tapes[j];
        const std::string& want = m.carriers[static_cast<std::size_t>(tape)];
        if (inputs[j].carrier() != want)
            throw CarrierError("input " + std::to_string(j + 1) + " has carrier '" +
                               inputs[j].carrier() + "', tape " + std::to_string(tape) +
                               " wants '" + want + "'");
        c.tapes[static_cast<std::size_t>(tape)].cells.emplace(0, inputs[j]);
    }
    return c;
}

struct TraceRecord {
    std::size_t step = 0;
    std::string label;
    std::string stmt_kind;
    int tape = -1;                         // primary tape of the statement, -1 for branch-fn
    std::vector<long long> heads;          // head positions after the step
    std::optional<std::tuple<int, long long, std::string>> changed_cell;
    std::optional<std::uint64_t> token;
};

inline std::string render_trace_line(const TraceRecord& r) {
    std::string line = "step=" + std::to_string(r.step) + " label=" + r.label +
                       " stmt=" + r.stmt_kind;
    if (r.tape >= 0) line += " tape=" + std::to_string(r.tape);
    line += " heads=";
    for (std::size_t i = 0; i < r.heads.size(); ++i) {
        if (i) line += ",";
        line += std::to_string(r.heads[i]);
    }
    if (r.changed_cell) {
        const auto& [tape, pos, value] = *r.changed_cell;
        line += " cell=" + std::to_string(tape) + ":" + std::to_string(pos) + ":" + value;
    }
    if (r.token) line += " token=" + std::to_string(*r.token);
    return line;
}

// One application of the successor relation. `Final` when the label is the
// final one; `Blocked` when no successor configuration exists (undefined
// test, empty multi-function result, or a work symbol where an argument value
// is required).
struct StepResult {
    enum class Kind { Next, Final, Blocked };
    Kind kind = Kind::Blocked;
    Configuration next;      // valid when kind == Next
    std::string reason;      // set when kind == Blocked
};

namespace detail {
// Collects the argument tuple under the heads of `arg_tapes`; every cell must
// hold a carrier value of the tape's carrier.
inline std::optional<std::vector<CarrierValue>> gather_args(const Machine& m,
                                                            const Configuration& c,
                                                            std::span<const int> arg_tapes,
                                                            std::string* reason) {
    std::vector<CarrierValue> args;
    args.reserve(arg_tapes.size());
    for (int t : arg_tapes) {
        Cell cell = c.scanned(t, m.blank);
        if (std::holds_alternative<char>(cell)) {
            *reason = "argument-kind: tape " + std::to_string(t) +
                      " holds a work symbol where a carrier value is required";
            return std::nullopt;
        }
        args.push_back(std::get<CarrierValue>(std::move(cell)));
    }
    return args;
}
} // namespace detail

inline StepResult step(const Machine& m, const Configuration& c, std::uint64_t token,
                       TraceRecord* trace = nullptr) {
    StepResult res;
    if (c.label == m.final_label) {
        res.kind = StepResult::Kind::Final;
        return res;
    }
    auto it = m.statements.find(c.label);
    if (it == m.statements.end())
        throw MachineError("no statement for non-final label '" + c.label + "'");
    const Statement& stmt = it->second;

    Configuration next = c;
    std::optional<std::tuple<int, long long, std::string>> changed;
    int primary_tape = -1;

    bool blocked = false;
    std::visit(
        [&](const auto& st) {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, MoveRight>) {
                primary_tape = st.tape;
                next.tapes[static_cast<std::size_t>(st.tape)].head += 1;
                next.label = st.next;
            } else if constexpr (std::is_same_v<T, MoveLeft>) {
                primary_tape = st.tape;
                next.tapes[static_cast<std::size_t>(st.tape)].head -= 1;
                next.label = st.next;
            } else if constexpr (std::is_same_v<T, WriteSym>) {
                primary_tape = st.tape;
                long long pos = next.tapes[static_cast<std::size_t>(st.tape)].head;
                next.write_cell(st.tape, pos, Cell(st.symbol), m.blank);
                next.label = st.next;
                changed = {st.tape, pos, std::string(1, st.symbol)};
            } else if constexpr (std::is_same_v<T, BranchSym>) {
                primary_tape = st.tape;
                Cell cell = c.scanned(st.tape, m.blank);
                const char* sym = std::get_if<char>(&cell);
                next.label = (sym && *sym == st.symbol) ? st.then_label : st.else_label;
            } else if constexpr (std::is_same_v<T, Assign>) {
                primary_tape = st.tape;
                std::string reason;
                auto args = detail::gather_args(m, c, st.args, &reason);
                if (!args) {
                    res.reason = reason;
                    blocked = true;
                    return;
                }
                const auto* fn = std::get_if<MultiFunction>(&m.subroutine(st.fn));
                if (!fn) throw MachineError("assignment uses test function '" + st.fn + "'");
                auto value = fn->choose(*args, token);
                if (!value) {
                    res.reason = "empty-domain: " + st.fn + " has no value here";
                    blocked = true;
                    return;
                }
                if (value->carrier() != m.carriers[static_cast<std::size_t>(st.tape)])
                    throw CarrierError("subroutine '" + st.fn + "' produced carrier '" +
                                       value->carrier() + "' for tape " + std::to_string(st.tape));
                long long pos = next.tapes[static_cast<std::size_t>(st.tape)].head;
                std::string rendered = render_value(*value);
                next.write_cell(st.tape, pos, Cell(std::move(*value)), m.blank);
                next.label = st.next;
                changed = {st.tape, pos, rendered};
            } else {  // BranchFn
                std::string reason;
                auto args = detail::gather_args(m, c, st.args, &reason);
                if (!args) {
                    res.reason = reason;
                    blocked = true;
                    return;
                }
                const auto* fn = std::get_if<TestFunction>(&m.subroutine(st.fn));
                if (!fn) throw MachineError("branching uses non-test function '" + st.fn + "'");
                auto bit = fn->evaluate(*args);
                if (!bit) {
                    res.reason = "test-undefined: " + st.fn + " is undefined here";
                    blocked = true;
                    return;
                }
                if (*bit != '0' && *bit != '1')
                    throw MachineError("test '" + st.fn + "' returned a value outside {0,1}");
                next.label = *bit == '0' ? st.then_label : st.else_label;
            }
        },
        stmt);

    if (blocked) {
        res.kind = StepResult::Kind::Blocked;
        return res;
    }
    if (trace) {
        trace->label = c.label;
        trace->stmt_kind = statement_kind(stmt);
        trace->tape = primary_tape;
        trace->heads.clear();
        for (const Tape& t : next.tapes) trace->heads.push_back(t.head);
        trace->changed_cell = changed;
        trace->token = std::holds_alternative<Assign>(stmt) ? std::optional(token) : std::nullopt;
    }
    res.kind = StepResult::Kind::Next;
    res.next = std::move(next);
    return res;
}

// A replayable choice oracle: index -> token. Only assignment statements
// consume tokens.
using ChoiceOracle = std::function<std::uint64_t(std::size_t)>;

inline ChoiceOracle fixed_tokens(std::vector<std::uint64_t> tokens) {
    return [tokens = std::move(tokens)](std::size_t i) -> std::uint64_t {
        return i < tokens.size() ? tokens[i] : 0;
    };
}

// Documented seed expansion: token_0 = seed, token_{i+1} = splitmix64(token_i).
inline ChoiceOracle seeded_oracle(std::uint64_t seed) {
    return [seed](std::size_t i) {
        std::uint64_t t = seed;
        for (std::size_t j = 0; j < i; ++j) t = splitmix64(t);
        return t;
    };
}

struct RunOutcome {
    enum class Kind { Accepted, RejectedAtFinal, Blocked, BudgetExceeded };
    Kind kind = Kind::BudgetExceeded;
    std::optional<CarrierValue> output;  // cell 0 of tape 0 when accepted
    std::string reason;
    std::size_t steps = 0;

    bool accepted() const { return kind == Kind::Accepted; }
};

using TraceSink = std::function<void(const TraceRecord&)>;

// Iterates the successor relation from the initial configuration, consuming
// one oracle token per assignment. Accepts when the final label is reached
// with a carrier value in cell 0 of tape 0.
inline RunOutcome run(const Machine& m, std::span<const CarrierValue> inputs,
                      const ChoiceOracle& oracle = seeded_oracle(0),
                      std::size_t max_steps = 100000, const TraceSink& sink = nullptr,
                      Configuration* final_config = nullptr) {
    Configuration c = initial_configuration(m, inputs);
    std::size_t assigns = 0;
    RunOutcome out;
    for (std::size_t n = 0; n <= max_steps; ++n) {
        if (c.label == m.final_label) {
            Cell cell = c.cell_at(0, 0, m.blank);
            out.steps = n;
            if (std::holds_alternative<CarrierValue>(cell)) {
                out.kind = RunOutcome::Kind::Accepted;
                out.output = std::get<CarrierValue>(std::move(cell));
            } else {
                out.kind = RunOutcome::Kind::RejectedAtFinal;
                out.reason = "output cell holds a work symbol";
            }
            if (final_config) *final_config = std::move(c);
            return out;
        }
        if (n == max_steps) break;
        std::uint64_t token = 0;
        if (std::holds_alternative<Assign>(m.statements.at(c.label))) token = oracle(assigns++);
        TraceRecord rec;
        rec.step = n;
        StepResult sr = step(m, c, token, sink ? &rec : nullptr);
        if (sr.kind == StepResult::Kind::Blocked) {
            out.kind = RunOutcome::Kind::Blocked;
            out.reason = sr.reason;
            out.steps = n;
            if (final_config) *final_config = std::move(c);
            return out;
        }
        if (sink) sink(rec);
        c = std::move(sr.next);
    }
    out.kind = RunOutcome::Kind::BudgetExceeded;
    out.steps = max_steps;
    if (final_config) *final_config = std::move(c);
    return out;
}

// Snapshots of the first `limit` configurations of a deterministic run
// (initial configuration included). Used by simulation-invariant tests.
inline std::vector<Configuration> run_snapshots(const Machine& m,
                                                std::span<const CarrierValue> inputs,
                                                std::size_t limit) {
    std::vector<Configuration> snaps;
    Configuration c = initial_configuration(m, inputs);
    snaps.push_back(c);
    for (std::size_t n = 0; n < limit; ++n) {
        StepResult sr = step(m, c, 0);
        if (sr.kind != StepResult::Kind::Next) break;
        c = std::move(sr.next);
        snaps.push_back(c);
    }
    return snaps;
}

// Exhaustive exploration of the computation tree up to `max_steps`.
//
//   outcome_set:            outputs of all accepting leaves found
//   all_maximal_accepting:  True  - every maximal path within budget accepts
//                           False - some maximal path blocks or rejects
//                           Inconclusive - some path hit the step budget
//
// f_M(inputs) equals outcome_set exactly when the verdict is True. Requires
// every reached multi-function to carry `enumerate` with at most `max_branch`
// values.
struct OutcomeSet {
    enum class Verdict { True, False, Inconclusive };
    std::vector<CarrierValue> outcomes;  // deduplicated, ordered
    Verdict all_maximal_accepting = Verdict::True;
};

namespace detail {
struct OutcomeCollector {
    const Machine& m;
    std::size_t max_steps;
    std::size_t max_branch;
    std::vector<CarrierValue> outcomes;
    bool saw_failure = false;
    bool saw_budget = false;

    void add_outcome(CarrierValue v) {
        for (const CarrierValue& o : outcomes)
            if (carrier_value_equal(o, v)) return;
        outcomes.push_back(std::move(v));
    }

    void explore(const Configuration& c, std::size_t depth) {
        if (c.label == m.final_label) {
            Cell cell = c.cell_at(0, 0, m.blank);
            if (std::holds_alternative<CarrierValue>(cell))
                add_outcome(std::get<CarrierValue>(std::move(cell)));
            else
                saw_failure = true;  // maximal but not accepting
            return;
        }
        if (depth >= max_steps) {
            saw_budget = true;
            return;
        }
        const Statement& stmt = m.statements.at(c.label);
        if (const auto* as = std::get_if<Assign>(&stmt)) {
            std::string reason;
            auto args = gather_args(m, c, as->args, &reason);
            if (!args) {
                saw_failure = true;
                return;
            }
            const auto* fn = std::get_if<MultiFunction>(&m.subroutine(as->fn));
            if (!fn || !fn->enumerate)
                throw MachineError("enumerate missing on multi-function '" + as->fn + "'");
            auto values = fn->enumerate(*args);
            if (!values || values->empty()) {
                saw_failure = true;  // no successor
                return;
            }
            if (values->size() > max_branch)
                throw MachineError("multi-function '" + as->fn + "' branches " +
                                   std::to_string(values->size()) + " > max_branch");
            for (CarrierValue& v : *values) {
                Configuration next = c;
                long long pos = next.tapes[static_cast<std::size_t>(as->tape)].head;
                next.write_cell(as->tape, pos, Cell(std::move(v)), m.blank);
                next.label = as->next;
                explore(next, depth + 1);
            }
            return;
        }
        StepResult sr = step(m, c, 0);
        if (sr.kind == StepResult::Kind::Blocked) {
            saw_failure = true;
            return;
        }
        explore(sr.next, depth + 1);
    }
};
} // namespace detail

inline OutcomeSet enumerate_outcomes(const Machine& m, std::span<const CarrierValue> inputs,
                                     std::size_t max_steps, std::size_t max_branch) {
    detail::OutcomeCollector col{m, max_steps, max_branch, {}, false, false};
    col.explore(initial_configuration(m, inputs), 0);
    OutcomeSet out;
    std::sort(col.outcomes.begin(), col.outcomes.end(), carrier_value_less);
    out.outcomes = std::move(col.outcomes);
    if (col.saw_budget)
        out.all_maximal_accepting = OutcomeSet::Verdict::Inconclusive;
    else if (col.saw_failure)
        out.all_maximal_accepting = OutcomeSet::Verdict::False;
    else
        out.all_maximal_accepting = OutcomeSet::Verdict::True;
    return out;
}

// Structural difference between two configurations over the same machine
// shape; used to assert step locality (one label, one head, one cell).
struct ConfigDiff {
    bool label_changed = false;
    std::vector<int> heads_changed;
    std::vector<std::pair<int, long long>> cells_changed;
};

inline ConfigDiff diff_configurations(const Configuration& a, const Configuration& b) {
    ConfigDiff d;
    d.label_changed = a.label != b.label;
    for (std::size_t t = 0; t < a.tapes.size() && t < b.tapes.size(); ++t) {
        if (a.tapes[t].head != b.tapes[t].head) d.heads_changed.push_back(static_cast<int>(t));
        std::set<long long> keys;
        for (const auto& [k, v] : a.tapes[t].cells) keys.insert(k);
        for (const auto& [k, v] : b.tapes[t].cells) keys.insert(k);
        for (long long k : keys) {
            auto ia = a.tapes[t].cells.find(k);
            auto ib = b.tapes[t].cells.find(k);
            bool has_a = ia != a.tapes[t].cells.end();
            bool has_b = ib != b.tapes[t].cells.end();
            bool same = false;
            if (has_a && has_b) {
                if (ia->second.index() == ib->second.index()) {
                    if (const char* ca = std::get_if<char>(&ia->second))
                        same = *ca == std::get<char>(ib->second);
                    else
                        same = carrier_value_equal(std::get<CarrierValue>(ia->second),
                                                   std::get<CarrierValue>(ib->second));
                }
            } else if (!has_a && !has_b) {
                same = true;
            }
            if (!same) d.cells_changed.emplace_back(static_cast<int>(t), k);
        }
    }
    return d;
}

} // namespace gtm
