#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtm/engine.hpp"
#include "gtm/machine.hpp"
#include "gtm/represent.hpp"
#include "gtm/wordfn.hpp"

namespace gtm {

// Per-sample verdicts of empirical realization checks. `Skipped` marks
// samples outside the domain of the abstract function, where the realization
// condition holds vacuously.
enum class SampleVerdict { Verified, Refuted, Inconclusive, Skipped };

struct SampleReport {
    SampleVerdict verdict = SampleVerdict::Inconclusive;
    std::string detail;
};

inline bool all_verified_or_skipped(std::span<const SampleReport> reports) {
    for (const SampleReport& r : reports)
        if (r.verdict != SampleVerdict::Verified && r.verdict != SampleVerdict::Skipped)
            return false;
    return true;
}

struct CheckBudgets {
    std::size_t max_steps = 100000;   // engine steps per machine run
    std::size_t max_branch = 16;      // enumeration width for outcome search
    std::size_t token_samples = 4;    // sampled runs when enumerate is missing
};

// Realizers for the abstract subroutines of a machine, plus the per-tape
// representation assignment delta_0..delta_L that gives the lowering its
// name carriers.
struct RealizerTable {
    std::map<std::string, Subroutine> realizers;
    std::vector<MultiRepresentation> tape_reps;
};

namespace detail {
// The acceptable outputs of a multi-function at one point: the enumeration
// when available, otherwise outputs sampled over a few choice tokens. An
// empty result means the arguments are outside the domain.
inline std::vector<CarrierValue> function_outputs(const MultiFunction& f,
                                                  std::span<const CarrierValue> args,
                                                  std::size_t token_samples) {
    if (f.enumerate) {
        auto all = f.enumerate(args);
        return all ? std::move(*all) : std::vector<CarrierValue>{};
    }
    std::vector<CarrierValue> out;
    for (std::size_t t = 0; t < token_samples; ++t) {
        auto v = f.choose(args, t);
        if (!v) return {};  // empty acceptable set
        bool fresh = true;
        for (const CarrierValue& o : out)
            if (carrier_value_equal(o, *v)) fresh = false;
        if (fresh) out.push_back(std::move(*v));
    }
    return out;
}
} // namespace detail

// Checks the realization condition at precision d on concrete samples:
//
//   for every abstract tuple y in dom(g), with names x encoding y:
//   f(x) is nonempty, and every output of f(x) is consistent at precision d
//   with some acceptable value of g(y).
//
// Samples are abstract tuples; their names are produced by the argument
// representations' encoders, so "x names y" holds by construction.
inline std::vector<SampleReport> check_realization(
    const MultiFunction& f, const MultiFunction& g,
    std::span<const MultiRepresentation> arg_reps, const MultiRepresentation& result_rep,
    std::span<const std::vector<CarrierValue>> abstract_samples, unsigned precision,
    const CheckBudgets& budgets = {}) {
    if (arg_reps.size() != g.arity())
        throw MachineError("check_realization: representation count does not match g's arity");
    std::vector<SampleReport> reports;
    reports.reserve(abstract_samples.size());
    for (const std::vector<CarrierValue>& y : abstract_samples) {
        SampleReport report;
        if (y.size() != g.arity()) throw MachineError("sample arity mismatch");
        auto g_out = detail::function_outputs(g, y, budgets.token_samples);
        if (g_out.empty()) {
            report.verdict = SampleVerdict::Skipped;
            report.detail = "outside dom(g)";
            reports.push_back(std::move(report));
            continue;
        }
        std::vector<CarrierValue> x;
        x.reserve(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) x.push_back(arg_reps[i].encode(y[i]));
        auto f_out = detail::function_outputs(f, x, budgets.token_samples);
        if (f_out.empty()) {
            report.verdict = SampleVerdict::Refuted;
            report.detail = "f(x) is empty on a named input of dom(g)";
            reports.push_back(std::move(report));
            continue;
        }
        report.verdict = SampleVerdict::Verified;
        for (const CarrierValue& x0 : f_out) {
            ApproxResult probe = result_rep.approx_decode(x0, precision);
            if (probe.status == ApproxResult::Status::Insufficient) {
                report.verdict = SampleVerdict::Inconclusive;
                report.detail = "output name did not reach precision " + std::to_string(precision);
                break;
            }
            bool consistent_with_some = false;
            for (const CarrierValue& y0 : g_out)
                if (result_rep.member_at_precision(x0, y0, precision) == Membership::Consistent) {
                    consistent_with_some = true;
                    break;
                }
            if (!consistent_with_some) {
                report.verdict = SampleVerdict::Refuted;
                report.detail = "an output of f names no acceptable value of g";
                break;
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

// Replaces every abstract subroutine by its realizer and every carrier by the
// corresponding name carrier, keeping labels, work alphabet, inputs, and the
// whole statement skeleton. Signatures are checked statement by statement:
// the realizer of f at (i := f(i1..in), l') must map the name carriers of
// delta_{i1}..delta_{in} to the name carrier of delta_i, and test realizers
// must be test functions.
inline Machine lower_machine(const Machine& n, const RealizerTable& rt) {
    if (rt.tape_reps.size() != static_cast<std::size_t>(n.tape_count()))
        throw MachineError("realizer table has " + std::to_string(rt.tape_reps.size()) +
                           " representations for " + std::to_string(n.tape_count()) + " tapes");
    for (int t = 0; t < n.tape_count(); ++t)
        if (rt.tape_reps[static_cast<std::size_t>(t)].object_carrier !=
            n.carriers[static_cast<std::size_t>(t)])
            throw MachineError("representation for tape " + std::to_string(t) + " represents '" +
                               rt.tape_reps[static_cast<std::size_t>(t)].object_carrier +
                               "', tape carrier is '" + n.carriers[static_cast<std::size_t>(t)] + "'");

    Machine m = n;
    m.subroutines.clear();
    for (int t = 0; t < n.tape_count(); ++t)
        m.carriers[static_cast<std::size_t>(t)] =
            rt.tape_reps[static_cast<std::size_t>(t)].name_carrier;

    auto name_carrier = [&](int tape) {
        return rt.tape_reps[static_cast<std::size_t>(tape)].name_carrier;
    };
    for (const auto& [label, stmt] : n.statements) {
        const std::string* fn = statement_fn(stmt);
        if (!fn) continue;
        auto it = rt.realizers.find(*fn);
        if (it == rt.realizers.end())
            throw MachineError("no realizer for '" + *fn + "' (used at label '" + label + "')");
        const Subroutine& realizer = it->second;
        if (const auto* as = std::get_if<Assign>(&stmt)) {
            const auto* mf = std::get_if<MultiFunction>(&realizer);
            if (!mf)
                throw MachineError("realizer for assignment '" + *fn + "' at label '" + label +
                                   "' must be a multi-function");
            if (mf->arity() != as->args.size())
                throw MachineError("realizer for '" + *fn + "' at label '" + label +
                                   "' has wrong arity");
            for (std::size_t i = 0; i < as->args.size(); ++i)
                if (mf->arg_carriers[i] != name_carrier(as->args[i]))
                    throw MachineError("realizer for '" + *fn + "' at label '" + label +
                                       "': argument " + std::to_string(i + 1) +
                                       " carrier mismatch");
            if (mf->result_carrier != name_carrier(as->tape))
                throw MachineError("realizer for '" + *fn + "' at label '" + label +
                                   "': result carrier mismatch");
        } else {
            const auto* bf = std::get_if<BranchFn>(&stmt);
            const auto* tf = std::get_if<TestFunction>(&realizer);
            if (!tf)
                throw MachineError("realizer for test '" + *fn + "' at label '" + label +
                                   "' must be a test function");
            if (tf->arity() != bf->args.size())
                throw MachineError("realizer for '" + *fn + "' at label '" + label +
                                   "' has wrong arity");
            for (std::size_t i = 0; i < bf->args.size(); ++i)
                if (tf->arg_carriers[i] != name_carrier(bf->args[i]))
                    throw MachineError("realizer for '" + *fn + "' at label '" + label +
                                       "': argument " + std::to_string(i + 1) +
                                       " carrier mismatch");
        }
        m.subroutines.emplace(*fn, realizer);
    }
    return m;
}

namespace detail {
struct MachineOutputs {
    enum class Status { Exact, Sampled, Empty, Inconclusive };
    Status status = Status::Inconclusive;
    std::vector<CarrierValue> outputs;
};

// The observable value set of a machine on one input tuple: exhaustive when
// every reached multi-function enumerates, otherwise sampled over seeds.
inline MachineOutputs machine_value_set(const Machine& m, std::span<const CarrierValue> inputs,
                                        const CheckBudgets& budgets) {
    MachineOutputs result;
    bool enumerable = true;
    for (const auto& [id, sub] : m.subroutines)
        if (const auto* mf = std::get_if<MultiFunction>(&sub))
            if (!mf->enumerate) enumerable = false;
    if (enumerable) {
        OutcomeSet set = enumerate_outcomes(m, inputs, budgets.max_steps, budgets.max_branch);
        result.outputs = std::move(set.outcomes);
        switch (set.all_maximal_accepting) {
            case OutcomeSet::Verdict::True: result.status = MachineOutputs::Status::Exact; break;
            case OutcomeSet::Verdict::False: result.status = MachineOutputs::Status::Empty; break;
            case OutcomeSet::Verdict::Inconclusive:
                result.status = MachineOutputs::Status::Inconclusive;
                break;
        }
        return result;
    }
    for (std::size_t seed = 0; seed < budgets.token_samples; ++seed) {
        RunOutcome out = run(m, inputs, seeded_oracle(seed), budgets.max_steps);
        if (out.kind == RunOutcome::Kind::BudgetExceeded) {
            result.status = MachineOutputs::Status::Inconclusive;
            return result;
        }
        if (!out.accepted()) {
            // A witnessed maximal non-accepting computation: the machine's
            // value set at this input is empty.
            result.status = MachineOutputs::Status::Empty;
            result.outputs.clear();
            return result;
        }
        bool fresh = true;
        for (const CarrierValue& o : result.outputs)
            if (carrier_value_equal(o, *out.output)) fresh = false;
        if (fresh) result.outputs.push_back(std::move(*out.output));
    }
    result.status = MachineOutputs::Status::Sampled;
    return result;
}
} // namespace detail

// Empirical content of machine-level realization closure: runs the name-level
// machine m and the abstract machine n on paired inputs (names encode the
// abstract tuple) and checks the realization condition on the observed value
// sets at precision d.
inline std::vector<SampleReport> check_machine_realization_empirical(
    const Machine& m, const Machine& n, std::span<const MultiRepresentation> input_reps,
    const MultiRepresentation& output_rep, std::span<const std::vector<CarrierValue>> samples,
    unsigned precision, const CheckBudgets& budgets = {}) {
    if (input_reps.size() != n.input_arity())
        throw MachineError("need one representation per abstract input tape");
    std::vector<SampleReport> reports;
    for (const std::vector<CarrierValue>& y : samples) {
        SampleReport report;
        auto abstract = detail::machine_value_set(n, y, budgets);
        if (abstract.status == detail::MachineOutputs::Status::Empty) {
            report.verdict = SampleVerdict::Skipped;
            report.detail = "input outside dom(f_N)";
            reports.push_back(std::move(report));
            continue;
        }
        if (abstract.status == detail::MachineOutputs::Status::Inconclusive) {
            report.verdict = SampleVerdict::Inconclusive;
            report.detail = "abstract machine exceeded its budget";
            reports.push_back(std::move(report));
            continue;
        }
        std::vector<CarrierValue> x;
        for (std::size_t i = 0; i < y.size(); ++i) x.push_back(input_reps[i].encode(y[i]));
        auto concrete = detail::machine_value_set(m, x, budgets);
        if (concrete.status == detail::MachineOutputs::Status::Inconclusive) {
            report.verdict = SampleVerdict::Inconclusive;
            report.detail = "name-level machine exceeded its budget";
            reports.push_back(std::move(report));
            continue;
        }
        if (concrete.outputs.empty()) {
            report.verdict = SampleVerdict::Refuted;
            report.detail = "f_M produced nothing on a named input of dom(f_N)";
            reports.push_back(std::move(report));
            continue;
        }
        report.verdict = SampleVerdict::Verified;
        for (const CarrierValue& x0 : concrete.outputs) {
            ApproxResult probe = output_rep.approx_decode(x0, precision);
            if (probe.status == ApproxResult::Status::Insufficient) {
                report.verdict = SampleVerdict::Inconclusive;
                report.detail = "output name did not reach precision " + std::to_string(precision);
                break;
            }
            bool ok = false;
            for (const CarrierValue& y0 : abstract.outputs)
                if (output_rep.member_at_precision(x0, y0, precision) == Membership::Consistent) {
                    ok = true;
                    break;
                }
            if (!ok) {
                report.verdict = SampleVerdict::Refuted;
                report.detail = "an output of f_M names no acceptable value of f_N";
                break;
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

// ---- word-machine generation and stream evaluation ---------------------------

inline MultiFunction to_multi_function(const WordFunction& h) {
    std::vector<std::string> args(h.arity, "word");
    auto eval = h.evaluate;
    return MultiFunction::single_valued(
        h.name, std::move(args), "word",
        [eval](std::span<const CarrierValue> a) -> std::optional<CarrierValue> {
            std::vector<Word> words;
            words.reserve(a.size());
            for (const CarrierValue& v : a) words.push_back(v.as_word());
            auto w = eval(words);
            if (!w) return std::nullopt;
            return word_value(*w);
        });
}

inline TestFunction to_test_function(const WordFunction& h) {
    TestFunction t;
    t.name = h.name;
    t.arg_carriers.assign(h.arity, "word");
    auto eval = h.evaluate;
    auto name = h.name;
    t.evaluate = [eval, name](std::span<const CarrierValue> a) -> std::optional<char> {
        std::vector<Word> words;
        words.reserve(a.size());
        for (const CarrierValue& v : a) words.push_back(v.as_word());
        auto w = eval(words);
        if (!w) return std::nullopt;
        if (w->size() != 1 || (w->at(0) != '0' && w->at(0) != '1'))
            throw MachineError("test generator '" + name + "' returned a value outside {0,1}");
        return w->at(0);
    };
    return t;
}

// Builds the generating word machine of a stream machine: the same statement
// skeleton with all carriers Word and every subroutine replaced by its
// generating word function. Assignments need monotone generators, tests
// monotone-constant ones; the declared class is enforced here and verified
// pointwise during evaluation.
inline Machine generate_word_machine(const Machine& n,
                                     const std::map<std::string, WordFunction>& generators) {
    for (const std::string& c : n.carriers)
        if (c != "stream")
            throw MachineError("generate_word_machine expects stream carriers, found '" + c + "'");
    Machine m = n;
    m.subroutines.clear();
    for (std::size_t i = 0; i < m.carriers.size(); ++i) m.carriers[i] = "word";
    for (const auto& [label, stmt] : n.statements) {
        const std::string* fn = statement_fn(stmt);
        if (!fn) continue;
        auto it = generators.find(*fn);
        if (it == generators.end())
            throw MachineError("no generating word function for '" + *fn + "' (label '" + label +
                               "')");
        const WordFunction& h = it->second;
        if (std::holds_alternative<Assign>(stmt)) {
            if (h.declared_class != WordFunction::Class::Monotone)
                throw ClassViolationError("generator for assignment '" + *fn +
                                          "' must be declared monotone");
            m.subroutines.insert_or_assign(*fn, to_multi_function(h));
        } else {
            if (h.declared_class != WordFunction::Class::MonotoneConstant)
                throw ClassViolationError("generator for test '" + *fn +
                                          "' must be declared monotone-constant");
            m.subroutines.insert_or_assign(*fn, to_test_function(h));
        }
    }
    return m;
}

// Evaluates the stream function generated by a monotone word machine: runs
// the machine on input prefixes q^{<e} for e = 1,2,..., checks that accepted
// outputs form a prefix chain, and returns the first output of at least
// `demand` symbols. Inputs on which the machine is not yet defined (blocked
// or rejected at small e) are skipped; a chain violation means the machine
// breaks the monotone hypothesis and is an error.
struct EvalResult {
    enum class Kind { Value, InsufficientPrecision };
    Kind kind = Kind::InsufficientPrecision;
    Word value;
    std::size_t at_precision = 0;  // the e that produced the value
};

inline EvalResult eval_stream_machine(const Machine& m_words, std::span<const Stream> q,
                                      std::size_t demand, std::size_t schedule_limit,
                                      const CheckBudgets& budgets = {}) {
    if (q.size() != m_words.input_arity())
        throw MachineError("eval_stream_machine input arity mismatch");
    std::optional<Word> last;
    std::size_t last_e = 0;
    for (std::size_t e = 1; e <= schedule_limit; ++e) {
        std::vector<Word> prefixes = stream_prefix(q, e);
        std::vector<CarrierValue> inputs;
        inputs.reserve(prefixes.size());
        for (Word& w : prefixes) inputs.push_back(word_value(std::move(w)));
        RunOutcome out = run(m_words, inputs, seeded_oracle(0), budgets.max_steps);
        if (!out.accepted()) continue;
        Word w = out.output->as_word();
        if (last && !prefix_leq(*last, w))
            throw ClassViolationError(
                "monotonicity breach: f_M(q^{<" + std::to_string(last_e) + "}) = " +
                last->symbols() + " is not a prefix of f_M(q^{<" + std::to_string(e) + "}) = " +
                w.symbols());
        last = w;
        last_e = e;
        if (w.size() >= demand) return {EvalResult::Kind::Value, std::move(w), e};
    }
    return {EvalResult::Kind::InsufficientPrecision, last.value_or(Word()), last_e};
}

// ---- configuration prefix order and precision gauge --------------------------

namespace detail {
inline bool cell_prefix(const Cell& a, const Cell& b) {
    if (const char* ca = std::get_if<char>(&a)) {
        const char* cb = std::get_if<char>(&b);
        return cb && *ca == *cb;  // equal work symbols
    }
    const CarrierValue& va = std::get<CarrierValue>(a);
    const CarrierValue* vb = std::get_if<CarrierValue>(&b);
    if (!vb) return false;
    if (va.kind() == PayloadKind::Word && vb->kind() == PayloadKind::Word)
        return prefix_leq(va.as_word(), vb->as_word());
    return carrier_value_equal(va, *vb);
}
} // namespace detail

// The configuration prefix order: same label, same head positions, and every
// cell equal (work symbols) or a word prefix (word cells).
inline bool config_prefix(const Configuration& c, const Configuration& c2, char blank) {
    if (c.label != c2.label) return false;
    if (c.tapes.size() != c2.tapes.size()) return false;
    for (std::size_t t = 0; t < c.tapes.size(); ++t) {
        if (c.tapes[t].head != c2.tapes[t].head) return false;
        std::set<long long> keys;
        for (const auto& [k, v] : c.tapes[t].cells) keys.insert(k);
        for (const auto& [k, v] : c2.tapes[t].cells) keys.insert(k);
        for (long long k : keys)
            if (!detail::cell_prefix(c.cell_at(static_cast<int>(t), k, blank),
                                     c2.cell_at(static_cast<int>(t), k, blank)))
                return false;
    }
    return true;
}

// P(kappa): minimum length over the word-valued cells of a configuration;
// nullopt when no cell holds a word. Work-symbol cells are ignored.
inline std::optional<std::size_t> precision_gauge(const Configuration& c) {
    std::optional<std::size_t> gauge;
    for (const Tape& t : c.tapes)
        for (const auto& [pos, cell] : t.cells)
            if (const CarrierValue* v = std::get_if<CarrierValue>(&cell))
                if (v->kind() == PayloadKind::Word)
                    if (!gauge || v->as_word().size() < *gauge) gauge = v->as_word().size();
    return gauge;
}

} // namespace gtm
