#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtm/engine.hpp"
#include "gtm/machine.hpp"
#include "gtm/realize.hpp"

namespace gtm {

// Control-flow graph of a machine: (l, l') is an edge iff the statement at l
// continues or branches to l'. The final label has no outgoing edges.
struct MachineGraph {
    std::vector<std::string> vertices;
    std::set<std::pair<std::string, std::string>> edges;

    std::vector<std::string> successors(const std::string& l) const {
        std::vector<std::string> out;
        for (const auto& [a, b] : edges)
            if (a == l) out.push_back(b);
        return out;
    }
};

inline MachineGraph build_graph(const Machine& m) {
    MachineGraph g;
    g.vertices = m.labels;
    for (const auto& [label, stmt] : m.statements)
        for (const std::string& succ : statement_successors(stmt))
            g.edges.emplace(label, succ);
    return g;
}

// Labels whose statement applies the oracle function.
inline std::set<std::string> oracle_labels(const Machine& m, const std::string& g_id) {
    std::set<std::string> out;
    for (const auto& [label, stmt] : m.statements)
        if (const std::string* fn = statement_fn(stmt))
            if (*fn == g_id) out.insert(label);
    return out;
}

namespace detail {
// BFS reachability with parent tracking for witness paths.
inline std::map<std::string, std::string> reach_parents(const MachineGraph& g,
                                                        const std::string& from) {
    std::map<std::string, std::string> parent;  // node -> predecessor; from maps to itself
    parent.emplace(from, from);
    std::vector<std::string> frontier{from};
    while (!frontier.empty()) {
        std::string l = frontier.back();
        frontier.pop_back();
        for (const std::string& s : g.successors(l))
            if (parent.emplace(s, l).second) frontier.push_back(s);
    }
    return parent;
}

inline std::vector<std::string> path_from_parents(const std::map<std::string, std::string>& parent,
                                                  const std::string& from, const std::string& to) {
    std::vector<std::string> rev{to};
    std::string cur = to;
    while (cur != from) {
        cur = parent.at(cur);
        rev.push_back(cur);
    }
    return {rev.rbegin(), rev.rend()};
}
} // namespace detail

// The single-use condition: no control path from the initial label visits two
// (possibly equal) labels that apply g. Equivalently: from any successor of a
// reachable g-label, no g-label is reachable. The witness path, when a
// violation exists, runs initial -> g-label -> ... -> g-label.
struct SingleUseReport {
    bool ok = true;
    std::vector<std::string> witness_path;
};

inline SingleUseReport check_single_use(const Machine& m, const std::string& g_id) {
    MachineGraph graph = build_graph(m);
    std::set<std::string> g_labels = oracle_labels(m, g_id);
    auto from_start = detail::reach_parents(graph, m.initial_label());
    for (const std::string& gl : g_labels) {
        if (!from_start.count(gl)) continue;  // unreachable oracle site
        for (const std::string& succ : graph.successors(gl)) {
            auto from_succ = detail::reach_parents(graph, succ);
            for (const std::string& gl2 : g_labels) {
                if (!from_succ.count(gl2)) continue;
                SingleUseReport r;
                r.ok = false;
                r.witness_path = detail::path_from_parents(from_start, m.initial_label(), gl);
                std::vector<std::string> second =
                    detail::path_from_parents(from_succ, succ, gl2);
                r.witness_path.insert(r.witness_path.end(), second.begin(), second.end());
                return r;
            }
        }
    }
    return {};
}

// Independent oracle for the single-use check: enumerates every path from the
// initial label up to `max_len` labels and looks for one visiting two oracle
// sites. A shortest violating path has at most 2 * |labels| labels, so that
// bound makes the enumeration exact.
inline bool single_use_by_path_enumeration(const Machine& m, const std::string& g_id,
                                           std::size_t max_len) {
    MachineGraph graph = build_graph(m);
    std::set<std::string> g_labels = oracle_labels(m, g_id);
    struct Item {
        std::string label;
        std::size_t g_count;
        std::size_t len;
    };
    std::vector<Item> stack{{m.initial_label(), 0, 1}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        std::size_t count = it.g_count + (g_labels.count(it.label) ? 1 : 0);
        if (count >= 2) return false;
        if (it.len >= max_len) continue;
        for (const std::string& s : graph.successors(it.label))
            stack.push_back({s, count, it.len + 1});
    }
    return true;
}

namespace detail {
inline void require_splittable(const Machine& m, const char* op) {
    if (m.input_arity() != 1)
        throw MachineError(std::string(op) + " requires a machine with exactly one input tape");
    for (const std::string& c : m.carriers)
        if (c != "stream")
            throw MachineError(std::string(op) + " requires stream carriers on every tape");
}

inline MultiFunction stream_identity_fn() {
    return MultiFunction::single_valued(
        "id_stream", {"stream"}, "stream",
        [](std::span<const CarrierValue> a) -> std::optional<CarrierValue> { return a[0]; });
}
} // namespace detail

// M_H: every statement (i := g(i1), l') becomes (0 := id(i1), l_f); everything
// else is untouched. On inputs whose run reaches an oracle site, M_H outputs
// the argument that would have been fed to g; otherwise it computes f_M.
inline Machine split_H(const Machine& m, const std::string& g_id) {
    detail::require_splittable(m, "split_H");
    SingleUseReport su = check_single_use(m, g_id);
    if (!su.ok) throw MachineError("split_H: machine does not satisfy the single-use condition");
    Machine h = m;
    h.name = m.name + "_H";
    bool used_id = false;
    for (auto& [label, stmt] : h.statements) {
        const auto* as = std::get_if<Assign>(&stmt);
        if (!as || as->fn != g_id) continue;
        stmt = Assign{0, "id_stream", {as->args.at(0)}, h.final_label};
        used_id = true;
    }
    h.subroutines.erase(g_id);
    if (used_id) h.subroutines.emplace("id_stream", detail::stream_identity_fn());
    return h;
}

// M_G: a new input tape L+1 carries the oracle answer; every
// (i := g(i1), l') becomes (i := id(L+1), l'). Input tapes are 1 and L+1 and
// the head of tape L+1 is never moved, so the answer is read from its cell 0.
inline Machine split_G(const Machine& m, const std::string& g_id) {
    detail::require_splittable(m, "split_G");
    SingleUseReport su = check_single_use(m, g_id);
    if (!su.ok) throw MachineError("split_G: machine does not satisfy the single-use condition");
    Machine g = m;
    g.name = m.name + "_G";
    int oracle_tape = m.tape_count();
    g.carriers.push_back("stream");
    g.input_tapes = {1, oracle_tape};
    bool used_id = false;
    for (auto& [label, stmt] : g.statements) {
        const auto* as = std::get_if<Assign>(&stmt);
        if (!as || as->fn != g_id) continue;
        stmt = Assign{as->tape, "id_stream", {oracle_tape}, as->next};
        used_id = true;
    }
    g.subroutines.erase(g_id);
    if (used_id) g.subroutines.emplace("id_stream", detail::stream_identity_fn());
    return g;
}

// Empirical check of the decomposition identity
//
//   f_M(p) = f_{M_G}(p, h(f_{M_H}(p)))
//
// on sampled stream inputs, compared on the first `demand` output symbols.
// h is the oracle's name-level implementation (the same function the machine
// m applies at its g-sites).
struct ReductionReport {
    std::size_t sample = 0;
    SampleVerdict verdict = SampleVerdict::Inconclusive;
    std::string detail;
};

// Check against caller-supplied split machines (used by mutation tests).
inline std::vector<ReductionReport> verify_reduction_with(const Machine& m, const Machine& mh,
                                                          const Machine& mg,
                                                          const MultiFunction& h,
                                                          std::span<const Stream> samples,
                                                          std::size_t demand,
                                                          const CheckBudgets& budgets = {}) {
    std::vector<ReductionReport> reports;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        ReductionReport rep;
        rep.sample = i;
        std::vector<CarrierValue> input{stream_value(samples[i])};
        RunOutcome direct = run(m, input, seeded_oracle(0), budgets.max_steps);
        if (!direct.accepted()) {
            rep.verdict = SampleVerdict::Skipped;
            rep.detail = "f_M undefined on this input";
            reports.push_back(std::move(rep));
            continue;
        }
        RunOutcome pre = run(mh, input, seeded_oracle(0), budgets.max_steps);
        if (!pre.accepted()) {
            rep.verdict = SampleVerdict::Refuted;
            rep.detail = "M_H rejected an input accepted by M";
            reports.push_back(std::move(rep));
            continue;
        }
        auto answer = h.choose(std::vector<CarrierValue>{*pre.output}, 0);
        if (!answer) {
            rep.verdict = SampleVerdict::Inconclusive;
            rep.detail = "oracle realizer undefined on M_H's output";
            reports.push_back(std::move(rep));
            continue;
        }
        std::vector<CarrierValue> g_inputs{stream_value(samples[i]), *answer};
        RunOutcome post = run(mg, g_inputs, seeded_oracle(0), budgets.max_steps);
        if (!post.accepted()) {
            rep.verdict = SampleVerdict::Refuted;
            rep.detail = "M_G rejected";
            reports.push_back(std::move(rep));
            continue;
        }
        Word lhs = direct.output->as_stream().prefix(demand);
        Word rhs = post.output->as_stream().prefix(demand);
        if (lhs == rhs) {
            rep.verdict = SampleVerdict::Verified;
        } else {
            rep.verdict = SampleVerdict::Refuted;
            rep.detail = "decomposition differs within the first " + std::to_string(demand) +
                         " symbols: " + lhs.symbols() + " vs " + rhs.symbols();
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

inline std::vector<ReductionReport> verify_reduction(const Machine& m, const std::string& g_id,
                                                     const MultiFunction& h,
                                                     std::span<const Stream> samples,
                                                     std::size_t demand,
                                                     const CheckBudgets& budgets = {}) {
    Machine mh = split_H(m, g_id);
    Machine mg = split_G(m, g_id);
    return verify_reduction_with(m, mh, mg, h, samples, demand, budgets);
}

} // namespace gtm
