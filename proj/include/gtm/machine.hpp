#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gtm/carrier.hpp"
#include "gtm/error.hpp"

namespace gtm {

// A multi-function f : X_{i1} x ... x X_{in} =: X_i usable in assignment
// statements. `choose` picks one acceptable value given a choice token (and
// returns nullopt exactly when the arguments are outside the domain, i.e. the
// acceptable set is empty). `enumerate`, when present, lists the full
// acceptable set and enables exhaustive outcome exploration.
struct MultiFunction {
    std::string name;
    std::vector<std::string> arg_carriers;
    std::string result_carrier;
    std::function<std::optional<CarrierValue>(std::span<const CarrierValue>, std::uint64_t)> choose;
    std::function<std::optional<std::vector<CarrierValue>>(std::span<const CarrierValue>)> enumerate;

    std::size_t arity() const { return arg_carriers.size(); }

    static MultiFunction single_valued(
        std::string name, std::vector<std::string> args, std::string result,
        std::function<std::optional<CarrierValue>(std::span<const CarrierValue>)> fn) {
        MultiFunction m;
        m.name = std::move(name);
        m.arg_carriers = std::move(args);
        m.result_carrier = std::move(result);
        auto shared = std::make_shared<decltype(fn)>(std::move(fn));
        m.choose = [shared](std::span<const CarrierValue> a, std::uint64_t) { return (*shared)(a); };
        m.enumerate = [shared](std::span<const CarrierValue> a)
            -> std::optional<std::vector<CarrierValue>> {
            auto v = (*shared)(a);
            if (!v) return std::vector<CarrierValue>{};
            return std::vector<CarrierValue>{*v};
        };
        return m;
    }

    // Multi-valued function given by its finite acceptable set; the token
    // indexes into the enumeration.
    static MultiFunction enumerated(
        std::string name, std::vector<std::string> args, std::string result,
        std::function<std::vector<CarrierValue>(std::span<const CarrierValue>)> fn) {
        MultiFunction m;
        m.name = std::move(name);
        m.arg_carriers = std::move(args);
        m.result_carrier = std::move(result);
        auto shared = std::make_shared<decltype(fn)>(std::move(fn));
        m.choose = [shared](std::span<const CarrierValue> a,
                            std::uint64_t token) -> std::optional<CarrierValue> {
            auto all = (*shared)(a);
            if (all.empty()) return std::nullopt;
            return all[static_cast<std::size_t>(token % all.size())];
        };
        m.enumerate = [shared](std::span<const CarrierValue> a)
            -> std::optional<std::vector<CarrierValue>> { return (*shared)(a); };
        return m;
    }
};

// A single-valued partial test with range in {"0", "1"}; '0' selects the
// then-branch, '1' the else-branch. An undefined test has no successor
// configuration.
struct TestFunction {
    std::string name;
    std::vector<std::string> arg_carriers;
    std::function<std::optional<char>(std::span<const CarrierValue>)> evaluate;

    std::size_t arity() const { return arg_carriers.size(); }
};

using Subroutine = std::variant<MultiFunction, TestFunction>;

inline const std::string& subroutine_name(const Subroutine& s) {
    return std::visit([](const auto& f) -> const std::string& { return f.name; }, s);
}
inline std::size_t subroutine_arity(const Subroutine& s) {
    return std::visit([](const auto& f) { return f.arity(); }, s);
}
inline const std::vector<std::string>& subroutine_arg_carriers(const Subroutine& s) {
    return std::visit([](const auto& f) -> const std::vector<std::string>& { return f.arg_carriers; }, s);
}

class SubroutineRegistry {
public:
    SubroutineRegistry& add(Subroutine s) {
        std::string key = subroutine_name(s);
        table_.insert_or_assign(std::move(key), std::move(s));
        return *this;
    }

    const Subroutine* find(const std::string& id) const {
        auto it = table_.find(id);
        return it == table_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, Subroutine>& table() const { return table_; }

private:
    std::map<std::string, Subroutine> table_;
};

// ---- statements (Def.-style instruction set) --------------------------------

struct MoveRight { int tape; std::string next; };
struct MoveLeft  { int tape; std::string next; };
struct WriteSym  { int tape; char symbol; std::string next; };
struct BranchSym { int tape; char symbol; std::string then_label; std::string else_label; };
struct Assign    { int tape; std::string fn; std::vector<int> args; std::string next; };
struct BranchFn  { std::string fn; std::vector<int> args; std::string then_label; std::string else_label; };

using Statement = std::variant<MoveRight, MoveLeft, WriteSym, BranchSym, Assign, BranchFn>;

inline const char* statement_kind(const Statement& s) {
    switch (s.index()) {
        case 0: return "right";
        case 1: return "left";
        case 2: return "write";
        case 3: return "branch-sym";
        case 4: return "assign";
        case 5: return "branch-fn";
    }
    return "?";
}

// Control-flow successors in statement order (then before else).
inline std::vector<std::string> statement_successors(const Statement& s) {
    return std::visit(
        [](const auto& st) -> std::vector<std::string> {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, BranchSym> || std::is_same_v<T, BranchFn>)
                return {st.then_label, st.else_label};
            else
                return {st.next};
        },
        s);
}

inline const std::string* statement_fn(const Statement& s) {
    if (const auto* a = std::get_if<Assign>(&s)) return &a->fn;
    if (const auto* b = std::get_if<BranchFn>(&s)) return &b->fn;
    return nullptr;
}

inline bool statement_equal(const Statement& a, const Statement& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const T& y = std::get<T>(b);
            if constexpr (std::is_same_v<T, MoveRight> || std::is_same_v<T, MoveLeft>)
                return x.tape == y.tape && x.next == y.next;
            else if constexpr (std::is_same_v<T, WriteSym>)
                return x.tape == y.tape && x.symbol == y.symbol && x.next == y.next;
            else if constexpr (std::is_same_v<T, BranchSym>)
                return x.tape == y.tape && x.symbol == y.symbol &&
                       x.then_label == y.then_label && x.else_label == y.else_label;
            else if constexpr (std::is_same_v<T, Assign>)
                return x.tape == y.tape && x.fn == y.fn && x.args == y.args && x.next == y.next;
            else
                return x.fn == y.fn && x.args == y.args && x.then_label == y.then_label &&
                       x.else_label == y.else_label;
        },
        a);
}

// ---- the machine ------------------------------------------------------------

// Tape 0 is the output tape. Input tapes default to 1..k; an explicit
// non-contiguous input list is allowed (needed by the oracle-splitting
// construction, which places its second input on the last tape).
struct Machine {
    std::string name = "m";
    std::vector<std::string> labels;   // declaration order; labels.front() is initial
    std::string final_label;
    std::string work_alphabet;         // Gamma, ordered, distinct
    char blank = '_';
    std::vector<int> input_tapes;      // ordered; element j holds input j
    std::vector<std::string> carriers; // carrier id per tape, size = tape_count
    std::map<std::string, Statement> statements;  // exactly the non-final labels
    std::map<std::string, Subroutine> subroutines;

    const std::string& initial_label() const {
        if (labels.empty()) throw MachineError("machine has no labels");
        return labels.front();
    }
    int tape_count() const { return static_cast<int>(carriers.size()); }
    std::size_t input_arity() const { return input_tapes.size(); }

    bool has_label(const std::string& l) const {
        return std::find(labels.begin(), labels.end(), l) != labels.end();
    }

    const Subroutine& subroutine(const std::string& id) const {
        auto it = subroutines.find(id);
        if (it == subroutines.end()) throw MachineError("machine uses unknown subroutine '" + id + "'");
        return it->second;
    }
};

inline std::vector<int> contiguous_input_tapes(int k) {
    std::vector<int> v(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = i + 1;
    return v;
}

// Structural equality: everything except the function objects behind
// subroutines, which are compared by name and signature.
inline bool machine_equal(const Machine& a, const Machine& b) {
    if (a.name != b.name || a.labels != b.labels || a.final_label != b.final_label ||
        a.work_alphabet != b.work_alphabet || a.blank != b.blank ||
        a.input_tapes != b.input_tapes || a.carriers != b.carriers)
        return false;
    if (a.statements.size() != b.statements.size()) return false;
    for (const auto& [label, stmt] : a.statements) {
        auto it = b.statements.find(label);
        if (it == b.statements.end() || !statement_equal(stmt, it->second)) return false;
    }
    if (a.subroutines.size() != b.subroutines.size()) return false;
    for (const auto& [id, sub] : a.subroutines) {
        auto it = b.subroutines.find(id);
        if (it == b.subroutines.end()) return false;
        if (sub.index() != it->second.index()) return false;
        if (subroutine_arg_carriers(sub) != subroutine_arg_carriers(it->second)) return false;
        const auto* ma = std::get_if<MultiFunction>(&sub);
        const auto* mb = std::get_if<MultiFunction>(&it->second);
        if (ma && mb && ma->result_carrier != mb->result_carrier) return false;
    }
    return true;
}

// Convenience builder used by fixtures and tests.
class MachineBuilder {
public:
    explicit MachineBuilder(std::string name) { m_.name = std::move(name); }

    MachineBuilder& tape(const std::string& carrier) {
        m_.carriers.push_back(carrier);
        return *this;
    }
    MachineBuilder& tapes(std::initializer_list<std::string> carriers) {
        for (const auto& c : carriers) m_.carriers.push_back(c);
        return *this;
    }
    MachineBuilder& inputs(int k) {
        m_.input_tapes = contiguous_input_tapes(k);
        return *this;
    }
    MachineBuilder& input_tape_list(std::vector<int> tapes) {
        m_.input_tapes = std::move(tapes);
        return *this;
    }
    MachineBuilder& work(std::string gamma, char blank) {
        m_.work_alphabet = std::move(gamma);
        m_.blank = blank;
        return *this;
    }
    MachineBuilder& label(const std::string& l) {
        m_.labels.push_back(l);
        return *this;
    }
    MachineBuilder& final_label(const std::string& l) {
        m_.labels.push_back(l);
        m_.final_label = l;
        return *this;
    }

    MachineBuilder& move_right(const std::string& at, int tape, const std::string& next) {
        m_.statements.emplace(at, MoveRight{tape, next});
        return *this;
    }
    MachineBuilder& move_left(const std::string& at, int tape, const std::string& next) {
        m_.statements.emplace(at, MoveLeft{tape, next});
        return *this;
    }
    MachineBuilder& write(const std::string& at, int tape, char symbol, const std::string& next) {
        m_.statements.emplace(at, WriteSym{tape, symbol, next});
        return *this;
    }
    MachineBuilder& branch_sym(const std::string& at, int tape, char symbol,
                               const std::string& then_l, const std::string& else_l) {
        m_.statements.emplace(at, BranchSym{tape, symbol, then_l, else_l});
        return *this;
    }
    MachineBuilder& assign(const std::string& at, int tape, const std::string& fn,
                           std::vector<int> args, const std::string& next) {
        m_.statements.emplace(at, Assign{tape, fn, std::move(args), next});
        return *this;
    }
    MachineBuilder& branch_fn(const std::string& at, const std::string& fn, std::vector<int> args,
                              const std::string& then_l, const std::string& else_l) {
        m_.statements.emplace(at, BranchFn{fn, std::move(args), then_l, else_l});
        return *this;
    }

    // Copies the subroutines the machine references out of the registry.
    Machine build(const SubroutineRegistry& registry) {
        if (m_.work_alphabet.empty()) {
            m_.work_alphabet = "_#";
            m_.blank = '_';
        }
        for (const auto& [label, stmt] : m_.statements) {
            if (const std::string* fn = statement_fn(stmt)) {
                if (m_.subroutines.count(*fn)) continue;
                const Subroutine* s = registry.find(*fn);
                if (!s) throw MachineError("unknown subroutine '" + *fn + "' at label '" + label + "'");
                m_.subroutines.emplace(*fn, *s);
            }
        }
        return std::move(m_);
    }

private:
    Machine m_;
};

} // namespace gtm
