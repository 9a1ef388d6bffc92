#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtm/error.hpp"
#include "gtm/random.hpp"
#include "gtm/stream.hpp"
#include "gtm/word.hpp"

namespace gtm {

// A partial word function h : (Sigma*)^k -> Sigma* together with its declared
// class. The class is a claim by the supplier; the generation operators check
// it at every point they probe and refuse to continue past a violation.
//
//   monotone:           h(y) defined and y prefix y'  =>  h(y') defined and h(y) prefix h(y')
//   monotone-constant:  h(y) defined and y prefix y'  =>  h(y') defined and h(y) = h(y')
struct WordFunction {
    enum class Class { Monotone, MonotoneConstant, Unconstrained };

    std::string name;
    std::size_t arity = 1;
    Class declared_class = Class::Unconstrained;
    std::function<std::optional<Word>(std::span<const Word>)> evaluate;

    std::optional<Word> operator()(std::span<const Word> args) const { return evaluate(args); }
};

struct MonotoneWitness {
    std::vector<Word> y;
    std::vector<Word> y_ext;
    std::optional<Word> h_y;
    std::optional<Word> h_y_ext;
};

struct MonotoneReport {
    bool violation_found = false;
    std::size_t samples_checked = 0;
    std::optional<MonotoneWitness> witness;
};

namespace detail {
inline Word random_binary_word(SplitMix64& rng, std::size_t max_len) {
    std::size_t len = rng.below(max_len + 1);
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) s += rng.below(2) ? '1' : '0';
    return Word::binary(s);
}

inline bool class_violation(WordFunction::Class cls, const std::optional<Word>& hy,
                            const std::optional<Word>& hy2) {
    if (!hy) return false;  // implication with undefined h(y) is vacuous
    if (!hy2) return true;
    if (cls == WordFunction::Class::MonotoneConstant) return !(*hy == *hy2);
    return !prefix_leq(*hy, *hy2);
}
} // namespace detail

// Randomized spot check of the declared class: draws tuples y and extensions
// y' >= y and tests the defining implication. Absence of a violation within
// the budget is evidence, not proof.
inline MonotoneReport check_monotone_on_samples(const WordFunction& h, std::size_t sample_budget,
                                                std::size_t max_len, std::uint64_t seed) {
    MonotoneReport report;
    if (h.declared_class == WordFunction::Class::Unconstrained) return report;
    SplitMix64 rng(seed);
    for (std::size_t n = 0; n < sample_budget; ++n) {
        std::vector<Word> y, y2;
        for (std::size_t i = 0; i < h.arity; ++i) {
            Word base = detail::random_binary_word(rng, max_len);
            Word ext = base + detail::random_binary_word(rng, max_len);
            y.push_back(base);
            y2.push_back(ext);
        }
        auto hy = h.evaluate(y);
        auto hy2 = h.evaluate(y2);
        ++report.samples_checked;
        if (detail::class_violation(h.declared_class, hy, hy2)) {
            report.violation_found = true;
            report.witness = MonotoneWitness{std::move(y), std::move(y2), std::move(hy), std::move(hy2)};
            return report;
        }
    }
    return report;
}

// T_*(h)(x) = w iff h(y) = w for some finite prefix tuple y of x. Probes
// y = x^{<e} for e = 0..probe_limit; divergence within the budget is a
// verdict, not an error.
struct TStarResult {
    enum class Kind { Value, Diverge };
    Kind kind = Kind::Diverge;
    Word value;
    std::size_t defined_at = 0;  // the first e where h was defined
};

inline TStarResult t_star(const WordFunction& h, std::span<const Stream> x,
                          std::size_t probe_limit) {
    if (h.declared_class != WordFunction::Class::MonotoneConstant)
        throw ClassViolationError("t_star requires a monotone-constant word function: " + h.name);
    if (h.arity != x.size()) throw Error("t_star arity mismatch for " + h.name);
    for (std::size_t e = 0; e <= probe_limit; ++e) {
        std::vector<Word> y = stream_prefix(x, e);
        auto w = h.evaluate(y);
        if (!w) continue;
        // Constancy check at the next probe point.
        if (e + 1 <= probe_limit) {
            std::vector<Word> y2 = stream_prefix(x, e + 1);
            auto w2 = h.evaluate(y2);
            if (!w2 || !(*w2 == *w))
                throw ClassViolationError("monotone-constancy violated by " + h.name +
                                          " between prefixes of length " + std::to_string(e) +
                                          " and " + std::to_string(e + 1));
        }
        return {TStarResult::Kind::Value, *w, e};
    }
    return {TStarResult::Kind::Diverge, {}, 0};
}

// T_omega(h)(x) = sup of the prefix chain { h(y) | y finite prefix of x }.
// Evaluates along e = 0,1,2,..., verifies the chain property at every step,
// and returns the first chain element of at least `demand` symbols.
struct TOmegaResult {
    enum class Kind { Value, Insufficient };
    Kind kind = Kind::Insufficient;
    Word value;
    std::size_t defined_at = 0;  // the e whose output was returned
};

inline TOmegaResult t_omega(const WordFunction& h, std::span<const Stream> x, std::size_t demand,
                            std::size_t probe_limit) {
    if (h.declared_class != WordFunction::Class::Monotone)
        throw ClassViolationError("t_omega requires a monotone word function: " + h.name);
    if (h.arity != x.size()) throw Error("t_omega arity mismatch for " + h.name);
    std::optional<Word> last;
    std::size_t last_e = 0;
    for (std::size_t e = 0; e <= probe_limit; ++e) {
        std::vector<Word> y = stream_prefix(x, e);
        auto w = h.evaluate(y);
        if (!w) {
            if (last)
                throw ClassViolationError("monotonicity violated by " + h.name + ": defined at e=" +
                                          std::to_string(last_e) + " but undefined at e=" +
                                          std::to_string(e));
            continue;
        }
        if (last && !prefix_leq(*last, *w))
            throw ClassViolationError("output chain violated by " + h.name + " between e=" +
                                      std::to_string(last_e) + " and e=" + std::to_string(e));
        last = *w;
        last_e = e;
        if (w->size() >= demand) return {TOmegaResult::Kind::Value, *w, e};
    }
    return {TOmegaResult::Kind::Insufficient, last.value_or(Word()), last_e};
}

} // namespace gtm
