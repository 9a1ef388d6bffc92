#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtm/alphabet.hpp"
#include "gtm/error.hpp"
#include "gtm/word.hpp"

namespace gtm {

// A lazily extendable infinite symbol sequence. The produced prefix is
// memoized, so probes are idempotent: requesting length m >= n returns an
// extension of the length-n answer even when the producer is stateful.
//
// Cache extension is serialized by a per-stream mutex; streams may be probed
// from several threads. Producers probing other streams nest locks along the
// construction DAG only, so there is no cycle.
class Stream {
public:
    // u · v^omega. The eventually-periodic description is retained, which
    // makes exact equality of fixture streams decidable.
    static Stream periodic(const Word& prefix, const Word& cycle) {
        if (prefix.alphabet() != cycle.alphabet())
            throw AlphabetError("periodic stream across different alphabets");
        if (cycle.empty()) throw Error("periodic stream needs a nonempty cycle");
        auto st = std::make_shared<State>(prefix.alphabet());
        std::string u = prefix.symbols(), v = cycle.symbols();
        st->extend = [u, v](std::string& cache) {
            std::size_t i = cache.size();
            cache += i < u.size() ? u[i] : v[(i - u.size()) % v.size()];
        };
        st->periodic = std::make_pair(prefix, cycle);
        return Stream(std::move(st));
    }

    // Pure symbol producer; must yield an alphabet symbol for every index.
    // Called with consecutive indexes 0,1,2,... exactly once each.
    static Stream from_producer(const Alphabet& alphabet, std::function<char(std::size_t)> produce) {
        auto st = std::make_shared<State>(alphabet);
        st->extend = [produce = std::move(produce)](std::string& cache) {
            cache += produce(cache.size());
        };
        return Stream(std::move(st));
    }

    // Chunked producer: chunk(j) is appended when the cache runs out. Each
    // chunk must be nonempty. Useful when symbols are only available in
    // records (encoded blocks, interval records, ...).
    static Stream from_chunks(const Alphabet& alphabet, std::function<Word(std::size_t)> chunk) {
        auto st = std::make_shared<State>(alphabet);
        auto counter = std::make_shared<std::size_t>(0);
        st->extend = [chunk = std::move(chunk), counter](std::string& cache) {
            Word w = chunk((*counter)++);
            if (w.empty()) throw Error("stream chunk producer yielded an empty chunk");
            cache += w.symbols();
        };
        return Stream(std::move(st));
    }

    char at(std::size_t i) const {
        std::lock_guard<std::mutex> lock(st_->mu);
        while (st_->cache.size() <= i) st_->extend(st_->cache);
        char c = st_->cache[i];
        if (!st_->alphabet.contains(c))
            throw AlphabetError(std::string("stream produced symbol '") + c + "' outside its alphabet");
        return c;
    }

    Word prefix(std::size_t n) const {
        std::lock_guard<std::mutex> lock(st_->mu);
        while (st_->cache.size() < n) st_->extend(st_->cache);
        return Word(st_->alphabet, st_->cache.substr(0, n));
    }

    const Alphabet& alphabet() const { return st_->alphabet; }

    // Number of symbols produced so far (for probe-accounting tests).
    std::size_t cached_length() const {
        std::lock_guard<std::mutex> lock(st_->mu);
        return st_->cache.size();
    }

    std::optional<std::pair<Word, Word>> periodic_form() const { return st_->periodic; }

    bool same_object(const Stream& other) const { return st_ == other.st_; }
    const void* identity() const { return st_.get(); }

private:
    struct State {
        explicit State(Alphabet a) : alphabet(std::move(a)) {}
        Alphabet alphabet;
        std::string cache;
        std::function<void(std::string&)> extend;
        std::optional<std::pair<Word, Word>> periodic;
        mutable std::mutex mu;
    };

    explicit Stream(std::shared_ptr<State> st) : st_(std::move(st)) {}

    std::shared_ptr<State> st_;
};

// u is a prefix of the stream v; probes exactly |u| symbols.
inline bool prefix_leq(const Word& u, const Stream& v) {
    if (u.alphabet() != v.alphabet())
        throw AlphabetError("prefix_leq across different alphabets");
    for (std::size_t i = 0; i < u.size(); ++i)
        if (v.at(i) != u.at(i)) return false;
    return true;
}

// q^{<e}: the tuple of length-e prefixes.
inline std::vector<Word> stream_prefix(std::span<const Stream> q, std::size_t e) {
    std::vector<Word> out;
    out.reserve(q.size());
    for (const Stream& s : q) out.push_back(s.prefix(e));
    return out;
}

// Decides equality of two eventually-periodic streams; nullopt when either
// stream has no periodic description.
inline std::optional<bool> eventually_periodic_equal(const Stream& a, const Stream& b) {
    auto pa = a.periodic_form(), pb = b.periodic_form();
    if (!pa || !pb) return std::nullopt;
    if (a.alphabet() != b.alphabet()) return false;
    std::size_t head = std::max(pa->first.size(), pb->first.size());
    std::size_t cycle = std::lcm(pa->second.size(), pb->second.size());
    std::size_t n = head + cycle;
    return a.prefix(n) == b.prefix(n);
}

} // namespace gtm
