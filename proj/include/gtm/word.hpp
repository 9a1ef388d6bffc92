#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <utility>

#include "gtm/alphabet.hpp"
#include "gtm/error.hpp"

namespace gtm {

// A finite word over an alphabet. Immutable and freely shareable.
class Word {
public:
    Word() : alphabet_(Alphabet::binary()) {}

    Word(Alphabet alphabet, std::string symbols)
        : alphabet_(std::move(alphabet)), symbols_(std::move(symbols)) {
        for (char c : symbols_)
            if (!alphabet_.contains(c))
                throw AlphabetError(std::string("symbol '") + c + "' not in alphabet");
    }

    static Word binary(std::string_view symbols) {
        return Word(Alphabet::binary(), std::string(symbols));
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const std::string& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    char at(std::size_t i) const { return symbols_.at(i); }

    Word prefix(std::size_t n) const {
        return Word(alphabet_, symbols_.substr(0, n));
    }

    Word drop(std::size_t n) const {
        return Word(alphabet_, n >= symbols_.size() ? std::string() : symbols_.substr(n));
    }

    friend Word operator+(const Word& u, const Word& v) {
        if (u.alphabet_ != v.alphabet_) throw AlphabetError("concatenation across alphabets");
        return Word(u.alphabet_, u.symbols_ + v.symbols_);
    }

    friend bool operator==(const Word& u, const Word& v) {
        return u.alphabet_ == v.alphabet_ && u.symbols_ == v.symbols_;
    }
    friend bool operator!=(const Word& u, const Word& v) { return !(u == v); }

    // Lexicographic order (alphabet first) so words can live in ordered sets.
    friend std::strong_ordering operator<=>(const Word& u, const Word& v) {
        if (auto c = u.alphabet_.symbols() <=> v.alphabet_.symbols(); c != 0) return c;
        return u.symbols_ <=> v.symbols_;
    }

private:
    Alphabet alphabet_;
    std::string symbols_;
};

// u is a prefix of v, i.e. v = u·w for some continuation w.
inline bool prefix_leq(const Word& u, const Word& v) {
    if (u.alphabet() != v.alphabet())
        throw AlphabetError("prefix_leq across different alphabets");
    if (u.size() > v.size()) return false;
    return v.symbols().compare(0, u.size(), u.symbols()) == 0;
}

// Strict prefix.
inline bool prefix_lt(const Word& u, const Word& v) {
    return u.size() < v.size() && prefix_leq(u, v);
}

} // namespace gtm
