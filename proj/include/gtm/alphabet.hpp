#pragma once

#include <algorithm>
#include <string>
#include <string_view>

#include "gtm/error.hpp"

namespace gtm {

// A finite, ordered, duplicate-free symbol set. Every alphabet contains the
// symbols '0' and '1'; all name-level encodings are specified over the binary
// alphabet, larger alphabets are supported by the execution machinery.
class Alphabet {
public:
    explicit Alphabet(std::string_view symbols) : symbols_(symbols) {
        if (symbols_.empty()) throw AlphabetError("alphabet must be nonempty");
        for (std::size_t i = 0; i < symbols_.size(); ++i)
            for (std::size_t j = i + 1; j < symbols_.size(); ++j)
                if (symbols_[i] == symbols_[j])
                    throw AlphabetError(std::string("duplicate symbol '") + symbols_[i] + "' in alphabet");
        if (!contains('0') || !contains('1'))
            throw AlphabetError("alphabet must contain '0' and '1'");
    }

    static const Alphabet& binary() {
        static const Alphabet a("01");
        return a;
    }

    bool contains(char c) const { return symbols_.find(c) != std::string::npos; }
    std::size_t size() const { return symbols_.size(); }
    const std::string& symbols() const { return symbols_; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }
    friend bool operator!=(const Alphabet& a, const Alphabet& b) { return !(a == b); }

private:
    std::string symbols_;
};

} // namespace gtm
