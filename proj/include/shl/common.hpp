#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace shl {

using Int = mpz_class;
using Rat = mpq_class;

// Raised when an input violates a documented precondition (bad config, word
// out of range, non-symmetric matrix, ...). Exit code 1 territory.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& m) : std::runtime_error(m) {}
};

// Raised when an internal consistency assertion fails. Always a bug.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& m) : std::logic_error(m) {}
};

// Raised when a certified mathematical claim is false for the given input.
// The computation itself is sound; the message is the witness. Exit code 2
// territory.
struct MathFailure : std::runtime_error {
    explicit MathFailure(const std::string& m) : std::runtime_error(m) {}
};

inline int sgn(const Rat& q) { return sgn(q.get_num()); }

inline std::string rat_str(const Rat& q) {
    Rat c(q);
    c.canonicalize();
    return c.get_str();
}

inline Rat rat_parse(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw InputError("bad rational literal: " + s);
    q.canonicalize();
    if (q.get_den() == 0) throw InputError("zero denominator: " + s);
    return q;
}

inline std::uint64_t fnv1a64(const std::string& data, std::uint64_t seed = 1469598103934665603ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace shl
