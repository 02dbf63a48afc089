#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowlab {

// Exact rational arithmetic for times, volumes, and ratios. Backed by GMP's
// mpq, which keeps values canonical (denominator > 0, gcd(num, den) == 1) and
// never overflows. All simulation arithmetic goes through this type; floating
// point appears only in clearly-labeled approximate output columns.
using Rat = mpq_class;

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw InvalidInput("rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

// Strict grammar: optional '-', digits, optionally "/digits" with a nonzero
// denominator. No whitespace, no '+', no leading-zero normalization games:
// "007" parses (value 7) but round-trips to "7".
Rat rat_parse(std::string_view text);

// Canonical form: "num" when den == 1, else "num/den".
std::string rat_str(const Rat& q);

// Approximate decimal with the given significant digits, for convenience
// columns only. Deterministic across platforms (computed via GMP floats).
std::string rat_decimal(const Rat& q, int sig_digits = 12);

// 2^i as an exact rational; i may be negative.
Rat pow2(long i);

// The unique i with 2^i <= q < 2^(i+1). Requires q > 0.
long floor_log2(const Rat& q);

// Smallest s with 2^s >= q. Requires q > 0.
long ceil_log2(const Rat& q);

bool is_pow2(const Rat& q);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace flowlab
