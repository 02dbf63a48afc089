#include "flowlab/rational.hpp"

#include <cctype>

namespace flowlab {

Rat rat_parse(std::string_view text) {
    auto bad = [&] { throw InvalidInput("malformed rational: '" + std::string(text) + "'"); };
    if (text.empty()) bad();
    std::size_t pos = 0;
    auto digits = [&](std::size_t from) {
        std::size_t i = from;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == from) bad();
        return i;
    };
    if (text[pos] == '-') ++pos;
    pos = digits(pos);
    std::string num(text.substr(0, pos));
    std::string den = "1";
    if (pos < text.size()) {
        if (text[pos] != '/') bad();
        std::size_t dstart = ++pos;
        pos = digits(pos);
        den = std::string(text.substr(dstart, pos - dstart));
    }
    if (pos != text.size()) bad();
    Rat q;
    q.get_num() = mpz_class(num);
    q.get_den() = mpz_class(den);
    if (q.get_den() == 0) bad();
    q.canonicalize();
    return q;
}

std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string rat_decimal(const Rat& q, int sig_digits) {
    if (q == 0) return "0";
    // Plenty of mantissa bits for the requested decimal digits.
    mpf_class f(q, static_cast<mp_bitcnt_t>(sig_digits * 4 + 64));
    mp_exp_t exp = 0;
    std::string m = f.get_str(exp, 10, static_cast<std::size_t>(sig_digits));
    std::string sign;
    if (!m.empty() && m[0] == '-') {
        sign = "-";
        m.erase(m.begin());
    }
    while (m.size() > 1 && m.back() == '0') m.pop_back();
    // m is the mantissa "d1d2..." with value 0.d1d2... * 10^exp.
    std::string out = sign + m.substr(0, 1);
    if (m.size() > 1) out += "." + m.substr(1);
    long e10 = static_cast<long>(exp) - 1;
    if (e10 != 0) out += "e" + std::to_string(e10);
    return out;
}

Rat pow2(long i) {
    Rat q;
    if (i >= 0) {
        mpz_ui_pow_ui(q.get_num().get_mpz_t(), 2, static_cast<unsigned long>(i));
    } else {
        q.get_num() = 1;
        mpz_ui_pow_ui(q.get_den().get_mpz_t(), 2, static_cast<unsigned long>(-i));
    }
    return q;
}

long floor_log2(const Rat& q) {
    if (q <= 0) throw InvalidInput("floor_log2 requires a positive value");
    // Candidate from integer bit lengths, then adjust. For q = n/d the answer
    // is within one of bits(n) - bits(d).
    long cand = static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2)) -
                static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
    while (pow2(cand) > q) --cand;
    while (pow2(cand + 1) <= q) ++cand;
    return cand;
}

long ceil_log2(const Rat& q) {
    long f = floor_log2(q);
    return pow2(f) == q ? f : f + 1;
}

bool is_pow2(const Rat& q) {
    if (q <= 0) return false;
    return pow2(floor_log2(q)) == q;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace flowlab
