#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace mlp {

using Rational = mpq_class;
using Cost = std::int64_t;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    Rational q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q.canonicalize();
    return q;
}

// Parses "3", "-2/5" or a decimal like "0.25" exactly.
Rational parse_rational(const std::string& text);

inline double to_double(const Rational& q) { return q.get_d(); }

std::string to_string(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// floor(q) as a 64-bit integer.
std::int64_t floor_int(const Rational& q);

// Least common multiple of denominators, accumulated into acc.
void lcm_denominator(mpz_class& acc, const Rational& q);

}  // namespace mlp
