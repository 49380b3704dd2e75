#include "mlp/rational.hpp"

#include <stdexcept>

namespace mlp {

Rational parse_rational(const std::string& text) {
    std::string s = text;
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        Rational q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + text);
        q.canonicalize();
        return q;
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    Rational q;
    if (digits.empty() || q.set_str(digits + "/" + den, 10) != 0)
        throw std::invalid_argument("bad rational: " + text);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::int64_t floor_int(const Rational& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!f.fits_slong_p()) throw std::overflow_error("floor out of range");
    return f.get_si();
}

void lcm_denominator(mpz_class& acc, const Rational& q) {
    mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), q.get_den_mpz_t());
}

}  // namespace mlp
