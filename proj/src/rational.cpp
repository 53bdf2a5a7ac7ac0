#include "gnskit/rational.hpp"

#include "gnskit/error.hpp"

namespace gnskit {

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    const std::string s(text);
    if (s.empty()) throw InputError("empty rational");
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0) throw InputError("malformed rational '" + s + "'");
    r.canonicalize();
    return r;
}

double to_double(const Rational& value) { return value.get_d(); }

BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt out;
    mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

}  // namespace gnskit
