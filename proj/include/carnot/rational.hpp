#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "carnot/error.hpp"

namespace carnot {

/// Exact rational number. gmpxx keeps arithmetic results in lowest terms with a
/// positive denominator; values built from raw parts go through make_rational.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) fail(ErrorKind::InvalidInput, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

/// Parses `[+-]? int ('/' posint)?`, the coefficient grammar shared by polynomials
/// and CLI parameters. Surrounding whitespace is ignored.
inline Rational parse_rational(std::string_view text) {
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        negative = text[i] == '-';
        ++i;
        skip_ws();
    }
    auto read_digits = [&](const char* what) {
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (start == i) throw SyntaxError(i, std::string("expected ") + what);
        return Integer(std::string(text.substr(start, i - start)));
    };
    Integer num = read_digits("integer");
    Integer den = 1;
    skip_ws();
    if (i < text.size() && text[i] == '/') {
        ++i;
        skip_ws();
        den = read_digits("denominator");
        if (den == 0) throw SyntaxError(i, "zero denominator");
    }
    skip_ws();
    if (i != text.size()) throw SyntaxError(i, "unexpected trailing input");
    return make_rational(negative ? Integer(-num) : num, den);
}

}  // namespace carnot
