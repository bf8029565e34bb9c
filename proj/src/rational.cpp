#include "opc/rational.hpp"

#include "opc/errors.hpp"

#include <algorithm>
#include <cctype>

namespace opc {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

mpz_class parse_integer(std::string_view digits) {
    return mpz_class(std::string(digits), 10);
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational result;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw InputError("malformed rational '" + std::string(text) + "'");
        mpz_class d = parse_integer(den);
        if (d == 0)
            throw InputError("zero denominator in '" + std::string(text) + "'");
        result = Rational(parse_integer(num), d);
        result.canonicalize();
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot);
        auto frac = body.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
            throw InputError("malformed decimal '" + std::string(text) + "'");
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        mpz_class num = parse_integer(std::string(whole.empty() ? "0" : whole) + std::string(frac));
        result = Rational(num, scale);
        result.canonicalize();
    } else {
        if (!all_digits(body))
            throw InputError("malformed rational '" + std::string(text) + "'");
        result = Rational(parse_integer(body));
    }
    return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& r) {
    return r.get_str();
}

std::string to_fraction_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

} // namespace opc
