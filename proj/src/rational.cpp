#include "vweb/rational.hpp"

#include <cctype>

namespace vweb {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

bool valid_signed_int(std::string_view s) {
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
    return all_digits(s);
}

} // namespace

Rat rat_parse(std::string_view text) {
    const auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den =
        slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_signed_int(num) || !all_digits(den))
        throw ParseError("bad rational literal: '" + std::string(text) + "'");
    if (num[0] == '+') num.remove_prefix(1);
    Rat q(std::string(num) + "/" + std::string(den));
    if (q.get_den() == 0)
        throw ParseError("rational with zero denominator: '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

std::string rat_str(const Rat& q) {
    return q.get_str();
}

std::string int_str(const Int& z) {
    return z.get_str();
}

Rat rat_pow(const Rat& base, unsigned exp) {
    Rat acc(1);
    Rat b = base;
    while (exp != 0) {
        if (exp & 1u) acc *= b;
        b *= b;
        exp >>= 1;
    }
    return acc;
}

Rat rat_binomial(unsigned n, unsigned k) {
    if (k > n) return Rat(0);
    Int z;
    mpz_bin_uiui(z.get_mpz_t(), n, k);
    return Rat(z);
}

} // namespace vweb
