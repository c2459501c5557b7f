#include "pexa/rational.hpp"

#include <cctype>

namespace pexa {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rat rat_from_string(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    Rat q;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("malformed rational: " + text);
        q = Rat(mpz_class(num), mpz_class(den));
        if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + text);
        q.canonicalize();
    } else if (dot != std::string::npos) {
        std::string intpart = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (intpart.empty()) intpart = "0";
        if (!all_digits(intpart) || !all_digits(frac))
            throw std::invalid_argument("malformed rational: " + text);
        mpz_class den(1);
        for (size_t i = 0; i < frac.size(); ++i) den *= 10;
        q = Rat(mpz_class(intpart) * den + mpz_class(frac.empty() ? "0" : frac), den);
        q.canonicalize();
    } else {
        if (!all_digits(s)) throw std::invalid_argument("malformed rational: " + text);
        q = Rat(mpz_class(s));
    }
    if (negative) q = -q;
    return q;
}

std::string rat_str(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace pexa
