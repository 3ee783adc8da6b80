#include "pac/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace pac {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

mpz_class pow10(unsigned long e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    auto fail = [&] { throw std::invalid_argument("malformed rational '" + std::string(text) + "'"); };

    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty())
        fail();

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            fail();
        mpz_class d(std::string(den), 10);
        if (d == 0)
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        value = Rational(mpz_class(std::string(num), 10), d);
    } else {
        long exponent = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            auto exp_part = s.substr(e + 1);
            bool exp_neg = false;
            if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
                exp_neg = exp_part.front() == '-';
                exp_part.remove_prefix(1);
            }
            if (!all_digits(exp_part) || exp_part.size() > 6)
                fail();
            exponent = std::stol(std::string(exp_part));
            if (exp_neg)
                exponent = -exponent;
            s = s.substr(0, e);
        }
        std::string digits;
        long frac_len = 0;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            auto ip = s.substr(0, dot);
            auto fp = s.substr(dot + 1);
            if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
                fail();
            digits = std::string(ip) + std::string(fp);
            frac_len = static_cast<long>(fp.size());
        } else {
            if (!all_digits(s))
                fail();
            digits = std::string(s);
        }
        mpz_class mant(digits, 10);
        long scale = exponent - frac_len;
        if (scale >= 0)
            value = Rational(mant * pow10(static_cast<unsigned long>(scale)));
        else
            value = Rational(mant, pow10(static_cast<unsigned long>(-scale)));
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& r)
{
    Rational c = r;
    c.canonicalize();
    return c.get_str(10);
}

std::string to_display(const Rational& r)
{
    mpz_class den = r.get_den();
    unsigned long twos = 0, fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1)
        return to_string(r);

    unsigned long places = std::max(twos, fives);
    if (places == 0)
        return r.get_num().get_str(10);
    mpz_class scaled = r.get_num() * pow10(places) / r.get_den();
    bool negative = scaled < 0;
    if (negative)
        scaled = -scaled;
    std::string digits = scaled.get_str(10);
    if (digits.size() <= places)
        digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
    return negative ? "-" + digits : digits;
}

double to_double(const Rational& r)
{
    return r.get_d();
}

} // namespace pac
