#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "parhodge/errors.hpp"

namespace parhodge {

// Exact rational on int64.  Weights and filtration levels are tiny (numerators
// and denominators bounded by d*p at worst), so 64 bits with normalized
// storage is plenty; arithmetic goes through __int128 to keep intermediate
// products safe.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0)
            fail(errc::division_by_zero, "rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0)
            den = 1;
    }

    bool is_integer() const { return den == 1; }
    bool is_zero() const { return num == 0; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return from_i128(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den;
        __int128 d = static_cast<__int128>(a.den) * b.den;
        return from_i128(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_i128(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0)
            fail(errc::division_by_zero, "rational division by zero");
        return from_i128(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
    }
    Rational operator-() const { return Rational(-num, den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::int64_t floor() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num < 0)
            --q;
        return q;
    }
    std::int64_t ceil() const {
        std::int64_t q = num / den;
        if (num % den != 0 && num > 0)
            ++q;
        return q;
    }

    // num * den^{-1} mod p; requires gcd(den, p) = 1
    std::uint32_t mod_p(std::uint32_t p) const;

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }

    static Rational parse(const std::string& s);

private:
    static Rational from_i128(__int128 n, __int128 d) {
        if (d == 0)
            fail(errc::division_by_zero, "rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        Rational r;
        r.num = static_cast<std::int64_t>(n);
        r.den = n == 0 ? 1 : static_cast<std::int64_t>(d);
        return r;
    }
};

} // namespace parhodge
