#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace isolab {

// Exact rational, always kept reduced with positive denominator.
// Boundary counts and set sizes stay far below 2^63, but intermediate
// products in comparisons and arithmetic go through __int128 anyway.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { reduce(); }

  void reduce() {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    if (num == 0) den = 1;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    return make_checked(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    return make_checked(n, d);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = static_cast<__int128>(a.num) * b.num;
    __int128 d = static_cast<__int128>(a.den) * b.den;
    return make_checked(n, d);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

 private:
  static Rational make_checked(__int128 n, __int128 d) {
    __int128 g = gcd128(n < 0 ? -n : n, d < 0 ? -d : d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rational: overflow after reduction");
    Rational r;
    r.num = static_cast<long long>(n);
    r.den = static_cast<long long>(d == 0 ? 1 : d);
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    if (r.num == 0) r.den = 1;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
};

// Parse "3", "3/4" or a plain decimal like "0.01" into an exact rational.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    long long n = std::stoll(s.substr(0, slash));
    long long d = std::stoll(s.substr(slash + 1));
    return Rational(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(s));
  bool neg = s[0] == '-';
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  if (neg) digits = digits.substr(1);
  size_t frac_len = s.size() - dot - 1;
  if (frac_len > 18) throw std::invalid_argument("parse_rational: too many decimals");
  long long n = digits.empty() ? 0 : std::stoll(digits);
  long long d = 1;
  for (size_t i = 0; i < frac_len; ++i) d *= 10;
  return Rational(neg ? -n : n, d);
}

}  // namespace isolab
