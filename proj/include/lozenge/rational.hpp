#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "lozenge/error.hpp"

namespace lozenge {

// Exact rational with 64-bit numerator/denominator. Domain coordinates live
// on the (1/n)-grid, so magnitudes stay tiny; intermediates use __int128 to
// rule out overflow in products.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long v) : num(v), den(1) {}
  Rational(long long p, long long q) : num(p), den(q) { normalize(); }

  void normalize() {
    if (den == 0) throw Error(ErrorKind::invalid_argument, "rational with zero denominator");
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

  static Rational from_i128(__int128 p, __int128 q) {
    if (q < 0) { p = -p; q = -q; }
    __int128 a = p < 0 ? -p : p;
    __int128 b = q;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) { p /= a; q /= a; }
    if (p > INT64_MAX || p < INT64_MIN || q > INT64_MAX)
      throw Error(ErrorKind::numeric, "rational overflow");
    Rational r;
    r.num = (long long)p;
    r.den = (long long)q;
    if (r.num == 0) r.den = 1;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_i128((__int128)a.num * b.den + (__int128)b.num * a.den,
                     (__int128)a.den * b.den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_i128((__int128)a.num * b.den - (__int128)b.num * a.den,
                     (__int128)a.den * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128((__int128)a.num * b.num, (__int128)a.den * b.den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw Error(ErrorKind::invalid_argument, "rational division by zero");
    return from_i128((__int128)a.num * b.den, (__int128)a.den * b.num);
  }
  Rational operator-() const { Rational r(*this); r.num = -r.num; return r; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  double to_double() const { return (double)num / (double)den; }

  bool is_integer() const { return den == 1; }

  // True when this rational sits on the (1/n)-grid.
  bool on_grid(long long n) const { return (n % den) == 0; }

  // Lattice coordinate: this * n, requires on_grid(n).
  long long lattice(long long n) const {
    if (!on_grid(n)) throw Error(ErrorKind::validation, "coordinate off the 1/n grid");
    return num * (n / den);
  }

  static Rational from_lattice(long long k, long long n) { return Rational(k, n); }

  // Canonical serialization: "p" for integers, "p/q" otherwise. Round-trips
  // bit-exactly through parse().
  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  static Rational parse(const std::string& s) {
    auto pos = s.find('/');
    try {
      if (pos == std::string::npos) return Rational(std::stoll(s));
      return Rational(std::stoll(s.substr(0, pos)), std::stoll(s.substr(pos + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorKind::invalid_argument, "bad rational literal: " + s);
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }
};

}  // namespace lozenge
