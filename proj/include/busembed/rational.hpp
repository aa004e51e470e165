#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace busembed {

// Exact rational arithmetic on int64 numerator/denominator with __int128
// intermediates. All solver and validator comparisons go through this type,
// so there is no tolerance tuning anywhere. Overflow after reduction throws
// instead of wrapping.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rat(int n) : num_(n), den_(1) {}        // NOLINT
  Rat(long long n, long long d) { assign(n, d); }

  static Rat from_i128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    Rat r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    return r;
  }

  // Parses decimal ("12", "-3.25", "1e-3") or fraction ("7/2") notation.
  static Rat parse(std::string_view s) {
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
      long long n = 0, d = 0;
      auto r1 = std::from_chars(s.data(), s.data() + slash, n);
      auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), d);
      if (r1.ec != std::errc() || r2.ec != std::errc() ||
          r2.ptr != s.data() + s.size())
        throw std::invalid_argument("Rat: bad fraction: " + std::string(s));
      return Rat(n, d);
    }
    return parse_decimal(s);
  }

  // Exact value of the shortest decimal that round-trips the double. A JSON
  // file containing 0.1 therefore becomes exactly 1/10.
  static Rat from_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc()) throw std::invalid_argument("Rat: bad double");
    return parse_decimal(std::string_view(buf, res.ptr - buf));
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return from_i128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                     (__int128)a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return from_i128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                     (__int128)a.den_ * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from_i128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::invalid_argument("Rat: division by zero");
    return from_i128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
  }
  Rat operator-() const { Rat r; r.num_ = -num_; r.den_ = den_; return r; }
  Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
  Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
  Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    __int128 l = (__int128)a.num_ * b.den_;
    __int128 r = (__int128)b.num_ * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  // True iff the value has a finite decimal expansion (den = 2^a * 5^b).
  bool decimal_exact() const {
    long long d = den_;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
  }

  // Shortest exact decimal when one exists, "num/den" otherwise.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    if (!decimal_exact())
      return std::to_string(num_) + "/" + std::to_string(den_);
    // scale denominator to a power of ten
    long long d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    int digits = twos > fives ? twos : fives;
    __int128 scaled = num_;
    for (int i = 0; i < digits - twos; ++i) scaled *= 2;
    for (int i = 0; i < digits - fives; ++i) scaled *= 5;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string frac = i128_str(scaled);
    if ((int)frac.size() <= digits)
      frac.insert(0, digits + 1 - frac.size(), '0');
    frac.insert(frac.size() - digits, ".");
    while (frac.back() == '0') frac.pop_back();
    if (frac.back() == '.') frac.pop_back();
    return (neg ? "-" : "") + frac;
  }

 private:
  long long num_;
  long long den_;

  void assign(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    num_ = n;
    den_ = d;
  }

  static long long narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN)
      throw std::overflow_error("Rat: value exceeds 64-bit range");
    return static_cast<long long>(v);
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a;
  }

  static std::string i128_str(__int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) { s.push_back(char('0' + int(v % 10))); v /= 10; }
    return {s.rbegin(), s.rend()};
  }

  static Rat parse_decimal(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("Rat: empty number");
    bool neg = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') { neg = s[0] == '-'; i = 1; }
    __int128 mant = 0;
    long long frac_digits = 0;
    long long exp10 = 0;
    bool any = false, in_frac = false;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c >= '0' && c <= '9') {
        mant = mant * 10 + (c - '0');
        if (mant > (__int128)INT64_MAX * 1000000)
          throw std::overflow_error("Rat: decimal too long: " + std::string(s));
        if (in_frac) ++frac_digits;
        any = true;
      } else if (c == '.' && !in_frac) {
        in_frac = true;
      } else if ((c == 'e' || c == 'E') && any) {
        long long e = 0;
        auto r = std::from_chars(s.data() + i + 1, s.data() + s.size(), e);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size())
          throw std::invalid_argument("Rat: bad exponent: " + std::string(s));
        exp10 = e;
        break;
      } else {
        throw std::invalid_argument("Rat: bad number: " + std::string(s));
      }
    }
    if (!any) throw std::invalid_argument("Rat: bad number: " + std::string(s));
    long long shift = exp10 - frac_digits;
    __int128 n = neg ? -mant : mant, d = 1;
    for (; shift > 0; --shift) n *= 10;
    for (; shift < 0; ++shift) d *= 10;
    return from_i128(n, d);
  }
};

}  // namespace busembed
