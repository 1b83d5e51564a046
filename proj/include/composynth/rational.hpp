#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace composynth {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. All probabilities, values and thresholds in this project
/// are Rationals; solvers never touch floating point.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  /// Parses "n" or "n/d". Throws std::invalid_argument on malformed input.
  static Rational parse(const std::string& text);

  std::string str() const;  // "n" for integers, "n/d" otherwise

  Rational operator+(const Rational& o) const { return Rational(mpq_class(v_ + o.v_)); }
  Rational operator-(const Rational& o) const { return Rational(mpq_class(v_ - o.v_)); }
  Rational operator*(const Rational& o) const { return Rational(mpq_class(v_ * o.v_)); }
  Rational operator/(const Rational& o) const {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(mpq_class(v_ / o.v_));
  }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  bool operator==(const Rational& o) const { return mpq_equal(v_.get_mpq_t(), o.v_.get_mpq_t()) != 0; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return mpq_cmp(v_.get_mpq_t(), o.v_.get_mpq_t()) < 0; }
  bool operator<=(const Rational& o) const { return mpq_cmp(v_.get_mpq_t(), o.v_.get_mpq_t()) <= 0; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return *this == Rational(1); }

  std::string numerator_str() const { return v_.get_num().get_str(); }
  std::string denominator_str() const { return v_.get_den().get_str(); }

 private:
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace composynth
