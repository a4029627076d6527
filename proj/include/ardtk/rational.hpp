#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace ardtk {

/// Exact rational with a positive denominator, always kept in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }

  std::strong_ordering operator<=>(const Rational& o) const noexcept;
  bool operator==(const Rational& o) const noexcept = default;

  std::int64_t floor() const noexcept;
  std::int64_t ceil() const noexcept;
  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  /// "num/den", or just "num" for integers.
  std::string to_string() const;

  /// Parses "a/b", "a" or a decimal such as "0.25".
  static Rational parse(const std::string& text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace ardtk
