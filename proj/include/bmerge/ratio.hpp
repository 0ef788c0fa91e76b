#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace bmerge {

// Exact rational number in lowest terms with a positive denominator.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool positive() const { return num_ > 0; }

  // "p/q", always with the denominator.
  std::string to_string() const;

  friend Ratio operator+(const Ratio& a, const Ratio& b);
  friend Ratio operator-(const Ratio& a, const Ratio& b);
  friend Ratio operator*(const Ratio& a, const Ratio& b);
  friend Ratio operator/(const Ratio& a, const Ratio& b);

  friend bool operator==(const Ratio&, const Ratio&) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Ratio midpoint(const Ratio& a, const Ratio& b);

}  // namespace bmerge
