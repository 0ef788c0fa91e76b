#include "bmerge/ratio.hpp"

#include <limits>
#include <numeric>

#include "bmerge/error.hpp"

namespace bmerge {

namespace {

__extension__ typedef __int128 i128;

Ratio from_wide(i128 num, i128 den) {
  if (den == 0) throw PreconditionError("ratio with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || num < -kMax || den > kMax) throw PreconditionError("ratio overflow");
  return Ratio(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw PreconditionError("ratio with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Ratio::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Ratio operator+(const Ratio& a, const Ratio& b) {
  return from_wide(i128{a.num_} * b.den_ + i128{b.num_} * a.den_, i128{a.den_} * b.den_);
}

Ratio operator-(const Ratio& a, const Ratio& b) {
  return from_wide(i128{a.num_} * b.den_ - i128{b.num_} * a.den_, i128{a.den_} * b.den_);
}

Ratio operator*(const Ratio& a, const Ratio& b) {
  return from_wide(i128{a.num_} * b.num_, i128{a.den_} * b.den_);
}

Ratio operator/(const Ratio& a, const Ratio& b) {
  return from_wide(i128{a.num_} * b.den_, i128{a.den_} * b.num_);
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  const i128 l = i128{a.num_} * b.den_;
  const i128 r = i128{b.num_} * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Ratio midpoint(const Ratio& a, const Ratio& b) { return (a + b) / Ratio(2); }

}  // namespace bmerge
