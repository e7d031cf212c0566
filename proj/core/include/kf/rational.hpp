#pragma once
// Minimal exact rational type for gradings (denominators are 1, 2 or 4 in
// practice, but we keep it general).

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kf {

struct Rat {
  int64_t num = 0;
  int64_t den = 1;

  constexpr Rat() = default;
  constexpr Rat(int64_t n) : num(n), den(1) {}
  constexpr Rat(int64_t n, int64_t d) : num(n), den(d) { normalize(); }

  constexpr void normalize() {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }

  friend constexpr Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
  friend constexpr Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
  friend constexpr Rat operator-(Rat a) { return Rat(-a.num, a.den); }
  friend constexpr Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
  friend constexpr Rat operator/(Rat a, Rat b) { return Rat(a.num * b.den, a.den * b.num); }
  Rat& operator+=(Rat b) { *this = *this + b; return *this; }
  Rat& operator-=(Rat b) { *this = *this - b; return *this; }

  friend constexpr bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }
  friend constexpr auto operator<=>(Rat a, Rat b) {
    return a.num * b.den <=> b.num * a.den;
  }

  bool is_integer() const { return den == 1; }
  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

inline Rat half(int64_t n) { return Rat(n, 2); }

} // namespace kf
