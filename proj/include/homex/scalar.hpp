#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace homex {

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ground field descriptor: q == 0 is the rationals, otherwise the prime
/// field F_q. Primality of q is checked by make_field().
struct Field {
  std::uint32_t q = 0;

  bool is_rational() const { return q == 0; }
  std::string name() const;
  friend bool operator==(const Field&, const Field&) = default;
};

Field make_field(std::uint32_t q);
Field rationals();
/// Parses "Q", "F7", "F:7" or "F 7".
Field parse_field(std::string_view text);

/// Exact field element. Rationals live in an int64 numerator/denominator pair
/// in lowest terms and spill into GMP only when an intermediate result does
/// not fit; residues mod q are stored in [0, q).
///
/// A residue is tagged by a negative denominator (-q). Mixing a rational with
/// a residue coerces the rational into F_q, so integer literals work in both
/// fields.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long long n) : num_(n) {}  // NOLINT: implicit from integer literals
  Scalar(int n) : num_(n) {}        // NOLINT

  Scalar(const Scalar& other);
  Scalar(Scalar&& other) noexcept = default;
  Scalar& operator=(const Scalar& other);
  Scalar& operator=(Scalar&& other) noexcept = default;
  ~Scalar() = default;

  static Scalar fraction(long long num, long long den);
  static Scalar from_mpq(const mpq_class& v);
  static Scalar residue(long long value, std::uint32_t q);
  /// "-3", "7/2", "0". Throws ArithmeticError on malformed input.
  static Scalar parse(std::string_view text);

  /// Value of this element in the given field.
  Scalar in_field(Field f) const;
  Field field() const { return den_ < 0 ? Field{static_cast<std::uint32_t>(-den_)} : Field{}; }

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && (den_ == 1 || den_ < 0); }
  bool is_integer() const;

  Scalar inverse() const;
  Scalar operator-() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string to_string() const;
  /// Numerator and denominator for rationals, or (residue, 1) for F_q.
  mpq_class to_mpq() const;

 private:
  bool modular() const { return den_ < 0; }
  std::uint64_t modulus() const { return static_cast<std::uint64_t>(-den_); }
  void set_big(mpq_class v);
  void normalize_big();
  void add_signed(const Scalar& o, bool subtract);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace homex
