#include "homex/scalar.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace homex {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

bool fits64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() + 1 &&
         v <= std::numeric_limits<std::int64_t>::max();
}

mpz_class mpz_from(i128 v) {
  const bool neg = v < 0;
  u128 mag = abs128(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

bool mpz_fits64(const mpz_class& z) {
  return mpz_sizeinbase(z.get_mpz_t(), 2) <= 62;
}

std::int64_t mpz_to64(const mpz_class& z) { return z.get_si(); }

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t q) {
  if (a % q == 0) throw ArithmeticError("division by zero in " + Field{static_cast<std::uint32_t>(q)}.name());
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(q), new_r = static_cast<std::int64_t>(a % q);
  while (new_r != 0) {
    std::int64_t quot = r / new_r;
    std::int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(t);
}

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t q) {
  std::int64_t r = v % static_cast<std::int64_t>(q);
  if (r < 0) r += static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(r);
}

bool is_prime(std::uint32_t q) {
  if (q < 2) return false;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

}  // namespace

std::string Field::name() const { return q == 0 ? "Q" : "F" + std::to_string(q); }

Field make_field(std::uint32_t q) {
  if (q != 0 && !is_prime(q)) throw ArithmeticError("field characteristic " + std::to_string(q) + " is not prime");
  return Field{q};
}

Field rationals() { return Field{}; }

Field parse_field(std::string_view text) {
  if (text == "Q" || text == "QQ") return rationals();
  if (!text.empty() && text.front() == 'F') {
    text.remove_prefix(1);
    while (!text.empty() && (text.front() == ':' || text.front() == ' ')) text.remove_prefix(1);
    std::uint32_t q = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), q);
    if (ec == std::errc() && ptr == text.data() + text.size()) return make_field(q);
  }
  throw ArithmeticError("unknown field '" + std::string(text) + "' (expected Q or F<prime>)");
}

Scalar::Scalar(const Scalar& other)
    : num_(other.num_), den_(other.den_),
      big_(other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr) {}

Scalar& Scalar::operator=(const Scalar& other) {
  if (this != &other) {
    num_ = other.num_;
    den_ = other.den_;
    big_ = other.big_ ? std::make_unique<mpq_class>(*other.big_) : nullptr;
  }
  return *this;
}

Scalar Scalar::fraction(long long num, long long den) {
  if (den == 0) throw ArithmeticError("zero denominator");
  Scalar s;
  i128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  u128 g = gcd128(abs128(n), static_cast<u128>(d));
  if (g > 1) {
    n /= static_cast<i128>(g);
    d /= static_cast<i128>(g);
  }
  if (fits64(n) && fits64(d)) {
    s.num_ = static_cast<std::int64_t>(n);
    s.den_ = static_cast<std::int64_t>(d);
  } else {
    s.set_big(mpq_class(mpz_from(n), mpz_from(d)));
  }
  return s;
}

Scalar Scalar::from_mpq(const mpq_class& v) {
  Scalar s;
  s.set_big(v);
  return s;
}

Scalar Scalar::residue(long long value, std::uint32_t q) {
  if (q == 0) return Scalar(value);
  Scalar s;
  s.num_ = static_cast<std::int64_t>(reduce_signed(value, q));
  s.den_ = -static_cast<std::int64_t>(q);
  return s;
}

Scalar Scalar::parse(std::string_view text) {
  auto trim = [](std::string_view t) {
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.remove_suffix(1);
    return t;
  };
  text = trim(text);
  auto slash = text.find('/');
  std::string_view num_part = trim(text.substr(0, slash));
  std::string_view den_part = slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
  auto valid_int = [](std::string_view t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) ++i;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9') return false;
    }
    return true;
  };
  if (!valid_int(num_part, true) || !valid_int(den_part, false)) {
    throw ArithmeticError("malformed scalar '" + std::string(text) + "'");
  }
  std::string n(num_part.front() == '+' ? num_part.substr(1) : num_part);
  mpq_class v{mpz_class(n), mpz_class(std::string(den_part))};
  if (v.get_den() == 0) throw ArithmeticError("zero denominator in '" + std::string(text) + "'");
  v.canonicalize();
  return from_mpq(v);
}

void Scalar::set_big(mpq_class v) {
  v.canonicalize();
  if (mpz_fits64(v.get_num()) && mpz_fits64(v.get_den())) {
    num_ = mpz_to64(v.get_num());
    den_ = mpz_to64(v.get_den());
    big_.reset();
  } else {
    big_ = std::make_unique<mpq_class>(std::move(v));
    num_ = 0;
    den_ = 1;
  }
}

void Scalar::normalize_big() {
  if (big_) set_big(*big_);
}

mpq_class Scalar::to_mpq() const {
  if (big_) return *big_;
  if (modular()) return mpq_class(mpz_class(static_cast<long>(num_)));
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

Scalar Scalar::in_field(Field f) const {
  if (f.is_rational()) {
    if (modular()) throw ArithmeticError("cannot lift a residue mod " + std::to_string(modulus()) + " to Q");
    return *this;
  }
  if (modular()) {
    if (modulus() != f.q) throw ArithmeticError("field mismatch: F" + std::to_string(modulus()) + " vs " + f.name());
    return *this;
  }
  const std::uint64_t q = f.q;
  std::uint64_t n = 0, d = 0;
  if (big_) {
    mpz_class qz(static_cast<unsigned long>(q));
    mpz_class nn = big_->get_num() % qz;
    if (nn < 0) nn += qz;
    mpz_class dd = big_->get_den() % qz;
    n = nn.get_ui();
    d = dd.get_ui();
  } else {
    n = reduce_signed(num_, q);
    d = reduce_signed(den_, q);
  }
  Scalar s;
  s.num_ = static_cast<std::int64_t>((n * mod_inverse(d, q)) % q);
  s.den_ = -static_cast<std::int64_t>(q);
  return s;
}

bool Scalar::is_integer() const {
  if (big_) return big_->get_den() == 1;
  return den_ == 1 || modular();
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw ArithmeticError("division by zero");
  if (modular()) {
    Scalar s;
    s.num_ = static_cast<std::int64_t>(mod_inverse(static_cast<std::uint64_t>(num_), modulus()));
    s.den_ = den_;
    return s;
  }
  if (big_) {
    Scalar s;
    s.set_big(1 / *big_);
    return s;
  }
  return fraction(num_ < 0 ? -den_ : den_, num_ < 0 ? -num_ : num_);
}

Scalar Scalar::operator-() const {
  Scalar s(*this);
  if (s.modular()) {
    if (s.num_ != 0) s.num_ = static_cast<std::int64_t>(modulus()) - s.num_;
  } else if (s.big_) {
    *s.big_ = -*s.big_;
  } else {
    s.num_ = -s.num_;
  }
  return s;
}

void Scalar::add_signed(const Scalar& o, bool subtract) {
  if (modular() || o.modular()) {
    const std::uint64_t q = modular() ? modulus() : o.modulus();
    Field f{static_cast<std::uint32_t>(q)};
    Scalar a = in_field(f), b = o.in_field(f);
    std::uint64_t r = subtract ? (static_cast<std::uint64_t>(a.num_) + q - static_cast<std::uint64_t>(b.num_)) % q
                               : (static_cast<std::uint64_t>(a.num_) + static_cast<std::uint64_t>(b.num_)) % q;
    big_.reset();
    num_ = static_cast<std::int64_t>(r);
    den_ = -static_cast<std::int64_t>(q);
    return;
  }
  if (o.is_zero()) return;
  if (!big_ && !o.big_) {
    if (den_ == 1 && o.den_ == 1) {
      std::int64_t r = 0;
      bool overflow = subtract ? __builtin_sub_overflow(num_, o.num_, &r) : __builtin_add_overflow(num_, o.num_, &r);
      if (!overflow && r != std::numeric_limits<std::int64_t>::min()) {
        num_ = r;
        return;
      }
    }
    i128 on = subtract ? -static_cast<i128>(o.num_) : static_cast<i128>(o.num_);
    i128 n = static_cast<i128>(num_) * o.den_ + on * den_;
    i128 d = static_cast<i128>(den_) * o.den_;
    u128 g = gcd128(abs128(n), static_cast<u128>(d));
    if (g > 1) {
      n /= static_cast<i128>(g);
      d /= static_cast<i128>(g);
    }
    if (n == 0) d = 1;
    if (fits64(n) && fits64(d)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
    } else {
      set_big(mpq_class(mpz_from(n), mpz_from(d)));
    }
    return;
  }
  mpq_class r = subtract ? mpq_class(to_mpq() - o.to_mpq()) : mpq_class(to_mpq() + o.to_mpq());
  set_big(std::move(r));
}

Scalar& Scalar::operator+=(const Scalar& o) {
  add_signed(o, false);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  add_signed(o, true);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  if (modular() || o.modular()) {
    const std::uint64_t q = modular() ? modulus() : o.modulus();
    Field f{static_cast<std::uint32_t>(q)};
    Scalar a = in_field(f), b = o.in_field(f);
    big_.reset();
    num_ = static_cast<std::int64_t>((static_cast<std::uint64_t>(a.num_) * static_cast<std::uint64_t>(b.num_)) % q);
    den_ = -static_cast<std::int64_t>(q);
    return *this;
  }
  if (is_zero()) return *this;
  if (o.is_zero()) {
    big_.reset();
    num_ = 0;
    den_ = 1;
    return *this;
  }
  if (!big_ && !o.big_) {
    if (den_ == 1 && o.den_ == 1) {
      std::int64_t r = 0;
      if (!__builtin_mul_overflow(num_, o.num_, &r) && r != std::numeric_limits<std::int64_t>::min()) {
        num_ = r;
        return *this;
      }
    }
    u128 g1 = gcd128(abs128(num_), static_cast<u128>(o.den_));
    u128 g2 = gcd128(abs128(o.num_), static_cast<u128>(den_));
    i128 n = (static_cast<i128>(num_) / static_cast<i128>(g1)) * (static_cast<i128>(o.num_) / static_cast<i128>(g2));
    i128 d = (static_cast<i128>(den_) / static_cast<i128>(g2)) * (static_cast<i128>(o.den_) / static_cast<i128>(g1));
    if (fits64(n) && fits64(d)) {
      num_ = static_cast<std::int64_t>(n);
      den_ = static_cast<std::int64_t>(d);
    } else {
      set_big(mpq_class(mpz_from(n), mpz_from(d)));
    }
    return *this;
  }
  set_big(to_mpq() * o.to_mpq());
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.modular() || b.modular()) {
    const std::uint64_t q = a.modular() ? a.modulus() : b.modulus();
    Field f{static_cast<std::uint32_t>(q)};
    return a.in_field(f).num_ == b.in_field(f).num_;
  }
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  return a.to_mpq() == b.to_mpq();
}

std::string Scalar::to_string() const {
  if (big_) return big_->get_str();
  if (modular() || den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace homex
