#pragma once

// Exact scalar arithmetic over the rationals and prime fields F_p.
// Every Scalar carries its field tag, so arithmetic is self-checking and
// equality is decidable. Rationals are arbitrary-precision, kept in lowest
// terms with positive denominator by the backing representation.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kronheart {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct FieldMismatch : std::runtime_error {
  FieldMismatch() : std::runtime_error("operands belong to different fields") {}
};

struct NotPrime : std::runtime_error {
  explicit NotPrime(std::int64_t p)
      : std::runtime_error("not a prime: " + std::to_string(p)) {}
};

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace detail

// Field tag: p == 0 means the rationals, p > 0 a prime field F_p with p < 2^31.
class FieldSpec {
 public:
  FieldSpec() : p_(0) {}

  static FieldSpec rationals() { return FieldSpec(); }

  static FieldSpec prime_field(std::int64_t p) {
    if (p < 2 || p >= (std::int64_t{1} << 31) || !detail::is_prime_u64(static_cast<std::uint64_t>(p)))
      throw NotPrime(p);
    FieldSpec f;
    f.p_ = p;
    return f;
  }

  bool is_rationals() const { return p_ == 0; }
  bool is_prime_field() const { return p_ > 0; }
  std::int64_t characteristic() const { return p_; }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) { return a.p_ == b.p_; }
  friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return a.p_ != b.p_; }

  std::string to_string() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

 private:
  std::int64_t p_;
};

inline void require_same_field(const FieldSpec& a, const FieldSpec& b) {
  if (a != b) throw FieldMismatch();
}

// A field element tagged with its field. Rationals live in q_, prime-field
// residues in v_ normalized to [0, p).
class Scalar {
 public:
  Scalar() : p_(0), v_(0), q_(0) {}

  Scalar(const FieldSpec& f, std::int64_t n) : p_(f.characteristic()), v_(0), q_(0) {
    if (p_ == 0) {
      q_ = n;
    } else {
      v_ = n % p_;
      if (v_ < 0) v_ += p_;
    }
  }

  Scalar(const FieldSpec& f, const Rat& q) : p_(f.characteristic()), v_(0), q_(0) {
    if (p_ == 0) {
      q_ = q;
    } else {
      // Reduce num/den mod p; denominator must be invertible.
      BigInt num = numerator(q) % p_;
      BigInt den = denominator(q) % p_;
      std::int64_t n = static_cast<std::int64_t>(num);
      std::int64_t d = static_cast<std::int64_t>(den);
      if (n < 0) n += p_;
      if (d < 0) d += p_;
      if (d == 0) throw std::domain_error("denominator not invertible mod p");
      std::int64_t dinv = static_cast<std::int64_t>(
          detail::powmod_u64(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(p_ - 2),
                             static_cast<std::uint64_t>(p_)));
      v_ = static_cast<std::int64_t>(
          detail::mulmod_u64(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(dinv),
                             static_cast<std::uint64_t>(p_)));
    }
  }

  FieldSpec field() const {
    return p_ == 0 ? FieldSpec::rationals() : FieldSpec::prime_field(p_);
  }

  bool is_zero() const { return p_ == 0 ? q_.is_zero() : v_ == 0; }
  bool is_one() const { return p_ == 0 ? q_ == 1 : v_ == 1; }

  // Residue in [0,p) for prime fields.
  std::int64_t residue() const { return v_; }
  const Rat& rational() const { return q_; }

  Scalar operator-() const {
    Scalar r = *this;
    if (p_ == 0)
      r.q_ = -q_;
    else if (v_ != 0)
      r.v_ = p_ - v_;
    return r;
  }

  Scalar& operator+=(const Scalar& o) {
    check(o);
    if (p_ == 0) {
      q_ += o.q_;
    } else {
      v_ += o.v_;
      if (v_ >= p_) v_ -= p_;
    }
    return *this;
  }

  Scalar& operator-=(const Scalar& o) {
    check(o);
    if (p_ == 0) {
      q_ -= o.q_;
    } else {
      v_ -= o.v_;
      if (v_ < 0) v_ += p_;
    }
    return *this;
  }

  Scalar& operator*=(const Scalar& o) {
    check(o);
    if (p_ == 0)
      q_ *= o.q_;
    else
      v_ = (v_ * o.v_) % p_;  // p < 2^31, so the product fits in int64
    return *this;
  }

  Scalar inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    Scalar r = *this;
    if (p_ == 0) {
      r.q_ = Rat(1) / q_;
    } else {
      r.v_ = static_cast<std::int64_t>(
          detail::powmod_u64(static_cast<std::uint64_t>(v_), static_cast<std::uint64_t>(p_ - 2),
                             static_cast<std::uint64_t>(p_)));
    }
    return r;
  }

  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.p_ != b.p_) return false;
    return a.p_ == 0 ? a.q_ == b.q_ : a.v_ == b.v_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  // Total order used only for deterministic normal forms and sorting.
  friend bool operator<(const Scalar& a, const Scalar& b) {
    if (a.p_ != b.p_) return a.p_ < b.p_;
    return a.p_ == 0 ? a.q_ < b.q_ : a.v_ < b.v_;
  }

  std::string to_string() const {
    if (p_ != 0) return std::to_string(v_);
    return q_.str();
  }

 private:
  void check(const Scalar& o) const {
    if (p_ != o.p_) throw FieldMismatch();
  }

  std::int64_t p_;
  std::int64_t v_;
  Rat q_;
};

inline Scalar make_scalar(const FieldSpec& f, std::int64_t n) { return Scalar(f, n); }

}  // namespace kronheart
