#pragma once

// Univariate polynomials over a FieldSpec, coefficients stored lowest degree
// first with a nonzero leading coefficient (the zero polynomial is the empty
// list). Exact arithmetic only.

#include "kronheart/field.hpp"

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kronheart {

struct ZeroPolynomial : std::runtime_error {
  ZeroPolynomial() : std::runtime_error("zero polynomial not allowed here") {}
};

class Polynomial {
 public:
  Polynomial() : field_(FieldSpec::rationals()) {}
  explicit Polynomial(const FieldSpec& f) : field_(f) {}

  Polynomial(const FieldSpec& f, std::vector<Scalar> coeffs) : field_(f), c_(std::move(coeffs)) {
    trim();
  }

  static Polynomial from_ints(const FieldSpec& f, std::initializer_list<std::int64_t> low_first) {
    std::vector<Scalar> c;
    c.reserve(low_first.size());
    for (auto v : low_first) c.emplace_back(f, v);
    return Polynomial(f, std::move(c));
  }

  static Polynomial zero(const FieldSpec& f) { return Polynomial(f); }
  static Polynomial constant(const FieldSpec& f, const Scalar& s) {
    return Polynomial(f, std::vector<Scalar>{s});
  }
  static Polynomial t(const FieldSpec& f) { return from_ints(f, {0, 1}); }

  const FieldSpec& field() const { return field_; }
  bool is_zero() const { return c_.empty(); }
  // degree of the zero polynomial is -1
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  const std::vector<Scalar>& coeffs() const { return c_; }

  Scalar coeff(std::size_t i) const {
    return i < c_.size() ? c_[i] : Scalar(field_, 0);
  }

  Scalar leading() const {
    if (c_.empty()) return Scalar(field_, 0);
    return c_.back();
  }

  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

  Polynomial monic() const {
    if (is_zero()) throw ZeroPolynomial();
    return Polynomial(field_, scaled(leading().inverse()).c_);
  }

  Scalar evaluate(const Scalar& x) const {
    Scalar acc(field_, 0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial(field_);
    std::vector<Scalar> d;
    d.reserve(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(Scalar(field_, static_cast<std::int64_t>(i)) * c_[i]);
    return Polynomial(field_, std::move(d));
  }

  Polynomial operator-() const {
    Polynomial r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    require_same_field(a.field_, b.field_);
    std::vector<Scalar> c(std::max(a.c_.size(), b.c_.size()), Scalar(a.field_, 0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Polynomial(a.field_, std::move(c));
  }

  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require_same_field(a.field_, b.field_);
    if (a.is_zero() || b.is_zero()) return Polynomial(a.field_);
    std::vector<Scalar> c(a.c_.size() + b.c_.size() - 1, Scalar(a.field_, 0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(a.field_, std::move(c));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  // (degree, then coefficient list low-first) — the deterministic order used
  // for factor lists and point sets.
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    }
    return false;
  }

  Polynomial scaled(const Scalar& s) const {
    Polynomial r = *this;
    for (auto& x : r.c_) x *= s;
    r.trim();
    return r;
  }

  Polynomial shifted_up(std::size_t k) const {  // multiply by t^k
    if (is_zero()) return *this;
    std::vector<Scalar> c(k, Scalar(field_, 0));
    c.insert(c.end(), c_.begin(), c_.end());
    return Polynomial(field_, std::move(c));
  }

  friend std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
    require_same_field(a.field_, b.field_);
    if (b.is_zero()) throw ZeroPolynomial();
    Polynomial rem = a;
    Polynomial quot(a.field_);
    Scalar lead_inv = b.leading().inverse();
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
      std::size_t shift = static_cast<std::size_t>(rem.degree() - b.degree());
      Scalar f = rem.leading() * lead_inv;
      Polynomial term = Polynomial::constant(a.field_, f).shifted_up(shift);
      quot = quot + term;
      rem = rem - b.scaled(f).shifted_up(shift);
    }
    return {quot, rem};
  }

  friend Polynomial operator/(const Polynomial& a, const Polynomial& b) { return divmod(a, b).first; }
  friend Polynomial operator%(const Polynomial& a, const Polynomial& b) { return divmod(a, b).second; }

  // "t^2+t+1" style, highest degree first; coefficients prefix their power.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      std::string term;
      if (i == 0) {
        term = c_[i].to_string();
      } else {
        std::string base = i == 1 ? "t" : "t^" + std::to_string(i);
        if (c_[i].is_one())
          term = base;
        else if ((-c_[i]).is_one() && field_.is_rationals())
          term = "-" + base;
        else
          term = c_[i].to_string() + base;
      }
      if (s.empty())
        s = term;
      else if (!term.empty() && term[0] == '-')
        s += term;
      else
        s += "+" + term;
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  FieldSpec field_;
  std::vector<Scalar> c_;
};

// Parse the "t^2+t+1" syntax produced by to_string: signed terms, optional
// coefficient prefix (integer or num/den), optional power suffix.
inline Polynomial parse_polynomial(const std::string& text, const FieldSpec& f) {
  if (text.empty()) throw std::invalid_argument("empty polynomial text");
  if (text == "0") return Polynomial::zero(f);
  Polynomial acc(f);
  std::size_t i = 0;
  while (i < text.size()) {
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
      negative = text[i] == '-';
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/'))
      ++i;
    Scalar coeff(f, 1);
    if (i > start) {
      std::string num = text.substr(start, i - start);
      auto slash = num.find('/');
      if (slash == std::string::npos) {
        coeff = Scalar(f, Rat(BigInt(num)));
      } else {
        coeff = Scalar(f, Rat(BigInt(num.substr(0, slash))) / Rat(BigInt(num.substr(slash + 1))));
      }
    }
    std::size_t power = 0;
    if (i < text.size() && text[i] == 't') {
      ++i;
      power = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::size_t s2 = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == s2) throw std::invalid_argument("bad exponent in polynomial: " + text);
        power = static_cast<std::size_t>(std::stoul(text.substr(s2, i - s2)));
      }
    } else if (i == start) {
      throw std::invalid_argument("bad polynomial text: " + text);
    }
    if (negative) coeff = -coeff;
    acc = acc + Polynomial::constant(f, coeff).shifted_up(power);
  }
  return acc;
}

inline Polynomial poly_gcd(Polynomial a, Polynomial b) {
  require_same_field(a.field(), b.field());
  while (!b.is_zero()) {
    Polynomial r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return a.monic();
}

inline Polynomial poly_pow_mod(const Polynomial& base, BigInt e, const Polynomial& mod) {
  Polynomial r = Polynomial::constant(base.field(), Scalar(base.field(), 1));
  Polynomial b = base % mod;
  while (e > 0) {
    if ((e & 1) != 0) r = (r * b) % mod;
    b = (b * b) % mod;
    e >>= 1;
  }
  return r;
}

}  // namespace kronheart
