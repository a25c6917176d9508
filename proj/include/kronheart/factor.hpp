#pragma once

// Polynomial factorization.
//   F_p : squarefree decomposition, then distinct-degree / equal-degree
//         (Cantor-Zassenhaus; trace splitting for p = 2).
//   Q   : Yun squarefree decomposition, then a big-prime Zassenhaus round on
//         each primitive squarefree part (single prime above twice the
//         factor-coefficient bound, subset recombination with exact trial
//         division). Degrees stay small here, so no Hensel lifting is needed.

#include "kronheart/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kronheart {

struct FactorTooLarge : std::runtime_error {
  FactorTooLarge() : std::runtime_error("coefficients exceed the supported factorization range") {}
};

namespace fpoly {

// Polynomials over Z/p for a prime p < 2^62, coefficients low degree first.
using P = std::vector<std::uint64_t>;

inline void trim(P& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline bool is_zero(const P& a) { return a.empty(); }
inline int deg(const P& a) { return static_cast<int>(a.size()) - 1; }

inline P mul(const P& a, const P& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  P c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      c[i + j] = (c[i + j] + detail::mulmod_u64(a[i], b[j], p)) % p;
    }
  }
  trim(c);
  return c;
}

inline P add(const P& a, const P& b, std::uint64_t p) {
  P c(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = (c[i] + b[i]) % p;
  trim(c);
  return c;
}

inline P scale(const P& a, std::uint64_t s, std::uint64_t p) {
  P c = a;
  for (auto& x : c) x = detail::mulmod_u64(x, s, p);
  trim(c);
  return c;
}

inline P monic(const P& a, std::uint64_t p) {
  if (a.empty()) return a;
  std::uint64_t inv = detail::powmod_u64(a.back(), p - 2, p);
  return scale(a, inv, p);
}

inline std::pair<P, P> divmod(const P& a, const P& b, std::uint64_t p) {
  P r = a, q;
  if (b.empty()) throw ZeroPolynomial();
  std::uint64_t linv = detail::powmod_u64(b.back(), p - 2, p);
  if (deg(r) >= deg(b)) q.assign(r.size() - b.size() + 1, 0);
  while (!r.empty() && r.size() >= b.size()) {
    std::uint64_t f = detail::mulmod_u64(r.back(), linv, p);
    std::size_t shift = r.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) {
      std::uint64_t sub = detail::mulmod_u64(f, b[i], p);
      r[shift + i] = (r[shift + i] + p - sub) % p;
    }
    trim(r);
  }
  trim(q);
  return {q, r};
}

inline P mod(const P& a, const P& b, std::uint64_t p) { return divmod(a, b, p).second; }
inline P div(const P& a, const P& b, std::uint64_t p) { return divmod(a, b, p).first; }

inline P gcd(P a, P b, std::uint64_t p) {
  while (!b.empty()) {
    P r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? a : monic(a, p);
}

inline P powmod(const P& base, BigInt e, const P& m, std::uint64_t p) {
  P r{1};
  P b = mod(base, m, p);
  while (e > 0) {
    if ((e & 1) != 0) r = mod(mul(r, b, p), m, p);
    b = mod(mul(b, b, p), m, p);
    e >>= 1;
  }
  return r;
}

inline P derivative(const P& a, std::uint64_t p) {
  if (a.size() <= 1) return {};
  P d(a.size() - 1, 0);
  for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = detail::mulmod_u64(a[i], i % p, p);
  trim(d);
  return d;
}

// f(t) = g(t^p) with f' = 0; over the prime field the Frobenius is the
// identity on coefficients, so the p-th root just reindexes.
inline P pth_root(const P& a, std::uint64_t p) {
  P r;
  for (std::size_t i = 0; i < a.size(); i += static_cast<std::size_t>(p)) r.push_back(a[i]);
  return r;
}

// Squarefree decomposition of a monic polynomial: list of (factor, mult).
inline void squarefree(const P& f, std::uint64_t p, std::size_t mult_scale,
                       std::vector<std::pair<P, std::size_t>>& out) {
  if (deg(f) <= 0) return;
  P fp = derivative(f, p);
  if (is_zero(fp)) {
    squarefree(pth_root(f, p), p, mult_scale * static_cast<std::size_t>(p), out);
    return;
  }
  P c = gcd(f, fp, p);
  P w = div(f, c, p);
  std::size_t i = 1;
  while (deg(w) > 0) {
    P y = gcd(w, c, p);
    P z = div(w, y, p);
    if (deg(z) > 0) out.emplace_back(monic(z, p), i * mult_scale);
    ++i;
    w = std::move(y);
    c = div(c, w, p);
  }
  if (deg(c) > 0) squarefree(pth_root(c, p), p, mult_scale * static_cast<std::size_t>(p), out);
}

// Equal-degree splitting: f monic squarefree, all irreducible factors of
// degree d. Appends the factors to out.
inline void equal_degree(const P& f, int d, std::uint64_t p, std::mt19937_64& rng,
                         std::vector<P>& out) {
  if (deg(f) == d) {
    out.push_back(monic(f, p));
    return;
  }
  const P one{1};
  while (true) {
    P r(static_cast<std::size_t>(deg(f)), 0);
    for (auto& x : r) x = rng() % p;
    trim(r);
    if (deg(r) < 1) continue;
    P g = gcd(r, f, p);
    if (deg(g) > 0 && deg(g) < deg(f)) {
      equal_degree(g, d, p, rng, out);
      equal_degree(div(f, g, p), d, p, rng, out);
      return;
    }
    P s;
    if (p == 2) {
      // trace map r + r^2 + ... + r^(2^(d-1))
      P acc = mod(r, f, p);
      s = acc;
      for (int i = 1; i < d; ++i) {
        acc = mod(mul(acc, acc, p), f, p);
        s = add(s, acc, p);
      }
    } else {
      BigInt e = (boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(d)) - 1) / 2;
      s = powmod(r, e, f, p);
      // s - 1
      if (s.empty())
        s = P{p - 1};
      else
        s[0] = (s[0] + p - 1) % p;
      trim(s);
    }
    P g2 = gcd(s, f, p);
    if (deg(g2) > 0 && deg(g2) < deg(f)) {
      equal_degree(g2, d, p, rng, out);
      equal_degree(div(f, g2, p), d, p, rng, out);
      return;
    }
  }
}

// Full factorization of a monic squarefree polynomial into monic irreducibles.
inline std::vector<P> factor_squarefree(P f, std::uint64_t p) {
  std::vector<P> out;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  P x{0, 1};
  P h = mod(x, f, p);
  int d = 0;
  while (deg(f) > 0 && 2 * (d + 1) <= deg(f)) {
    ++d;
    h = powmod(h, BigInt(p), f, p);
    // t^(p^d) - t
    P probe = add(h, scale(x, p - 1, p), p);
    P g = gcd(probe, f, p);
    if (deg(g) > 0) {
      equal_degree(g, d, p, rng, out);
      f = div(f, g, p);
      h = mod(h, f, p);
    }
  }
  if (deg(f) > 0) out.push_back(monic(f, p));
  return out;
}

inline std::vector<std::pair<P, std::size_t>> factor(const P& f0, std::uint64_t p) {
  P f = monic(f0, p);
  std::vector<std::pair<P, std::size_t>> sq;
  squarefree(f, p, 1, sq);
  std::vector<std::pair<P, std::size_t>> out;
  for (auto& [part, mult] : sq) {
    for (auto& irr : factor_squarefree(part, p)) out.emplace_back(irr, mult);
  }
  return out;
}

}  // namespace fpoly

namespace detail {

inline BigInt big_abs(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

inline BigInt isqrt_ceil(const BigInt& n) {
  if (n <= 0) return 0;
  BigInt x = n, y = (x + 1) / 2;
  while (y < x) {
    x = y;
    y = (x + n / x) / 2;
  }
  while (x * x < n) ++x;
  return x;
}

// Integer polynomial as BigInt coefficients, low degree first.
using ZPoly = std::vector<BigInt>;

inline void ztrim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline BigInt zcontent(const ZPoly& a) {
  BigInt g = 0;
  for (const auto& c : a) g = boost::multiprecision::gcd(g, big_abs(c));
  return g;
}

inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly c(a.size() + b.size() - 1, BigInt(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Exact division test in Z[t]; returns quotient when b | a.
inline bool zdivide(const ZPoly& a, const ZPoly& b, ZPoly& quot) {
  ZPoly r = a;
  ztrim(r);
  ZPoly q;
  if (b.empty()) return false;
  if (r.size() < b.size()) {
    if (r.empty()) {
      quot.clear();
      return true;
    }
    return false;
  }
  q.assign(r.size() - b.size() + 1, BigInt(0));
  for (std::size_t k = r.size(); k-- >= b.size();) {
    BigInt lead = r[k];
    if (lead == 0) {
      if (k == 0) break;
      continue;
    }
    if (lead % b.back() != 0) return false;
    BigInt f = lead / b.back();
    std::size_t shift = k - (b.size() - 1);
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
    if (k == 0) break;
  }
  ztrim(r);
  if (!r.empty()) return false;
  quot = std::move(q);
  ztrim(quot);
  return true;
}

// Zassenhaus with one large prime: factor a primitive squarefree integer
// polynomial into irreducible primitive integer polynomials.
inline std::vector<ZPoly> factor_z_squarefree(ZPoly f) {
  std::vector<ZPoly> result;
  ztrim(f);
  if (f.size() <= 1) return result;
  if (f.size() == 2) {
    result.push_back(f);
    return result;
  }

  const int n = static_cast<int>(f.size()) - 1;
  BigInt A = 0;
  BigInt norm2_sq = 0;
  for (const auto& c : f) {
    A = std::max(A, big_abs(c));
    norm2_sq += c * c;
  }
  BigInt b = f.back();
  BigInt bound = (isqrt_ceil(norm2_sq) + big_abs(b)) * big_abs(b);
  bound <<= (n + 1);  // 2^n Mignotte headroom plus the factor of two for symmetric lifts
  if (bound >= (BigInt(1) << 61)) throw FactorTooLarge();

  std::uint64_t p = static_cast<std::uint64_t>(bound) | 1;
  fpoly::P fp;
  while (true) {
    while (!detail::is_prime_u64(p)) p += 2;
    fp.clear();
    for (const auto& c : f) {
      BigInt r = c % static_cast<std::int64_t>(p);
      if (r < 0) r += static_cast<std::int64_t>(p);
      fp.push_back(static_cast<std::uint64_t>(r));
    }
    fpoly::trim(fp);
    if (fpoly::deg(fp) == n) {
      fpoly::P g = fpoly::gcd(fp, fpoly::derivative(fp, p), p);
      if (fpoly::deg(g) == 0) break;
    }
    p += 2;
  }

  std::vector<fpoly::P> modular = fpoly::factor_squarefree(fpoly::monic(fp, p), p);

  auto symmetric_lift = [&](const fpoly::P& g) {
    ZPoly z;
    z.reserve(g.size());
    for (auto c : g) {
      BigInt v = c;
      if (v * 2 > BigInt(p)) v -= BigInt(p);
      z.push_back(v);
    }
    ztrim(z);
    return z;
  };

  // Subset recombination, smallest cardinality first; restart after each hit.
  std::vector<fpoly::P> active = modular;
  ZPoly rem = f;
  bool progress = true;
  while (progress && active.size() > 0) {
    progress = false;
    std::size_t m = active.size();
    BigInt lc = rem.back();
    std::uint64_t lc_mod;
    {
      BigInt r = lc % static_cast<std::int64_t>(p);
      if (r < 0) r += static_cast<std::int64_t>(p);
      lc_mod = static_cast<std::uint64_t>(r);
    }
    for (std::size_t k = 1; k <= m && !progress; ++k) {
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      while (true) {
        fpoly::P prod{lc_mod};
        for (auto i : idx) prod = fpoly::mul(prod, active[i], p);
        ZPoly cand = symmetric_lift(prod);
        BigInt c = zcontent(cand);
        if (c > 1)
          for (auto& x : cand) x /= c;
        if (!cand.empty() && cand.back() < 0)
          for (auto& x : cand) x = -x;
        ZPoly quot;
        if (static_cast<int>(cand.size()) - 1 >= 1 && zdivide(rem, cand, quot)) {
          result.push_back(cand);
          rem = quot;
          BigInt rc = zcontent(rem);
          if (rc > 1)
            for (auto& x : rem) x /= rc;
          std::vector<fpoly::P> next;
          for (std::size_t i = 0, j = 0; i < active.size(); ++i) {
            if (j < idx.size() && idx[j] == i) {
              ++j;
              continue;
            }
            next.push_back(active[i]);
          }
          active = std::move(next);
          progress = true;
          break;
        }
        // next k-subset
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == m - (k - pos) - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
  }
  ztrim(rem);
  if (rem.size() > 1) result.push_back(rem);
  return result;
}

}  // namespace detail

// Monic irreducible factors with multiplicities, sorted by (degree,
// coefficient order). The product times the leading unit re-multiplies to p.
inline std::vector<std::pair<Polynomial, std::size_t>> factor(const Polynomial& f) {
  if (f.is_zero()) throw ZeroPolynomial();
  const FieldSpec& F = f.field();
  std::vector<std::pair<Polynomial, std::size_t>> out;
  if (f.degree() == 0) return out;

  if (F.is_prime_field()) {
    std::uint64_t p = static_cast<std::uint64_t>(F.characteristic());
    fpoly::P fp;
    for (const auto& c : f.coeffs()) fp.push_back(static_cast<std::uint64_t>(c.residue()));
    for (auto& [g, m] : fpoly::factor(fp, p)) {
      std::vector<Scalar> coeffs;
      coeffs.reserve(g.size());
      for (auto c : g) coeffs.emplace_back(F, static_cast<std::int64_t>(c));
      out.emplace_back(Polynomial(F, std::move(coeffs)), m);
    }
  } else {
    // Yun squarefree decomposition over Q, then Zassenhaus per part.
    Polynomial a = f.monic();
    std::vector<std::pair<Polynomial, std::size_t>> squarefree_parts;
    {
      Polynomial da = a.derivative();
      Polynomial g = poly_gcd(a, da);
      Polynomial c = a / g;
      Polynomial d = da / g - c.derivative();
      std::size_t i = 1;
      while (c.degree() > 0) {
        Polynomial ai = poly_gcd(c, d);
        if (ai.degree() > 0) squarefree_parts.emplace_back(ai, i);
        c = c / ai;
        d = d / ai - c.derivative();
        ++i;
      }
    }
    for (auto& [part, mult] : squarefree_parts) {
      // Clear denominators, factor the primitive integer polynomial.
      BigInt lcm_den = 1;
      for (const auto& c : part.coeffs())
        lcm_den = boost::multiprecision::lcm(lcm_den, denominator(c.rational()));
      detail::ZPoly z;
      for (const auto& c : part.coeffs())
        z.push_back(numerator(c.rational()) * (lcm_den / denominator(c.rational())));
      detail::ztrim(z);
      BigInt cont = detail::zcontent(z);
      if (cont > 1)
        for (auto& x : z) x /= cont;
      for (auto& zf : detail::factor_z_squarefree(z)) {
        std::vector<Scalar> coeffs;
        coeffs.reserve(zf.size());
        for (const auto& c : zf) coeffs.emplace_back(F, Rat(c));
        out.emplace_back(Polynomial(F, std::move(coeffs)).monic(), mult);
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  return out;
}

}  // namespace kronheart
