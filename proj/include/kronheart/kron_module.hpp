#pragma once

// Representations of the two-arrow quiver: a pair of d2 x d1 matrices over an
// exact field. Canonical indecomposables (preprojective, preinjective, and
// regular tubes indexed by closed points of the projective line), dimension
// arithmetic, morphisms, submodules and quotients.
//
// Orientation: both arrows map vertex 1 (source) to vertex 2 (sink).
// P1 = simple at the sink (0,1) is projective, Q1 = simple at the source
// (1,0) is injective.

#include "kronheart/factor.hpp"
#include "kronheart/matrix.hpp"
#include "kronheart/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace kronheart {

struct InvalidPoint : std::runtime_error {
  explicit InvalidPoint(const std::string& what) : std::runtime_error(what) {}
};
struct FieldNotFinite : std::runtime_error {
  FieldNotFinite() : std::runtime_error("operation requires a prime field") {}
};
struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};
struct Overflow : std::runtime_error {
  explicit Overflow(std::size_t max_count)
      : std::runtime_error("enumeration exceeded max_count = " + std::to_string(max_count)) {}
};
struct NotASubmodule : std::runtime_error {
  NotASubmodule() : std::runtime_error("matrices do not describe a subrepresentation") {}
};

struct DimVector {
  std::size_t d1 = 0;  // source vertex
  std::size_t d2 = 0;  // sink vertex

  std::size_t total() const { return d1 + d2; }
  friend bool operator==(const DimVector&, const DimVector&) = default;
  friend DimVector operator+(const DimVector& a, const DimVector& b) {
    return {a.d1 + b.d1, a.d2 + b.d2};
  }
};

// Euler form of the hereditary path algebra: <d,e> = d1 e1 + d2 e2 - 2 d1 e2.
inline std::int64_t euler_form(const DimVector& d, const DimVector& e) {
  auto i = [](std::size_t x) { return static_cast<std::int64_t>(x); };
  return i(d.d1) * i(e.d1) + i(d.d2) * i(e.d2) - 2 * i(d.d1) * i(e.d2);
}

// d1 - d2: -1 on preprojectives, 0 on regulars, +1 on preinjectives.
inline std::int64_t defect(const DimVector& d) {
  return static_cast<std::int64_t>(d.d1) - static_cast<std::int64_t>(d.d2);
}

// A closed point of the projective line over the base field: either the
// distinguished point at infinity or a monic irreducible polynomial (a Galois
// orbit of geometric points).
class ClosedPoint {
 public:
  static ClosedPoint infinity(const FieldSpec& f) {
    ClosedPoint x;
    x.field_ = f;
    x.infinity_ = true;
    return x;
  }

  static ClosedPoint finite(const Polynomial& monic_irreducible) {
    if (monic_irreducible.degree() < 1 || !monic_irreducible.is_monic())
      throw InvalidPoint("point polynomial must be monic of degree >= 1");
    auto fs = factor(monic_irreducible);
    if (fs.size() != 1 || fs[0].second != 1)
      throw InvalidPoint("point polynomial must be irreducible: " + monic_irreducible.to_string());
    ClosedPoint x;
    x.field_ = monic_irreducible.field();
    x.infinity_ = false;
    x.poly_ = monic_irreducible;
    return x;
  }

  bool is_infinity() const { return infinity_; }
  const Polynomial& poly() const { return poly_; }
  const FieldSpec& field() const { return field_; }
  std::size_t degree() const { return infinity_ ? 1 : static_cast<std::size_t>(poly_.degree()); }

  std::string to_string() const { return infinity_ ? "inf" : poly_.to_string(); }

  friend bool operator==(const ClosedPoint& a, const ClosedPoint& b) {
    return a.field_ == b.field_ && a.infinity_ == b.infinity_ && a.poly_ == b.poly_;
  }
  friend bool operator!=(const ClosedPoint& a, const ClosedPoint& b) { return !(a == b); }

  // (degree, coefficients), infinity last.
  friend bool operator<(const ClosedPoint& a, const ClosedPoint& b) {
    if (a.infinity_ != b.infinity_) return !a.infinity_;
    if (a.infinity_) return false;
    return a.poly_ < b.poly_;
  }

 private:
  ClosedPoint() : field_(FieldSpec::rationals()), infinity_(false) {}
  FieldSpec field_;
  bool infinity_;
  Polynomial poly_;
};

struct IndecompDescriptor {
  enum class Kind { Preproj, Preinj, Regular };

  Kind kind = Kind::Preproj;
  std::size_t index = 1;                // Preproj/Preinj index i >= 1, or tube length for Regular
  std::optional<ClosedPoint> point;     // Regular only

  static IndecompDescriptor preproj(std::size_t i) { return {Kind::Preproj, i, std::nullopt}; }
  static IndecompDescriptor preinj(std::size_t i) { return {Kind::Preinj, i, std::nullopt}; }
  static IndecompDescriptor regular(const ClosedPoint& x, std::size_t length) {
    return {Kind::Regular, length, x};
  }

  DimVector dim() const {
    switch (kind) {
      case Kind::Preproj:
        return {index - 1, index};
      case Kind::Preinj:
        return {index, index - 1};
      case Kind::Regular: {
        std::size_t n = index * point->degree();
        return {n, n};
      }
    }
    return {};
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Preproj:
        return "P" + std::to_string(index);
      case Kind::Preinj:
        return "Q" + std::to_string(index);
      case Kind::Regular:
        return "R[" + point->to_string() + "," + std::to_string(index) + "]";
    }
    return {};
  }

  friend bool operator==(const IndecompDescriptor& a, const IndecompDescriptor& b) {
    return a.kind == b.kind && a.index == b.index && a.point == b.point;
  }

  // Preproj < Regular < Preinj; then index / (point, length).
  friend bool operator<(const IndecompDescriptor& a, const IndecompDescriptor& b) {
    auto order = [](Kind k) { return k == Kind::Preproj ? 0 : k == Kind::Regular ? 1 : 2; };
    if (order(a.kind) != order(b.kind)) return order(a.kind) < order(b.kind);
    if (a.kind == Kind::Regular) {
      if (*a.point != *b.point) return *a.point < *b.point;
    }
    return a.index < b.index;
  }
};

struct KronModule {
  FieldSpec field = FieldSpec::rationals();
  DimVector dim;
  Matrix a;  // d2 x d1
  Matrix b;  // d2 x d1

  KronModule() = default;
  KronModule(const FieldSpec& f, Matrix a_, Matrix b_)
      : field(f), dim{a_.cols(), a_.rows()}, a(std::move(a_)), b(std::move(b_)) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw DimensionMismatch("arrow matrices must have equal shape");
    require_same_field(a.field(), f);
    require_same_field(b.field(), f);
  }

  static KronModule zero(const FieldSpec& f) { return KronModule(f, Matrix(0, 0, f), Matrix(0, 0, f)); }

  std::size_t total_dim() const { return dim.total(); }
  bool is_zero_module() const { return dim.total() == 0; }

  friend bool operator==(const KronModule& m, const KronModule& n) {
    return m.field == n.field && m.dim == n.dim && m.a == n.a && m.b == n.b;
  }
};

namespace detail {
inline Matrix companion(const Polynomial& monic) {
  const FieldSpec& f = monic.field();
  std::size_t d = static_cast<std::size_t>(monic.degree());
  Matrix c(d, d, f);
  for (std::size_t i = 1; i < d; ++i) c.at(i, i - 1) = Scalar(f, 1);
  for (std::size_t i = 0; i < d; ++i) c.at(i, d - 1) = -monic.coeff(i);
  return c;
}

inline Polynomial poly_pow(const Polynomial& p, std::size_t n) {
  Polynomial r = Polynomial::constant(p.field(), Scalar(p.field(), 1));
  for (std::size_t i = 0; i < n; ++i) r = r * p;
  return r;
}
}  // namespace detail

// Canonical representative of an indecomposable.
//   Preproj(i): a = [I; 0], b = [0; I] column shifts of shape i x (i-1).
//   Preinj(i):  a = [I | 0], b = [0 | I] row shifts of shape (i-1) x i.
//   Regular(x,n), x finite: a = companion(pi_x^n), b = I.
//   Regular(inf,n): a = I, b = companion(t^n) (nilpotent Jordan block).
inline KronModule make_indecomposable(const IndecompDescriptor& d, const FieldSpec& f) {
  using Kind = IndecompDescriptor::Kind;
  switch (d.kind) {
    case Kind::Preproj: {
      std::size_t i = d.index;
      Matrix a(i, i - 1, f), b(i, i - 1, f);
      for (std::size_t k = 0; k + 1 < i; ++k) {
        a.at(k, k) = Scalar(f, 1);
        b.at(k + 1, k) = Scalar(f, 1);
      }
      return KronModule(f, a, b);
    }
    case Kind::Preinj: {
      std::size_t i = d.index;
      Matrix a(i - 1, i, f), b(i - 1, i, f);
      for (std::size_t k = 0; k + 1 < i; ++k) {
        a.at(k, k) = Scalar(f, 1);
        b.at(k, k + 1) = Scalar(f, 1);
      }
      return KronModule(f, a, b);
    }
    case Kind::Regular: {
      const ClosedPoint& x = *d.point;
      if (x.field() != f) throw InvalidPoint("point lives over a different field");
      std::size_t n = d.index;
      if (x.is_infinity()) {
        std::size_t m = n;
        Polynomial tn = Polynomial::t(f).shifted_up(m - 1);  // t^m as monic polynomial
        Matrix b = detail::companion(Polynomial(f, tn.coeffs()));
        return KronModule(f, Matrix::identity(m, f), b);
      }
      Polynomial pin = detail::poly_pow(x.poly(), n);
      Matrix a = detail::companion(pin);
      return KronModule(f, a, Matrix::identity(a.rows(), f));
    }
  }
  throw std::logic_error("unreachable");
}

inline KronModule direct_sum(const FieldSpec& f, const std::vector<KronModule>& ms) {
  Matrix a(0, 0, f), b(0, 0, f);
  for (const auto& m : ms) {
    require_same_field(m.field, f);
    a = block_diag(a, m.a);
    b = block_diag(b, m.b);
  }
  return KronModule(f, a, b);
}

inline KronModule direct_sum(const FieldSpec& f, const std::vector<IndecompDescriptor>& ds) {
  std::vector<KronModule> ms;
  ms.reserve(ds.size());
  for (const auto& d : ds) ms.push_back(make_indecomposable(d, f));
  return direct_sum(f, ms);
}

// A morphism M -> N given by (f1: M1 -> N1, f2: M2 -> N2) with
// f2 a_M = a_N f1 and f2 b_M = b_N f1.
struct Morphism {
  Matrix f1;
  Matrix f2;
};

inline bool is_morphism(const KronModule& m, const KronModule& n, const Morphism& f) {
  if (f.f1.rows() != n.dim.d1 || f.f1.cols() != m.dim.d1) return false;
  if (f.f2.rows() != n.dim.d2 || f.f2.cols() != m.dim.d2) return false;
  return f.f2 * m.a == n.a * f.f1 && f.f2 * m.b == n.b * f.f1;
}

inline Morphism identity_morphism(const KronModule& m) {
  return {Matrix::identity(m.dim.d1, m.field), Matrix::identity(m.dim.d2, m.field)};
}

inline Morphism compose(const Morphism& g, const Morphism& f) {  // g after f
  return {g.f1 * f.f1, g.f2 * f.f2};
}

// A subrepresentation, as a pair of full-column-rank inclusion matrices.
struct Submodule {
  Matrix inc1;  // d1 x k1
  Matrix inc2;  // d2 x k2

  DimVector dim() const { return {inc1.cols(), inc2.cols()}; }
};

inline bool is_subrepresentation(const KronModule& m, const Submodule& s) {
  if (s.inc1.rows() != m.dim.d1 || s.inc2.rows() != m.dim.d2) return false;
  if (rank(s.inc1) != s.inc1.cols() || rank(s.inc2) != s.inc2.cols()) return false;
  return column_span_contains(s.inc2, m.a * s.inc1) &&
         column_span_contains(s.inc2, m.b * s.inc1);
}

// The subrepresentation spanned by the given generators at each vertex
// (closing the sink space under the arrow images).
inline Submodule span_subrep(const KronModule& m, const Matrix& gens1, const Matrix& gens2) {
  Matrix u1 = column_space_normal_form(gens1);
  Matrix u2 = column_space_normal_form(hstack(hstack(gens2, m.a * u1), m.b * u1));
  return {u1, u2};
}

// Kernel of a morphism is automatically a subrepresentation.
inline Submodule kernel_subrep(const KronModule& m, const Morphism& f) {
  (void)m;
  return {kernel_basis(f.f1), kernel_basis(f.f2)};
}

inline Submodule image_subrep(const Morphism& f) {
  return {column_space_normal_form(f.f1), column_space_normal_form(f.f2)};
}

// Restrict the module structure to a subrepresentation: the unique pair with
// a * inc1 = inc2 * a_sub (solvable by definition of subrepresentation).
inline KronModule restrict_to(const KronModule& m, const Submodule& s) {
  auto asub = solve(s.inc2, m.a * s.inc1);
  auto bsub = solve(s.inc2, m.b * s.inc1);
  if (!asub || !bsub) throw NotASubmodule();
  return KronModule(m.field, *asub, *bsub);
}

struct QuotientResult {
  KronModule quotient;
  Matrix proj1;  // (d1 - k1) x d1
  Matrix proj2;
};

// Quotient of m by a subrepresentation, with the canonical projections onto
// the non-pivot coordinates of the echelonized inclusion.
inline QuotientResult quotient(const KronModule& m, const Submodule& sub) {
  if (!is_subrepresentation(m, sub)) throw NotASubmodule();

  auto make_proj = [&](const Matrix& inc, std::size_t d) {
    Matrix u = column_space_normal_form(inc);
    Rref e = rref(u.transpose());
    std::vector<bool> is_pivot_row(d, false);
    for (auto c : e.pivots) is_pivot_row[c] = true;
    std::vector<std::size_t> comp;
    for (std::size_t i = 0; i < d; ++i)
      if (!is_pivot_row[i]) comp.push_back(i);
    Matrix ext(d, comp.size(), m.field);
    for (std::size_t j = 0; j < comp.size(); ++j) ext.at(comp[j], j) = Scalar(m.field, 1);
    Matrix full = hstack(u, ext);
    Matrix inv = inverse(full);
    Matrix proj = inv.select_rows([&] {
      std::vector<std::size_t> idx(comp.size());
      for (std::size_t i = 0; i < comp.size(); ++i) idx[i] = u.cols() + i;
      return idx;
    }());
    return std::make_pair(proj, ext);
  };

  auto [p1, e1] = make_proj(sub.inc1, m.dim.d1);
  auto [p2, e2] = make_proj(sub.inc2, m.dim.d2);
  Matrix qa = p2 * m.a * e1;
  Matrix qb = p2 * m.b * e1;
  KronModule q(m.field, qa, qb);
  // Well-definedness: the projections intertwine.
  if (qa * p1 != p2 * m.a || qb * p1 != p2 * m.b) throw NotASubmodule();
  return {q, p1, p2};
}

namespace detail {

// All subspaces of F_p^n as RREF row-bases, deterministic order.
inline std::vector<Matrix> all_subspaces(std::size_t n, const FieldSpec& f, std::size_t max_count,
                                         std::size_t budget_guard) {
  std::int64_t p = f.characteristic();
  std::vector<Matrix> out;
  out.push_back(Matrix(n, 0, f));  // zero subspace, as a basis of columns
  std::vector<std::size_t> pivots;
  // Enumerate pivot sets by k-subsets of {0..n-1}, then fill free entries.
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      // Free positions: (row i, col j) with j > idx[i], j not a pivot column.
      std::vector<std::pair<std::size_t, std::size_t>> free_pos;
      std::vector<bool> is_piv(n, false);
      for (auto c : idx) is_piv[c] = true;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = idx[i] + 1; j < n; ++j)
          if (!is_piv[j]) free_pos.emplace_back(i, j);
      std::size_t combos = 1;
      for (std::size_t t = 0; t < free_pos.size(); ++t) {
        combos *= static_cast<std::size_t>(p);
        if (combos > budget_guard) throw Overflow(max_count);
      }
      for (std::size_t mask = 0; mask < combos; ++mask) {
        Matrix rows(k, n, f);
        for (std::size_t i = 0; i < k; ++i) rows.at(i, idx[i]) = Scalar(f, 1);
        std::size_t rem = mask;
        for (auto [i, j] : free_pos) {
          rows.at(i, j) = Scalar(f, static_cast<std::int64_t>(rem % p));
          rem /= static_cast<std::size_t>(p);
        }
        out.push_back(rows.transpose());  // columns span the subspace
        if (out.size() > max_count) throw Overflow(max_count);
      }
      // next k-subset
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - (k - pos) - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return out;
}

}  // namespace detail

// All subrepresentations of m, sink subspace first, then compatible source
// subspaces. Requires a prime field and total dimension <= 8.
inline std::vector<Submodule> enumerate_submodules(const KronModule& m, std::size_t max_count) {
  if (!m.field.is_prime_field()) throw FieldNotFinite();
  if (m.total_dim() > 8) throw TooLarge("enumerate_submodules: total dimension > 8");
  std::vector<Submodule> out;
  auto sink_spaces = detail::all_subspaces(m.dim.d2, m.field, max_count, max_count * 64 + 4096);
  for (const auto& u2 : sink_spaces) {
    // W = preimage of span(u2) under both arrows.
    Matrix ka = kernel_basis(hstack(m.a, -u2));
    Matrix wa = ka.submatrix(0, 0, m.dim.d1, ka.cols());
    Matrix kb = kernel_basis(hstack(m.b, -u2));
    Matrix wb = kb.submatrix(0, 0, m.dim.d1, kb.cols());
    Matrix w = column_span_intersection(wa, wb);
    auto inner = detail::all_subspaces(w.cols(), m.field, max_count, max_count * 64 + 4096);
    for (const auto& s : inner) {
      Matrix u1 = column_space_normal_form(w * s);
      out.push_back({u1, u2});
      if (out.size() > max_count) throw Overflow(max_count);
    }
  }
  return out;
}

inline ClosedPoint parse_closed_point(const std::string& text, const FieldSpec& f) {
  if (text == "inf") return ClosedPoint::infinity(f);
  return ClosedPoint::finite(parse_polynomial(text, f));
}

// "P3", "Q1", "R[inf,2]", "R[t^2+t+1,1]"
inline IndecompDescriptor parse_descriptor(const std::string& text, const FieldSpec& f) {
  if (text.size() < 2) throw std::invalid_argument("bad descriptor: " + text);
  if (text[0] == 'P' || text[0] == 'Q') {
    std::size_t i = static_cast<std::size_t>(std::stoul(text.substr(1)));
    if (i < 1) throw std::invalid_argument("descriptor index must be >= 1: " + text);
    return text[0] == 'P' ? IndecompDescriptor::preproj(i) : IndecompDescriptor::preinj(i);
  }
  if (text[0] == 'R' && text[1] == '[' && text.back() == ']') {
    std::string body = text.substr(2, text.size() - 3);
    auto comma = body.rfind(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad descriptor: " + text);
    ClosedPoint x = parse_closed_point(body.substr(0, comma), f);
    std::size_t n = static_cast<std::size_t>(std::stoul(body.substr(comma + 1)));
    if (n < 1) throw std::invalid_argument("tube length must be >= 1: " + text);
    return IndecompDescriptor::regular(x, n);
  }
  throw std::invalid_argument("bad descriptor: " + text);
}

// Closed points of P^1 with degree <= maxdeg over a prime field, sorted.
inline std::vector<ClosedPoint> closed_points_up_to_degree(const FieldSpec& f, std::size_t maxdeg) {
  if (!f.is_prime_field()) throw FieldNotFinite();
  std::int64_t p = f.characteristic();
  std::vector<ClosedPoint> pts;
  for (std::size_t e = 1; e <= maxdeg; ++e) {
    // monic polynomials of degree e, lexicographic in low-first coefficients
    std::size_t combos = 1;
    for (std::size_t i = 0; i < e; ++i) combos *= static_cast<std::size_t>(p);
    for (std::size_t mask = 0; mask < combos; ++mask) {
      std::vector<Scalar> c(e + 1, Scalar(f, 0));
      c[e] = Scalar(f, 1);
      std::size_t rem = mask;
      for (std::size_t i = 0; i < e; ++i) {
        c[i] = Scalar(f, static_cast<std::int64_t>(rem % p));
        rem /= static_cast<std::size_t>(p);
      }
      Polynomial poly(f, std::move(c));
      auto fs = factor(poly);
      if (fs.size() == 1 && fs[0].second == 1) pts.push_back(ClosedPoint::finite(poly));
    }
  }
  pts.push_back(ClosedPoint::infinity(f));
  std::sort(pts.begin(), pts.end());
  return pts;
}

// All canonical indecomposable descriptors of total dimension <= bound.
inline std::vector<IndecompDescriptor> all_indecomposables(const FieldSpec& f, std::size_t bound) {
  std::vector<IndecompDescriptor> out;
  for (std::size_t i = 1; 2 * i - 1 <= bound; ++i) out.push_back(IndecompDescriptor::preproj(i));
  if (f.is_prime_field() && bound >= 2) {
    for (const auto& x : closed_points_up_to_degree(f, bound / 2)) {
      for (std::size_t n = 1; 2 * n * x.degree() <= bound; ++n)
        out.push_back(IndecompDescriptor::regular(x, n));
    }
  }
  for (std::size_t i = 1; 2 * i - 1 <= bound; ++i) out.push_back(IndecompDescriptor::preinj(i));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kronheart
