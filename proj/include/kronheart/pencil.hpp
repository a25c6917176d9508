#pragma once

// Exact Kronecker canonical form: split a module into canonical
// indecomposables with an explicit base change, entirely over the base field.
//
// decompose() works module-theoretically:
//   1. the preinjective part is the trace of the canonical preinjectives and
//      splits off through a solved idempotent;
//   2. the regular part of the remainder is the common kernel of all maps to
//      canonical preprojectives, and splits off the same way;
//   3. all-preinjective / all-preprojective pieces are peeled one summand at
//      a time (a nonzero map from/to the extreme canonical indecomposable is
//      automatically split there);
//   4. the regular square pencil splits into the part where b acts
//      invertibly and the nilpotent part at infinity; the finite part is the
//      primary + cyclic decomposition of b^{-1}a, driven by the factored
//      characteristic polynomial, stabilized kernels and chain bases.
//
// invariants_from_ranks() is the independent oracle: preprojective and
// preinjective multiplicities from second differences of Hom-dimension
// sequences (kernels of the block-Toeplitz intertwining systems), and the
// regular part from the Smith normal form of the polynomial matrix t*b - a
// (the arrow-swapped pencil supplies the point at infinity). It produces no
// base change.

#include "kronheart/homalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

namespace kronheart {

struct Decomposition {
  std::vector<IndecompDescriptor> summands;  // sorted
  Matrix s1;  // d1 x d1, invertible
  Matrix s2;  // d2 x d2, invertible
};

namespace detail {

inline Matrix matrix_power(const Matrix& m, std::size_t k) {
  Matrix r = Matrix::identity(m.rows(), m.field());
  for (std::size_t i = 0; i < k; ++i) r = r * m;
  return r;
}

inline Matrix matrix_poly_eval(const Polynomial& p, const Matrix& t) {
  Matrix acc(t.rows(), t.rows(), t.field());
  for (std::size_t i = p.coeffs().size(); i-- > 0;) {
    acc = acc * t;
    for (std::size_t d = 0; d < t.rows(); ++d) acc.at(d, d) += p.coeff(i);
  }
  return acc;
}

// {x : B x in span(U)} as a canonical column basis.
inline Matrix preimage_subspace(const Matrix& b, const Matrix& u) {
  Matrix k = kernel_basis(hstack(b, -u));
  return column_space_normal_form(k.submatrix(0, 0, b.cols(), k.cols()));
}

// Solve for an idempotent endomorphism of m with image W and W fixed
// pointwise; its kernel is a complement of W. Solvable exactly when W is a
// direct summand.
inline Submodule split_complement(const KronModule& m, const Submodule& w) {
  const FieldSpec& F = m.field;
  const std::size_t d1 = m.dim.d1, d2 = m.dim.d2;
  const std::size_t k1 = w.inc1.cols(), k2 = w.inc2.cols();
  const std::size_t vars = k1 * d1 + k2 * d2;  // Y1 (k1 x d1), Y2 (k2 x d2)

  std::size_t eqs = 2 * d2 * d1 + k1 * k1 + k2 * k2;
  Matrix sys(eqs, vars, F);
  Matrix rhs(eqs, 1, F);
  std::size_t eq = 0;
  // (W2 Y2) arrow = arrow (W1 Y1) entrywise:
  //   sum_{s,c} W2[i,s] Y2[s,c] arrow[c,j] - sum_{c,s} arrow[i,c] W1[c,s] Y1[s,j] = 0.
  auto fill_arrow = [&](const Matrix& arrow) {
    for (std::size_t i = 0; i < d2; ++i)
      for (std::size_t j = 0; j < d1; ++j) {
        for (std::size_t s = 0; s < k2; ++s) {
          if (w.inc2.at(i, s).is_zero()) continue;
          for (std::size_t c = 0; c < d2; ++c) {
            if (arrow.at(c, j).is_zero()) continue;
            sys.at(eq, k1 * d1 + s * d2 + c) += w.inc2.at(i, s) * arrow.at(c, j);
          }
        }
        for (std::size_t c = 0; c < d1; ++c) {
          if (arrow.at(i, c).is_zero()) continue;
          for (std::size_t s = 0; s < k1; ++s) {
            if (w.inc1.at(c, s).is_zero()) continue;
            sys.at(eq, s * d1 + j) -= arrow.at(i, c) * w.inc1.at(c, s);
          }
        }
        ++eq;
      }
  };
  fill_arrow(m.a);
  fill_arrow(m.b);
  // Y1 W1 = I, Y2 W2 = I
  for (std::size_t i = 0; i < k1; ++i)
    for (std::size_t j = 0; j < k1; ++j) {
      for (std::size_t c = 0; c < d1; ++c) sys.at(eq, i * d1 + c) += w.inc1.at(c, j);
      rhs.at(eq, 0) = Scalar(F, i == j ? 1 : 0);
      ++eq;
    }
  for (std::size_t i = 0; i < k2; ++i)
    for (std::size_t j = 0; j < k2; ++j) {
      for (std::size_t c = 0; c < d2; ++c) sys.at(eq, k1 * d1 + i * d2 + c) += w.inc2.at(c, j);
      rhs.at(eq, 0) = Scalar(F, i == j ? 1 : 0);
      ++eq;
    }

  auto sol = solve(sys, rhs);
  if (!sol) throw std::logic_error("split_complement: submodule is not a direct summand");
  Matrix y1(k1, d1, F), y2(k2, d2, F);
  for (std::size_t i = 0; i < k1; ++i)
    for (std::size_t j = 0; j < d1; ++j) y1.at(i, j) = sol->at(i * d1 + j, 0);
  for (std::size_t i = 0; i < k2; ++i)
    for (std::size_t j = 0; j < d2; ++j) y2.at(i, j) = sol->at(k1 * d1 + i * d2 + j, 0);
  Matrix e1 = w.inc1 * y1, e2 = w.inc2 * y2;
  return {kernel_basis(e1), kernel_basis(e2)};
}

// Complement of a T-invariant subspace C inside the whole space, invariant
// under T: kernel of a solved idempotent commuting with T.
inline Matrix split_invariant_complement(const Matrix& t, const Matrix& c) {
  const FieldSpec& F = t.field();
  const std::size_t n = t.rows(), k = c.cols();
  const std::size_t vars = k * n;
  std::size_t eqs = n * n + k * k;
  Matrix sys(eqs, vars, F), rhs(eqs, 1, F);
  std::size_t eq = 0;
  // (C Y) T = T (C Y)
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t s = 0; s < k; ++s) {
        for (std::size_t cc = 0; cc < n; ++cc) {
          if (!c.at(i, s).is_zero() && !t.at(cc, j).is_zero())
            sys.at(eq, s * n + cc) += c.at(i, s) * t.at(cc, j);
          if (!t.at(i, cc).is_zero() && !c.at(cc, s).is_zero())
            sys.at(eq, s * n + j) -= t.at(i, cc) * c.at(cc, s);
        }
      }
      ++eq;
    }
  // Y C = I
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t cc = 0; cc < n; ++cc) sys.at(eq, i * n + cc) += c.at(cc, j);
      rhs.at(eq, 0) = Scalar(F, i == j ? 1 : 0);
      ++eq;
    }
  auto sol = solve(sys, rhs);
  if (!sol) throw std::logic_error("split_invariant_complement: not a summand");
  Matrix y(k, n, F);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) y.at(i, j) = sol->at(i * n + j, 0);
  return kernel_basis(c * y);
}

// ---- polynomial matrices and Smith normal form over k[t] ----

struct PolyMatrix {
  std::size_t rows = 0, cols = 0;
  FieldSpec field = FieldSpec::rationals();
  std::vector<Polynomial> e;

  PolyMatrix(std::size_t r, std::size_t c, const FieldSpec& f)
      : rows(r), cols(c), field(f), e(r * c, Polynomial(f)) {}
  Polynomial& at(std::size_t i, std::size_t j) { return e[i * cols + j]; }
  const Polynomial& at(std::size_t i, std::size_t j) const { return e[i * cols + j]; }
};

// Rescale a row (or column) of a rational polynomial matrix to primitive
// integer form. Unit scaling, so Smith invariants are unchanged; without it
// rational coefficients grow out of control on larger pencils.
inline void primitivize_line(PolyMatrix& m, std::size_t fixed, bool row) {
  if (!m.field.is_rationals()) return;
  BigInt l = 1, g = 0;
  std::size_t len = row ? m.cols : m.rows;
  for (std::size_t j = 0; j < len; ++j) {
    const Polynomial& p = row ? m.at(fixed, j) : m.at(j, fixed);
    for (const auto& c : p.coeffs())
      if (!c.is_zero()) l = boost::multiprecision::lcm(l, denominator(c.rational()));
  }
  for (std::size_t j = 0; j < len; ++j) {
    const Polynomial& p = row ? m.at(fixed, j) : m.at(j, fixed);
    for (const auto& c : p.coeffs())
      if (!c.is_zero())
        g = boost::multiprecision::gcd(
            g, big_abs(numerator(c.rational()) * (l / denominator(c.rational()))));
  }
  if (g == 0 || (l == 1 && g == 1)) return;
  Scalar s(m.field, Rat(l) / Rat(g));
  for (std::size_t j = 0; j < len; ++j) {
    Polynomial& p = row ? m.at(fixed, j) : m.at(j, fixed);
    p = p.scaled(s);
  }
}

// Monic invariant factors d1 | d2 | ... (units dropped).
inline std::vector<Polynomial> smith_invariant_factors(PolyMatrix m) {
  const FieldSpec& F = m.field;
  std::vector<Polynomial> diag;
  for (std::size_t i = 0; i < m.rows; ++i) primitivize_line(m, i, true);
  std::size_t k = 0;
  while (k < m.rows && k < m.cols) {
    // locate a nonzero entry of minimal degree in the trailing block
    std::size_t bi = m.rows, bj = m.cols;
    int best = -1;
    for (std::size_t i = k; i < m.rows; ++i)
      for (std::size_t j = k; j < m.cols; ++j) {
        const Polynomial& p = m.at(i, j);
        if (p.is_zero()) continue;
        if (best < 0 || p.degree() < best) {
          best = p.degree();
          bi = i;
          bj = j;
        }
      }
    if (best < 0) break;
    for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(k, j), m.at(bi, j));
    for (std::size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, k), m.at(i, bj));

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = k + 1; i < m.rows; ++i) {
        if (m.at(i, k).is_zero()) continue;
        auto [q, r] = divmod(m.at(i, k), m.at(k, k));
        for (std::size_t j = k; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - q * m.at(k, j);
        primitivize_line(m, i, true);
        if (!r.is_zero()) {
          for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(k, j), m.at(i, j));
          clean = false;
        }
      }
      for (std::size_t j = k + 1; j < m.cols; ++j) {
        if (m.at(k, j).is_zero()) continue;
        auto [q, r] = divmod(m.at(k, j), m.at(k, k));
        for (std::size_t i = k; i < m.rows; ++i) m.at(i, j) = m.at(i, j) - q * m.at(i, k);
        primitivize_line(m, j, false);
        if (!r.is_zero()) {
          for (std::size_t i = 0; i < m.rows; ++i) std::swap(m.at(i, k), m.at(i, j));
          clean = false;
        }
      }
      if (clean) {
        // divisibility fix-up for the trailing block
        for (std::size_t i = k + 1; i < m.rows && clean; ++i)
          for (std::size_t j = k + 1; j < m.cols && clean; ++j) {
            if (!(m.at(i, j) % m.at(k, k)).is_zero()) {
              for (std::size_t jj = 0; jj < m.cols; ++jj)
                m.at(k, jj) = m.at(k, jj) + m.at(i, jj);
              clean = false;
            }
          }
      }
    }
    diag.push_back(m.at(k, k).monic());
    ++k;
  }
  std::vector<Polynomial> out;
  for (auto& d : diag)
    if (d.degree() >= 1) out.push_back(d);
  (void)F;
  return out;
}

inline PolyMatrix pencil_matrix(const Matrix& a, const Matrix& b) {
  PolyMatrix pm(a.rows(), a.cols(), a.field());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      std::vector<Scalar> c = {-a.at(i, j), b.at(i, j)};
      pm.at(i, j) = Polynomial(a.field(), std::move(c));
    }
  return pm;
}

// ---- decompose helpers ----

struct Block {
  IndecompDescriptor desc;
  Matrix v1;  // columns: basis of the summand at vertex 1, in ambient coordinates
  Matrix v2;
};

// Peel an all-preinjective module (given by its inclusion into the ambient
// module) into canonical summand bases.
inline void peel_preinjectives(const KronModule& ambient, Submodule inc, std::vector<Block>& out) {
  while (true) {
    KronModule cur = restrict_to(ambient, inc);
    if (cur.is_zero_module()) return;
    std::size_t jmax = (cur.total_dim() + 1) / 2;
    std::vector<Morphism> gs;
    std::size_t j = jmax;
    for (; j >= 1; --j) {
      gs = hom_basis(cur, make_indecomposable(IndecompDescriptor::preinj(j), cur.field));
      if (!gs.empty()) break;
    }
    if (gs.empty()) throw std::logic_error("preinjective peel found no map");
    const Morphism& g = gs.front();
    KronModule qj = make_indecomposable(IndecompDescriptor::preinj(j), cur.field);
    // solve a section s with g s = id; g s lands in End(Q_j) = k id
    auto sections = hom_basis(qj, cur);
    Morphism section;
    bool found = false;
    for (const auto& s : sections) {
      Morphism comp = compose(g, s);
      Scalar c0 = comp.f1.rows() > 0 ? comp.f1.at(0, 0) : comp.f2.at(0, 0);
      if (!c0.is_zero()) {
        Scalar inv = c0.inverse();
        section = {inv * s.f1, inv * s.f2};
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("preinjective peel: no section");
    out.push_back({IndecompDescriptor::preinj(j), inc.inc1 * section.f1, inc.inc2 * section.f2});
    Submodule ker = kernel_subrep(cur, g);
    inc = {inc.inc1 * ker.inc1, inc.inc2 * ker.inc2};
  }
}

inline void peel_preprojectives(const KronModule& ambient, Submodule inc, std::vector<Block>& out) {
  while (true) {
    KronModule cur = restrict_to(ambient, inc);
    if (cur.is_zero_module()) return;
    std::size_t jmax = (cur.total_dim() + 1) / 2;
    std::vector<Morphism> fs;
    std::size_t j = jmax;
    for (; j >= 1; --j) {
      fs = hom_basis(make_indecomposable(IndecompDescriptor::preproj(j), cur.field), cur);
      if (!fs.empty()) break;
    }
    if (fs.empty()) throw std::logic_error("preprojective peel found no map");
    const Morphism& f = fs.front();
    KronModule pj = make_indecomposable(IndecompDescriptor::preproj(j), cur.field);
    // retraction r with r f = id in End(P_j) = k
    auto rets = hom_basis(cur, pj);
    Morphism retraction;
    bool found = false;
    for (const auto& r : rets) {
      Morphism comp = compose(r, f);
      Scalar c0 = comp.f1.rows() > 0 ? comp.f1.at(0, 0) : comp.f2.at(0, 0);
      if (!c0.is_zero()) {
        Scalar inv = c0.inverse();
        retraction = {inv * r.f1, inv * r.f2};
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("preprojective peel: no retraction");
    out.push_back({IndecompDescriptor::preproj(j), inc.inc1 * f.f1, inc.inc2 * f.f2});
    Submodule ker = kernel_subrep(cur, retraction);
    inc = {inc.inc1 * ker.inc1, inc.inc2 * ker.inc2};
  }
}

// Cyclic decomposition of the nilpotent-or-primary operator op on F^n with
// respect to the monic irreducible pi: peel chains of maximal pi-height.
// Returns (cyclic basis, block length) pairs; basis columns are
// v, op v, ..., op^{h deg(pi) - 1} v in ambient coordinates.
inline void cyclic_peel(const Matrix& op, const Polynomial& pi, const Matrix& ambient_cols,
                        std::vector<std::pair<Matrix, std::size_t>>& out) {
  const FieldSpec& F = op.field();
  std::size_t n = op.rows();
  if (n == 0) return;
  Matrix pi_op = matrix_poly_eval(pi, op);
  // height of the whole space
  std::size_t h = 0;
  Matrix power = Matrix::identity(n, F);
  while (!power.is_zero()) {
    power = power * pi_op;
    ++h;
    if (h > n + 1) throw std::logic_error("cyclic_peel: operator is not pi-primary");
  }
  // first standard basis vector of maximal height
  Matrix pih1 = matrix_power(pi_op, h - 1);
  std::size_t vcol = n;
  for (std::size_t c = 0; c < n; ++c) {
    bool nonzero = false;
    for (std::size_t r = 0; r < n; ++r)
      if (!pih1.at(r, c).is_zero()) nonzero = true;
    if (nonzero) {
      vcol = c;
      break;
    }
  }
  if (vcol == n) throw std::logic_error("cyclic_peel: no vector of maximal height");
  std::size_t e = static_cast<std::size_t>(pi.degree());
  std::size_t len = h * e;
  Matrix chain(n, len, F);
  Matrix v(n, 1, F);
  v.at(vcol, 0) = Scalar(F, 1);
  for (std::size_t c = 0; c < len; ++c) {
    for (std::size_t r = 0; r < n; ++r) chain.at(r, c) = v.at(r, 0);
    v = op * v;
  }
  if (rank(chain) != len) throw std::logic_error("cyclic_peel: chain not independent");
  out.emplace_back(ambient_cols * chain, h);

  Matrix comp = split_invariant_complement(op, chain);
  if (comp.cols() == 0) return;
  auto op_restr = solve(comp, op * comp);
  if (!op_restr) throw std::logic_error("cyclic_peel: complement not invariant");
  cyclic_peel(*op_restr, pi, ambient_cols * comp, out);
}

// ---- specialized Hom-dimension probes (block-Toeplitz kernels) ----
// A morphism out of P_{k+1} (resp. out of the length-k tube member at
// infinity, resp. into Q_{k+1}) is determined by its source-vertex columns
// (v_1..v_k), subject to the staircase conditions a v_{i+1} = b v_i. These
// kernels are far smaller than the generic intertwining system.

inline std::size_t dim_hom_from_preproj(std::size_t j, const KronModule& m) {
  if (j == 1) return m.dim.d2;
  std::size_t k = j - 1;
  const FieldSpec& F = m.field;
  Matrix sys((k - 1) * m.dim.d2, k * m.dim.d1, F);
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t r = 0; r < m.dim.d2; ++r)
      for (std::size_t c = 0; c < m.dim.d1; ++c) {
        sys.at(i * m.dim.d2 + r, (i + 1) * m.dim.d1 + c) += m.a.at(r, c);
        sys.at(i * m.dim.d2 + r, i * m.dim.d1 + c) -= m.b.at(r, c);
      }
  return k * m.dim.d1 - rank(sys);
}

inline std::size_t dim_hom_to_preinj(const KronModule& m, std::size_t j) {
  if (j == 1) return m.dim.d1;
  std::size_t k = j - 1;
  const FieldSpec& F = m.field;
  // row functionals w_1..w_k on V2 with w_i a = w_{i-1} b; transpose to columns
  Matrix at = m.a.transpose(), bt = m.b.transpose();
  Matrix sys((k - 1) * m.dim.d1, k * m.dim.d2, F);
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t r = 0; r < m.dim.d1; ++r)
      for (std::size_t c = 0; c < m.dim.d2; ++c) {
        sys.at(i * m.dim.d1 + r, (i + 1) * m.dim.d2 + c) += at.at(r, c);
        sys.at(i * m.dim.d1 + r, i * m.dim.d2 + c) -= bt.at(r, c);
      }
  return k * m.dim.d2 - rank(sys);
}

inline std::size_t dim_hom_from_inf_tube(std::size_t k, const KronModule& m) {
  const FieldSpec& F = m.field;
  Matrix sys(k * m.dim.d2, k * m.dim.d1, F);
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t r = 0; r < m.dim.d2; ++r)
      for (std::size_t c = 0; c < m.dim.d1; ++c) {
        sys.at(i * m.dim.d2 + r, (i + 1) * m.dim.d1 + c) += m.a.at(r, c);
        sys.at(i * m.dim.d2 + r, i * m.dim.d1 + c) -= m.b.at(r, c);
      }
  for (std::size_t r = 0; r < m.dim.d2; ++r)
    for (std::size_t c = 0; c < m.dim.d1; ++c)
      sys.at((k - 1) * m.dim.d2 + r, (k - 1) * m.dim.d1 + c) += m.b.at(r, c);
  return k * m.dim.d1 - rank(sys);
}

}  // namespace detail

// ---- the oracle ----

// Summand multiset from rank data only: Toeplitz/hom-kernel dimensions for the
// minimal indices, Smith invariant factors of the pencil for the regular part.
inline std::vector<IndecompDescriptor> invariants_from_ranks(const KronModule& m) {
  std::vector<IndecompDescriptor> out;
  if (m.is_zero_module()) return out;
  const FieldSpec& F = m.field;
  std::size_t jmax = (m.total_dim() + 1) / 2;

  std::vector<std::int64_t> h(jmax + 3, 0), g(jmax + 3, 0);
  for (std::size_t j = 1; j <= jmax + 2; ++j) {
    h[j] = static_cast<std::int64_t>(detail::dim_hom_from_preproj(j, m));
    g[j] = static_cast<std::int64_t>(detail::dim_hom_to_preinj(m, j));
  }
  for (std::size_t j = 1; j <= jmax; ++j) {
    std::int64_t mu_p = h[j] - 2 * h[j + 1] + h[j + 2];
    std::int64_t mu_q = g[j] - 2 * g[j + 1] + g[j + 2];
    if (mu_p < 0 || mu_q < 0) throw std::logic_error("negative multiplicity from rank data");
    for (std::int64_t c = 0; c < mu_p; ++c) out.push_back(IndecompDescriptor::preproj(j));
    for (std::int64_t c = 0; c < mu_q; ++c) out.push_back(IndecompDescriptor::preinj(j));
  }

  // finite part: elementary divisors of t*b - a
  for (const auto& d : detail::smith_invariant_factors(detail::pencil_matrix(m.a, m.b))) {
    for (const auto& [pi, mult] : factor(d))
      out.push_back(IndecompDescriptor::regular(ClosedPoint::finite(pi), mult));
  }
  // infinity: second differences of Hom dimensions from the canonical tube
  // members, with the preinjective contribution (linear in the probe length)
  // cancelling automatically
  {
    std::size_t nmax = m.total_dim() / 2;
    std::vector<std::int64_t> r(nmax + 2, 0);
    for (std::size_t k = 1; k <= nmax + 1; ++k)
      r[k] = static_cast<std::int64_t>(detail::dim_hom_from_inf_tube(k, m));
    for (std::size_t n = 1; n <= nmax; ++n) {
      std::int64_t mu = 2 * r[n] - (n >= 1 ? r[n - 1] : 0) - r[n + 1];
      if (mu < 0) throw std::logic_error("negative multiplicity from rank data");
      for (std::int64_t c = 0; c < mu; ++c)
        out.push_back(IndecompDescriptor::regular(ClosedPoint::infinity(F), n));
    }
  }

  std::sort(out.begin(), out.end());
  std::size_t total = 0;
  for (const auto& d : out) total += d.dim().total();
  if (total != m.total_dim()) throw std::logic_error("rank invariants do not fill the dimension");
  return out;
}

// ---- the decomposition with base change ----

inline Decomposition decompose(const KronModule& m) {
  const FieldSpec& F = m.field;
  std::vector<detail::Block> blocks;

  if (!m.is_zero_module()) {
    std::size_t jmax = (m.total_dim() + 1) / 2;

    // preinjective part = trace of the canonical preinjectives
    std::vector<KronModule> preinjs;
    for (std::size_t j = 1; j <= jmax; ++j)
      preinjs.push_back(make_indecomposable(IndecompDescriptor::preinj(j), F));
    Submodule qpart = trace_submodule(preinjs, m);
    Submodule rest{Matrix::identity(m.dim.d1, F), Matrix::identity(m.dim.d2, F)};
    if (qpart.dim().total() > 0) {
      detail::peel_preinjectives(m, qpart, blocks);
      rest = detail::split_complement(m, qpart);
    }

    KronModule u = restrict_to(m, rest);
    if (!u.is_zero_module()) {
      // regular part = common kernel of all maps to canonical preprojectives
      Matrix stack1(0, u.dim.d1, F), stack2(0, u.dim.d2, F);
      std::size_t ujmax = (u.total_dim() + 1) / 2;
      for (std::size_t j = 1; j <= ujmax; ++j) {
        KronModule pj = make_indecomposable(IndecompDescriptor::preproj(j), F);
        for (const auto& f : hom_basis(u, pj)) {
          stack1 = vstack(stack1, f.f1);
          stack2 = vstack(stack2, f.f2);
        }
      }
      Submodule reg{kernel_basis(stack1), kernel_basis(stack2)};

      Submodule ppart_inc{Matrix::identity(u.dim.d1, F), Matrix::identity(u.dim.d2, F)};
      if (reg.dim().total() > 0) ppart_inc = detail::split_complement(u, reg);
      if (ppart_inc.dim().total() > 0)
        detail::peel_preprojectives(m, {rest.inc1 * ppart_inc.inc1, rest.inc2 * ppart_inc.inc2},
                                    blocks);

      if (reg.dim().total() > 0) {
        Submodule reg_in_m{rest.inc1 * reg.inc1, rest.inc2 * reg.inc2};
        KronModule r = restrict_to(m, reg_in_m);

        // infinity part: stable chain of b-preimages of a-images, seeded by ker b
        Matrix chain = column_space_normal_form(kernel_basis(r.b));
        while (true) {
          Matrix next = detail::preimage_subspace(r.b, column_space_normal_form(r.a * chain));
          if (next.cols() == chain.cols()) break;
          chain = next;
        }
        Submodule inf_sub{chain, column_space_normal_form(hstack(r.a * chain, r.b * chain))};
        Submodule fin_inc{Matrix::identity(r.dim.d1, F), Matrix::identity(r.dim.d2, F)};
        if (inf_sub.dim().total() > 0) fin_inc = detail::split_complement(r, inf_sub);

        if (inf_sub.dim().total() > 0) {
          KronModule rinf = restrict_to(r, inf_sub);
          Matrix ainv = inverse(rinf.a);
          Matrix s = ainv * rinf.b;  // nilpotent
          std::vector<std::pair<Matrix, std::size_t>> chains;
          detail::cyclic_peel(s, Polynomial::t(F), Matrix::identity(s.rows(), F), chains);
          for (auto& [cols, len] : chains) {
            Matrix v1 = reg_in_m.inc1 * (inf_sub.inc1 * cols);
            Matrix v2 = m.a * v1;
            blocks.push_back(
                {IndecompDescriptor::regular(ClosedPoint::infinity(F), len), v1, v2});
          }
        }

        if (fin_inc.dim().total() > 0) {
          KronModule rfin = restrict_to(r, fin_inc);
          Matrix binv = inverse(rfin.b);
          Matrix t = binv * rfin.a;
          // characteristic polynomial = product of the invariant factors of tI - T
          detail::PolyMatrix tm(t.rows(), t.rows(), F);
          for (std::size_t i = 0; i < t.rows(); ++i)
            for (std::size_t j = 0; j < t.rows(); ++j) {
              std::vector<Scalar> c = {-t.at(i, j), Scalar(F, i == j ? 1 : 0)};
              tm.at(i, j) = Polynomial(F, std::move(c));
            }
          Polynomial charpoly = Polynomial::constant(F, Scalar(F, 1));
          for (const auto& d : detail::smith_invariant_factors(tm)) charpoly = charpoly * d;

          for (const auto& [pi, mult] : factor(charpoly)) {
            Matrix proj = detail::matrix_poly_eval(pi, t);
            Matrix vpi = column_space_normal_form(kernel_basis(detail::matrix_power(proj, mult)));
            auto t_restr = solve(vpi, t * vpi);
            if (!t_restr) throw std::logic_error("primary component not invariant");
            std::vector<std::pair<Matrix, std::size_t>> chains;
            detail::cyclic_peel(*t_restr, pi, vpi, chains);
            for (auto& [cols, len] : chains) {
              Matrix v1 = reg_in_m.inc1 * (fin_inc.inc1 * cols);
              Matrix v2 = m.b * v1;
              blocks.push_back(
                  {IndecompDescriptor::regular(ClosedPoint::finite(pi), len), v1, v2});
            }
          }
        }
      }
    }
  }

  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const detail::Block& x, const detail::Block& y) { return x.desc < y.desc; });

  Matrix c1(m.dim.d1, 0, F), c2(m.dim.d2, 0, F);
  Decomposition dec;
  for (const auto& b : blocks) {
    dec.summands.push_back(b.desc);
    c1 = hstack(c1, b.v1);
    c2 = hstack(c2, b.v2);
  }
  dec.s1 = inverse(c1);
  dec.s2 = inverse(c2);

  // The conjugated pair must be exactly the block-diagonal canonical form.
  Matrix ca(0, 0, F), cb(0, 0, F);
  for (const auto& d : dec.summands) {
    KronModule c = make_indecomposable(d, F);
    ca = block_diag(ca, c.a);
    cb = block_diag(cb, c.b);
  }
  if (dec.s2 * m.a * c1 != ca || dec.s2 * m.b * c1 != cb)
    throw std::logic_error("decompose: base change does not canonicalize the pair");
  return dec;
}

// Closed points whose tube contributes a summand.
inline std::vector<ClosedPoint> regular_support(const KronModule& m) {
  std::vector<ClosedPoint> pts;
  for (const auto& d : decompose(m).summands) {
    if (d.kind != IndecompDescriptor::Kind::Regular) continue;
    if (pts.empty() || !(pts.back() == *d.point)) {
      if (std::find(pts.begin(), pts.end(), *d.point) == pts.end()) pts.push_back(*d.point);
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

// Convenience: the summand multiset of a module.
inline std::vector<IndecompDescriptor> summand_multiset(const KronModule& m) {
  return decompose(m).summands;
}

}  // namespace kronheart
