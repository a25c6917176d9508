#pragma once

// Hom-space bases, Ext^1 as the cokernel of the two-term coboundary map,
// explicit extension middle terms, trace submodules and the descriptor-level
// AR translate. The algebra is hereditary, so this one linear-system shape
// carries all the homological algebra the library needs.

#include "kronheart/kron_module.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace kronheart {

namespace detail {

// Flattened index of entry (i,j) of an r x c matrix inside a vectorization.
inline std::size_t flat(std::size_t i, std::size_t j, std::size_t cols) { return i * cols + j; }

inline Matrix unflatten(const Matrix& colvec, std::size_t offset, std::size_t r, std::size_t c,
                        const FieldSpec& f) {
  Matrix m(r, c, f);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = colvec.at(offset + flat(i, j, c), 0);
  return m;
}

}  // namespace detail

// Basis of Hom(m, n): the solution space of the intertwining system, with the
// echelon-normalized kernel basis ordering.
inline std::vector<Morphism> hom_basis(const KronModule& m, const KronModule& n) {
  require_same_field(m.field, n.field);
  const FieldSpec& F = m.field;
  const std::size_t m1 = m.dim.d1, m2 = m.dim.d2, n1 = n.dim.d1, n2 = n.dim.d2;
  const std::size_t vars_f1 = n1 * m1, vars_f2 = n2 * m2;
  const std::size_t nvars = vars_f1 + vars_f2;
  const std::size_t neqs = 2 * n2 * m1;

  Matrix sys(neqs, nvars, F);
  auto fill = [&](const Matrix& arrow_m, const Matrix& arrow_n, std::size_t eq_offset) {
    // f2 * arrow_m - arrow_n * f1 = 0, entry (i,j) with i < n2, j < m1
    for (std::size_t i = 0; i < n2; ++i)
      for (std::size_t j = 0; j < m1; ++j) {
        std::size_t eq = eq_offset + detail::flat(i, j, m1);
        for (std::size_t k = 0; k < m2; ++k)
          sys.at(eq, vars_f1 + detail::flat(i, k, m2)) += arrow_m.at(k, j);
        for (std::size_t l = 0; l < n1; ++l)
          sys.at(eq, detail::flat(l, j, m1)) -= arrow_n.at(i, l);
      }
  };
  fill(m.a, n.a, 0);
  fill(m.b, n.b, n2 * m1);

  Matrix k = kernel_basis(sys);
  std::vector<Morphism> basis;
  basis.reserve(k.cols());
  for (std::size_t c = 0; c < k.cols(); ++c) {
    Matrix col = k.column(c);
    basis.push_back({detail::unflatten(col, 0, n1, m1, F),
                     detail::unflatten(col, vars_f1, n2, m2, F)});
  }
  return basis;
}

inline std::size_t hom_dim(const KronModule& m, const KronModule& n) {
  return hom_basis(m, n).size();
}

// dim Ext^1(m, n) = dim Hom(m, n) - <dim m, dim n>; nonnegative because the
// algebra is hereditary.
inline std::size_t ext_dim(const KronModule& m, const KronModule& n) {
  std::int64_t e = static_cast<std::int64_t>(hom_dim(m, n)) - euler_form(m.dim, n.dim);
  if (e < 0) throw std::logic_error("negative Ext dimension: euler form mismatch");
  return static_cast<std::size_t>(e);
}

// An extension class in Ext^1(t, c): a cocycle pair (e_a, e_b) of
// c.d2 x t.d1 matrices, stored as the canonical representative of its coset
// modulo the coboundary image.
struct ExtClass {
  Matrix ea;
  Matrix eb;

  bool is_zero() const { return ea.is_zero() && eb.is_zero(); }
  friend bool operator==(const ExtClass&, const ExtClass&) = default;
};

struct ExtSpace {
  std::size_t dimension = 0;
  std::vector<ExtClass> basis;
  // RREF rows of the coboundary image, used to reduce cocycles to canonical
  // coset representatives.
  Matrix coboundary_rref;
  std::vector<std::size_t> coboundary_pivots;
  std::size_t t1 = 0, c2 = 0;
  FieldSpec field = FieldSpec::rationals();
};

// Present Ext^1(t, c) as cocycles modulo coboundaries.
inline ExtSpace ext_class_space(const KronModule& t, const KronModule& c) {
  require_same_field(t.field, c.field);
  const FieldSpec& F = t.field;
  const std::size_t t1 = t.dim.d1, t2 = t.dim.d2, c1 = c.dim.d1, c2 = c.dim.d2;
  const std::size_t cocycle_dim = 2 * c2 * t1;

  // Coboundary (g1: T1->C1, g2: T2->C2) |-> (a_c g1 - g2 a_t, b_c g1 - g2 b_t).
  const std::size_t gvars = c1 * t1 + c2 * t2;
  Matrix delta(cocycle_dim, gvars, F);
  for (std::size_t i = 0; i < c2; ++i)
    for (std::size_t j = 0; j < t1; ++j) {
      std::size_t row_a = detail::flat(i, j, t1);
      std::size_t row_b = c2 * t1 + detail::flat(i, j, t1);
      for (std::size_t l = 0; l < c1; ++l) {
        delta.at(row_a, detail::flat(l, j, t1)) += c.a.at(i, l);
        delta.at(row_b, detail::flat(l, j, t1)) += c.b.at(i, l);
      }
      for (std::size_t k = 0; k < t2; ++k) {
        delta.at(row_a, c1 * t1 + detail::flat(i, k, t2)) -= t.a.at(k, j);
        delta.at(row_b, c1 * t1 + detail::flat(i, k, t2)) -= t.b.at(k, j);
      }
    }

  ExtSpace out;
  out.field = F;
  out.t1 = t1;
  out.c2 = c2;
  Rref image = rref(delta.transpose());  // rows span the coboundary image
  out.coboundary_rref = image.r;
  out.coboundary_pivots = image.pivots;
  std::vector<bool> is_piv(cocycle_dim, false);
  for (auto p : image.pivots) is_piv[p] = true;

  for (std::size_t j = 0; j < cocycle_dim; ++j) {
    if (is_piv[j]) continue;
    // e_j reduced against the image rows: pivot coordinates get the negated
    // row entries; this is the canonical representative of its coset.
    Matrix v(cocycle_dim, 1, F);
    v.at(j, 0) = Scalar(F, 1);
    for (std::size_t r = 0; r < image.pivots.size(); ++r)
      v.at(image.pivots[r], 0) -= image.r.at(r, j);
    ExtClass cls{detail::unflatten(v, 0, c2, t1, F), detail::unflatten(v, c2 * t1, c2, t1, F)};
    out.basis.push_back(cls);
  }
  out.dimension = out.basis.size();
  return out;
}

// Reduce an arbitrary cocycle pair to the canonical representative of its
// class in the given Ext presentation.
inline ExtClass reduce_cocycle(const ExtSpace& sp, const Matrix& ea, const Matrix& eb) {
  const FieldSpec& F = sp.field;
  std::size_t n = 2 * sp.c2 * sp.t1;
  Matrix v(n, 1, F);
  for (std::size_t i = 0; i < sp.c2; ++i)
    for (std::size_t j = 0; j < sp.t1; ++j) {
      v.at(detail::flat(i, j, sp.t1), 0) = ea.at(i, j);
      v.at(sp.c2 * sp.t1 + detail::flat(i, j, sp.t1), 0) = eb.at(i, j);
    }
  for (std::size_t r = 0; r < sp.coboundary_pivots.size(); ++r) {
    Scalar f = v.at(sp.coboundary_pivots[r], 0);
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j) v.at(j, 0) -= f * sp.coboundary_rref.at(r, j);
  }
  return {detail::unflatten(v, 0, sp.c2, sp.t1, F), detail::unflatten(v, sp.c2 * sp.t1, sp.c2, sp.t1, F)};
}

struct MiddleTerm {
  KronModule module;    // the extension 0 -> c -> module -> t -> 0
  Morphism inclusion;   // c -> module
  Morphism projection;  // module -> t
};

// Realize a cocycle as the block extension module.
inline MiddleTerm middle_term(const KronModule& t, const KronModule& c, const ExtClass& cls) {
  const FieldSpec& F = t.field;
  Matrix a = hstack(vstack(c.a, Matrix(t.dim.d2, c.dim.d1, F)), vstack(cls.ea, t.a));
  Matrix b = hstack(vstack(c.b, Matrix(t.dim.d2, c.dim.d1, F)), vstack(cls.eb, t.b));
  KronModule mid(F, a, b);

  Matrix i1 = vstack(Matrix::identity(c.dim.d1, F), Matrix(t.dim.d1, c.dim.d1, F));
  Matrix i2 = vstack(Matrix::identity(c.dim.d2, F), Matrix(t.dim.d2, c.dim.d2, F));
  Matrix p1 = hstack(Matrix(t.dim.d1, c.dim.d1, F), Matrix::identity(t.dim.d1, F));
  Matrix p2 = hstack(Matrix(t.dim.d2, c.dim.d2, F), Matrix::identity(t.dim.d2, F));
  return {mid, {i1, i2}, {p1, p2}};
}

// All Ext classes over a prime field (canonical representatives, zero first).
inline std::vector<ExtClass> enumerate_ext_classes(const ExtSpace& sp, std::size_t cap) {
  if (!sp.field.is_prime_field()) throw FieldNotFinite();
  std::size_t p = static_cast<std::size_t>(sp.field.characteristic());
  std::size_t count = 1;
  for (std::size_t i = 0; i < sp.dimension; ++i) {
    count *= p;
    if (count > cap) throw TooLarge("ext class enumeration exceeds cap");
  }
  std::vector<ExtClass> out;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Matrix ea(sp.c2, sp.t1, sp.field), eb(sp.c2, sp.t1, sp.field);
    std::size_t rem = mask;
    for (std::size_t i = 0; i < sp.dimension; ++i) {
      Scalar coef(sp.field, static_cast<std::int64_t>(rem % p));
      rem /= p;
      if (!coef.is_zero()) {
        ea += coef * sp.basis[i].ea;
        eb += coef * sp.basis[i].eb;
      }
    }
    out.push_back({ea, eb});
  }
  return out;
}

// Smallest subrepresentation of m containing the image of every homomorphism
// from every generator.
inline Submodule trace_submodule(const std::vector<KronModule>& gens, const KronModule& m) {
  Matrix g1(m.dim.d1, 0, m.field), g2(m.dim.d2, 0, m.field);
  for (const auto& g : gens) {
    require_same_field(g.field, m.field);
    for (const auto& f : hom_basis(g, m)) {
      g1 = hstack(g1, f.f1);
      g2 = hstack(g2, f.f2);
    }
  }
  return span_subrep(m, g1, g2);
}

// tau: Preinj(i) -> Preinj(i+2); Preproj(i) -> Preproj(i-2) for i >= 3, absent
// for the projectives P1, P2; homogeneous tubes are tau-fixed.
inline std::optional<IndecompDescriptor> ar_translate(const IndecompDescriptor& d) {
  using Kind = IndecompDescriptor::Kind;
  switch (d.kind) {
    case Kind::Preproj:
      if (d.index <= 2) return std::nullopt;
      return IndecompDescriptor::preproj(d.index - 2);
    case Kind::Preinj:
      return IndecompDescriptor::preinj(d.index + 2);
    case Kind::Regular:
      return d;
  }
  return std::nullopt;
}

// All morphisms m -> n over a prime field, as coefficient sweeps over the hom
// basis. Throws TooLarge past the cap.
inline std::vector<Morphism> enumerate_all_homs(const KronModule& m, const KronModule& n,
                                                std::size_t cap) {
  if (!m.field.is_prime_field()) throw FieldNotFinite();
  auto basis = hom_basis(m, n);
  std::size_t p = static_cast<std::size_t>(m.field.characteristic());
  std::size_t count = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    count *= p;
    if (count > cap) throw TooLarge("hom enumeration exceeds cap");
  }
  std::vector<Morphism> out;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Morphism f{Matrix(n.dim.d1, m.dim.d1, m.field), Matrix(n.dim.d2, m.dim.d2, m.field)};
    std::size_t rem = mask;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      Scalar coef(m.field, static_cast<std::int64_t>(rem % p));
      rem /= p;
      if (!coef.is_zero()) {
        f.f1 += coef * basis[i].f1;
        f.f2 += coef * basis[i].f2;
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

inline bool is_injective_morphism(const Morphism& f) {
  return rank(f.f1) == f.f1.cols() && rank(f.f2) == f.f2.cols();
}

inline bool is_surjective_morphism(const Morphism& f) {
  return rank(f.f1) == f.f1.rows() && rank(f.f2) == f.f2.rows();
}

// Does any morphism w -> m embed w? Exhaustive over a prime field.
inline bool exists_injective_hom(const KronModule& w, const KronModule& m, std::size_t cap) {
  for (const auto& f : enumerate_all_homs(w, m, cap)) {
    if (is_injective_morphism(f)) return true;
  }
  return false;
}

inline bool exists_surjective_hom(const KronModule& m, const KronModule& n, std::size_t cap) {
  for (const auto& f : enumerate_all_homs(m, n, cap)) {
    if (is_surjective_morphism(f)) return true;
  }
  return false;
}

}  // namespace kronheart
