#pragma once

// The registry of finite-dimensional shadows of the cosilting torsion pairs:
// classification of canonical indecomposables, torsion radicals with exact
// canonical sequences, and the enumerative consistency check that guards the
// registry (Hom orthogonality, closure under quotients and submodules).
//
// The pair cogenerated by Q1 is the one shadow with mixed indecomposables:
// its radical is the structural formula t(M) = (0, M_2), the trace of P1.
// Every other pair classifies indecomposables cleanly, and the radical is the
// sum of the torsion summands read off the canonical decomposition.

#include "kronheart/pencil.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace kronheart {

// A subset of the closed points of P^1: a finite set or the complement of
// one. "all" is the complement of the empty set, "empty" the finite empty
// set; both are normalized at construction.
class SubsetSpec {
 public:
  static SubsetSpec finite(std::vector<ClosedPoint> pts) { return SubsetSpec(false, std::move(pts)); }
  static SubsetSpec cofinite(std::vector<ClosedPoint> excluded) {
    return SubsetSpec(true, std::move(excluded));
  }
  static SubsetSpec all() { return SubsetSpec(true, {}); }
  static SubsetSpec empty() { return SubsetSpec(false, {}); }

  bool contains(const ClosedPoint& x) const {
    bool listed = std::find(pts_.begin(), pts_.end(), x) != pts_.end();
    return cofinite_ ? !listed : listed;
  }

  bool is_all() const { return cofinite_ && pts_.empty(); }
  bool is_empty() const { return !cofinite_ && pts_.empty(); }
  // Closed points of P^1 form an infinite set over every field, so any
  // finite subset and any cofinite subset with nonempty complement is proper.
  bool is_proper() const { return !is_all(); }
  bool is_cofinite() const { return cofinite_; }
  const std::vector<ClosedPoint>& listed_points() const { return pts_; }

  std::string to_string() const {
    if (is_all()) return "all";
    if (is_empty()) return "empty";
    std::ostringstream os;
    if (cofinite_) os << "co";
    os << "{";
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (i) os << ",";
      os << pts_[i].to_string();
    }
    os << "}";
    return os.str();
  }

  friend bool operator==(const SubsetSpec&, const SubsetSpec&) = default;

 private:
  SubsetSpec(bool cofinite, std::vector<ClosedPoint> pts) : cofinite_(cofinite), pts_(std::move(pts)) {
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  }

  bool cofinite_;
  std::vector<ClosedPoint> pts_;
};

class TorsionPairSpec {
 public:
  enum class Kind { CogenQ1, CogenP1, CogenQi, CogenPi, CU };

  static TorsionPairSpec cogenQ1() { return TorsionPairSpec(Kind::CogenQ1, 0); }
  static TorsionPairSpec cogenP1() { return TorsionPairSpec(Kind::CogenP1, 0); }
  // The trivial pair (0, Mod) of the cotilting module Q1 + Q2 is the i = 1
  // degenerate case: everything torsionfree.
  static TorsionPairSpec trivial() { return TorsionPairSpec(Kind::CogenQi, 1); }
  static TorsionPairSpec cogenQi(std::size_t i) {
    if (i < 2) throw std::invalid_argument("cogenQ index must be >= 2 (use trivial for i = 1)");
    return TorsionPairSpec(Kind::CogenQi, i);
  }
  static TorsionPairSpec cogenPi(std::size_t i) {
    if (i < 2) throw std::invalid_argument("cogenP index must be >= 2 (use cogenP1)");
    return TorsionPairSpec(Kind::CogenPi, i);
  }
  static TorsionPairSpec cu(SubsetSpec u) { return TorsionPairSpec(Kind::CU, 0, std::move(u)); }

  Kind kind() const { return kind_; }
  std::size_t index() const { return index_; }
  bool is_trivial() const { return kind_ == Kind::CogenQi && index_ == 1; }
  const SubsetSpec& subset() const { return *u_; }

  std::string to_string() const {
    switch (kind_) {
      case Kind::CogenQ1:
        return "cogenQ1";
      case Kind::CogenP1:
        return "cogenP1";
      case Kind::CogenQi:
        return index_ == 1 ? "trivial" : "cogenQ:" + std::to_string(index_);
      case Kind::CogenPi:
        return "cogenP:" + std::to_string(index_);
      case Kind::CU:
        return "CU:" + u_->to_string();
    }
    return {};
  }

  friend bool operator==(const TorsionPairSpec&, const TorsionPairSpec&) = default;

 private:
  explicit TorsionPairSpec(Kind k, std::size_t i, std::optional<SubsetSpec> u = std::nullopt)
      : kind_(k), index_(i), u_(std::move(u)) {}

  Kind kind_;
  std::size_t index_;
  std::optional<SubsetSpec> u_;
};

// "cogenQ1" | "cogenP1" | "cogenQ:i" | "cogenP:i" | "trivial" |
// "CU:all" | "CU:empty" | "CU:{t,inf}" | "CU:co{t}"
inline TorsionPairSpec parse_pair_spec(const std::string& text, const FieldSpec& f) {
  if (text == "cogenQ1") return TorsionPairSpec::cogenQ1();
  if (text == "cogenP1") return TorsionPairSpec::cogenP1();
  if (text == "trivial") return TorsionPairSpec::trivial();
  if (text.rfind("cogenQ:", 0) == 0)
    return TorsionPairSpec::cogenQi(std::stoul(text.substr(7)));
  if (text.rfind("cogenP:", 0) == 0)
    return TorsionPairSpec::cogenPi(std::stoul(text.substr(7)));
  if (text.rfind("CU:", 0) == 0) {
    std::string body = text.substr(3);
    if (body == "all") return TorsionPairSpec::cu(SubsetSpec::all());
    if (body == "empty") return TorsionPairSpec::cu(SubsetSpec::empty());
    bool cofinite = body.rfind("co{", 0) == 0;
    std::size_t open = body.find('{');
    if (open == std::string::npos || body.back() != '}')
      throw std::invalid_argument("bad subset spec: " + text);
    std::string inner = body.substr(open + 1, body.size() - open - 2);
    std::vector<ClosedPoint> pts;
    std::size_t pos = 0;
    while (pos < inner.size()) {
      std::size_t comma = inner.find(',', pos);
      std::string tok =
          comma == std::string::npos ? inner.substr(pos) : inner.substr(pos, comma - pos);
      if (!tok.empty()) pts.push_back(parse_closed_point(tok, f));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return TorsionPairSpec::cu(cofinite ? SubsetSpec::cofinite(std::move(pts))
                                        : SubsetSpec::finite(std::move(pts)));
  }
  throw std::invalid_argument("unknown torsion pair spec: " + text);
}

enum class TorsionClass { Torsion, Torsionfree, Neither };

inline TorsionClass classify_indec(const IndecompDescriptor& d, const TorsionPairSpec& p) {
  using Kind = IndecompDescriptor::Kind;
  switch (p.kind()) {
    case TorsionPairSpec::Kind::CogenQ1:
      if (d.kind == Kind::Preproj && d.index == 1) return TorsionClass::Torsion;
      if (d.kind == Kind::Preinj && d.index == 1) return TorsionClass::Torsionfree;
      return TorsionClass::Neither;
    case TorsionPairSpec::Kind::CogenP1:
      if (d.kind == Kind::Preproj && d.index == 1) return TorsionClass::Torsionfree;
      return TorsionClass::Torsion;
    case TorsionPairSpec::Kind::CogenQi:
      if (p.index() == 1) return TorsionClass::Torsionfree;  // trivial pair (0, Mod)
      if (d.kind == Kind::Preinj && d.index <= p.index() - 1) return TorsionClass::Torsion;
      return TorsionClass::Torsionfree;
    case TorsionPairSpec::Kind::CogenPi:
      if (d.kind == Kind::Preproj && d.index <= p.index()) return TorsionClass::Torsionfree;
      return TorsionClass::Torsion;
    case TorsionPairSpec::Kind::CU:
      if (d.kind == Kind::Preinj) return TorsionClass::Torsion;
      if (d.kind == Kind::Preproj) return TorsionClass::Torsionfree;
      return p.subset().contains(*d.point) ? TorsionClass::Torsion : TorsionClass::Torsionfree;
  }
  return TorsionClass::Neither;
}

struct TorsionDecomposition {
  Submodule sub;          // inclusion of the torsion radical t(M)
  KronModule sub_module;  // t(M)
  KronModule quotient;    // M / t(M)
  Matrix proj1, proj2;    // the canonical projections
};

// Canonical short exact sequence 0 -> t(M) -> M -> M/t(M) -> 0.
inline TorsionDecomposition torsion_radical(const KronModule& m, const TorsionPairSpec& p) {
  const FieldSpec& F = m.field;
  Submodule sub{Matrix(m.dim.d1, 0, F), Matrix(m.dim.d2, 0, F)};
  if (p.kind() == TorsionPairSpec::Kind::CogenQ1) {
    // t(M) = (0, M_2), the trace of P1
    sub = Submodule{Matrix(m.dim.d1, 0, F), Matrix::identity(m.dim.d2, F)};
  } else {
    Decomposition dec = decompose(m);
    Matrix c1 = inverse(dec.s1), c2 = inverse(dec.s2);
    std::vector<std::size_t> cols1, cols2;
    std::size_t off1 = 0, off2 = 0;
    for (const auto& d : dec.summands) {
      DimVector dv = d.dim();
      if (classify_indec(d, p) == TorsionClass::Torsion) {
        for (std::size_t k = 0; k < dv.d1; ++k) cols1.push_back(off1 + k);
        for (std::size_t k = 0; k < dv.d2; ++k) cols2.push_back(off2 + k);
      }
      off1 += dv.d1;
      off2 += dv.d2;
    }
    sub = Submodule{c1.select_columns(cols1), c2.select_columns(cols2)};
  }
  KronModule tm = restrict_to(m, sub);
  auto q = quotient(m, sub);
  return {sub, tm, q.quotient, q.proj1, q.proj2};
}

inline bool is_torsion(const KronModule& m, const TorsionPairSpec& p) {
  return torsion_radical(m, p).sub.dim() == m.dim;
}

inline bool is_torsionfree(const KronModule& m, const TorsionPairSpec& p) {
  return torsion_radical(m, p).sub.dim().total() == 0;
}

struct ShadowReport {
  bool pass = true;
  std::string counterexample;
};

// Enumerative verification that the classified shadow is a torsion pair in
// the finite-dimensional category:
//   (a) Hom(torsion, torsionfree) = 0,
//   (b) the torsion class is closed under quotients (epimorphisms between
//       corpus members),
//   (c) the torsionfree class is closed under submodules.
// corrupt_swap deliberately swaps the classes; it is the negative control.
inline ShadowReport finite_type_shadow_check(const TorsionPairSpec& p, std::size_t dim_bound,
                                             const FieldSpec& field, bool corrupt_swap = false) {
  if (!field.is_prime_field()) throw FieldNotFinite();
  if (dim_bound > 8) throw TooLarge("finite_type_shadow_check: bound > 8");
  auto classify = [&](const IndecompDescriptor& d) {
    TorsionClass c = classify_indec(d, p);
    if (corrupt_swap) {
      if (c == TorsionClass::Torsion) return TorsionClass::Torsionfree;
      if (c == TorsionClass::Torsionfree) return TorsionClass::Torsion;
    }
    return c;
  };

  auto descriptors = all_indecomposables(field, dim_bound);
  std::vector<KronModule> modules;
  std::vector<TorsionClass> classes;
  for (const auto& d : descriptors) {
    modules.push_back(make_indecomposable(d, field));
    classes.push_back(classify(d));
  }

  constexpr std::size_t kHomCap = 1u << 20;
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    for (std::size_t j = 0; j < descriptors.size(); ++j) {
      if (classes[i] != TorsionClass::Torsion) continue;
      // (a) orthogonality
      if (classes[j] == TorsionClass::Torsionfree && hom_dim(modules[i], modules[j]) != 0)
        return {false, "Hom(" + descriptors[i].to_string() + ", " + descriptors[j].to_string() +
                           ") != 0"};
      // (b) torsion closed under quotients
      if (classes[j] != TorsionClass::Torsion &&
          exists_surjective_hom(modules[i], modules[j], kHomCap))
        return {false, "torsion " + descriptors[i].to_string() + " surjects onto non-torsion " +
                           descriptors[j].to_string()};
    }
  }
  // (c) torsionfree closed under submodules
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    if (classes[i] != TorsionClass::Torsionfree) continue;
    for (const auto& s : enumerate_submodules(modules[i], 100000)) {
      KronModule inner = restrict_to(modules[i], s);
      for (const auto& d : summand_multiset(inner)) {
        if (classify(d) != TorsionClass::Torsionfree)
          return {false, "torsionfree " + descriptors[i].to_string() +
                             " has a submodule with summand " + d.to_string()};
      }
    }
  }
  return {};
}

}  // namespace kronheart
