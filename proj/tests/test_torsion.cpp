#include <catch2/catch_amalgamated.hpp>

#include "kronheart/torsion.hpp"
#include "test_util.hpp"

#include <random>

using namespace kronheart;

namespace {
const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F2 = FieldSpec::prime_field(2);
const FieldSpec F3 = FieldSpec::prime_field(3);

ClosedPoint pt_t(const FieldSpec& f) { return ClosedPoint::finite(Polynomial::t(f)); }
KronModule mk(const IndecompDescriptor& d, const FieldSpec& f) { return make_indecomposable(d, f); }
}  // namespace

TEST_CASE("pair spec text round trip") {
  std::vector<std::string> specs = {"cogenQ1", "cogenP1", "trivial", "cogenQ:3", "cogenP:2",
                                    "CU:all",  "CU:empty", "CU:{t,inf}", "CU:co{t}",
                                    "CU:{t^2+t+1}"};
  for (const auto& s : specs) {
    REQUIRE(parse_pair_spec(s, F2).to_string() == s);
  }
  REQUIRE_THROWS_AS(parse_pair_spec("cogenQ:1", F2), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_pair_spec("nonsense", F2), std::invalid_argument);
}

TEST_CASE("subset spec normalization") {
  REQUIRE(SubsetSpec::cofinite({}) == SubsetSpec::all());
  REQUIRE(SubsetSpec::finite({}) == SubsetSpec::empty());
  REQUIRE(!SubsetSpec::all().is_proper());
  REQUIRE(SubsetSpec::empty().is_proper());
  REQUIRE(SubsetSpec::cofinite({pt_t(F2)}).is_proper());
  REQUIRE(SubsetSpec::cofinite({pt_t(F2)}).contains(ClosedPoint::infinity(F2)));
  REQUIRE(!SubsetSpec::cofinite({pt_t(F2)}).contains(pt_t(F2)));
}

TEST_CASE("classification examples") {
  REQUIRE(classify_indec(IndecompDescriptor::preinj(1), TorsionPairSpec::cogenQi(3)) ==
          TorsionClass::Torsion);
  REQUIRE(classify_indec(IndecompDescriptor::preproj(1), TorsionPairSpec::cogenP1()) ==
          TorsionClass::Torsionfree);
  REQUIRE(classify_indec(IndecompDescriptor::regular(pt_t(F2), 2),
                         TorsionPairSpec::cu(SubsetSpec::empty())) == TorsionClass::Torsionfree);
  // cogenQ1 has mixed indecomposables
  REQUIRE(classify_indec(IndecompDescriptor::preproj(1), TorsionPairSpec::cogenQ1()) ==
          TorsionClass::Torsion);
  REQUIRE(classify_indec(IndecompDescriptor::preinj(1), TorsionPairSpec::cogenQ1()) ==
          TorsionClass::Torsionfree);
  REQUIRE(classify_indec(IndecompDescriptor::regular(pt_t(F2), 1), TorsionPairSpec::cogenQ1()) ==
          TorsionClass::Neither);
  REQUIRE(classify_indec(IndecompDescriptor::preproj(2), TorsionPairSpec::cogenQ1()) ==
          TorsionClass::Neither);
  // trivial pair: everything torsionfree
  REQUIRE(classify_indec(IndecompDescriptor::preinj(4), TorsionPairSpec::trivial()) ==
          TorsionClass::Torsionfree);
}

TEST_CASE("radical of P2 under cogenQ1 is the Example-6.5 sequence data") {
  KronModule p2 = mk(IndecompDescriptor::preproj(2), Q);
  auto rad = torsion_radical(p2, TorsionPairSpec::cogenQ1());
  REQUIRE(rad.sub.dim() == DimVector{0, 2});
  // submodule isomorphic to P1 + P1, quotient to Q1
  auto sub_summands = summand_multiset(rad.sub_module);
  REQUIRE(sub_summands == std::vector<IndecompDescriptor>{IndecompDescriptor::preproj(1),
                                                          IndecompDescriptor::preproj(1)});
  REQUIRE(summand_multiset(rad.quotient) ==
          std::vector<IndecompDescriptor>{IndecompDescriptor::preinj(1)});
}

TEST_CASE("radical basics") {
  KronModule p1 = mk(IndecompDescriptor::preproj(1), F2);
  auto rad = torsion_radical(p1, TorsionPairSpec::cogenP1());
  REQUIRE(rad.sub.dim().total() == 0);
  REQUIRE(rad.quotient.dim == p1.dim);

  // trivial pair: radical always zero
  KronModule m = direct_sum(F2, std::vector<IndecompDescriptor>{
                                    IndecompDescriptor::preinj(2), IndecompDescriptor::preproj(2)});
  REQUIRE(torsion_radical(m, TorsionPairSpec::trivial()).sub.dim().total() == 0);

  // S_x + Q1 is entirely torsion for CU({x})
  KronModule sq = direct_sum(F2, std::vector<IndecompDescriptor>{
                                     IndecompDescriptor::regular(pt_t(F2), 1),
                                     IndecompDescriptor::preinj(1)});
  auto spec = TorsionPairSpec::cu(SubsetSpec::finite({pt_t(F2)}));
  auto rad2 = torsion_radical(sq, spec);
  REQUIRE(rad2.sub.dim() == sq.dim);
  REQUIRE(is_torsion(sq, spec));
}

TEST_CASE("is_torsion / is_torsionfree examples") {
  KronModule p3 = mk(IndecompDescriptor::preproj(3), F2);
  REQUIRE(is_torsionfree(p3, TorsionPairSpec::cu(SubsetSpec::all())));
  KronModule q7 = mk(IndecompDescriptor::preinj(7), F2);
  REQUIRE(is_torsion(q7, TorsionPairSpec::cu(SubsetSpec::empty())));
  KronModule zero = KronModule::zero(F2);
  REQUIRE(is_torsion(zero, TorsionPairSpec::cogenQ1()));
  REQUIRE(is_torsion(zero, TorsionPairSpec::trivial()));
}

TEST_CASE("radical exactness on random modules") {
  std::mt19937_64 rng(31);
  std::vector<TorsionPairSpec> specs = {
      TorsionPairSpec::cogenQ1(), TorsionPairSpec::cogenP1(), TorsionPairSpec::cogenQi(2),
      TorsionPairSpec::cogenPi(3), TorsionPairSpec::trivial(),
      TorsionPairSpec::cu(SubsetSpec::finite({pt_t(F3)})),
      TorsionPairSpec::cu(SubsetSpec::cofinite({pt_t(F3)}))};
  for (int trial = 0; trial < 40; ++trial) {
    KronModule m = testutil::random_conjugate(
        direct_sum(F3, testutil::random_multiset(F3, 8, rng)), rng);
    const auto& p = specs[trial % specs.size()];
    auto rad = torsion_radical(m, p);
    // inclusion has full column rank, projection full row rank
    REQUIRE(rank(rad.sub.inc1) == rad.sub.inc1.cols());
    REQUIRE(rank(rad.sub.inc2) == rad.sub.inc2.cols());
    REQUIRE(rank(rad.proj1) == rad.proj1.rows());
    REQUIRE(rank(rad.proj2) == rad.proj2.rows());
    // composition vanishes, dimensions add
    REQUIRE((rad.proj1 * rad.sub.inc1).is_zero());
    REQUIRE((rad.proj2 * rad.sub.inc2).is_zero());
    REQUIRE(rad.sub.dim().total() + rad.quotient.total_dim() == m.total_dim());
    // the two halves classify correctly and the radical is maximal
    REQUIRE(is_torsion(rad.sub_module, p));
    REQUIRE(is_torsionfree(rad.quotient, p));
    REQUIRE(torsion_radical(rad.quotient, p).sub.dim().total() == 0);
  }
}

TEST_CASE("radical is functorial on a random corpus") {
  std::mt19937_64 rng(37);
  auto spec = TorsionPairSpec::cu(SubsetSpec::finite({pt_t(F3)}));
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    KronModule m = direct_sum(F3, testutil::random_multiset(F3, 6, rng));
    KronModule n = direct_sum(F3, testutil::random_multiset(F3, 6, rng));
    auto basis = hom_basis(m, n);
    if (basis.empty()) continue;
    const Morphism& f = basis[rng() % basis.size()];
    auto rm = torsion_radical(m, spec);
    auto rn = torsion_radical(n, spec);
    // f maps t(M) into t(N): solve the factorization through the inclusion
    REQUIRE(solve(rn.sub.inc1, f.f1 * rm.sub.inc1).has_value());
    REQUIRE(solve(rn.sub.inc2, f.f2 * rm.sub.inc2).has_value());
    ++checked;
  }
  REQUIRE(checked > 5);
}

TEST_CASE("cogenQ1 radical agrees with the trace of P1 on random modules") {
  std::mt19937_64 rng(53);
  KronModule p1 = mk(IndecompDescriptor::preproj(1), F2);
  for (int trial = 0; trial < 50; ++trial) {
    KronModule m = testutil::random_conjugate(
        direct_sum(F2, testutil::random_multiset(F2, 6, rng)), rng);
    auto rad = torsion_radical(m, TorsionPairSpec::cogenQ1());
    Submodule tr = trace_submodule({p1}, m);
    REQUIRE(tr.dim() == rad.sub.dim());
    REQUIRE(column_span_contains(rad.sub.inc2, tr.inc2));
    REQUIRE(column_span_contains(tr.inc2, rad.sub.inc2));
  }
}

TEST_CASE("orthogonality: Hom(torsion, torsionfree) = 0 for all shadows, small corpus") {
  std::vector<TorsionPairSpec> specs = {
      TorsionPairSpec::cogenQ1(), TorsionPairSpec::cogenP1(), TorsionPairSpec::cogenQi(2),
      TorsionPairSpec::cogenQi(3), TorsionPairSpec::cogenPi(2), TorsionPairSpec::trivial(),
      TorsionPairSpec::cu(SubsetSpec::empty()), TorsionPairSpec::cu(SubsetSpec::all()),
      TorsionPairSpec::cu(SubsetSpec::finite({pt_t(F2)})),
      TorsionPairSpec::cu(SubsetSpec::cofinite({pt_t(F2)}))};
  auto ds = all_indecomposables(F2, 5);
  for (const auto& p : specs) {
    for (const auto& dt : ds) {
      if (classify_indec(dt, p) != TorsionClass::Torsion) continue;
      for (const auto& df : ds) {
        if (classify_indec(df, p) != TorsionClass::Torsionfree) continue;
        REQUIRE(hom_dim(mk(dt, F2), mk(df, F2)) == 0);
      }
    }
  }
}

TEST_CASE("finite type shadow check passes and the corrupted control fails") {
  REQUIRE(finite_type_shadow_check(TorsionPairSpec::cogenQ1(), 4, F2).pass);
  REQUIRE(finite_type_shadow_check(TorsionPairSpec::cu(SubsetSpec::finite({pt_t(F2)})), 4, F2).pass);
  REQUIRE(finite_type_shadow_check(TorsionPairSpec::cogenPi(2), 4, F2).pass);

  auto bad = finite_type_shadow_check(TorsionPairSpec::cu(SubsetSpec::finite({pt_t(F2)})), 4, F2,
                                      /*corrupt_swap=*/true);
  REQUIRE(!bad.pass);
  REQUIRE(bad.counterexample.find("Hom(") != std::string::npos);

  REQUIRE_THROWS_AS(finite_type_shadow_check(TorsionPairSpec::cogenQ1(), 4, Q), FieldNotFinite);
}
