#include <catch2/catch_amalgamated.hpp>

#include "kronheart/pencil.hpp"
#include "test_util.hpp"

#include <random>

using namespace kronheart;

namespace {
const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F2 = FieldSpec::prime_field(2);
const FieldSpec F5 = FieldSpec::prime_field(5);

bool decomposition_is_valid(const KronModule& m, const Decomposition& dec) {
  if (!is_invertible(dec.s1) || !is_invertible(dec.s2)) return false;
  Matrix c1 = inverse(dec.s1);
  Matrix ca(0, 0, m.field), cb(0, 0, m.field);
  DimVector total{0, 0};
  for (const auto& d : dec.summands) {
    KronModule c = make_indecomposable(d, m.field);
    ca = block_diag(ca, c.a);
    cb = block_diag(cb, c.b);
    total = total + d.dim();
  }
  if (!(total == m.dim)) return false;
  return dec.s2 * m.a * c1 == ca && dec.s2 * m.b * c1 == cb;
}
}  // namespace

TEST_CASE("decompose: zero module") {
  auto dec = decompose(KronModule::zero(Q));
  REQUIRE(dec.summands.empty());
  REQUIRE(dec.s1.rows() == 0);
  REQUIRE(dec.s2.rows() == 0);
}

TEST_CASE("decompose: zero pencil of size 1x1 is P1 + Q1") {
  KronModule m(Q, Matrix(1, 1, Q), Matrix(1, 1, Q));
  auto dec = decompose(m);
  REQUIRE(dec.summands.size() == 2);
  REQUIRE(dec.summands[0] == IndecompDescriptor::preproj(1));
  REQUIRE(dec.summands[1] == IndecompDescriptor::preinj(1));
  REQUIRE(decomposition_is_valid(m, dec));
  REQUIRE(invariants_from_ranks(m) == dec.summands);
}

TEST_CASE("decompose: conjugated regular block at t-1 over Q") {
  auto x = ClosedPoint::finite(Polynomial::from_ints(Q, {-1, 1}));
  KronModule m = make_indecomposable(IndecompDescriptor::regular(x, 2), Q);
  std::mt19937_64 rng(5);
  KronModule c = testutil::random_conjugate(m, rng);
  auto dec = decompose(c);
  REQUIRE(dec.summands.size() == 1);
  REQUIRE(dec.summands[0] == IndecompDescriptor::regular(x, 2));
  REQUIRE(decomposition_is_valid(c, dec));
  REQUIRE(invariants_from_ranks(c) == dec.summands);
}

TEST_CASE("oracle: canonical P2 and split pairs") {
  KronModule p2 = make_indecomposable(IndecompDescriptor::preproj(2), Q);
  auto inv = invariants_from_ranks(p2);
  REQUIRE(inv.size() == 1);
  REQUIRE(inv[0] == IndecompDescriptor::preproj(2));
}

TEST_CASE("oracle: sum of distinct simple regulars over F2 via determinant factorization") {
  auto x0 = ClosedPoint::finite(Polynomial::t(F2));
  auto x1 = ClosedPoint::finite(Polynomial::from_ints(F2, {1, 1}));
  KronModule m = direct_sum(F2, std::vector<IndecompDescriptor>{
                                    IndecompDescriptor::regular(x1, 1),
                                    IndecompDescriptor::regular(x0, 1)});
  auto inv = invariants_from_ranks(m);
  REQUIRE(inv.size() == 2);
  REQUIRE(inv[0] == IndecompDescriptor::regular(x0, 1));
  REQUIRE(inv[1] == IndecompDescriptor::regular(x1, 1));
}

TEST_CASE("regular support") {
  REQUIRE(regular_support(make_indecomposable(IndecompDescriptor::preproj(5), Q)).empty());

  auto x = ClosedPoint::finite(Polynomial::t(F2));
  KronModule m = direct_sum(F2, std::vector<IndecompDescriptor>{
                                    IndecompDescriptor::regular(x, 1),
                                    IndecompDescriptor::regular(x, 2)});
  auto sup = regular_support(m);
  REQUIRE(sup.size() == 1);
  REQUIRE(sup[0] == x);

  KronModule m2 = direct_sum(F2, std::vector<IndecompDescriptor>{
                                     IndecompDescriptor::regular(x, 1),
                                     IndecompDescriptor::regular(ClosedPoint::infinity(F2), 3)});
  auto sup2 = regular_support(m2);
  REQUIRE(sup2.size() == 2);
  REQUIRE(sup2[0] == x);
  REQUIRE(sup2[1].is_infinity());
}

TEST_CASE("round trip with random conjugation and oracle agreement") {
  std::mt19937_64 rng(20240809);
  std::vector<FieldSpec> fields = {F2, F5, Q};
  int done = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const FieldSpec& F = fields[trial % fields.size()];
    auto multiset = testutil::random_multiset(F, 10, rng);
    KronModule m = direct_sum(F, multiset);
    KronModule c = testutil::random_conjugate(m, rng);
    auto dec = decompose(c);
    REQUIRE(dec.summands == multiset);
    REQUIRE(decomposition_is_valid(c, dec));
    REQUIRE(invariants_from_ranks(c) == multiset);
    ++done;
  }
  REQUIRE(done == 60);
}

TEST_CASE("Krull-Schmidt determinism: permutation conjugation leaves the multiset fixed") {
  std::mt19937_64 rng(77);
  auto x = ClosedPoint::finite(Polynomial::t(F5));
  std::vector<IndecompDescriptor> ds = {IndecompDescriptor::preproj(2),
                                        IndecompDescriptor::regular(x, 1),
                                        IndecompDescriptor::preinj(1)};
  KronModule m1 = direct_sum(F5, ds);
  std::vector<IndecompDescriptor> perm = {ds[2], ds[0], ds[1]};
  KronModule m2 = direct_sum(F5, perm);
  auto d1 = decompose(m1), d2 = decompose(m2);
  REQUIRE(d1.summands == d2.summands);
  // determinism on equal input
  auto d1again = decompose(m1);
  REQUIRE(d1again.summands == d1.summands);
  REQUIRE(d1again.s1 == d1.s1);
  REQUIRE(d1again.s2 == d1.s2);
}

TEST_CASE("mixed module with every block kind, all three fields") {
  for (const FieldSpec& F : {F2, F5, Q}) {
    std::vector<IndecompDescriptor> ds = {
        IndecompDescriptor::preproj(1), IndecompDescriptor::preproj(3),
        IndecompDescriptor::regular(ClosedPoint::finite(Polynomial::t(F)), 2),
        IndecompDescriptor::regular(ClosedPoint::infinity(F), 1), IndecompDescriptor::preinj(2)};
    std::sort(ds.begin(), ds.end());
    KronModule m = direct_sum(F, ds);
    std::mt19937_64 rng(123);
    KronModule c = testutil::random_conjugate(m, rng);
    auto dec = decompose(c);
    REQUIRE(dec.summands == ds);
    REQUIRE(decomposition_is_valid(c, dec));
    REQUIRE(invariants_from_ranks(c) == ds);
  }
}

TEST_CASE("degree-2 point over F2 decomposes rationally") {
  auto x = ClosedPoint::finite(Polynomial::from_ints(F2, {1, 1, 1}));
  KronModule m = make_indecomposable(IndecompDescriptor::regular(x, 2), F2);
  std::mt19937_64 rng(9);
  KronModule c = testutil::random_conjugate(m, rng);
  auto dec = decompose(c);
  REQUIRE(dec.summands.size() == 1);
  REQUIRE(dec.summands[0] == IndecompDescriptor::regular(x, 2));
  REQUIRE(decomposition_is_valid(c, dec));
}
