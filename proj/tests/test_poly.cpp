#include <catch2/catch_amalgamated.hpp>

#include "kronheart/factor.hpp"

#include <random>

using namespace kronheart;

namespace {
Polynomial random_poly(const FieldSpec& f, int maxdeg, std::mt19937_64& rng) {
  int d = static_cast<int>(rng() % (maxdeg + 1));
  std::vector<Scalar> c;
  for (int i = 0; i <= d; ++i) c.emplace_back(f, static_cast<std::int64_t>(rng() % 7) - 3);
  Polynomial p(f, std::move(c));
  if (p.is_zero()) return Polynomial::from_ints(f, {1});
  return p;
}
}  // namespace

TEST_CASE("polynomial arithmetic basics") {
  auto Q = FieldSpec::rationals();
  Polynomial a = Polynomial::from_ints(Q, {1, 2, 1});  // (t+1)^2
  Polynomial b = Polynomial::from_ints(Q, {1, 1});
  auto [q, r] = divmod(a, b);
  REQUIRE(r.is_zero());
  REQUIRE(q == b);
  REQUIRE(poly_gcd(a, b) == b);
  REQUIRE(a.degree() == 2);
  REQUIRE(Polynomial::zero(Q).degree() == -1);
}

TEST_CASE("factor: t^2 - 1 over Q") {
  auto Q = FieldSpec::rationals();
  auto fs = factor(Polynomial::from_ints(Q, {-1, 0, 1}));
  REQUIRE(fs.size() == 2);
  REQUIRE(fs[0].first == Polynomial::from_ints(Q, {-1, 1}));  // t - 1 first (lex on coefficients)
  REQUIRE(fs[0].second == 1);
  REQUIRE(fs[1].first == Polynomial::from_ints(Q, {1, 1}));
  REQUIRE(fs[1].second == 1);
}

TEST_CASE("factor: t^2 + t + 1 stays irreducible over F2") {
  auto F2 = FieldSpec::prime_field(2);
  auto fs = factor(Polynomial::from_ints(F2, {1, 1, 1}));
  REQUIRE(fs.size() == 1);
  REQUIRE(fs[0].first == Polynomial::from_ints(F2, {1, 1, 1}));
  REQUIRE(fs[0].second == 1);
}

TEST_CASE("factor: t^3 over F5") {
  auto F5 = FieldSpec::prime_field(5);
  auto fs = factor(Polynomial::from_ints(F5, {0, 0, 0, 1}));
  REQUIRE(fs.size() == 1);
  REQUIRE(fs[0].first == Polynomial::t(F5));
  REQUIRE(fs[0].second == 3);
}

TEST_CASE("factor rejects the zero polynomial") {
  REQUIRE_THROWS_AS(factor(Polynomial::zero(FieldSpec::rationals())), ZeroPolynomial);
}

TEST_CASE("factor output re-multiplies to the input") {
  std::mt19937_64 rng(2024);
  std::vector<FieldSpec> fields = {FieldSpec::prime_field(2), FieldSpec::prime_field(5),
                                   FieldSpec::rationals()};
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const FieldSpec& F = fields[trial % fields.size()];
    Polynomial p = random_poly(F, 6, rng);
    auto fs = factor(p);
    Polynomial prod = Polynomial::constant(F, p.leading());
    for (auto& [g, m] : fs) {
      REQUIRE(g.is_monic());
      for (std::size_t i = 0; i < m; ++i) prod = prod * g;
    }
    REQUIRE(prod == p);
    ++checked;
  }
  REQUIRE(checked == 200);
}

TEST_CASE("factors are irreducible: no further splitting at small degree") {
  // Spot check: factors of squarefree random products have no roots when deg > 1
  auto F5 = FieldSpec::prime_field(5);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    Polynomial p = random_poly(F5, 5, rng);
    for (auto& [g, m] : factor(p)) {
      if (g.degree() <= 1) continue;
      for (std::int64_t x = 0; x < 5; ++x) {
        REQUIRE(!g.evaluate(Scalar(F5, x)).is_zero());
      }
    }
  }
}

TEST_CASE("rational factorization handles multiplicities and fractions") {
  auto Q = FieldSpec::rationals();
  // 4 (t - 1/2)^2 (t^2 + 1) = (2t - 1)^2 (t^2+1)
  Polynomial f = Polynomial::from_ints(Q, {-1, 2});
  Polynomial g = Polynomial::from_ints(Q, {1, 0, 1});
  auto fs = factor(f * f * g);
  REQUIRE(fs.size() == 2);
  bool saw_linear = false, saw_quad = false;
  for (auto& [h, m] : fs) {
    if (h.degree() == 1) {
      saw_linear = true;
      REQUIRE(m == 2);
      REQUIRE(h.coeff(0) == Scalar(Q, Rat(-1, 2)));
    } else {
      saw_quad = true;
      REQUIRE(m == 1);
      REQUIRE(h == g);
    }
  }
  REQUIRE((saw_linear && saw_quad));
}

TEST_CASE("poly to_string") {
  auto F2 = FieldSpec::prime_field(2);
  REQUIRE(Polynomial::from_ints(F2, {1, 1, 1}).to_string() == "t^2+t+1");
  REQUIRE(Polynomial::t(F2).to_string() == "t");
  auto Q = FieldSpec::rationals();
  REQUIRE(Polynomial::from_ints(Q, {-1, 1}).to_string() == "t-1");
  REQUIRE(Polynomial::from_ints(Q, {2, 0, 3}).to_string() == "3t^2+2");
}
