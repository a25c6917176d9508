#include <catch2/catch_amalgamated.hpp>

#include "kronheart/json_io.hpp"
#include "test_util.hpp"

#include <random>

using namespace kronheart;

namespace {
const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F5 = FieldSpec::prime_field(5);
}  // namespace

TEST_CASE("field round trip") {
  REQUIRE(field_from_json(field_to_json(Q)) == Q);
  REQUIRE(field_from_json(field_to_json(F5)) == F5);
  REQUIRE(field_from_json(Json::parse(R"({"kind":"Q"})")) == Q);
  REQUIRE_THROWS_AS(field_from_json(Json::parse(R"({"kind":"R"})")), ParseError);
  REQUIRE_THROWS_AS(field_from_json(Json::parse(R"({"kind":"Fp","p":6})")), ParseError);
}

TEST_CASE("scalar encoding") {
  Scalar half(Q, Rat(1) / Rat(2));
  REQUIRE(scalar_to_json(half) == Json("1/2"));
  REQUIRE(scalar_from_json(Json("1/2"), Q) == half);
  REQUIRE(scalar_from_json(Json("-3"), Q) == Scalar(Q, -3));
  REQUIRE(scalar_to_json(Scalar(F5, 7)) == Json(2));
  REQUIRE(scalar_from_json(Json(3), F5) == Scalar(F5, 3));
  REQUIRE_THROWS_AS(scalar_from_json(Json("x"), Q), ParseError);
}

TEST_CASE("module JSON round trip, including empty matrices") {
  std::mt19937_64 rng(4);
  for (const FieldSpec& F : {Q, F5}) {
    for (int trial = 0; trial < 10; ++trial) {
      KronModule m = direct_sum(F, testutil::random_multiset(F, 8, rng));
      KronModule back = module_from_json(module_to_json(m));
      REQUIRE(back == m);
      // serialized text re-parses identically (schema stability)
      Json j1 = module_to_json(m);
      Json j2 = Json::parse(j1.dump());
      REQUIRE(module_from_json(j2) == m);
    }
  }
  KronModule zero = KronModule::zero(Q);
  REQUIRE(module_from_json(module_to_json(zero)) == zero);
}

TEST_CASE("module JSON rejects malformed input") {
  REQUIRE_THROWS_AS(module_from_json(Json::parse(R"({"d1":1})")), ParseError);
  REQUIRE_THROWS_AS(
      module_from_json(Json::parse(
          R"({"field":{"kind":"Q"},"d1":1,"d2":1,"a":[[1,2]],"b":[[0]]})")),
      ParseError);
}

TEST_CASE("polynomial text round trip") {
  std::mt19937_64 rng(8);
  for (const FieldSpec& F : {Q, F5}) {
    for (int trial = 0; trial < 40; ++trial) {
      int deg = static_cast<int>(rng() % 5);
      std::vector<Scalar> c;
      for (int i = 0; i <= deg; ++i) c.emplace_back(F, static_cast<std::int64_t>(rng() % 9) - 4);
      Polynomial p(F, std::move(c));
      if (p.is_zero()) continue;
      REQUIRE(parse_polynomial(p.to_string(), F) == p);
    }
  }
  REQUIRE(parse_polynomial("3/2t^2-1", Q) ==
          Polynomial(Q, {Scalar(Q, -1), Scalar(Q, 0), Scalar(Q, Rat(3) / Rat(2))}));
}

TEST_CASE("descriptor text round trip") {
  for (const auto& d : all_indecomposables(F5, 8)) {
    REQUIRE(parse_descriptor(d.to_string(), F5) == d);
  }
  REQUIRE_THROWS_AS(parse_descriptor("X3", F5), std::invalid_argument);
  REQUIRE_THROWS_AS(parse_descriptor("R[t^2,1]", F5), InvalidPoint);
}

TEST_CASE("decomposition JSON shape") {
  KronModule m(Q, Matrix(1, 1, Q), Matrix(1, 1, Q));
  Json j = decomposition_to_json(decompose(m));
  REQUIRE(j.at("summands") == Json::array({"P1", "Q1"}));
  REQUIRE(j.at("s1").at("rows") == 1);
  Matrix s2 = matrix_from_json(j.at("s2"), Q);
  REQUIRE(is_invertible(s2));
}
