#include <catch2/catch_amalgamated.hpp>

#include "kronheart/kron_module.hpp"

using namespace kronheart;

namespace {
const FieldSpec Q = FieldSpec::rationals();
const FieldSpec F2 = FieldSpec::prime_field(2);

ClosedPoint pt_t(const FieldSpec& f) { return ClosedPoint::finite(Polynomial::t(f)); }
}  // namespace

TEST_CASE("canonical simples") {
  KronModule p1 = make_indecomposable(IndecompDescriptor::preproj(1), Q);
  REQUIRE(p1.dim == DimVector{0, 1});
  REQUIRE(p1.a.rows() == 1);
  REQUIRE(p1.a.cols() == 0);

  KronModule q1 = make_indecomposable(IndecompDescriptor::preinj(1), Q);
  REQUIRE(q1.dim == DimVector{1, 0});
  REQUIRE(q1.a.rows() == 0);
  REQUIRE(q1.a.cols() == 1);

  KronModule sx = make_indecomposable(IndecompDescriptor::regular(pt_t(F2), 1), F2);
  REQUIRE(sx.dim == DimVector{1, 1});
  REQUIRE(sx.a.at(0, 0).is_zero());
  REQUIRE(sx.b.at(0, 0).is_one());
}

TEST_CASE("descriptor dims and defect match the kind, up to total dim 12") {
  for (const auto& d : all_indecomposables(F2, 12)) {
    KronModule m = make_indecomposable(d, F2);
    REQUIRE(m.dim == d.dim());
    switch (d.kind) {
      case IndecompDescriptor::Kind::Preproj:
        REQUIRE(defect(m.dim) == -1);
        break;
      case IndecompDescriptor::Kind::Regular:
        REQUIRE(defect(m.dim) == 0);
        break;
      case IndecompDescriptor::Kind::Preinj:
        REQUIRE(defect(m.dim) == 1);
        break;
    }
  }
}

TEST_CASE("direct sums") {
  REQUIRE(direct_sum(Q, std::vector<KronModule>{}).is_zero_module());

  KronModule s = direct_sum(Q, std::vector<IndecompDescriptor>{IndecompDescriptor::preproj(1),
                                                               IndecompDescriptor::preinj(1)});
  REQUIRE(s.dim == DimVector{1, 1});
  REQUIRE(s.a.is_zero());
  REQUIRE(s.b.is_zero());

  auto rx = IndecompDescriptor::regular(pt_t(F2), 1);
  KronModule ss = direct_sum(F2, std::vector<IndecompDescriptor>{rx, rx});
  REQUIRE(ss.dim == DimVector{2, 2});
  REQUIRE(ss.b.is_identity());

  KronModule bad = make_indecomposable(IndecompDescriptor::preproj(1), Q);
  REQUIRE_THROWS_AS(direct_sum(F2, std::vector<KronModule>{bad}), FieldMismatch);
}

TEST_CASE("euler form and defect examples") {
  REQUIRE(euler_form({0, 1}, {1, 2}) == 2);
  REQUIRE(euler_form({0, 0}, {5, 7}) == 0);
  REQUIRE(euler_form({1, 0}, {0, 1}) == -2);
  REQUIRE(defect({0, 1}) == -1);
  REQUIRE(defect({3, 3}) == 0);
  REQUIRE(defect({2, 1}) == 1);
}

TEST_CASE("submodule enumeration: simple module") {
  KronModule p1 = make_indecomposable(IndecompDescriptor::preproj(1), F2);
  auto subs = enumerate_submodules(p1, 100);
  REQUIRE(subs.size() == 2);  // 0 and P1
}

TEST_CASE("submodule enumeration: S_x has exactly one proper nonzero submodule") {
  KronModule sx = make_indecomposable(IndecompDescriptor::regular(pt_t(F2), 1), F2);
  auto subs = enumerate_submodules(sx, 100);
  REQUIRE(subs.size() == 3);
  int proper = 0;
  for (const auto& s : subs) {
    REQUIRE(is_subrepresentation(sx, s));
    if (s.dim().total() == 1) {
      ++proper;
      // the sink-supported simple (0, k)
      REQUIRE(s.dim() == DimVector{0, 1});
    }
  }
  REQUIRE(proper == 1);
}

TEST_CASE("submodule enumeration: zero module and guards") {
  REQUIRE(enumerate_submodules(KronModule::zero(F2), 10).size() == 1);
  KronModule m = make_indecomposable(IndecompDescriptor::preproj(1), Q);
  REQUIRE_THROWS_AS(enumerate_submodules(m, 10), FieldNotFinite);
  KronModule big = direct_sum(F2, std::vector<IndecompDescriptor>{
                                      IndecompDescriptor::preproj(5), IndecompDescriptor::preproj(1)});
  REQUIRE_THROWS_AS(enumerate_submodules(big, 10000), TooLarge);
  KronModule p2p2 = direct_sum(F2, std::vector<IndecompDescriptor>{
                                       IndecompDescriptor::preproj(2), IndecompDescriptor::preproj(2)});
  REQUIRE_THROWS_AS(enumerate_submodules(p2p2, 3), Overflow);
}

TEST_CASE("every enumerated pair satisfies the intertwining conditions; 0 and m present") {
  KronModule m = direct_sum(F2, std::vector<IndecompDescriptor>{
                                    IndecompDescriptor::preproj(2),
                                    IndecompDescriptor::regular(pt_t(F2), 1)});
  auto subs = enumerate_submodules(m, 10000);
  bool saw_zero = false, saw_full = false;
  for (const auto& s : subs) {
    REQUIRE(is_subrepresentation(m, s));
    if (s.dim().total() == 0) saw_zero = true;
    if (s.dim() == m.dim) saw_full = true;
  }
  REQUIRE(saw_zero);
  REQUIRE(saw_full);
}

TEST_CASE("quotients") {
  KronModule sx = make_indecomposable(IndecompDescriptor::regular(pt_t(F2), 1), F2);

  SECTION("by zero recovers the module") {
    Submodule z{Matrix(1, 0, F2), Matrix(1, 0, F2)};
    auto q = quotient(sx, z);
    REQUIRE(q.quotient == sx);
  }

  SECTION("S_x by its sink simple is Q1") {
    Submodule s{Matrix(1, 0, F2), Matrix::identity(1, F2)};
    auto q = quotient(sx, s);
    REQUIRE(q.quotient.dim == DimVector{1, 0});
  }

  SECTION("P2 by the sink plane is Q1") {
    KronModule p2 = make_indecomposable(IndecompDescriptor::preproj(2), F2);
    Submodule s{Matrix(1, 0, F2), Matrix::identity(2, F2)};
    auto q = quotient(p2, s);
    REQUIRE(q.quotient.dim == DimVector{1, 0});
    REQUIRE(q.proj1.rows() == 1);
    REQUIRE(q.proj2.rows() == 0);
  }

  SECTION("invalid submodule is rejected") {
    KronModule p2 = make_indecomposable(IndecompDescriptor::preproj(2), F2);
    // a source line is not a subrepresentation of P2: arrows push it into the sink
    Submodule bad{Matrix::identity(1, F2), Matrix(2, 0, F2)};
    REQUIRE_THROWS_AS(quotient(p2, bad), NotASubmodule);
  }
}

TEST_CASE("closed points of P1(F2) up to degree 2") {
  auto pts = closed_points_up_to_degree(F2, 2);
  REQUIRE(pts.size() == 4);  // t, t+1, t^2+t+1, inf
  REQUIRE(pts[0].to_string() == "t");
  REQUIRE(pts[1].to_string() == "t+1");
  REQUIRE(pts[2].to_string() == "t^2+t+1");
  REQUIRE(pts[3].is_infinity());
}

TEST_CASE("invalid closed points are rejected") {
  REQUIRE_THROWS_AS(ClosedPoint::finite(Polynomial::from_ints(F2, {0, 0, 1})), InvalidPoint);  // t^2
  REQUIRE_THROWS_AS(ClosedPoint::finite(Polynomial::from_ints(Q, {1})), InvalidPoint);
  auto F3 = FieldSpec::prime_field(3);
  REQUIRE_THROWS_AS(
      make_indecomposable(IndecompDescriptor::regular(pt_t(F3), 1), F2), InvalidPoint);
}

TEST_CASE("descriptor text and ordering") {
  REQUIRE(IndecompDescriptor::preproj(3).to_string() == "P3");
  REQUIRE(IndecompDescriptor::preinj(1).to_string() == "Q1");
  REQUIRE(IndecompDescriptor::regular(ClosedPoint::infinity(F2), 2).to_string() == "R[inf,2]");
  REQUIRE(IndecompDescriptor::regular(ClosedPoint::finite(Polynomial::from_ints(F2, {1, 1, 1})), 1)
              .to_string() == "R[t^2+t+1,1]");

  auto lt = [](const IndecompDescriptor& a, const IndecompDescriptor& b) { return a < b; };
  REQUIRE(lt(IndecompDescriptor::preproj(9), IndecompDescriptor::regular(pt_t(F2), 1)));
  REQUIRE(lt(IndecompDescriptor::regular(pt_t(F2), 1), IndecompDescriptor::preinj(1)));
  REQUIRE(lt(IndecompDescriptor::regular(pt_t(F2), 1),
             IndecompDescriptor::regular(ClosedPoint::infinity(F2), 1)));
}
