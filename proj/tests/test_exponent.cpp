#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "varexp/exponent.hpp"

using namespace varexp;

TEST_CASE("constant field on the unit interval") {
  const Mesh m = Mesh::interval(0, 1, 8);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  for (double v : p.values()) CHECK(v == 2.0);
  CHECK(p.p_minus() == doctest::Approx(2.0));
  CHECK(p.p_plus() == doctest::Approx(2.0));
  CHECK(p.logholder_L() == doctest::Approx(0.0));
}

TEST_CASE("affine field 1.5 + 0.3x on the unit square") {
  const Mesh m = Mesh::rectangle(0, 1, 0, 1, 8, 8);
  const ExponentField p = build_field(m, AffineExponent{1.5, 0.3, 0.0});
  CHECK(p.p_minus() == doctest::Approx(1.5));
  CHECK(p.p_plus() == doctest::Approx(1.8));
}

TEST_CASE("gaussian bump field attains its minimum at the center") {
  const Mesh m = Mesh::rectangle(0, 1, 0, 1, 16, 16);
  const ExponentField p =
      build_field(m, GaussianBumpExponent{2.0, -0.4, 0.5, 0.5, 0.01});
  CHECK(p.p_minus() == doctest::Approx(1.6));
  CHECK(p.p_plus() <= 2.0);
}

TEST_CASE("inadmissible exponent names the offending node") {
  const Mesh m = Mesh::interval(0, 1, 4);
  // affine 1.2 - 0.5x dips below 1 near x = 1 (nodes 3 and 4)
  try {
    build_field(m, AffineExponent{1.2, -0.5, 0.0});
    FAIL("expected an admissibility error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("validate_admissible") {
  SUBCASE("constant 2 in 2D fails the strict p_plus < N bound") {
    const Mesh m = Mesh::rectangle(0, 1, 0, 1, 4, 4);
    const auto r = validate_admissible(build_field(m, ConstantExponent{2.0}));
    CHECK(r.p_minus_ok);
    CHECK_FALSE(r.p_plus_ok);
    CHECK_FALSE(r.pass);
  }
  SUBCASE("affine 1.5 + 0.3x in 2D passes") {
    const Mesh m = Mesh::rectangle(0, 1, 0, 1, 4, 4);
    const auto r =
        validate_admissible(build_field(m, AffineExponent{1.5, 0.3, 0.0}));
    CHECK(r.pass);
    CHECK(r.p_plus == doctest::Approx(1.8));
  }
  SUBCASE("constant 2 in 1D passes (p < N waived)") {
    const Mesh m = Mesh::interval(0, 1, 4);
    const auto r = validate_admissible(build_field(m, ConstantExponent{2.0}));
    CHECK(r.pass);
  }
}

TEST_CASE("uniform_distance") {
  const Mesh m = Mesh::interval(0, 1, 8);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  CHECK(uniform_distance(p, p) == doctest::Approx(0.0));
  const ExponentField q = build_field(m, ConstantExponent{2.25});
  CHECK(uniform_distance(p, q) == doctest::Approx(0.25));
  const ExponentField seq4 =
      build_sequence(p, AdditiveRule{1.0}, {1, 2, 4}).field_at(4);
  CHECK(uniform_distance(p, seq4) == doctest::Approx(0.25));
  const Mesh m2 = Mesh::interval(0, 1, 16);
  const ExponentField r = build_field(m2, ConstantExponent{2.0});
  CHECK_THROWS_AS(uniform_distance(p, r), std::invalid_argument);
}

TEST_CASE("sequence class invariants for the spec example") {
  const Mesh m = Mesh::rectangle(0, 1, 0, 1, 4, 4);
  const ExponentField p = build_field(m, ConstantExponent{1.5});
  const ExponentSequence seq = build_sequence(p, AdditiveRule{0.25}, {1, 2, 4});
  CHECK(seq.p_I() == doctest::Approx(1.5));
  CHECK(seq.p_S() == doctest::Approx(1.75));
  CHECK(seq.p_I_star() == doctest::Approx(6.0));
  // additive family: sup distance is exactly delta / h
  for (int h : seq.h_list()) {
    CHECK(uniform_distance(seq.field_at(h), p) == doctest::Approx(0.25 / h));
    for (size_t i = 0; i < p.values().size(); ++i) {
      CHECK(seq.field_at(h).values()[i] >= p.values()[i]);
    }
  }
}

TEST_CASE("blend rule with q < p at a node is rejected") {
  const Mesh m = Mesh::interval(0, 1, 4);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  std::vector<double> q(m.node_count(), 2.5);
  q[2] = 1.9;  // below p
  CHECK_THROWS_AS(build_sequence(p, BlendRule{q}, {1, 2, 4}),
                  std::invalid_argument);
}

TEST_CASE("blend rule converges from above") {
  const Mesh m = Mesh::interval(0, 1, 4);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  const std::vector<double> q(m.node_count(), 3.0);
  const ExponentSequence seq = build_sequence(p, BlendRule{q}, {1, 2, 4, 8});
  CHECK(uniform_distance(seq.field_at(8), p) == doctest::Approx(0.125));
}

TEST_CASE("subcritical class bound is enforced in 2D and waived in 1D") {
  // p_I = 1.5 in 2D gives p_I* = 6; delta = 5 makes p_S = 6.5 > 6 at h = 1.
  const Mesh m2 = Mesh::rectangle(0, 1, 0, 1, 4, 4);
  const ExponentField p2 = build_field(m2, ConstantExponent{1.5});
  CHECK_THROWS_AS(build_sequence(p2, AdditiveRule{5.0}, {1, 2}),
                  std::invalid_argument);
  const Mesh m1 = Mesh::interval(0, 1, 4);
  const ExponentField p1 = build_field(m1, ConstantExponent{1.5});
  CHECK_NOTHROW(build_sequence(p1, AdditiveRule{5.0}, {1, 2}));
}

TEST_CASE("h_list must be sorted and positive") {
  const Mesh m = Mesh::interval(0, 1, 4);
  const ExponentField p = build_field(m, ConstantExponent{2.0});
  CHECK_THROWS_AS(build_sequence(p, AdditiveRule{1.0}, {4, 2, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_sequence(p, AdditiveRule{1.0}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_sequence(p, AdditiveRule{1.0}, {0, 1}),
                  std::invalid_argument);
}

TEST_CASE("sinusoidal family stays within its amplitude band") {
  const Mesh m = Mesh::interval(0, 1, 64);
  const ExponentField p = build_field(m, SinusoidalExponent{2.0, 0.25, 6.0});
  CHECK(p.p_minus() >= 1.75 - 1e-12);
  CHECK(p.p_plus() <= 2.25 + 1e-12);
  CHECK(p.logholder_L() > 0.0);
}

TEST_CASE("tabulated exponent round trip through CSV") {
  const Mesh m = Mesh::interval(0, 1, 4);
  const std::string path = "tab_exponent_test.csv";
  {
    std::ofstream out(path);
    out << "node_index,value\n";
    for (int i = 0; i < m.node_count(); ++i) {
      out << i << "," << (2.0 + 0.1 * i) << "\n";
    }
  }
  const TabulatedExponent tab = read_tabulated(path, m.node_count());
  const ExponentField p = build_field(m, tab);
  CHECK(p[0] == doctest::Approx(2.0));
  CHECK(p[4] == doctest::Approx(2.4));
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_tabulated("does_not_exist.csv", m.node_count()),
                  std::invalid_argument);
}

TEST_CASE("tabulated values must cover every node") {
  const Mesh m = Mesh::interval(0, 1, 4);
  CHECK_THROWS_AS(build_field(m, TabulatedExponent{{2.0, 2.0}}),
                  std::invalid_argument);
}
