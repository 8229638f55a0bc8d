#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "magbloch/angles.hpp"
#include "magbloch/errors.hpp"
#include "magbloch/homology.hpp"

using namespace magbloch;

TEST_CASE("betti numbers and torsion") {
  SUBCASE("torus") {
    const auto h = homology(fixtures::torus().complex);
    CHECK(h.betti == std::array<std::size_t, 3>{1, 2, 1});
    CHECK(h.torsion[1].empty());
    CHECK(h.free_generators.size() == 2);
    CHECK(h.two_cycles.size() == 1);
  }
  SUBCASE("face a a") {
    const auto h = homology(fixtures::torsion().complex);
    CHECK(h.betti == std::array<std::size_t, 3>{1, 0, 0});
    CHECK(h.torsion[1] == IntVector{2});
    CHECK(h.torsion_generators.size() == 1);
    CHECK(h.two_cycles.empty());
  }
  SUBCASE("wedge of two circles") {
    const auto h = homology(fixtures::wedge(2).complex);
    CHECK(h.betti[1] == 2);
    CHECK(h.betti[2] == 0);
  }
  SUBCASE("lieb3 is a torus") {
    const auto h = homology(fixtures::lieb3().complex);
    CHECK(h.betti == std::array<std::size_t, 3>{1, 2, 1});
  }
  SUBCASE("two components") {
    Complex2 cx;
    cx.vertex_count = 3;
    cx.edges = {{0, 1, 1.0}};
    const auto h = homology(cx);
    CHECK(h.betti[0] == 2);
  }
}

TEST_CASE("Euler identity on every test complex") {
  std::vector<Complex2> all{fixtures::torus().complex, fixtures::torsion().complex, fixtures::wedge(3).complex,
                            fixtures::lieb3().complex, fixtures::chain().complex};
  const auto q = fixtures::torus();
  all.push_back(build_supercell(q.complex, q.covering, {{3, 2}, Boundary::periodic}).complex);
  all.push_back(build_supercell(q.complex, q.covering, {{3, 3}, Boundary::dirichlet}).complex);
  for (const auto& cx : all) {
    const auto h = homology(cx);
    CHECK(h.euler_cells() == h.euler_betti());
  }
}

TEST_CASE("generators are cycles and coordinates invert them") {
  const auto h = homology(fixtures::lieb3().complex);
  for (std::size_t i = 0; i < h.free_generators.size(); ++i) {
    CHECK(h.is_cycle(h.free_generators[i]));
    const auto c = cycle_coordinates(h, h.free_generators[i]);
    for (std::size_t j = 0; j < c.free.size(); ++j) CHECK(c.free[j] == (i == j ? 1 : 0));
  }
  const IntVector not_cycle{1, 0, 0, 0, 0};
  CHECK_THROWS_AS(cycle_coordinates(h, not_cycle), Error);
}

TEST_CASE("boundaries have zero coordinates") {
  const auto q = fixtures::lieb3();
  const auto h = homology(q.complex);
  for (std::size_t f = 0; f < q.complex.face_count(); ++f) {
    const auto c = cycle_coordinates(h, face_chain(q.complex, f));
    for (auto x : c.free) CHECK(x == 0);
  }
}

TEST_CASE("character evaluation") {
  SUBCASE("trivial character") {
    const auto h = homology(fixtures::torus().complex);
    const auto chi = trivial_character(h);
    CHECK(evaluate_character(chi, h, IntVector{3, -2}) == std::complex<double>(1.0, 0.0));
  }
  SUBCASE("angles (pi, 0) on a torus generator") {
    const auto h = homology(fixtures::torus().complex);
    const auto chi = make_character(h, {pi, 0.0});
    const auto value = evaluate_character(chi, h, h.free_generators[0]);
    CHECK(std::abs(value - std::complex<double>(-1.0, 0.0)) < 1e-15);
    const auto other = evaluate_character(chi, h, h.free_generators[1]);
    CHECK(other == std::complex<double>(1.0, 0.0));
  }
  SUBCASE("Z/2 torsion pairing by root-of-unity arithmetic") {
    const auto h = homology(fixtures::torsion().complex);
    const auto chi = make_character(h, {}, {1});
    // exp(2 pi i * index * n / order) by hand
    const auto a = evaluate_character(chi, h, IntVector{1});
    const auto aa = evaluate_character(chi, h, IntVector{2});
    CHECK(std::abs(a - std::polar(1.0, two_pi * 1 * 1 / 2.0)) < 1e-15);
    CHECK(std::abs(aa - std::complex<double>(1.0, 0.0)) < 1e-15);
  }
  SUBCASE("turns normalization") {
    const auto h = homology(fixtures::torus().complex);
    const auto a = make_character(h, {0.25, 0.5}, {}, PhaseNormalization::turns);
    const auto b = make_character(h, {pi / 2, pi});
    CHECK(a.approx_equal(b, 1e-15));
  }
}

TEST_CASE("group operations") {
  const auto h = homology(fixtures::torus().complex);
  const auto chi = make_character(h, {1.0, 2.5});
  CHECK(multiply(chi, inverse(chi)).is_trivial(1e-12));
  const auto t = homology(fixtures::torsion().complex);
  const auto s = make_character(t, {}, {1});
  CHECK(multiply(s, s).is_trivial());
  CHECK(component_of_character(s) == IntVector{1});
}

TEST_CASE("character groups") {
  SUBCASE("torus") {
    const auto g = character_group(homology(fixtures::torus().complex));
    CHECK(g.free_rank() == 2);
    CHECK(g.torsion().empty());
    CHECK(g.component_count() == 1);
  }
  SUBCASE("Z/2 has exactly two components") {
    const auto g = character_group(homology(fixtures::torsion().complex));
    CHECK(g.component_count() == 2);
    const auto comps = g.components();
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].torsion_indices == IntVector{0});
    CHECK(comps[1].torsion_indices == IntVector{1});
  }
  SUBCASE("wedge of three circles, grid 4") {
    const auto g = character_group(homology(fixtures::wedge(3).complex));
    CHECK(g.free_rank() == 3);
    CHECK(g.grid(4).size() == 64);
  }
  SUBCASE("sampling is seeded") {
    const auto g = character_group(homology(fixtures::torus().complex));
    const auto a = g.sample_uniform(5, 42);
    const auto b = g.sample_uniform(5, 42);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].angles == b[i].angles);
  }
}
