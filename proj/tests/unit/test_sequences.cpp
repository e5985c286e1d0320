#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ldcube/error.hpp"
#include "ldcube/sequences.hpp"

using namespace ldcube;

namespace {

LatticeGeneratingVector small_vector() { return {{1u, 3u}, 20}; }

std::uint32_t digits_of(double x) { return static_cast<std::uint32_t>(x * 0x1p32); }

}  // namespace

TEST_CASE("radical inverse in base 2") {
  CHECK(radical_inverse_base2(0) == 0.0);
  CHECK(radical_inverse_base2(1) == 0.5);
  CHECK(radical_inverse_base2(2) == 0.25);
  CHECK(radical_inverse_base2(3) == 0.75);
  CHECK(radical_inverse_base2(6) == 0.375);
}

TEST_CASE("unrandomized lattice with z = (1, 3)") {
  Generator gen(GeneratorSpec::unrandomized(GeneratorKind::Lattice, 2), small_vector());
  const auto batch = gen.generate(0, 4);
  const double first[] = {0.0, 0.5, 0.25, 0.75};
  const double second[] = {0.0, 0.5, 0.75, 0.25};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(batch.points(i, 0) == first[i]);
    CHECK(batch.points(i, 1) == second[i]);
  }
}

TEST_CASE("bundled lattice starts with the van der Corput coordinate") {
  const auto& v = bundled_generating_vector();
  CHECK(v.max_log2_n == 20);
  CHECK(v.max_dimension() == 9125);
  CHECK(v.z[0] == 1u);
  CHECK(v.z[1] == 182667u);
}

TEST_CASE("shifted lattice is the unrandomized lattice plus the shift, mod 1") {
  const auto plain = generate(GeneratorSpec::unrandomized(GeneratorKind::Lattice, 2), 0, 64);
  GeneratorSpec spec{GeneratorKind::Lattice, 2, 1234, Randomization::Shift};
  const auto shifted = generate(spec, 0, 64);
  // point 0 of the plain lattice is the origin, so the first shifted point is the shift
  const double s0 = shifted.points(0, 0), s1 = shifted.points(0, 1);
  CHECK(s0 > 0.0);
  for (std::size_t i = 0; i < 64; ++i) {
    double a = plain.points(i, 0) + s0, b = plain.points(i, 1) + s1;
    if (a >= 1.0) a -= 1.0;
    if (b >= 1.0) b -= 1.0;
    CHECK(shifted.points(i, 0) == a);
    CHECK(shifted.points(i, 1) == b);
  }
}

TEST_CASE("Sobol' points against reference values") {
  // scipy.stats.qmc.Sobol(d=6, scramble=False), tests/oracles/sobol_oracle.py
  const double expected[8][6] = {
      {0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      {0.5, 0.5, 0.5, 0.5, 0.5, 0.5},
      {0.75, 0.25, 0.25, 0.25, 0.75, 0.75},
      {0.25, 0.75, 0.75, 0.75, 0.25, 0.25},
      {0.375, 0.375, 0.625, 0.875, 0.375, 0.125},
      {0.875, 0.875, 0.125, 0.375, 0.875, 0.625},
      {0.625, 0.125, 0.875, 0.625, 0.625, 0.875},
      {0.125, 0.625, 0.375, 0.125, 0.125, 0.375},
  };
  const auto batch = generate(GeneratorSpec::unrandomized(GeneratorKind::Sobol, 6), 0, 8);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(batch.points(i, j) == expected[i][j]);
  }

  const auto far = generate(GeneratorSpec::unrandomized(GeneratorKind::Sobol, 1111), 1000, 1);
  const double tail[] = {0.6904296875, 0.5771484375, 0.1142578125, 0.6123046875, 0.9892578125,
                         0.3701171875};
  for (std::size_t j = 0; j < 6; ++j) CHECK(far.points(0, 1105 + j) == tail[j]);
}

TEST_CASE("Sobol' index 0 is the origin and index 1 is all halves") {
  for (std::size_t d : {1u, 3u, 50u, 1111u}) {
    const auto raw0 = sobol_raw(bundled_direction_numbers(), 0, d);
    CHECK(std::all_of(raw0.begin(), raw0.end(), [](auto v) { return v == 0u; }));
  }
  const auto p = generate(GeneratorSpec::unrandomized(GeneratorKind::Sobol, 3), 1, 1);
  CHECK(p.points(0, 0) == 0.5);
  CHECK(p.points(0, 1) == 0.5);
  CHECK(p.points(0, 2) == 0.5);
}

TEST_CASE("sobol_raw: the first coordinate of 2^m points is a permutation of k 2^-m") {
  const auto& table = bundled_direction_numbers();
  for (unsigned m = 1; m <= 12; ++m) {
    const std::uint64_t n = std::uint64_t{1} << m;
    std::set<std::uint32_t> seen;
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto raw = sobol_raw(table, i, 1);
      CHECK(raw[0] % (std::uint32_t{1} << (32 - m)) == 0);
      seen.insert(raw[0] >> (32 - m));
    }
    CHECK(seen.size() == n);
  }
}

TEST_CASE("sobol_raw: consecutive indices differ by exactly one direction value") {
  const auto& table = bundled_direction_numbers();
  const std::size_t d = 8;
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto a = sobol_raw(table, i, d);
    const auto b = sobol_raw(table, i + 1, d);
    const auto bit = static_cast<std::size_t>(std::countr_zero(i + 1));
    for (std::size_t j = 0; j < d; ++j) {
      CHECK((a[j] ^ b[j]) == table.direction_values(j + 1)[bit]);
    }
  }
  CHECK_THROWS_AS(sobol_raw(table, std::uint64_t{1} << 32, 1), CapacityError);
}

TEST_CASE("digital shift XORs a fixed vector; the first point is the shift itself") {
  GeneratorSpec spec{GeneratorKind::Sobol, 5, 99, Randomization::DigitalShift};
  const auto shifted = generate(spec, 0, 32);
  const auto plain = generate(GeneratorSpec::unrandomized(GeneratorKind::Sobol, 5), 0, 32);
  for (std::size_t j = 0; j < 5; ++j) {
    const std::uint32_t shift = digits_of(shifted.points(0, j));
    CHECK(shift != 0u);
    for (std::size_t i = 0; i < 32; ++i) {
      CHECK((digits_of(shifted.points(i, j)) ^ shift) == digits_of(plain.points(i, j)));
    }
  }
}

TEST_CASE("different seeds give different first points") {
  for (auto kind : {GeneratorKind::Lattice, GeneratorKind::Sobol, GeneratorKind::Halton}) {
    std::set<std::vector<double>> firsts;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto b = generate(GeneratorSpec::randomized(kind, 3, seed), 0, 1);
      firsts.insert({b.points(0, 0), b.points(0, 1), b.points(0, 2)});
    }
    CHECK(firsts.size() == 100);
  }
}

TEST_CASE("Halton points") {
  CHECK(halton_point(0, 4) == std::vector<double>{0.0, 0.0, 0.0, 0.0});
  CHECK(halton_point(1, 2) == std::vector<double>{0.5, 1.0 / 3.0});
  CHECK(halton_point(2, 2) == std::vector<double>{0.25, 2.0 / 3.0});
  CHECK(halton_bases().size() == 1000);
  CHECK(halton_bases().back() == 7919u);
  CHECK_THROWS_AS(halton_point(0, 1001), InvalidArgument);

  const auto a = halton_point(17, 10, 5);
  const auto b = halton_point(17, 10, 5);
  CHECK(a == b);
  CHECK(a != halton_point(17, 10, 6));
  // generator and point routes agree
  const auto batch = generate(GeneratorSpec{GeneratorKind::Halton, 10, 5, Randomization::Permutation}, 17, 1);
  for (std::size_t j = 0; j < 10; ++j) CHECK(batch.points(0, j) == a[j]);
}

TEST_CASE("direction-number file parsing") {
  SUBCASE("first Joe-Kuo data line") {
    std::istringstream in("d       s       a       m_i\n2 1 0 1\n");
    const auto table = load_direction_numbers(in);
    CHECK(table.max_dimension() == 2);
    CHECK(table.parameters(2).degree == 1);
    CHECK(table.parameters(2).coefficients == 0);
    CHECK(table.parameters(2).initial == std::vector<std::uint32_t>{1});
  }
  SUBCASE("empty file") {
    std::istringstream in("");
    CHECK_THROWS_WITH_AS(load_direction_numbers(in), doctest::Contains("no dimensions"), ParseError);
  }
  SUBCASE("even m names the line") {
    std::istringstream in("header\n2 1 0 1\n3 2 1 1 4\n");
    try {
      load_direction_numbers(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("m_2 = 4 is not odd") != std::string::npos);
    }
  }
  SUBCASE("m_j >= 2^j") {
    std::istringstream in("header\n2 1 0 1\n3 2 1 1 5\n");
    CHECK_THROWS_WITH_AS(load_direction_numbers(in), doctest::Contains("line 3"), ParseError);
  }
  SUBCASE("malformed lines") {
    std::istringstream bad_count("header\n2 2 1 1\n");
    CHECK_THROWS_AS(load_direction_numbers(bad_count), ParseError);
    std::istringstream bad_token("header\n2 1 0 x\n");
    CHECK_THROWS_AS(load_direction_numbers(bad_token), ParseError);
    std::istringstream out_of_order("header\n3 1 0 1\n");
    CHECK_THROWS_AS(load_direction_numbers(out_of_order), ParseError);
  }
  SUBCASE("shipped file equals the bundled table") {
    const auto table = load_direction_numbers(std::filesystem::path(LDCUBE_DATA_DIR) / "new-joe-kuo-6.21201");
    const auto& bundled = bundled_direction_numbers();
    CHECK(table.max_dimension() == 21201);
    CHECK(bundled.max_dimension() == 21201);
    for (std::size_t d : {1u, 2u, 3u, 100u, 21201u}) {
      CHECK(table.direction_values(d) == bundled.direction_values(d));
    }
  }
}

TEST_CASE("direction values of the first dimensions") {
  const auto& t = bundled_direction_numbers();
  const auto v1 = t.direction_values(1);
  for (unsigned k = 0; k < 32; ++k) CHECK(v1[k] == (std::uint32_t{1} << (31 - k)));
  // dimension 2: s = 1, a = 0, m_1 = 1 gives m_k = 2 m_{k-1} xor m_{k-1}
  const auto v2 = t.direction_values(2);
  CHECK(v2[0] == 0x80000000u);
  CHECK(v2[1] == 0xC0000000u);
  CHECK(v2[2] == 0xA0000000u);
  CHECK(v2[3] == 0xF0000000u);
}

TEST_CASE("generating-vector file parsing") {
  std::istringstream ok("4\n1\n3\n\n5\n");
  const auto v = load_generating_vector(ok);
  CHECK(v.max_log2_n == 4);
  CHECK(v.z == std::vector<std::uint32_t>{1, 3, 5});
  std::istringstream even("4\n1\n4\n");
  CHECK_THROWS_WITH_AS(load_generating_vector(even), doctest::Contains("line 3"), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(load_generating_vector(empty), ParseError);

  Generator small(GeneratorSpec::randomized(GeneratorKind::Lattice, 3, 1), v);
  CHECK(small.capacity() == 16);
  CHECK_NOTHROW(small.generate(0, 16));
  CHECK_THROWS_AS(small.generate(8, 9), CapacityError);
  CHECK_THROWS_AS(Generator(GeneratorSpec::randomized(GeneratorKind::Lattice, 4, 1), v), InvalidArgument);
}

TEST_CASE("policy and compatibility errors") {
  GeneratorSpec refused{GeneratorKind::Sobol, 2, 0, Randomization::None, false};
  CHECK_THROWS_AS(Generator{refused}, PolicyError);
  GeneratorSpec mismatched{GeneratorKind::Lattice, 2, 0, Randomization::DigitalShift, false};
  CHECK_THROWS_AS(Generator{mismatched}, IncompatibleRandomization);
  GeneratorSpec halton_shift{GeneratorKind::Halton, 2, 0, Randomization::Shift, false};
  CHECK_THROWS_AS(Generator{halton_shift}, IncompatibleRandomization);
  CHECK_THROWS_AS(Generator(GeneratorSpec::randomized(GeneratorKind::Sobol, 21202, 0)), InvalidArgument);
  CHECK_THROWS_AS(Generator(GeneratorSpec::randomized(GeneratorKind::Lattice, 9126, 0)), InvalidArgument);
  CHECK_THROWS_AS(generate(GeneratorSpec::randomized(GeneratorKind::Lattice, 1, 0), (1u << 20) - 1, 2),
                  CapacityError);
  CHECK_THROWS_AS(randomize(generate(GeneratorSpec::unrandomized(GeneratorKind::Sobol, 1), 0, 2),
                            GeneratorKind::Sobol, Randomization::Shift, 1),
                  IncompatibleRandomization);
}

TEST_CASE("names round-trip") {
  for (auto k : {GeneratorKind::Lattice, GeneratorKind::Sobol, GeneratorKind::Halton}) {
    CHECK(parse_generator_kind(to_string(k)) == k);
  }
  for (auto r : {Randomization::None, Randomization::Shift, Randomization::DigitalShift,
                 Randomization::DigitalShiftPlusScramble, Randomization::Permutation}) {
    CHECK(parse_randomization(to_string(r)) == r);
  }
  CHECK_FALSE(parse_generator_kind("niederreiter").has_value());
}
