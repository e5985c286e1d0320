// Invariants of every generator/randomization pair, checked over seeded
// random configurations.

#include <cstring>
#include <random>
#include <set>
#include <thread>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "ldcube/sequences.hpp"

using namespace ldcube;

namespace {

struct Config {
  GeneratorKind kind;
  Randomization randomization;
};

const Config kConfigs[] = {
    {GeneratorKind::Lattice, Randomization::None},
    {GeneratorKind::Lattice, Randomization::Shift},
    {GeneratorKind::Sobol, Randomization::None},
    {GeneratorKind::Sobol, Randomization::DigitalShift},
    {GeneratorKind::Sobol, Randomization::DigitalShiftPlusScramble},
    {GeneratorKind::Halton, Randomization::None},
    {GeneratorKind::Halton, Randomization::Permutation},
};

GeneratorSpec spec_for(const Config& c, std::size_t d, std::uint64_t seed) {
  return {c.kind, d, seed, c.randomization, c.randomization == Randomization::None};
}

bool same_bits(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.values().data(), b.values().data(), a.values().size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("extensibility: generate(0, 2n) == generate(0, n) ++ generate(n, n)") {
  std::mt19937_64 rng(2024);
  for (const auto& c : kConfigs) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t d = 1 + rng() % 12;
      const std::size_t n = 1 + rng() % 300;
      const auto spec = spec_for(c, d, rng());
      Generator gen(spec);
      auto joined = gen.generate(0, n).points;
      joined.append_rows(gen.generate(n, n).points);
      CHECK(same_bits(joined, gen.generate(0, 2 * n).points));
      // arbitrary split points too
      const std::size_t cut = rng() % (2 * n);
      auto split = gen.generate(0, cut).points;
      split.append_rows(gen.generate(cut, 2 * n - cut).points);
      CHECK(same_bits(split, gen.generate(0, 2 * n).points));
    }
  }
}

TEST_CASE("points lie in [0, 1)") {
  std::mt19937_64 rng(7);
  for (const auto& c : kConfigs) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto batch = generate(spec_for(c, 1 + rng() % 20, rng()), rng() % 5000, 257);
      for (double v : batch.points.values()) CHECK((v >= 0.0 && v < 1.0));
    }
  }
}

TEST_CASE("determinism: identical specs give bitwise-identical batches") {
  for (const auto& c : kConfigs) {
    const auto spec = spec_for(c, 7, 31337);
    CHECK(same_bits(generate(spec, 100, 200).points, generate(spec, 100, 200).points));
  }
}

TEST_CASE("lattice exactness: each coordinate of 2^m points is {k 2^-m}") {
  const auto spec = GeneratorSpec::unrandomized(GeneratorKind::Lattice, 32);
  Generator gen(spec);
  for (unsigned m = 1; m <= 12; ++m) {
    const std::size_t n = std::size_t{1} << m;
    const auto batch = gen.generate(0, n);
    for (std::size_t j = 0; j < 32; ++j) {
      std::vector<bool> hit(n, false);
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double scaled = batch.points(i, j) * static_cast<double>(n);
        REQUIRE(scaled == std::floor(scaled));
        hit[static_cast<std::size_t>(scaled)] = true;
        sum += batch.points(i, j);
      }
      CHECK(std::all_of(hit.begin(), hit.end(), [](bool h) { return h; }));
      CHECK(sum / static_cast<double>(n) == (static_cast<double>(n) - 1.0) / (2.0 * static_cast<double>(n)));
    }
  }
}

TEST_CASE("shifted lattice block is a shifted copy of {k 2^-m}") {
  GeneratorSpec spec{GeneratorKind::Lattice, 4, 5, Randomization::Shift};
  const std::size_t n = 256;
  const auto batch = generate(spec, 0, n);
  for (std::size_t j = 0; j < 4; ++j) {
    const double shift = batch.points(0, j);
    std::set<long> cells;
    for (std::size_t i = 0; i < n; ++i) {
      double back = batch.points(i, j) - shift;
      if (back < 0.0) back += 1.0;
      cells.insert(std::lround(back * static_cast<double>(n)) % static_cast<long>(n));
    }
    CHECK(cells.size() == n);
  }
}

TEST_CASE("digital stratification survives digital shift and scramble") {
  for (auto r : {Randomization::None, Randomization::DigitalShift, Randomization::DigitalShiftPlusScramble}) {
    const GeneratorSpec spec{GeneratorKind::Sobol, 10, 77, r, true};
    Generator gen(spec);
    const auto batch = gen.generate(0, 4096);
    for (unsigned m = 1; m <= 12; ++m) {
      const std::size_t n = std::size_t{1} << m;
      for (std::size_t j = 0; j < 10; ++j) {
        std::vector<int> bins(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          ++bins[static_cast<std::size_t>(batch.points(i, j) * static_cast<double>(n))];
        }
        CHECK(std::all_of(bins.begin(), bins.end(), [](int c) { return c == 1; }));
      }
    }
  }
}

TEST_CASE("randomized first points never have a zero coordinate") {
  for (const auto& c : kConfigs) {
    if (c.randomization == Randomization::None) continue;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto first = generate(spec_for(c, 16, seed), 0, 1);
      for (double v : first.points.values()) CHECK(v > 0.0);
    }
  }
}

TEST_CASE("randomize() reproduces the generator's randomization") {
  std::mt19937_64 rng(99);
  for (const auto& c : kConfigs) {
    if (c.randomization == Randomization::None) continue;
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t d = 1 + rng() % 9;
      const std::uint64_t seed = rng();
      const std::uint64_t start = rng() % 1000;
      const auto plain = generate(GeneratorSpec::unrandomized(c.kind, d), start, 64);
      const auto via_randomize = randomize(plain, c.kind, c.randomization, seed);
      const auto direct = generate(spec_for(c, d, seed), start, 64);
      CHECK(via_randomize.start_index == start);
      CHECK(same_bits(via_randomize.points, direct.points));
    }
  }
}

TEST_CASE("generators are safe to share across threads") {
  Generator gen(GeneratorSpec::randomized(GeneratorKind::Sobol, 6, 3));
  const auto reference = gen.generate(0, 2048);
  std::vector<Matrix> results(4);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] { results[t] = gen.generate(0, 2048).points; });
  }
  for (auto& th : threads) th.join();
  for (const auto& r : results) CHECK(same_bits(r, reference.points));
}
