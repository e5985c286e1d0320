#pragma once

// Low-discrepancy point generators: extensible rank-1 lattices, Sobol'
// sequences and Halton sequences, each with a seeded randomization.
//
// Indices are 0-based. Lattice points are emitted in radical-inverse order
// so that every power-of-two prefix is itself a lattice; Sobol' points in
// Gray-code order. Output is a pure function of (spec, start, count).

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldcube/matrix.hpp"

namespace ldcube {

enum class GeneratorKind { Lattice, Sobol, Halton };

enum class Randomization {
  None,
  Shift,                     // lattice: x + delta mod 1
  DigitalShift,              // Sobol': XOR with a random 32-bit vector
  DigitalShiftPlusScramble,  // Sobol': linear matrix scramble, then digital shift
  Permutation,               // Halton: random digit permutations
};

std::string_view to_string(GeneratorKind kind);
std::string_view to_string(Randomization randomization);
std::optional<GeneratorKind> parse_generator_kind(std::string_view name);
std::optional<Randomization> parse_randomization(std::string_view name);

// Randomization used when the caller does not pick one.
Randomization default_randomization(GeneratorKind kind);
bool compatible(GeneratorKind kind, Randomization randomization);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Lattice;
  std::size_t dimension = 1;
  std::uint64_t seed = 0;
  Randomization randomization = Randomization::Shift;
  // Randomization::None is refused unless this is set.
  bool allow_unrandomized = false;

  // Spec with the default randomization for `kind`.
  static GeneratorSpec randomized(GeneratorKind kind, std::size_t dimension, std::uint64_t seed);
  static GeneratorSpec unrandomized(GeneratorKind kind, std::size_t dimension);
};

struct PointBatch {
  Matrix points;  // count x dimension, entries in [0, 1)
  std::uint64_t start_index = 0;

  std::size_t count() const { return points.rows(); }
  std::size_t dimension() const { return points.cols(); }
};

// ---------------------------------------------------------------------------
// Parameter tables

// Primitive polynomial and initial direction integers of one Sobol' coordinate.
struct SobolParameters {
  unsigned degree = 0;               // s
  std::uint32_t coefficients = 0;    // a: interior polynomial coefficients
  std::vector<std::uint32_t> initial;  // m_1..m_s, m_k odd and < 2^k
};

class DirectionNumberTable {
 public:
  static constexpr unsigned kMaxBits = 32;

  // `coordinates[0]` describes dimension 2; dimension 1 (van der Corput) is
  // implicit. Throws InvalidArgument when an entry violates the invariants.
  explicit DirectionNumberTable(std::vector<SobolParameters> coordinates);

  std::size_t max_dimension() const { return coordinates_.size() + 1; }

  // Parameters of 1-based `dimension` >= 2.
  const SobolParameters& parameters(std::size_t dimension) const;

  // v_1..v_32 of 1-based `dimension` as integers m_k * 2^(32-k).
  std::array<std::uint32_t, kMaxBits> direction_values(std::size_t dimension) const;

 private:
  std::vector<SobolParameters> coordinates_;
};

// Joe-Kuo text layout: a header line, then `d s a m_1 .. m_s` per dimension
// starting at d = 2. Errors are ParseError carrying the offending line.
DirectionNumberTable load_direction_numbers(std::istream& in);
DirectionNumberTable load_direction_numbers(const std::filesystem::path& path);

// Joe & Kuo new-joe-kuo-6.21201 (21201 dimensions).
const DirectionNumberTable& bundled_direction_numbers();

struct LatticeGeneratingVector {
  std::vector<std::uint32_t> z;  // odd
  unsigned max_log2_n = 0;

  std::size_t max_dimension() const { return z.size(); }
};

// First line max_log2_n, then one generating-vector component per line.
LatticeGeneratingVector load_generating_vector(std::istream& in);
LatticeGeneratingVector load_generating_vector(const std::filesystem::path& path);

// Kuo's lattice-33002-1024-1048576.9125: 9125 dimensions, n <= 2^20.
const LatticeGeneratingVector& bundled_generating_vector();

// First 1000 primes, the Halton bases.
const std::vector<std::uint32_t>& halton_bases();

// ---------------------------------------------------------------------------
// Primitive operations

// Bit reversal of `index` read as a binary fraction.
double radical_inverse_base2(std::uint32_t index);

// Raw 32-bit digits of unrandomized Sobol' point `index` (Gray-code order)
// for dimensions 1..dimension.
std::vector<std::uint32_t> sobol_raw(const DirectionNumberTable& table, std::uint64_t index,
                                     std::size_t dimension);

// Halton point `index`. With a permutation seed the digits of every
// coordinate go through seeded random permutations (one per digit position).
std::vector<double> halton_point(std::uint64_t index, std::size_t dimension,
                                 std::optional<std::uint64_t> permutation_seed = std::nullopt);

// ---------------------------------------------------------------------------
// Generators

class Generator {
 public:
  // Uses the bundled parameter tables.
  explicit Generator(const GeneratorSpec& spec);
  Generator(const GeneratorSpec& spec, const DirectionNumberTable& table);
  Generator(const GeneratorSpec& spec, const LatticeGeneratingVector& vector);

  const GeneratorSpec& spec() const { return spec_; }

  // Number of points the parameters support (start + count must not exceed it).
  std::uint64_t capacity() const { return capacity_; }

  PointBatch generate(std::uint64_t start_index, std::size_t count) const;

 private:
  void init_lattice(const LatticeGeneratingVector& vector);
  void init_sobol(const DirectionNumberTable& table);
  void init_halton();

  GeneratorSpec spec_;
  std::uint64_t capacity_ = 0;

  std::vector<std::uint32_t> z_;        // lattice
  std::vector<double> shift_;           // lattice
  std::vector<std::uint32_t> directions_;  // Sobol', 32 x d, scrambled when randomized
  std::vector<std::uint32_t> digital_shift_;
  std::vector<std::vector<std::uint16_t>> permutations_;  // Halton, per coordinate
  std::vector<unsigned> digits_;                           // Halton digit depth per coordinate
};

PointBatch generate(const GeneratorSpec& spec, std::uint64_t start_index, std::size_t count);

// Randomizes an unrandomized batch of `kind` points with the same seeded
// state a Generator would use, so
//   randomize(generate(unrandomized spec), r, seed) == generate(spec with r, seed).
PointBatch randomize(const PointBatch& batch, GeneratorKind kind, Randomization randomization,
                     std::uint64_t seed);

}  // namespace ldcube
