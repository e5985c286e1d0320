#include <bit>
#include <cmath>

#include "ldcube/error.hpp"
#include "ldcube/sequences.hpp"
#include "ldcube/simd/kernels.hpp"
#include "randomization.hpp"

namespace ldcube {
namespace {

constexpr std::uint64_t kHaltonCapacity = std::uint64_t{1} << 53;

std::uint32_t reverse_bits(std::uint32_t x) {
  x = ((x >> 1) & 0x55555555u) | ((x & 0x55555555u) << 1);
  x = ((x >> 2) & 0x33333333u) | ((x & 0x33333333u) << 2);
  x = ((x >> 4) & 0x0f0f0f0fu) | ((x & 0x0f0f0f0fu) << 4);
  x = ((x >> 8) & 0x00ff00ffu) | ((x & 0x00ff00ffu) << 8);
  return (x >> 16) | (x << 16);
}

void check_range(std::uint64_t start, std::size_t count, std::uint64_t capacity) {
  if (start > capacity || count > capacity - start) {
    throw CapacityError("points [" + std::to_string(start) + ", " +
                        std::to_string(start + count) + ") exceed generator capacity " +
                        std::to_string(capacity));
  }
}

void check_policy(const GeneratorSpec& spec) {
  if (spec.dimension == 0) throw InvalidArgument("dimension must be at least 1");
  if (spec.randomization == Randomization::None) {
    if (!spec.allow_unrandomized) {
      throw PolicyError(
          "unrandomized low-discrepancy points were requested without opting in; randomize "
          "instead of dropping points (pass allow_unrandomized / --allow-unrandomized)");
    }
    return;
  }
  if (!compatible(spec.kind, spec.randomization)) {
    throw IncompatibleRandomization(std::string(to_string(spec.randomization)) +
                                    " randomization does not apply to " +
                                    std::string(to_string(spec.kind)) + " points");
  }
}

// Unrandomized Halton coordinate: digit-reversed integer over b^digits,
// exact for indices whose reversal fits in 53 bits.
double radical_inverse(std::uint64_t index, std::uint32_t base) {
  std::uint64_t reversed = 0;
  std::uint64_t denominator = 1;
  const std::uint64_t limit = (std::uint64_t{1} << 53) / base;
  std::uint64_t rest = index;
  while (rest != 0 && denominator <= limit) {
    reversed = reversed * base + rest % base;
    denominator *= base;
    rest /= base;
  }
  if (rest == 0) return static_cast<double>(reversed) / static_cast<double>(denominator);
  // Deep indices: Horner evaluation from the least significant digit outward.
  double acc = 0.0;
  double scale = 1.0 / static_cast<double>(base);
  for (std::uint64_t r = index; r != 0; r /= base) {
    acc += static_cast<double>(r % base) * scale;
    scale /= static_cast<double>(base);
  }
  return acc;
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Lattice:
      return "lattice";
    case GeneratorKind::Sobol:
      return "sobol";
    case GeneratorKind::Halton:
      return "halton";
  }
  return "?";
}

std::string_view to_string(Randomization randomization) {
  switch (randomization) {
    case Randomization::None:
      return "none";
    case Randomization::Shift:
      return "shift";
    case Randomization::DigitalShift:
      return "digital-shift";
    case Randomization::DigitalShiftPlusScramble:
      return "scramble";
    case Randomization::Permutation:
      return "permutation";
  }
  return "?";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  for (auto k : {GeneratorKind::Lattice, GeneratorKind::Sobol, GeneratorKind::Halton}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<Randomization> parse_randomization(std::string_view name) {
  for (auto r : {Randomization::None, Randomization::Shift, Randomization::DigitalShift,
                 Randomization::DigitalShiftPlusScramble, Randomization::Permutation}) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

Randomization default_randomization(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Lattice:
      return Randomization::Shift;
    case GeneratorKind::Sobol:
      return Randomization::DigitalShiftPlusScramble;
    case GeneratorKind::Halton:
      return Randomization::Permutation;
  }
  return Randomization::None;
}

bool compatible(GeneratorKind kind, Randomization randomization) {
  switch (randomization) {
    case Randomization::None:
      return true;
    case Randomization::Shift:
      return kind == GeneratorKind::Lattice;
    case Randomization::DigitalShift:
    case Randomization::DigitalShiftPlusScramble:
      return kind == GeneratorKind::Sobol;
    case Randomization::Permutation:
      return kind == GeneratorKind::Halton;
  }
  return false;
}

GeneratorSpec GeneratorSpec::randomized(GeneratorKind kind, std::size_t dimension,
                                        std::uint64_t seed) {
  return {kind, dimension, seed, default_randomization(kind), false};
}

GeneratorSpec GeneratorSpec::unrandomized(GeneratorKind kind, std::size_t dimension) {
  return {kind, dimension, 0, Randomization::None, true};
}

double radical_inverse_base2(std::uint32_t index) {
  return static_cast<double>(reverse_bits(index)) * 0x1p-32;
}

std::vector<std::uint32_t> sobol_raw(const DirectionNumberTable& table, std::uint64_t index,
                                     std::size_t dimension) {
  if (index >= (std::uint64_t{1} << DirectionNumberTable::kMaxBits)) {
    throw CapacityError("Sobol' index " + std::to_string(index) + " needs more than 32 bits");
  }
  if (dimension == 0 || dimension > table.max_dimension()) {
    throw InvalidArgument("dimension " + std::to_string(dimension) + " outside 1.." +
                          std::to_string(table.max_dimension()));
  }
  const std::uint64_t gray = index ^ (index >> 1);
  std::vector<std::uint32_t> raw(dimension, 0);
  for (std::size_t j = 0; j < dimension; ++j) {
    const auto v = table.direction_values(j + 1);
    for (unsigned b = 0; b < DirectionNumberTable::kMaxBits; ++b) {
      if ((gray >> b) & 1u) raw[j] ^= v[b];
    }
  }
  return raw;
}

std::vector<double> halton_point(std::uint64_t index, std::size_t dimension,
                                 std::optional<std::uint64_t> permutation_seed) {
  const auto& bases = halton_bases();
  if (dimension == 0 || dimension > bases.size()) {
    throw InvalidArgument("Halton dimension " + std::to_string(dimension) + " outside 1.." +
                          std::to_string(bases.size()));
  }
  if (index >= kHaltonCapacity) throw CapacityError("Halton index must be below 2^53");
  std::vector<double> point(dimension);
  if (!permutation_seed) {
    for (std::size_t j = 0; j < dimension; ++j) point[j] = radical_inverse(index, bases[j]);
    return point;
  }
  const auto perms = detail::draw_halton(dimension, *permutation_seed);
  for (std::size_t j = 0; j < dimension; ++j) {
    point[j] = detail::permuted_radical_inverse(index, bases[j], perms.depth[j],
                                                perms.table[j].data());
  }
  return point;
}

Generator::Generator(const GeneratorSpec& spec) : spec_(spec) {
  check_policy(spec_);
  switch (spec_.kind) {
    case GeneratorKind::Lattice:
      init_lattice(bundled_generating_vector());
      break;
    case GeneratorKind::Sobol:
      init_sobol(bundled_direction_numbers());
      break;
    case GeneratorKind::Halton:
      init_halton();
      break;
  }
}

Generator::Generator(const GeneratorSpec& spec, const DirectionNumberTable& table) : spec_(spec) {
  check_policy(spec_);
  if (spec_.kind != GeneratorKind::Sobol) {
    throw InvalidArgument("direction numbers only parameterize Sobol' generators");
  }
  init_sobol(table);
}

Generator::Generator(const GeneratorSpec& spec, const LatticeGeneratingVector& vector)
    : spec_(spec) {
  check_policy(spec_);
  if (spec_.kind != GeneratorKind::Lattice) {
    throw InvalidArgument("a generating vector only parameterizes lattice generators");
  }
  init_lattice(vector);
}

void Generator::init_lattice(const LatticeGeneratingVector& vector) {
  if (spec_.dimension > vector.max_dimension()) {
    throw InvalidArgument("lattice dimension " + std::to_string(spec_.dimension) +
                          " exceeds generating vector length " +
                          std::to_string(vector.max_dimension()));
  }
  capacity_ = std::uint64_t{1} << vector.max_log2_n;
  z_.assign(vector.z.begin(), vector.z.begin() + static_cast<std::ptrdiff_t>(spec_.dimension));
  if (spec_.randomization == Randomization::Shift) {
    shift_ = detail::draw_lattice_shift(spec_.dimension, spec_.seed);
  }
}

void Generator::init_sobol(const DirectionNumberTable& table) {
  const std::size_t d = spec_.dimension;
  if (d > table.max_dimension()) {
    throw InvalidArgument("Sobol' dimension " + std::to_string(d) +
                          " exceeds direction-number table (" +
                          std::to_string(table.max_dimension()) + ")");
  }
  capacity_ = std::uint64_t{1} << DirectionNumberTable::kMaxBits;
  directions_.assign(DirectionNumberTable::kMaxBits * d, 0);
  digital_shift_.assign(d, 0);
  detail::DigitalRandomization rnd;
  if (spec_.randomization != Randomization::None) {
    rnd = detail::draw_digital(d, spec_.seed,
                               spec_.randomization == Randomization::DigitalShiftPlusScramble);
    digital_shift_ = rnd.shift;
  }
  for (std::size_t j = 0; j < d; ++j) {
    const auto v = table.direction_values(j + 1);
    for (unsigned b = 0; b < DirectionNumberTable::kMaxBits; ++b) {
      directions_[b * d + j] = rnd.scramble.empty() ? v[b] : detail::apply_scramble(rnd.scramble[j], v[b]);
    }
  }
}

void Generator::init_halton() {
  if (spec_.dimension > halton_bases().size()) {
    throw InvalidArgument("Halton dimension " + std::to_string(spec_.dimension) +
                          " exceeds the prime table (" + std::to_string(halton_bases().size()) +
                          ")");
  }
  capacity_ = kHaltonCapacity;
  if (spec_.randomization == Randomization::Permutation) {
    auto perms = detail::draw_halton(spec_.dimension, spec_.seed);
    permutations_ = std::move(perms.table);
    digits_ = std::move(perms.depth);
  }
}

PointBatch Generator::generate(std::uint64_t start_index, std::size_t count) const {
  check_range(start_index, count, capacity_);
  const std::size_t d = spec_.dimension;
  PointBatch batch{Matrix(count, d), start_index};
  if (count == 0) return batch;
  const auto& kernels = simd::active_kernels();
  switch (spec_.kind) {
    case GeneratorKind::Lattice: {
      std::vector<std::uint32_t> k(count);
      for (std::size_t i = 0; i < count; ++i) {
        k[i] = reverse_bits(static_cast<std::uint32_t>(start_index + i));
      }
      kernels.lattice_rows(k, z_, shift_, batch.points.values());
      break;
    }
    case GeneratorKind::Sobol: {
      // state of point `start_index`: XOR of the direction values selected by its Gray code
      const std::uint64_t gray = start_index ^ (start_index >> 1);
      std::vector<std::uint32_t> state(d, 0);
      for (unsigned b = 0; b < DirectionNumberTable::kMaxBits; ++b) {
        if ((gray >> b) & 1u) {
          for (std::size_t j = 0; j < d; ++j) state[j] ^= directions_[b * d + j];
        }
      }
      kernels.digital_rows(start_index, directions_, digital_shift_, state, batch.points.values());
      break;
    }
    case GeneratorKind::Halton: {
      const auto& bases = halton_bases();
      for (std::size_t i = 0; i < count; ++i) {
        auto row = batch.points.row(i);
        for (std::size_t j = 0; j < d; ++j) {
          row[j] = permutations_.empty()
                       ? radical_inverse(start_index + i, bases[j])
                       : detail::permuted_radical_inverse(start_index + i, bases[j], digits_[j],
                                                          permutations_[j].data());
        }
      }
      break;
    }
  }
  return batch;
}

PointBatch generate(const GeneratorSpec& spec, std::uint64_t start_index, std::size_t count) {
  return Generator(spec).generate(start_index, count);
}

PointBatch randomize(const PointBatch& batch, GeneratorKind kind, Randomization randomization,
                     std::uint64_t seed) {
  if (randomization == Randomization::None) return batch;
  if (!compatible(kind, randomization)) {
    throw IncompatibleRandomization(std::string(to_string(randomization)) +
                                    " randomization does not apply to " +
                                    std::string(to_string(kind)) + " points");
  }
  const std::size_t d = batch.dimension();
  PointBatch out{Matrix(batch.count(), d), batch.start_index};
  switch (randomization) {
    case Randomization::Shift: {
      const auto shift = detail::draw_lattice_shift(d, seed);
      for (std::size_t i = 0; i < batch.count(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          const double v = batch.points(i, j) + shift[j];
          out.points(i, j) = v >= 1.0 ? v - 1.0 : v;
        }
      }
      break;
    }
    case Randomization::DigitalShift:
    case Randomization::DigitalShiftPlusScramble: {
      const auto rnd =
          detail::draw_digital(d, seed, randomization == Randomization::DigitalShiftPlusScramble);
      for (std::size_t i = 0; i < batch.count(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          const double scaled = batch.points(i, j) * 0x1p32;
          auto digits = static_cast<std::uint32_t>(scaled);
          if (static_cast<double>(digits) != scaled) {
            throw InvalidArgument("point is not a 32-bit dyadic value; not an unrandomized digital point");
          }
          if (!rnd.scramble.empty()) digits = detail::apply_scramble(rnd.scramble[j], digits);
          out.points(i, j) = static_cast<double>(digits ^ rnd.shift[j]) * 0x1p-32;
        }
      }
      break;
    }
    case Randomization::Permutation: {
      const auto& bases = halton_bases();
      if (d > bases.size()) throw InvalidArgument("Halton dimension exceeds the prime table");
      const auto perms = detail::draw_halton(d, seed);
      for (std::size_t i = 0; i < batch.count(); ++i) {
        for (std::size_t j = 0; j < d; ++j) {
          out.points(i, j) = detail::permuted_radical_inverse(
              batch.start_index + i, bases[j], perms.depth[j], perms.table[j].data());
        }
      }
      break;
    }
    case Randomization::None:
      break;
  }
  return out;
}

}  // namespace ldcube
