#include <charconv>
#include <fstream>
#include <sstream>

#include "ldcube/error.hpp"
#include "ldcube/sequences.hpp"

namespace ldcube {

namespace detail {
// Generated from data/ at configure time (bundled_tables.cpp.in).
extern const char* const kJoeKuoText;
extern const char* const kLatticeText;
}  // namespace detail

namespace {

std::vector<std::uint64_t> parse_integers(std::string_view line, std::size_t line_no) {
  std::vector<std::uint64_t> out;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    std::uint64_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc{} || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
      throw ParseError(line_no, "expected a non-negative integer in '" + std::string(line) + "'");
    }
    out.push_back(v);
    p = next;
  }
  return out;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return in;
}

}  // namespace

DirectionNumberTable::DirectionNumberTable(std::vector<SobolParameters> coordinates)
    : coordinates_(std::move(coordinates)) {
  for (std::size_t i = 0; i < coordinates_.size(); ++i) {
    const auto& c = coordinates_[i];
    const std::string where = "dimension " + std::to_string(i + 2) + ": ";
    if (c.degree == 0 || c.degree >= kMaxBits) throw InvalidArgument(where + "bad degree");
    if (c.initial.size() != c.degree) throw InvalidArgument(where + "need s initial values");
    if (c.coefficients >= (std::uint32_t{1} << (c.degree - 1))) {
      throw InvalidArgument(where + "coefficient a out of range");
    }
    for (std::size_t k = 0; k < c.initial.size(); ++k) {
      const std::uint64_t m = c.initial[k];
      if (m % 2 == 0) throw InvalidArgument(where + "m_" + std::to_string(k + 1) + " is even");
      if (m >= (std::uint64_t{1} << (k + 1))) {
        throw InvalidArgument(where + "m_" + std::to_string(k + 1) + " >= 2^" +
                              std::to_string(k + 1));
      }
    }
  }
}

const SobolParameters& DirectionNumberTable::parameters(std::size_t dimension) const {
  if (dimension < 2 || dimension > max_dimension()) {
    throw InvalidArgument("no Sobol' parameters for dimension " + std::to_string(dimension));
  }
  return coordinates_[dimension - 2];
}

std::array<std::uint32_t, DirectionNumberTable::kMaxBits> DirectionNumberTable::direction_values(
    std::size_t dimension) const {
  std::array<std::uint32_t, kMaxBits> v{};
  if (dimension == 1) {
    for (unsigned k = 0; k < kMaxBits; ++k) v[k] = std::uint32_t{1} << (kMaxBits - 1 - k);
    return v;
  }
  const auto& p = parameters(dimension);
  const unsigned s = p.degree;
  for (unsigned k = 0; k < s; ++k) v[k] = p.initial[k] << (kMaxBits - 1 - k);
  // v_k = v_{k-s} ^ (v_{k-s} >> s) ^ sum_{l=1}^{s-1} a_l v_{k-l}
  for (unsigned k = s; k < kMaxBits; ++k) {
    std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
    for (unsigned l = 1; l < s; ++l) {
      if ((p.coefficients >> (s - 1 - l)) & 1u) value ^= v[k - l];
    }
    v[k] = value;
  }
  return v;
}

DirectionNumberTable load_direction_numbers(std::istream& in) {
  std::vector<SobolParameters> coordinates;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    if (blank(line)) continue;
    const auto fields = parse_integers(line, line_no);
    if (fields.size() < 4) throw ParseError(line_no, "expected 'd s a m_1 ... m_s'");
    const std::size_t expected_dim = coordinates.size() + 2;
    if (fields[0] != expected_dim) {
      throw ParseError(line_no, "dimension " + std::to_string(fields[0]) + " out of sequence (expected " +
                                    std::to_string(expected_dim) + ")");
    }
    const std::uint64_t s = fields[1];
    if (s == 0 || s >= DirectionNumberTable::kMaxBits) {
      throw ParseError(line_no, "degree s = " + std::to_string(s) + " out of range");
    }
    if (fields.size() != 3 + s) {
      throw ParseError(line_no, "expected " + std::to_string(s) + " initial direction numbers, got " +
                                    std::to_string(fields.size() - 3));
    }
    if (fields[2] >= (std::uint64_t{1} << (s - 1))) {
      throw ParseError(line_no, "coefficient a = " + std::to_string(fields[2]) + " needs more than s-1 bits");
    }
    SobolParameters p;
    p.degree = static_cast<unsigned>(s);
    p.coefficients = static_cast<std::uint32_t>(fields[2]);
    for (std::size_t k = 0; k < s; ++k) {
      const std::uint64_t m = fields[3 + k];
      const std::string name = "m_" + std::to_string(k + 1) + " = " + std::to_string(m);
      if (m % 2 == 0) throw ParseError(line_no, name + " is not odd");
      if (m >= (std::uint64_t{1} << (k + 1))) {
        throw ParseError(line_no, name + " is not below 2^" + std::to_string(k + 1));
      }
      p.initial.push_back(static_cast<std::uint32_t>(m));
    }
    coordinates.push_back(std::move(p));
  }
  if (coordinates.empty()) throw ParseError(line_no, "no dimensions");
  return DirectionNumberTable(std::move(coordinates));
}

DirectionNumberTable load_direction_numbers(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_direction_numbers(in);
}

const DirectionNumberTable& bundled_direction_numbers() {
  static const DirectionNumberTable table = [] {
    std::istringstream in(detail::kJoeKuoText);
    return load_direction_numbers(in);
  }();
  return table;
}

LatticeGeneratingVector load_generating_vector(std::istream& in) {
  LatticeGeneratingVector out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto fields = parse_integers(line, line_no);
    if (fields.size() != 1) throw ParseError(line_no, "expected a single integer");
    if (!have_header) {
      if (fields[0] == 0 || fields[0] > 32) {
        throw ParseError(line_no, "max_log2_n must be in 1..32");
      }
      out.max_log2_n = static_cast<unsigned>(fields[0]);
      have_header = true;
      continue;
    }
    if (fields[0] % 2 == 0 || fields[0] > 0xffffffffu) {
      throw ParseError(line_no, "generating vector entry " + std::to_string(fields[0]) +
                                    " must be an odd 32-bit integer");
    }
    out.z.push_back(static_cast<std::uint32_t>(fields[0]));
  }
  if (!have_header) throw ParseError(line_no, "missing max_log2_n header");
  if (out.z.empty()) throw ParseError(line_no, "no dimensions");
  return out;
}

LatticeGeneratingVector load_generating_vector(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_generating_vector(in);
}

const LatticeGeneratingVector& bundled_generating_vector() {
  static const LatticeGeneratingVector vector = [] {
    std::istringstream in(detail::kLatticeText);
    return load_generating_vector(in);
  }();
  return vector;
}

const std::vector<std::uint32_t>& halton_bases() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<std::uint32_t> out;
    out.reserve(1000);
    for (std::uint32_t candidate = 2; out.size() < 1000; ++candidate) {
      bool prime = true;
      for (std::uint32_t p : out) {
        if (p * p > candidate) break;
        if (candidate % p == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(candidate);
    }
    return out;
  }();
  return primes;
}

}  // namespace ldcube
