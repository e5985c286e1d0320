#include <algorithm>
#include <cmath>
#include <string>

#include "ldcube/beam.hpp"
#include "ldcube/error.hpp"

namespace ldcube {
namespace {

// LU factors in band storage with room for the fill-in that row swaps
// introduce: row i keeps columns i - lower .. i + lower + upper.
struct BandLU {
  std::size_t n, lower, width;
  std::vector<double> data;
  std::vector<std::size_t> pivots;

  double& at(std::size_t i, std::size_t j) { return data[i * width + (j + lower - i)]; }
};

// Power-of-two row scales bringing every row's largest entry into (1/2, 1],
// so equilibration itself is exact and a unit row such as a Dirichlet
// condition keeps its pivot.
std::vector<double> row_scales(const BandedMatrix& a) {
  std::vector<double> scales(a.size(), 1.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double largest = 0.0;
    for (std::size_t j = i > a.lower() ? i - a.lower() : 0; j <= std::min(a.size() - 1, i + a.upper()); ++j) {
      largest = std::max(largest, std::fabs(a(i, j)));
    }
    if (largest > 0.0 && std::isfinite(largest)) {
      int exponent;
      const double fraction = std::frexp(largest, &exponent);
      scales[i] = std::ldexp(1.0, fraction == 0.5 ? 1 - exponent : -exponent);
    }
  }
  return scales;
}

BandLU factorize(const BandedMatrix& a, const std::vector<double>& scales) {
  const std::size_t n = a.size(), kl = a.lower(), ku = a.upper();
  BandLU lu{n, kl, 2 * kl + ku + 1, {}, std::vector<std::size_t>(n)};
  lu.data.assign(n * lu.width, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t first = i > kl ? i - kl : 0;
    const std::size_t last = std::min(n - 1, i + ku);
    for (std::size_t j = first; j <= last; ++j) lu.at(i, j) = a(i, j) * scales[i];
  }

  double largest = 0.0, smallest = INFINITY;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t row_end = std::min(n - 1, k + kl);
    const std::size_t col_end = std::min(n - 1, k + kl + ku);
    std::size_t p = k;
    for (std::size_t i = k + 1; i <= row_end; ++i) {
      if (std::fabs(lu.at(i, k)) > std::fabs(lu.at(p, k))) p = i;
    }
    lu.pivots[k] = p;
    if (p != k) {
      for (std::size_t j = k; j <= col_end; ++j) std::swap(lu.at(k, j), lu.at(p, j));
    }
    const double pivot = lu.at(k, k);
    largest = std::max(largest, std::fabs(pivot));
    smallest = std::min(smallest, std::fabs(pivot));
    if (pivot == 0.0 || !std::isfinite(pivot)) {
      throw SingularSystem("banded system is singular at column " + std::to_string(k) +
                           " (condition estimate: infinite)");
    }
    for (std::size_t i = k + 1; i <= row_end; ++i) {
      const double factor = lu.at(i, k) / pivot;
      lu.at(i, k) = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j <= col_end; ++j) lu.at(i, j) -= factor * lu.at(k, j);
    }
  }
  if (smallest <= largest * 1e-15) {
    throw SingularSystem("banded system is numerically singular (condition estimate " +
                         std::to_string(largest / smallest) + ")");
  }
  return lu;
}

void substitute(BandLU& lu, std::vector<double>& x) {
  const std::size_t n = lu.n, kl = lu.lower, span = lu.width - 1 - kl;
  for (std::size_t k = 0; k < n; ++k) {
    std::swap(x[k], x[lu.pivots[k]]);
    const std::size_t row_end = std::min(n - 1, k + kl);
    for (std::size_t i = k + 1; i <= row_end; ++i) x[i] -= lu.at(i, k) * x[k];
  }
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t col_end = std::min(n - 1, k + span);
    double s = x[k];
    for (std::size_t j = k + 1; j <= col_end; ++j) s -= lu.at(k, j) * x[j];
    x[k] = s / lu.at(k, k);
  }
}

std::vector<long double> residual(const BandedMatrix& a, std::span<const double> x,
                                  std::span<const double> b) {
  const std::size_t n = a.size();
  std::vector<long double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t first = i > a.lower() ? i - a.lower() : 0;
    const std::size_t last = std::min(n - 1, i + a.upper());
    long double s = b[i];
    for (std::size_t j = first; j <= last; ++j) {
      s -= static_cast<long double>(a(i, j)) * static_cast<long double>(x[j]);
    }
    r[i] = s;
  }
  return r;
}

}  // namespace

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), lower_(lower), upper_(upper), data_(n * (lower + upper + 1), 0.0) {
  if (n == 0) throw InvalidArgument("banded matrix must not be empty");
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (i >= n_ || j >= n_ || !in_band(i, j)) {
    throw InvalidArgument("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") lies outside the band");
  }
  return data_[i * (lower_ + upper_ + 1) + (j + lower_ - i)];
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_ || !in_band(i, j)) return 0.0;
  return data_[i * (lower_ + upper_ + 1) + (j + lower_ - i)];
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t first = i > lower_ ? i - lower_ : 0;
    const std::size_t last = std::min(n_ - 1, i + upper_);
    for (std::size_t j = first; j <= last; ++j) y[i] += (*this)(i, j) * x[j];
  }
  return y;
}

std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> b) {
  if (b.size() != a.size()) throw InvalidArgument("right-hand side has the wrong length");
  const auto scales = row_scales(a);
  auto lu = factorize(a, scales);
  std::vector<double> x(b.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = b[i] * scales[i];
  substitute(lu, x);
  for (int step = 0; step < 2; ++step) {
    const auto r = residual(a, x, b);
    std::vector<double> correction(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) correction[i] = static_cast<double>(r[i]) * scales[i];
    substitute(lu, correction);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += correction[i];
  }
  return x;
}

double residual_norm(const BandedMatrix& a, std::span<const double> x, std::span<const double> b) {
  long double s = 0.0L;
  for (long double r : residual(a, x, b)) s += r * r;
  return static_cast<double>(std::sqrt(s));
}

}  // namespace ldcube
