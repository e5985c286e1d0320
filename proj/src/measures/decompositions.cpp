#include <algorithm>
#include <cmath>
#include <numeric>

#include "ldcube/error.hpp"
#include "ldcube/measures.hpp"

namespace ldcube {
namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument(std::string(what) + " needs a non-empty square matrix");
  }
}

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

}  // namespace

Matrix cholesky_factor(const Matrix& covariance) {
  require_square(covariance, "Cholesky factorization");
  const std::size_t n = covariance.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = covariance(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(j);
    const double diag = std::sqrt(pivot);
    l(j, j) = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = covariance(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / diag;
    }
  }
  return l;
}

SymmetricEigen symmetric_eigen(const Matrix& symmetric) {
  require_square(symmetric, "eigen-decomposition");
  const std::size_t n = symmetric.rows();
  Matrix a = symmetric;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double scale = 0.0;
  for (double x : a.values()) scale = std::max(scale, std::fabs(x));
  const double tolerance = 1e-17 * std::max(scale, 1e-300) * static_cast<double>(n);

  for (int sweep = 0; sweep < 100 && off_diagonal_norm(a) > tolerance; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        // rotation zeroing a(p, q)
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
  SymmetricEigen out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Matrix pca_factor(const Matrix& covariance) {
  const auto eig = symmetric_eigen(covariance);
  const std::size_t n = covariance.rows();
  Matrix a(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(eig.values[k] > 0.0)) throw NotPositiveDefinite(k);
    const double root = std::sqrt(eig.values[k]);
    for (std::size_t i = 0; i < n; ++i) a(i, k) = eig.vectors(i, k) * root;
  }
  return a;
}

Matrix brownian_covariance(std::span<const double> times) {
  const std::size_t n = times.size();
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c(i, j) = std::min(times[i], times[j]);
  }
  return c;
}

}  // namespace ldcube
