#pragma once

// True measures on the integration domain T and the inverse-CDF maps
// (0,1)^d -> T that carry uniform points onto them. Every transform here
// has unit Jacobian weight: f(x) = g(Psi(x)).

#include <span>
#include <variant>
#include <vector>

#include "ldcube/matrix.hpp"
#include "ldcube/sequences.hpp"

namespace ldcube {

enum class Decomposition { Cholesky, PCA };

struct UniformBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct Gaussian {
  std::vector<double> mean;
  Matrix covariance;
  Decomposition decomposition = Decomposition::Cholesky;
};

// Discretely observed Brownian motion W(t_1), ..., W(t_d) started at `initial`.
struct BrownianMotion {
  std::vector<double> times;
  double initial = 0.0;
  Decomposition decomposition = Decomposition::Cholesky;
};

using MeasureSpec = std::variant<UniformBox, Gaussian, BrownianMotion>;

struct TransformedBatch {
  Matrix samples;  // n x d, values in T
  bool weight_is_unity = true;
};

// Standard normal quantile. Throws DomainError unless 0 < u < 1. Odd
// symmetry is exact: inverse_normal_cdf(1 - u) == -inverse_normal_cdf(u)
// whenever 1 - u is exact.
double inverse_normal_cdf(double u);

// Lower-triangular L with L L^T = covariance. Throws NotPositiveDefinite
// naming the first non-positive pivot.
Matrix cholesky_factor(const Matrix& covariance);

struct SymmetricEigen {
  std::vector<double> values;  // descending
  Matrix vectors;              // column k belongs to values[k]
};

// Cyclic Jacobi rotations; intended for matrices up to a few hundred rows.
SymmetricEigen symmetric_eigen(const Matrix& symmetric);

// A = V diag(sqrt(lambda)), principal components first.
Matrix pca_factor(const Matrix& covariance);

// Sigma_jk = min(t_j, t_k).
Matrix brownian_covariance(std::span<const double> times);

// A validated measure with its factorization computed once. Immutable and
// safe to share between threads.
class Measure {
 public:
  explicit Measure(MeasureSpec spec);

  const MeasureSpec& spec() const { return spec_; }
  std::size_t dimension() const { return dimension_; }

  // Mean vector and factor A (A A^T = covariance) for the Gaussian variants.
  const std::vector<double>& location() const { return location_; }
  const Matrix& factor() const { return factor_; }

  TransformedBatch transform(const PointBatch& batch) const;
  Matrix transform(const Matrix& uniforms) const;

 private:
  MeasureSpec spec_;
  std::size_t dimension_ = 0;
  std::vector<double> location_;
  std::vector<double> width_;  // uniform box
  Matrix factor_;
};

std::size_t dimension(const MeasureSpec& spec);

TransformedBatch transform(const PointBatch& batch, const MeasureSpec& measure);

}  // namespace ldcube
