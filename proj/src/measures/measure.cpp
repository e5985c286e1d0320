#include <cmath>
#include <string>

#include "ldcube/error.hpp"
#include "ldcube/measures.hpp"
#include "ldcube/simd/kernels.hpp"

namespace ldcube {
namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
  }
}

Matrix factorize(const Matrix& covariance, Decomposition decomposition) {
  return decomposition == Decomposition::Cholesky ? cholesky_factor(covariance)
                                                  : pca_factor(covariance);
}

void check_symmetric(const Matrix& c) {
  double scale = 0.0;
  for (double v : c.values()) scale = std::max(scale, std::fabs(v));
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (std::fabs(c(i, j) - c(j, i)) > 1e-12 * scale) {
        throw InvalidArgument("covariance is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
    }
  }
}

}  // namespace

std::size_t dimension(const MeasureSpec& spec) {
  return std::visit(Overloaded{[](const UniformBox& m) { return m.lower.size(); },
                               [](const Gaussian& m) { return m.mean.size(); },
                               [](const BrownianMotion& m) { return m.times.size(); }},
                    spec);
}

Measure::Measure(MeasureSpec spec) : spec_(std::move(spec)) {
  std::visit(
      Overloaded{
          [&](const UniformBox& m) {
            if (m.lower.empty() || m.lower.size() != m.upper.size()) {
              throw InvalidArgument("uniform box needs matching, non-empty lower and upper bounds");
            }
            require_finite(m.lower, "box bounds");
            require_finite(m.upper, "box bounds");
            location_ = m.lower;
            width_.resize(m.lower.size());
            for (std::size_t j = 0; j < m.lower.size(); ++j) {
              if (!(m.lower[j] < m.upper[j])) {
                throw InvalidArgument("box bound " + std::to_string(j) + " has lower >= upper");
              }
              width_[j] = m.upper[j] - m.lower[j];
            }
          },
          [&](const Gaussian& m) {
            if (m.mean.empty() || m.covariance.rows() != m.mean.size() ||
                m.covariance.cols() != m.mean.size()) {
              throw InvalidArgument("Gaussian needs a mean of length d and a d x d covariance");
            }
            require_finite(m.mean, "Gaussian mean");
            require_finite(m.covariance.values(), "Gaussian covariance");
            check_symmetric(m.covariance);
            location_ = m.mean;
            factor_ = factorize(m.covariance, m.decomposition);
          },
          [&](const BrownianMotion& m) {
            if (m.times.empty()) throw InvalidArgument("Brownian motion needs at least one time");
            require_finite(m.times, "Brownian motion times");
            if (!std::isfinite(m.initial)) throw InvalidArgument("Brownian initial value must be finite");
            for (std::size_t j = 0; j < m.times.size(); ++j) {
              const double previous = j == 0 ? 0.0 : m.times[j - 1];
              if (!(m.times[j] > previous)) {
                throw InvalidArgument("Brownian motion times must be positive and strictly increasing");
              }
            }
            location_.assign(m.times.size(), m.initial);
            factor_ = factorize(brownian_covariance(m.times), m.decomposition);
          }},
      spec_);
  dimension_ = location_.size();
}

Matrix Measure::transform(const Matrix& uniforms) const {
  if (uniforms.cols() != dimension_) {
    throw InvalidArgument("point dimension " + std::to_string(uniforms.cols()) +
                          " does not match measure dimension " + std::to_string(dimension_));
  }
  Matrix out(uniforms.rows(), dimension_);
  if (std::holds_alternative<UniformBox>(spec_)) {
    simd::active_kernels().affine_rows(uniforms.values(), location_, width_, out.values());
    return out;
  }
  std::vector<double> z(dimension_);
  for (std::size_t i = 0; i < uniforms.rows(); ++i) {
    const auto u = uniforms.row(i);
    for (std::size_t j = 0; j < dimension_; ++j) {
      if (!(u[j] > 0.0 && u[j] < 1.0)) {
        throw DomainError("point " + std::to_string(i) + ", coordinate " + std::to_string(j) +
                          " is " + std::to_string(u[j]) +
                          "; the normal quantile needs 0 < u < 1 (use a randomized point set)");
      }
      z[j] = inverse_normal_cdf(u[j]);
    }
    auto x = out.row(i);
    for (std::size_t r = 0; r < dimension_; ++r) {
      double s = location_[r];
      for (std::size_t k = 0; k < dimension_; ++k) s += factor_(r, k) * z[k];
      x[r] = s;
    }
  }
  return out;
}

TransformedBatch Measure::transform(const PointBatch& batch) const {
  return {transform(batch.points), true};
}

TransformedBatch transform(const PointBatch& batch, const MeasureSpec& measure) {
  return Measure(measure).transform(batch);
}

}  // namespace ldcube
