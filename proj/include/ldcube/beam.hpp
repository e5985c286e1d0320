#pragma once

// Cantilevered Euler-Bernoulli beam with piecewise-constant log stiffness:
//   (exp(m(x)) u''(x))'' = g(x),  u(0) = u'(0) = 0,  u''(L) = u'''(L) = 0,
// discretized by finite differences on N equidistant nodes including both
// ends (h = L / (N - 1)).

#include <functional>
#include <span>
#include <vector>

#include "ldcube/integrands.hpp"

namespace ldcube {

struct BeamConfig {
  double length = 1.0;
  std::size_t nodes = 31;
  double load = 1.0;                          // constant distributed load
  std::function<double(double)> load_field;   // replaces `load` when set
  std::vector<double> breakpoints;            // empty: thirds of [0, L]

  std::vector<double> region_breakpoints() const;
  std::size_t regions() const { return region_breakpoints().size() + 1; }
  double load_at(double x) const { return load_field ? load_field(x) : load; }
  double spacing() const { return length / static_cast<double>(nodes - 1); }
};

// Throws InvalidArgument for N < 5, non-positive length, breakpoints outside
// (0, L) or not increasing, or a non-finite load at a node.
void validate(const BeamConfig& config);

std::vector<double> node_positions(const BeamConfig& config);

// Index of the stiffness region containing x; a breakpoint belongs to the
// region on its left.
std::size_t region_of(const BeamConfig& config, double x);

// Square matrix with `lower` sub- and `upper` super-diagonals.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return lower_; }
  std::size_t upper() const { return upper_; }
  bool in_band(std::size_t i, std::size_t j) const {
    return j + lower_ >= i && j <= i + upper_;
  }

  // Reference to an in-band entry.
  double& at(std::size_t i, std::size_t j);
  // Any entry; zero outside the band.
  double operator()(std::size_t i, std::size_t j) const;

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t n_, lower_, upper_;
  std::vector<double> data_;  // row-major, width lower + upper + 1
};

// Row-equilibrated Gaussian elimination with partial pivoting inside the
// band, followed by iterative refinement against an extended-precision
// residual. Throws SingularSystem with a pivot-ratio condition estimate.
std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> b);

// ||A x - b||_2, accumulated in extended precision.
double residual_norm(const BandedMatrix& a, std::span<const double> x, std::span<const double> b);

struct BeamSystem {
  BandedMatrix stiffness;    // K, bandwidth 2
  std::vector<double> load;  // g-hat; entry 0 is the Dirichlet value 0
};

// Row 0 enforces u_0 = 0. Rows i >= 1 apply the second difference to the
// moments w_j = exp(m(x_j)) (u_{j-1} - 2 u_j + u_{j+1}) / h^2, closed with the
// ghost value u_{-1} = u_1 (zero slope at the clamp), w_{N-1} = 0 (zero
// moment at the tip) and w_N = w_{N-2} (zero shear at the tip).
BeamSystem assemble_system(const BeamConfig& config, std::span<const double> log_stiffness);

std::vector<double> solve_deflection(const BeamConfig& config, std::span<const double> log_stiffness);

// q0 x^2 (x^2 - 4 L x + 6 L^2) / (24 EI)
double analytic_uniform_deflection(double ei, double q0, double length, double x);

// d = regions, measure U[1, 1.2]^d, q = N outputs (deflection at every node).
Problem beam_problem(const BeamConfig& config = {});

}  // namespace ldcube
