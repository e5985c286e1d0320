#include <cmath>
#include <string>

#include "ldcube/beam.hpp"
#include "ldcube/error.hpp"

namespace ldcube {

std::vector<double> BeamConfig::region_breakpoints() const {
  if (!breakpoints.empty()) return breakpoints;
  return {length / 3.0, 2.0 * length / 3.0};
}

void validate(const BeamConfig& config) {
  if (!(config.length > 0.0) || !std::isfinite(config.length)) {
    throw InvalidArgument("beam length must be positive");
  }
  if (config.nodes < 5) throw InvalidArgument("beam needs at least 5 nodes");
  const auto breaks = config.region_breakpoints();
  double previous = 0.0;
  for (double b : breaks) {
    if (!(b > previous && b < config.length)) {
      throw InvalidArgument("beam breakpoints must increase strictly inside (0, L)");
    }
    previous = b;
  }
  for (double x : node_positions(config)) {
    if (!std::isfinite(config.load_at(x))) {
      throw InvalidArgument("beam load is not finite at x = " + std::to_string(x));
    }
  }
}

std::vector<double> node_positions(const BeamConfig& config) {
  std::vector<double> x(config.nodes);
  const double h = config.spacing();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i) * h;
  x.back() = config.length;
  return x;
}

std::size_t region_of(const BeamConfig& config, double x) {
  std::size_t region = 0;
  for (double b : config.region_breakpoints()) {
    if (x > b) ++region;
  }
  return region;
}

BeamSystem assemble_system(const BeamConfig& config, std::span<const double> log_stiffness) {
  validate(config);
  if (log_stiffness.size() != config.regions()) {
    throw InvalidArgument("beam sample has " + std::to_string(log_stiffness.size()) +
                          " log-stiffness values for " + std::to_string(config.regions()) +
                          " regions");
  }
  for (double m : log_stiffness) {
    if (!std::isfinite(m)) throw InvalidArgument("log stiffness must be finite");
  }

  const std::size_t n = config.nodes;
  const double h2 = config.spacing() * config.spacing();
  const auto x = node_positions(config);
  std::vector<double> stiffness(n);
  for (std::size_t i = 0; i < n; ++i) stiffness[i] = std::exp(log_stiffness[region_of(config, x[i])]);

  BeamSystem system{BandedMatrix(n, 2, 2), std::vector<double>(n)};
  auto& k = system.stiffness;
  k.at(0, 0) = 1.0;

  // Adds c * w_j / h^2 to row i, expanding the moment w_j in the u unknowns.
  const auto add_moment = [&](std::size_t i, std::size_t j, double c) {
    if (j == n) j = n - 2;           // zero shear at the tip
    if (j == n - 1) return;          // zero moment at the tip
    const double e = c * stiffness[j] / (h2 * h2);
    if (j == 0) {                    // ghost u_{-1} = u_1
      k.at(i, 0) += -2.0 * e;
      k.at(i, 1) += 2.0 * e;
      return;
    }
    k.at(i, j - 1) += e;
    k.at(i, j) += -2.0 * e;
    k.at(i, j + 1) += e;
  };

  for (std::size_t i = 1; i < n; ++i) {
    add_moment(i, i - 1, 1.0);
    add_moment(i, i, -2.0);
    add_moment(i, i + 1, 1.0);
    system.load[i] = config.load_at(x[i]);
  }
  return system;
}

std::vector<double> solve_deflection(const BeamConfig& config, std::span<const double> log_stiffness) {
  const auto system = assemble_system(config, log_stiffness);
  return solve_banded(system.stiffness, system.load);
}

double analytic_uniform_deflection(double ei, double q0, double length, double x) {
  return q0 * x * x * (x * x - 4.0 * length * x + 6.0 * length * length) / (24.0 * ei);
}

Problem beam_problem(const BeamConfig& config) {
  validate(config);
  const std::size_t d = config.regions();
  auto integrand = make_integrand(d, config.nodes, [config](std::span<const double> m, std::span<double> out) {
    const auto u = solve_deflection(config, m);
    std::copy(u.begin(), u.end(), out.begin());
  });
  return {std::move(integrand), UniformBox{std::vector<double>(d, 1.0), std::vector<double>(d, 1.2)},
          d, std::nullopt, "beam"};
}

}  // namespace ldcube
