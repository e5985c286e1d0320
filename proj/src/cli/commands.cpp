#include <CLI11.hpp>
#include <csignal>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <pthread.h>

#include "ldcube/beam.hpp"
#include "ldcube/cli.hpp"
#include "ldcube/error.hpp"
#include "ldcube/model_client.hpp"

namespace ldcube::cli {
namespace {

std::uint64_t seed_from_environment(std::uint64_t flag_seed) {
  const char* env = std::getenv("LDCUBE_SEED");
  if (!env || !*env) return flag_seed;
  std::uint64_t seed = 0;
  const std::string_view text(env);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidArgument("LDCUBE_SEED must be a non-negative integer, got '" + std::string(text) + "'");
  }
  return seed;
}

GeneratorKind kind_or_throw(const std::string& name) {
  const auto kind = parse_generator_kind(name);
  if (!kind) throw InvalidArgument("unknown generator kind '" + name + "' (lattice, sobol, halton)");
  return *kind;
}

Randomization randomization_or_throw(const std::string& name) {
  const auto r = parse_randomization(name);
  if (!r) {
    throw InvalidArgument("unknown randomization '" + name +
                          "' (none, shift, digital-shift, scramble, permutation)");
  }
  return *r;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  return out;
}

// ---------------------------------------------------------------------------

struct PointsArgs {
  std::string kind = "lattice";
  std::size_t dim = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t start = 0;
  std::string randomization;
  bool no_randomize = false;
  bool allow_unrandomized = false;
  std::string out;
  std::vector<std::size_t> prefix_sizes;
  std::string direction_numbers;
  std::string generating_vector;
};

int cmd_points(const PointsArgs& a, std::ostream& out) {
  GeneratorSpec spec;
  spec.kind = kind_or_throw(a.kind);
  spec.dimension = a.dim;
  spec.seed = seed_from_environment(a.seed);
  if (a.no_randomize && !a.randomization.empty()) {
    throw InvalidArgument("--no-randomize and --randomization are mutually exclusive");
  }
  spec.randomization = a.no_randomize           ? Randomization::None
                       : a.randomization.empty() ? default_randomization(spec.kind)
                                                 : randomization_or_throw(a.randomization);
  spec.allow_unrandomized = a.allow_unrandomized;
  if (!a.direction_numbers.empty() && spec.kind != GeneratorKind::Sobol) {
    throw InvalidArgument("--direction-numbers applies to --kind sobol only");
  }
  if (!a.generating_vector.empty() && spec.kind != GeneratorKind::Lattice) {
    throw InvalidArgument("--generating-vector applies to --kind lattice only");
  }
  if (!a.prefix_sizes.empty() && a.out.empty()) throw InvalidArgument("--prefix-sizes needs --out");
  for (auto size : a.prefix_sizes) {
    if (size > a.n) throw InvalidArgument("prefix size " + std::to_string(size) + " exceeds --n");
  }

  std::optional<Generator> generator;
  if (!a.direction_numbers.empty()) {
    generator.emplace(spec, load_direction_numbers(std::filesystem::path(a.direction_numbers)));
  } else if (!a.generating_vector.empty()) {
    generator.emplace(spec, load_generating_vector(std::filesystem::path(a.generating_vector)));
  } else {
    generator.emplace(spec);
  }
  const auto batch = generator->generate(a.start, a.n);

  if (a.out.empty()) {
    write_points_csv(out, batch.points);
    return kSuccess;
  }
  const std::filesystem::path path(a.out);
  auto file = open_output(path);
  write_points_csv(file, batch.points);
  for (auto size : a.prefix_sizes) {
    auto prefix_path = path;
    prefix_path.replace_filename(path.stem().string() + ".prefix" + std::to_string(size) + path.extension().string());
    Matrix prefix(size, batch.points.cols());
    std::copy_n(batch.points.values().begin(), prefix.values().size(), prefix.values().begin());
    auto prefix_file = open_output(prefix_path);
    write_points_csv(prefix_file, prefix);
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct IntegrateArgs {
  std::string file;
  std::string problem;
  std::size_t dim = 0;
  std::string criterion;
  double abs_tol = 0, rel_tol = 0;
  std::size_t replicates = 0, n_init = 0, n_max = 0;
  std::string kind, randomization;
  std::uint64_t seed = 0;
  std::string remote, model;
  std::size_t workers = 1;
  double timeout = 30;
  std::string direction_numbers, generating_vector;
};

int cmd_integrate(const IntegrateArgs& a, const CLI::App& app, std::ostream& out) {
  const auto given = [&](const char* name) { return app.count(name) > 0; };
  ProblemFile f = a.file.empty() ? ProblemFile{} : load_problem_file(a.file);
  if (given("--problem")) f.problem = a.problem;
  if (given("--dim")) f.dimension = a.dim;
  if (given("--criterion")) {
    if (a.criterion == "replicated") {
      f.criterion = Criterion::Replicated;
    } else if (a.criterion == "fourier") {
      f.criterion = Criterion::Fourier;
    } else {
      throw InvalidArgument("--criterion must be replicated or fourier");
    }
  }
  if (given("--abs-tol")) f.tolerances.abs_tol = a.abs_tol;
  if (given("--rel-tol")) f.tolerances.rel_tol = a.rel_tol;
  if (given("--replicates")) f.replicates = a.replicates;
  if (given("--n-init")) f.n_init = a.n_init;
  if (given("--n-max")) f.n_max = a.n_max;
  if (given("--kind")) f.kind = kind_or_throw(a.kind);
  if (given("--randomization")) f.randomization = randomization_or_throw(a.randomization);
  if (given("--seed")) f.seed = a.seed;
  f.seed = seed_from_environment(f.seed);
  if (given("--direction-numbers")) f.direction_numbers = a.direction_numbers;
  if (given("--generating-vector")) f.generating_vector = a.generating_vector;
  if (given("--remote") != given("--model")) throw InvalidArgument("--remote and --model go together");
  if (given("--remote")) f.remote = RemoteModel{a.remote, a.model, a.workers, a.timeout, 3};
  if (f.remote && given("--workers")) f.remote->workers = a.workers;
  if (f.remote && given("--timeout")) f.remote->timeout = a.timeout;

  const auto result = run_problem(f);
  write_result_json(out, f, result);
  return result.converged ? kSuccess : kBudgetExhausted;
}

// ---------------------------------------------------------------------------

struct ServeArgs {
  std::vector<std::string> models{"beam"};
  std::string host = "127.0.0.1";
  int port = 4242;
  double delay = 0;
  std::size_t nodes = 31;
};

Model model_for(const std::string& name, std::size_t nodes) {
  if (name == "beam") {
    BeamConfig config;
    config.nodes = nodes;
    return beam_model(config);
  }
  const auto problem = builtin_problem(name);
  const auto g = problem.integrand;
  return {name, g->input_size(), g->output_size(), [g](std::span<const double> x) {
            std::vector<double> y(g->output_size());
            g->evaluate_point(x, y);
            return y;
          }};
}

int cmd_serve(const ServeArgs& a, std::ostream& out) {
  std::vector<Model> models;
  for (const auto& name : a.models) models.push_back(model_for(name, a.nodes));
  ServerOptions options;
  options.host = a.host;
  options.port = a.port;
  options.delay = a.delay;

  // server threads inherit the mask, so only sigwait sees the signals
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  auto server = serve_models(std::move(models), options);
  out << "serving";
  for (const auto& name : a.models) out << ' ' << name;
  out << " on " << server->url() << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server->stop();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::vector<double> epsilons;
  std::vector<std::string> modes{"serial", "parallel"};
  std::size_t workers = 4;
  double delay = 0;
  std::uint64_t seed = 0;
  std::size_t n_init = 16;
  std::size_t n_max = std::size_t{1} << 20;
  std::string out;
  std::string summary;
};

int cmd_beam_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SweepOptions o;
  o.epsilons = a.epsilons;
  o.modes.clear();
  for (const auto& m : a.modes) {
    if (m == "serial") {
      o.modes.push_back(SweepMode::Serial);
    } else if (m == "parallel") {
      o.modes.push_back(SweepMode::Parallel);
    } else {
      throw InvalidArgument("--modes takes serial and/or parallel, got '" + m + "'");
    }
  }
  o.workers = a.workers;
  o.delay = a.delay;
  o.seed = seed_from_environment(a.seed);
  o.n_init = a.n_init;
  o.n_max = a.n_max;

  const auto summary = run_beam_sweep(o);
  if (a.out.empty()) {
    write_sweep_csv(out, summary.records);
  } else {
    auto file = open_output(a.out);
    write_sweep_csv(file, summary.records);
  }

  std::ostringstream text;
  text << "{\n  \"slopes\": {";
  for (std::size_t k = 0; k < o.modes.size(); ++k) {
    text << (k ? ", " : "") << '"' << (o.modes[k] == SweepMode::Serial ? "serial" : "parallel")
         << "\": " << (std::isfinite(summary.slopes[k]) ? format_double(summary.slopes[k]) : "null");
  }
  text << "},\n  \"records\": " << summary.records.size() << "\n}\n";
  if (a.summary.empty()) {
    err << text.str();
  } else {
    auto file = open_output(a.summary);
    file << text.str();
  }
  return kSuccess;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> default_sweep_epsilons() {
  std::vector<double> eps;
  for (int k = 3; k <= 10; ++k) eps.push_back(std::pow(10.0, -0.5 * k));
  return eps;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nan("");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : std::nan("");
}

SweepSummary run_beam_sweep(const SweepOptions& options) {
  const auto epsilons = options.epsilons.empty() ? default_sweep_epsilons() : options.epsilons;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0) || !std::isfinite(epsilons[k])) throw InvalidArgument("sweep tolerances must be positive");
    if (k > 0 && !(epsilons[k] < epsilons[k - 1])) {
      throw InvalidArgument("sweep tolerances must be strictly decreasing");
    }
  }
  if (options.modes.empty()) throw InvalidArgument("sweep needs at least one mode");
  if (options.workers == 0) throw InvalidArgument("sweep needs at least one worker");

  ServerOptions server_options;
  server_options.delay = options.delay;
  server_options.threads = options.workers + 2;
  auto server = serve_models({beam_model()}, server_options);

  std::vector<Problem> problems;
  for (auto mode : options.modes) {
    ModelEndpoint endpoint;
    endpoint.base_url = server->url();
    endpoint.model_name = "beam";
    endpoint.max_concurrent_requests = mode == SweepMode::Serial ? 1 : options.workers;
    auto problem = beam_problem();
    problem.integrand = remote_integrand(endpoint);
    problems.push_back(std::move(problem));
  }

  SweepSummary summary;
  for (double eps : epsilons) {
    for (std::size_t k = 0; k < options.modes.size(); ++k) {
      SweepRecord record;
      record.epsilon = eps;
      record.mode = options.modes[k];
      record.workers = record.mode == SweepMode::Serial ? 1 : options.workers;
      FourierOptions fourier;
      fourier.n_init = options.n_init;
      fourier.n_max = options.n_max;
      fourier.seed = options.seed;
      try {
        const auto result = integrate_fourier_lattice(problems[k], {eps, 0.0}, fourier);
        record.n_used = result.n_used;
        record.wall_time_seconds = result.evaluation_time;
        record.estimate = result.estimate.front();
        record.converged = result.converged;
      } catch (const Error& e) {
        record.estimate = std::nan("");
        record.error = e.what();
      }
      summary.records.push_back(record);
    }
  }

  for (auto mode : options.modes) {
    std::vector<double> x, y;
    for (const auto& r : summary.records) {
      if (r.mode != mode || !r.converged) continue;
      x.push_back(std::log(1.0 / r.epsilon));
      y.push_back(std::log(static_cast<double>(r.n_used)));
    }
    summary.slopes.push_back(least_squares_slope(x, y));
  }
  return summary;
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ldcube: low-discrepancy point sets, adaptive cubature and remote model evaluation"};
  app.require_subcommand(1);

  PointsArgs points;
  auto* p = app.add_subcommand("points", "Write a point set as CSV");
  p->add_option("--kind", points.kind, "lattice, sobol or halton")->capture_default_str();
  p->add_option("--dim", points.dim, "Dimension")->required()->check(CLI::PositiveNumber);
  p->add_option("--n", points.n, "Number of points")->required();
  p->add_option("--start", points.start, "Index of the first point")->capture_default_str();
  p->add_option("--seed", points.seed, "Randomization seed (LDCUBE_SEED overrides)")->capture_default_str();
  p->add_option("--randomization", points.randomization,
                "shift, digital-shift, scramble or permutation (default depends on --kind)");
  p->add_flag("--no-randomize", points.no_randomize, "Emit the unrandomized sequence");
  p->add_flag("--allow-unrandomized", points.allow_unrandomized, "Confirm --no-randomize");
  p->add_option("--out", points.out, "Output file (default stdout)");
  p->add_option("--prefix-sizes", points.prefix_sizes, "Also write these leading prefixes, e.g. 64,128,256")
      ->delimiter(',');
  p->add_option("--direction-numbers", points.direction_numbers, "Sobol' direction-number file (Joe-Kuo layout)");
  p->add_option("--generating-vector", points.generating_vector, "Lattice generating-vector file");

  IntegrateArgs integrate;
  auto* i = app.add_subcommand("integrate", "Estimate an expectation to a tolerance; prints JSON");
  i->add_option("file", integrate.file, "JSON problem file");
  i->add_option("--problem", integrate.problem, "Catalogue label: product, sum-squares, geometric-asian-call, beam");
  i->add_option("--dim", integrate.dim, "Problem dimension")->check(CLI::PositiveNumber);
  i->add_option("--criterion", integrate.criterion, "replicated or fourier");
  i->add_option("--abs-tol", integrate.abs_tol, "Absolute tolerance");
  i->add_option("--rel-tol", integrate.rel_tol, "Relative tolerance");
  i->add_option("--replicates", integrate.replicates, "Replications (replicated criterion)");
  i->add_option("--n-init", integrate.n_init, "Initial sample size (power of two)");
  i->add_option("--n-max", integrate.n_max, "Sample budget");
  i->add_option("--kind", integrate.kind, "Generator kind");
  i->add_option("--randomization", integrate.randomization, "Randomization");
  i->add_option("--seed", integrate.seed, "Seed (LDCUBE_SEED overrides)");
  i->add_option("--remote", integrate.remote, "Model server URL, e.g. http://127.0.0.1:4242");
  i->add_option("--model", integrate.model, "Model name on the server");
  i->add_option("--workers", integrate.workers, "Concurrent model requests")->check(CLI::PositiveNumber);
  i->add_option("--timeout", integrate.timeout, "Seconds per model request")->check(CLI::PositiveNumber);
  i->add_option("--direction-numbers", integrate.direction_numbers, "Sobol' direction-number file");
  i->add_option("--generating-vector", integrate.generating_vector, "Lattice generating-vector file");

  ServeArgs serve;
  auto* s = app.add_subcommand("serve", "Host models over HTTP until interrupted");
  s->add_option("--model", serve.models, "beam or a catalogue label (repeatable)")->capture_default_str();
  s->add_option("--host", serve.host, "Bind address")->capture_default_str();
  s->add_option("--port", serve.port, "Port (0 picks a free one)")->capture_default_str();
  s->add_option("--delay", serve.delay, "Seconds added to every evaluation")->capture_default_str();
  s->add_option("--nodes", serve.nodes, "Beam grid nodes")->capture_default_str();

  SweepArgs sweep;
  auto* b = app.add_subcommand("beam-sweep", "Tolerance sweep of the expected beam deflection; writes CSV");
  b->add_option("--epsilons", sweep.epsilons, "Strictly decreasing tolerances (default 10^-1.5 ... 10^-5)")
      ->delimiter(',');
  b->add_option("--modes", sweep.modes, "serial and/or parallel")->delimiter(',')->capture_default_str();
  b->add_option("--workers", sweep.workers, "Workers in parallel mode")->capture_default_str();
  b->add_option("--delay", sweep.delay, "Seconds of artificial model delay")->capture_default_str();
  b->add_option("--seed", sweep.seed, "Seed (LDCUBE_SEED overrides)")->capture_default_str();
  b->add_option("--n-init", sweep.n_init, "Initial sample size")->capture_default_str();
  b->add_option("--n-max", sweep.n_max, "Sample budget")->capture_default_str();
  b->add_option("--out", sweep.out, "CSV output file (default stdout)");
  b->add_option("--summary", sweep.summary, "JSON summary file (default stderr)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*p) return cmd_points(points, out);
    if (*i) return cmd_integrate(integrate, *i, out);
    if (*s) return cmd_serve(serve, out);
    if (*b) return cmd_beam_sweep(sweep, out, err);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << "error: " << e.what() << '\n';
    if (code == kUsage) err << "run with --help for usage\n";
    return code;
  }
  return kUsage;
}

}  // namespace ldcube::cli
