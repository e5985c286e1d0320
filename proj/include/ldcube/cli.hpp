#pragma once

// Command-line front end. The subcommands are thin layers over the library
// functions below, which the tests call directly.
//
// Exit codes: 0 success, 2 usage or schema error, 3 tolerance not met within
// the budget, 4 evaluation or transport failure.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ldcube/measures.hpp"
#include "ldcube/stopping.hpp"

namespace ldcube::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 2, kBudgetExhausted = 3, kEvaluationFailure = 4 };

// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& error);

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

// RFC 4180 CSV with header x1..xd.
void write_points_csv(std::ostream& out, const Matrix& points);

// ---------------------------------------------------------------------------
// Problem files

enum class Criterion { Replicated, Fourier };

struct RemoteModel {
  std::string url;
  std::string model;
  std::size_t workers = 1;
  double timeout = 30.0;
  unsigned retries = 3;
};

struct ProblemFile {
  std::string problem = "product";  // catalogue label; ignored when remote is set
  std::optional<RemoteModel> remote;
  std::size_t dimension = 0;  // 0 keeps the problem's default
  std::optional<MeasureSpec> measure;
  Criterion criterion = Criterion::Replicated;
  ToleranceSpec tolerances;

  std::optional<GeneratorKind> kind;  // default follows the criterion
  std::optional<Randomization> randomization;
  std::uint64_t seed = 0;

  std::size_t replicates = 16;
  std::size_t n_init = 256;
  std::size_t n_max = std::size_t{1} << 20;
  double confidence = 0.99;
  std::optional<double> inflation;  // default follows the criterion
  unsigned band_lag = 0;
  Periodization periodization = Periodization::Baker;

  std::optional<std::string> direction_numbers;  // table file paths
  std::optional<std::string> generating_vector;
};

// Parses and validates a problem document. Unknown keys, wrong types and
// out-of-range values raise InvalidArgument naming the JSON path.
ProblemFile parse_problem_file(std::string_view json_text);
ProblemFile load_problem_file(const std::string& path);

// Catalogue problem or remote model described by the file.
Problem build_problem(const ProblemFile& file);

// Runs the chosen stopping criterion on build_problem(file).
StoppingResult run_problem(const ProblemFile& file);

void write_result_json(std::ostream& out, const ProblemFile& file, const StoppingResult& result);

// ---------------------------------------------------------------------------
// Beam tolerance sweep

enum class SweepMode { Serial, Parallel };

struct SweepOptions {
  std::vector<double> epsilons;  // strictly decreasing; empty selects default_sweep_epsilons()
  std::vector<SweepMode> modes{SweepMode::Serial, SweepMode::Parallel};
  std::size_t workers = 4;  // parallel mode; serial mode uses one
  double delay = 0.0;       // seconds per model evaluation on the loopback server
  std::uint64_t seed = 0;
  std::size_t n_init = 16;
  std::size_t n_max = std::size_t{1} << 20;
};

struct SweepRecord {
  double epsilon = 0.0;
  std::size_t n_used = 0;
  double wall_time_seconds = 0.0;  // model evaluation only
  double estimate = 0.0;           // first output component
  bool converged = false;
  SweepMode mode = SweepMode::Serial;
  std::size_t workers = 1;
  std::string error;  // set when the run failed
};

struct SweepSummary {
  std::vector<SweepRecord> records;
  // Least-squares slope of log n_used against log(1/epsilon) over the
  // converged records of each mode, in the order of options.modes.
  std::vector<double> slopes;
};

// Half-decades from 10^-1.5 down to 10^-5.
std::vector<double> default_sweep_epsilons();

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

// Expected beam deflection at each epsilon and mode, evaluated through the
// model client against a loopback server. A failing run is recorded with
// converged = false and the sweep continues.
SweepSummary run_beam_sweep(const SweepOptions& options);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

// ---------------------------------------------------------------------------

// Entry point of the ldcube executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ldcube::cli
