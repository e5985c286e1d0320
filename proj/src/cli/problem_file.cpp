#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "ldcube/cli.hpp"
#include "ldcube/error.hpp"
#include "ldcube/model_client.hpp"

namespace ldcube::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InvalidArgument("problem file: " + path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!names.contains(key)) fail(path + "." + key, "unknown key");
  }
}

void require_keys(const json& obj, const std::string& path, std::initializer_list<const char*> required) {
  for (const char* key : required) {
    if (!obj.contains(key)) fail(path, std::string("missing required key '") + key + "'");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::size_t positive_integer(const json& v, const std::string& path) {
  const auto n = unsigned_integer(v, path);
  if (n == 0) fail(path, "must be positive");
  return static_cast<std::size_t>(n);
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Decomposition decomposition(const json& obj, const std::string& path) {
  if (!obj.contains("decomposition")) return Decomposition::Cholesky;
  const auto name = string(obj["decomposition"], path + ".decomposition");
  if (name == "cholesky") return Decomposition::Cholesky;
  if (name == "pca") return Decomposition::PCA;
  fail(path + ".decomposition", "expected \"cholesky\" or \"pca\"");
}

MeasureSpec parse_measure(const json& m, const std::string& path) {
  if (!m.is_object()) fail(path, "expected an object");
  require_keys(m, path, {"type"});
  const auto type = string(m["type"], path + ".type");
  if (type == "uniform") {
    only_keys(m, path, {"type", "lower", "upper"});
    require_keys(m, path, {"lower", "upper"});
    return UniformBox{vector(m["lower"], path + ".lower"), vector(m["upper"], path + ".upper")};
  }
  if (type == "gaussian") {
    only_keys(m, path, {"type", "mean", "covariance", "decomposition"});
    require_keys(m, path, {"mean", "covariance"});
    Gaussian g;
    g.mean = vector(m["mean"], path + ".mean");
    const auto& c = m["covariance"];
    if (!c.is_array() || c.size() != g.mean.size()) fail(path + ".covariance", "expected a d x d array");
    g.covariance = Matrix(g.mean.size(), g.mean.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto row = vector(c[i], path + ".covariance[" + std::to_string(i) + "]");
      if (row.size() != g.mean.size()) fail(path + ".covariance", "expected a d x d array");
      for (std::size_t j = 0; j < row.size(); ++j) g.covariance(i, j) = row[j];
    }
    g.decomposition = decomposition(m, path);
    return g;
  }
  if (type == "brownian") {
    only_keys(m, path, {"type", "times", "initial", "decomposition"});
    require_keys(m, path, {"times"});
    BrownianMotion b;
    b.times = vector(m["times"], path + ".times");
    if (m.contains("initial")) b.initial = number(m["initial"], path + ".initial");
    b.decomposition = decomposition(m, path);
    return b;
  }
  fail(path + ".type", "expected \"uniform\", \"gaussian\" or \"brownian\"");
}

RemoteModel parse_remote(const json& p) {
  only_keys(p, "problem", {"remote", "model", "workers", "timeout", "retries"});
  require_keys(p, "problem", {"remote", "model"});
  RemoteModel r;
  r.url = string(p["remote"], "problem.remote");
  r.model = string(p["model"], "problem.model");
  if (p.contains("workers")) r.workers = positive_integer(p["workers"], "problem.workers");
  if (p.contains("timeout")) {
    r.timeout = number(p["timeout"], "problem.timeout");
    if (!(r.timeout > 0)) fail("problem.timeout", "must be positive");
  }
  if (p.contains("retries")) r.retries = static_cast<unsigned>(unsigned_integer(p["retries"], "problem.retries"));
  return r;
}

}  // namespace

ProblemFile parse_problem_file(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("problem file is not valid JSON: ") + e.what());
  }
  only_keys(doc, "$", {"problem", "dimension", "measure", "criterion", "tolerances", "generator", "options"});
  require_keys(doc, "$", {"problem"});

  ProblemFile f;
  if (doc["problem"].is_string()) {
    f.problem = doc["problem"].get<std::string>();
  } else if (doc["problem"].is_object()) {
    f.remote = parse_remote(doc["problem"]);
  } else {
    fail("problem", "expected a catalogue label or a remote model object");
  }
  if (doc.contains("dimension")) f.dimension = positive_integer(doc["dimension"], "dimension");
  if (doc.contains("measure")) f.measure = parse_measure(doc["measure"], "measure");
  if (doc.contains("criterion")) {
    const auto c = string(doc["criterion"], "criterion");
    if (c == "replicated") {
      f.criterion = Criterion::Replicated;
    } else if (c == "fourier") {
      f.criterion = Criterion::Fourier;
    } else {
      fail("criterion", "expected \"replicated\" or \"fourier\"");
    }
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    only_keys(t, "tolerances", {"abs", "rel"});
    if (t.contains("abs")) f.tolerances.abs_tol = number(t["abs"], "tolerances.abs");
    if (t.contains("rel")) f.tolerances.rel_tol = number(t["rel"], "tolerances.rel");
  }
  if (doc.contains("generator")) {
    const auto& g = doc["generator"];
    only_keys(g, "generator", {"kind", "seed", "randomization"});
    if (g.contains("kind")) {
      f.kind = parse_generator_kind(string(g["kind"], "generator.kind"));
      if (!f.kind) fail("generator.kind", "expected \"lattice\", \"sobol\" or \"halton\"");
    }
    if (g.contains("seed")) f.seed = unsigned_integer(g["seed"], "generator.seed");
    if (g.contains("randomization")) {
      f.randomization = parse_randomization(string(g["randomization"], "generator.randomization"));
      if (!f.randomization) fail("generator.randomization", "unknown randomization");
    }
  }
  if (doc.contains("options")) {
    const auto& o = doc["options"];
    only_keys(o, "options", {"replicates", "n_init", "n_max", "confidence", "inflation", "band_lag",
                             "periodization", "direction_numbers", "generating_vector"});
    if (o.contains("replicates")) f.replicates = positive_integer(o["replicates"], "options.replicates");
    if (o.contains("n_init")) f.n_init = positive_integer(o["n_init"], "options.n_init");
    if (o.contains("n_max")) f.n_max = positive_integer(o["n_max"], "options.n_max");
    if (o.contains("confidence")) {
      f.confidence = number(o["confidence"], "options.confidence");
      if (!(f.confidence > 0 && f.confidence < 1)) fail("options.confidence", "must lie in (0, 1)");
    }
    if (o.contains("inflation")) {
      f.inflation = number(o["inflation"], "options.inflation");
      if (!(*f.inflation > 0)) fail("options.inflation", "must be positive");
    }
    if (o.contains("band_lag")) f.band_lag = static_cast<unsigned>(unsigned_integer(o["band_lag"], "options.band_lag"));
    if (o.contains("periodization")) {
      const auto p = string(o["periodization"], "options.periodization");
      if (p == "none") {
        f.periodization = Periodization::None;
      } else if (p == "baker") {
        f.periodization = Periodization::Baker;
      } else {
        fail("options.periodization", "expected \"none\" or \"baker\"");
      }
    }
    if (o.contains("direction_numbers")) f.direction_numbers = string(o["direction_numbers"], "options.direction_numbers");
    if (o.contains("generating_vector")) f.generating_vector = string(o["generating_vector"], "options.generating_vector");
  }
  f.tolerances.validate();
  return f;
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open problem file '" + path + "'");
  std::stringstream text;
  text << in.rdbuf();
  return parse_problem_file(text.str());
}

Problem build_problem(const ProblemFile& file) {
  if (file.remote) {
    ModelEndpoint endpoint;
    endpoint.base_url = file.remote->url;
    endpoint.model_name = file.remote->model;
    endpoint.timeout = file.remote->timeout;
    endpoint.max_concurrent_requests = file.remote->workers;
    endpoint.retry.retries = file.remote->retries;
    endpoint.validate();
    auto g = remote_integrand(endpoint);
    const std::size_t d = g->input_size();
    if (file.dimension != 0 && file.dimension != d) {
      throw InvalidArgument("dimension " + std::to_string(file.dimension) + " does not match model input size " +
                            std::to_string(d));
    }
    MeasureSpec measure = file.measure ? *file.measure
                          : file.remote->model == "beam" && d == beam_problem().dimension
                              ? beam_problem().measure
                              : MeasureSpec(UniformBox{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)});
    if (dimension(measure) != d) throw InvalidArgument("measure dimension does not match model input size");
    return {g, measure, d, std::nullopt, file.remote->model};
  }
  auto problem = builtin_problem(file.problem, file.dimension);
  if (file.measure) {
    if (dimension(*file.measure) != problem.dimension) {
      throw InvalidArgument("measure dimension " + std::to_string(dimension(*file.measure)) +
                            " does not match problem dimension " + std::to_string(problem.dimension));
    }
    problem.measure = *file.measure;
    problem.known_mean.reset();
  }
  return problem;
}

StoppingResult run_problem(const ProblemFile& file) {
  file.tolerances.validate();
  std::optional<DirectionNumberTable> directions;
  std::optional<LatticeGeneratingVector> vector;
  GeneratorTables tables;
  if (file.direction_numbers) {
    directions = load_direction_numbers(std::filesystem::path(*file.direction_numbers));
    tables.direction_numbers = &*directions;
  }
  if (file.generating_vector) {
    vector = load_generating_vector(std::filesystem::path(*file.generating_vector));
    tables.generating_vector = &*vector;
  }
  const auto problem = build_problem(file);

  if (file.criterion == Criterion::Replicated) {
    ReplicatedOptions o;
    if (file.kind) o.kind = *file.kind;
    o.randomization = file.randomization;
    o.replicates = file.replicates;
    o.n_init = file.n_init;
    o.n_max = file.n_max;
    o.confidence = file.confidence;
    if (file.inflation) o.inflation = *file.inflation;
    o.seed = file.seed;
    o.tables = tables;
    return integrate_replicated(problem, file.tolerances, o);
  }
  if (file.randomization && *file.randomization != Randomization::Shift) {
    throw InvalidArgument("the fourier criterion uses a shifted lattice; randomization must be \"shift\"");
  }
  FourierOptions o;
  if (file.kind) o.kind = *file.kind;
  o.n_init = file.n_init;
  o.n_max = file.n_max;
  if (file.inflation) o.inflation = *file.inflation;
  o.band_lag = file.band_lag;
  o.periodization = file.periodization;
  o.seed = file.seed;
  o.tables = tables;
  return integrate_fourier_lattice(problem, file.tolerances, o);
}

}  // namespace ldcube::cli
