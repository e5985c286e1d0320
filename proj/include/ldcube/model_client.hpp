#pragma once

// Remote model evaluation over a JSON-over-HTTP protocol (a subset of
// UM-Bridge), plus an in-process server hosting models for tests and demos.
//
//   POST /Evaluate        {"name", "input": [[x...]], "config": {}} -> {"output": [[y...]]}
//   POST /GetInputSizes   {"name"} -> {"inputSizes": [d]}
//   POST /GetOutputSizes  {"name"} -> {"outputSizes": [q]}
//
// The server answers the size queries on GET as well. One point per request.

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ldcube/beam.hpp"
#include "ldcube/integrands.hpp"
#include "ldcube/matrix.hpp"

namespace ldcube {

struct RetryPolicy {
  unsigned retries = 3;    // attempts after the first
  double backoff = 0.05;   // seconds before the first retry, doubled each time
};

struct ModelEndpoint {
  std::string base_url;  // http://host:port[/prefix]
  std::string model_name;
  double timeout = 30.0;  // seconds, per request
  std::size_t max_concurrent_requests = 1;
  RetryPolicy retry;

  void validate() const;
};

struct ModelInfo {
  std::vector<std::size_t> input_sizes;
  std::vector<std::size_t> output_sizes;
};

// Throws TransportError when the server cannot be reached and ProtocolError
// (quoting the payload) when a response is malformed.
ModelInfo fetch_info(const ModelEndpoint& endpoint);

// Row i of the result is the model output for input row i, whatever order
// the requests complete in. Connection failures and 5xx responses are
// retried; a row that still fails aborts the batch with EvaluationError
// naming that row. An empty input returns an empty matrix without requests.
Matrix evaluate_remote(const ModelEndpoint& endpoint, const Matrix& inputs);

// Integrand backed by evaluate_remote; sizes come from fetch_info.
IntegrandPtr remote_integrand(const ModelEndpoint& endpoint);

namespace protocol {

std::string evaluate_request(const std::string& model, std::span<const double> input);
std::vector<double> parse_evaluate_response(const std::string& body);
std::string sizes_request(const std::string& model);
std::vector<std::size_t> parse_sizes_response(const std::string& body, const std::string& key);

}  // namespace protocol

// A pure function from one input vector to one output vector.
struct Model {
  std::string name;
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  std::function<std::vector<double>(std::span<const double>)> evaluate;
};

// Deflection at the N nodes for a vector of region log-stiffnesses.
Model beam_model(const BeamConfig& config = {});

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;                 // 0 picks a free port
  double delay = 0.0;           // seconds added to every Evaluate
  double delay_jitter = 0.0;    // plus uniform [0, jitter) seconds
  std::uint64_t jitter_seed = 0;
  unsigned fail_first = 0;      // the first k Evaluate requests get HTTP 503
  std::size_t threads = 8;
};

class ModelServer {
 public:
  ~ModelServer();
  ModelServer(const ModelServer&) = delete;
  ModelServer& operator=(const ModelServer&) = delete;

  int port() const;
  std::string url() const;
  std::size_t evaluate_requests() const;

  // Stops accepting connections and joins the listener; idempotent.
  void stop();

 private:
  friend std::unique_ptr<ModelServer> serve_models(std::vector<Model>, const ServerOptions&);
  struct Impl;
  explicit ModelServer(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

// Binds and starts serving on a background thread. Throws TransportError
// when the port cannot be bound.
std::unique_ptr<ModelServer> serve_models(std::vector<Model> models, const ServerOptions& options = {});

}  // namespace ldcube
