#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <regex>
#include <thread>

#include "ldcube/error.hpp"
#include "ldcube/model_client.hpp"

namespace ldcube {
namespace {

struct Target {
  std::string origin;  // scheme://host:port
  std::string prefix;  // path prefix, no trailing slash
};

Target split_url(const std::string& url) {
  static const std::regex pattern(R"(^(http://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern)) {
    throw InvalidArgument("model URL must look like http://host:port, got '" + url + "'");
  }
  std::string prefix = m[2].str();
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {m[1].str(), prefix};
}

std::unique_ptr<httplib::Client> connect(const ModelEndpoint& endpoint, const Target& target) {
  auto client = std::make_unique<httplib::Client>(target.origin);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(endpoint.timeout));
  client->set_connection_timeout(timeout);
  client->set_read_timeout(timeout);
  client->set_write_timeout(timeout);
  client->set_keep_alive(true);
  client->set_tcp_nodelay(true);
  return client;
}

// Body of a 2xx response; retries transport failures and 5xx statuses.
std::string post(httplib::Client& client, const ModelEndpoint& endpoint, const std::string& path,
                 const std::string& body) {
  double wait = endpoint.retry.backoff;
  std::string last;
  for (unsigned attempt = 0;; ++attempt) {
    auto res = client.Post(path, body, "application/json");
    if (res && res->status >= 200 && res->status < 300) return res->body;
    if (res && res->status < 500) {
      throw ProtocolError("POST " + path + " returned HTTP " + std::to_string(res->status) + ": " +
                          res->body.substr(0, 200));
    }
    last = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
    if (attempt >= endpoint.retry.retries) break;
    std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    wait *= 2.0;
  }
  throw TransportError("POST " + endpoint.base_url + path + " failed after " +
                       std::to_string(endpoint.retry.retries + 1) + " attempts: " + last);
}

class RemoteIntegrand final : public Integrand {
 public:
  RemoteIntegrand(ModelEndpoint endpoint, std::size_t in, std::size_t out)
      : endpoint_(std::move(endpoint)), in_(in), out_(out) {}

  std::size_t input_size() const override { return in_; }
  std::size_t output_size() const override { return out_; }

  void evaluate_point(std::span<const double> t, std::span<double> out) const override {
    Matrix one(1, t.size());
    std::copy(t.begin(), t.end(), one.row(0).begin());
    const auto values = evaluate_remote(endpoint_, one);
    std::copy(values.row(0).begin(), values.row(0).end(), out.begin());
  }

  void evaluate_batch(const Matrix& samples, Matrix& values) const override {
    values = evaluate_remote(endpoint_, samples);
    if (values.cols() != out_) throw ProtocolError("model returned outputs of the wrong length");
  }

 private:
  ModelEndpoint endpoint_;
  std::size_t in_, out_;
};

}  // namespace

void ModelEndpoint::validate() const {
  split_url(base_url);
  if (model_name.empty()) throw InvalidArgument("model name must not be empty");
  if (!(timeout > 0.0)) throw InvalidArgument("timeout must be positive");
  if (max_concurrent_requests == 0) throw InvalidArgument("max_concurrent_requests must be >= 1");
  if (!(retry.backoff >= 0.0)) throw InvalidArgument("retry backoff must be non-negative");
}

ModelInfo fetch_info(const ModelEndpoint& endpoint) {
  endpoint.validate();
  const auto target = split_url(endpoint.base_url);
  auto client = connect(endpoint, target);
  const auto request = protocol::sizes_request(endpoint.model_name);
  ModelInfo info;
  info.input_sizes = protocol::parse_sizes_response(
      post(*client, endpoint, target.prefix + "/GetInputSizes", request), "inputSizes");
  info.output_sizes = protocol::parse_sizes_response(
      post(*client, endpoint, target.prefix + "/GetOutputSizes", request), "outputSizes");
  return info;
}

Matrix evaluate_remote(const ModelEndpoint& endpoint, const Matrix& inputs) {
  endpoint.validate();
  const std::size_t n = inputs.rows();
  if (n == 0) return {};
  const auto target = split_url(endpoint.base_url);
  const std::string path = target.prefix + "/Evaluate";

  std::vector<std::vector<double>> rows(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::mutex failure_mutex;
  std::optional<std::size_t> failed_row;
  std::string failure;

  const auto worker = [&] {
    auto client = connect(endpoint, target);
    while (!abort.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        rows[i] = protocol::parse_evaluate_response(
            post(*client, endpoint, path, protocol::evaluate_request(endpoint.model_name, inputs.row(i))));
      } catch (const Error& e) {
        std::lock_guard lock(failure_mutex);
        if (!failed_row || i < *failed_row) {
          failed_row = i;
          failure = e.what();
        }
        abort.store(true);
      }
    }
  };

  const std::size_t workers = std::min(endpoint.max_concurrent_requests, n);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (failed_row) throw EvaluationError(*failed_row, "remote evaluation failed: " + failure);

  const std::size_t q = rows[0].size();
  Matrix out(n, q);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != q) {
      throw EvaluationError(i, "remote output has " + std::to_string(rows[i].size()) +
                                   " values, expected " + std::to_string(q));
    }
    std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
  }
  return out;
}

IntegrandPtr remote_integrand(const ModelEndpoint& endpoint) {
  const auto info = fetch_info(endpoint);
  if (info.input_sizes.size() != 1 || info.output_sizes.size() != 1) {
    throw ProtocolError("only models with one input and one output vector are supported");
  }
  return std::make_shared<RemoteIntegrand>(endpoint, info.input_sizes[0], info.output_sizes[0]);
}

}  // namespace ldcube
