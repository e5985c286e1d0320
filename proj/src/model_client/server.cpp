#include <httplib.h>
#include <sys/socket.h>

#include <json.hpp>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "ldcube/error.hpp"
#include "ldcube/model_client.hpp"

namespace ldcube {

using nlohmann::json;

namespace {

void reply_error(httplib::Response& res, int status, const std::string& type, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", {{"type", type}, {"message", message}}}}.dump(), "application/json");
}

}  // namespace

struct ModelServer::Impl {
  std::map<std::string, Model> models;
  ServerOptions options;
  httplib::Server server;
  std::thread listener;
  int port = 0;
  std::atomic<std::size_t> evaluations{0};
  std::mutex jitter_mutex;
  std::mt19937_64 jitter;

  const Model* find(const json& request, httplib::Response& res) const {
    if (!request.is_object() || !request.contains("name") || !request["name"].is_string()) {
      reply_error(res, 400, "InvalidInput", "request needs a string 'name'");
      return nullptr;
    }
    const auto it = models.find(request["name"].get<std::string>());
    if (it == models.end()) {
      reply_error(res, 400, "ModelNotFound", "no model named '" + request["name"].get<std::string>() + "'");
      return nullptr;
    }
    return &it->second;
  }

  static std::optional<json> parse_body(const httplib::Request& req, httplib::Response& res) {
    try {
      return json::parse(req.body);
    } catch (const json::parse_error& e) {
      reply_error(res, 400, "InvalidInput", std::string("malformed JSON body: ") + e.what());
      return std::nullopt;
    }
  }

  void sizes(const httplib::Request& req, httplib::Response& res, bool input) const {
    json request;
    if (req.has_param("name")) {
      request = json{{"name", req.get_param_value("name")}};
    } else if (auto body = parse_body(req, res)) {
      request = *body;
    } else {
      return;
    }
    const Model* model = find(request, res);
    if (!model) return;
    const auto key = input ? "inputSizes" : "outputSizes";
    res.set_content(json{{key, {input ? model->input_size : model->output_size}}}.dump(), "application/json");
  }

  void evaluate(const httplib::Request& req, httplib::Response& res) {
    const std::size_t count = evaluations.fetch_add(1);
    double pause = options.delay;
    if (options.delay_jitter > 0.0) {
      std::lock_guard lock(jitter_mutex);
      pause += std::uniform_real_distribution<double>(0.0, options.delay_jitter)(jitter);
    }
    if (pause > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(pause));
    if (count < options.fail_first) {
      reply_error(res, 503, "Unavailable", "injected transient failure");
      return;
    }
    const auto body = parse_body(req, res);
    if (!body) return;
    const Model* model = find(*body, res);
    if (!model) return;
    const auto& input = (*body).value("input", json());
    if (!input.is_array() || input.size() != 1 || !input[0].is_array() ||
        input[0].size() != model->input_size) {
      reply_error(res, 400, "InvalidInput",
                  "'input' must hold one vector of length " + std::to_string(model->input_size));
      return;
    }
    std::vector<double> x;
    for (const auto& v : input[0]) {
      if (!v.is_number()) {
        reply_error(res, 400, "InvalidInput", "'input' holds a non-number");
        return;
      }
      x.push_back(v.get<double>());
    }
    try {
      const auto y = model->evaluate(x);
      res.set_content(json{{"output", json::array({json(y)})}}.dump(), "application/json");
    } catch (const std::exception& e) {
      reply_error(res, 500, "ModelError", e.what());
    }
  }
};

ModelServer::ModelServer(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

ModelServer::~ModelServer() { stop(); }

int ModelServer::port() const { return impl_->port; }

std::string ModelServer::url() const {
  return "http://" + impl_->options.host + ":" + std::to_string(impl_->port);
}

std::size_t ModelServer::evaluate_requests() const { return impl_->evaluations.load(); }

void ModelServer::stop() {
  if (impl_->listener.joinable()) {
    impl_->server.stop();
    impl_->listener.join();
  }
}

Model beam_model(const BeamConfig& config) {
  validate(config);
  return {"beam", config.regions(), config.nodes,
          [config](std::span<const double> m) { return solve_deflection(config, m); }};
}

std::unique_ptr<ModelServer> serve_models(std::vector<Model> models, const ServerOptions& options) {
  auto impl = std::make_unique<ModelServer::Impl>();
  impl->options = options;
  impl->jitter.seed(options.jitter_seed);
  for (auto& m : models) {
    if (m.input_size == 0 || m.output_size == 0 || !m.evaluate) {
      throw InvalidArgument("model '" + m.name + "' needs positive sizes and an evaluate function");
    }
    const std::string name = m.name;
    impl->models.emplace(name, std::move(m));
  }

  auto* raw = impl.get();
  auto& server = impl->server;
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  server.set_tcp_nodelay(true);
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  // exclusive binding, so a port already in use is reported
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server.Post("/Evaluate", [raw](const httplib::Request& req, httplib::Response& res) { raw->evaluate(req, res); });
  for (const bool input : {true, false}) {
    const std::string path = input ? "/GetInputSizes" : "/GetOutputSizes";
    const auto handler = [raw, input](const httplib::Request& req, httplib::Response& res) {
      raw->sizes(req, res, input);
    };
    server.Post(path, handler);
    server.Get(path, handler);
  }

  if (options.port == 0) {
    impl->port = server.bind_to_any_port(options.host);
    if (impl->port < 0) throw TransportError("could not bind any port on " + options.host);
  } else {
    if (!server.bind_to_port(options.host, options.port)) {
      throw TransportError("could not bind " + options.host + ":" + std::to_string(options.port) +
                           " (port in use?)");
    }
    impl->port = options.port;
  }
  impl->listener = std::thread([raw] { raw->server.listen_after_bind(); });
  server.wait_until_ready();
  return std::unique_ptr<ModelServer>(new ModelServer(std::move(impl)));
}

}  // namespace ldcube
