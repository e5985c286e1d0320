#include <json.hpp>

#include "ldcube/error.hpp"
#include "ldcube/model_client.hpp"

namespace ldcube::protocol {
namespace {

using nlohmann::json;

std::string excerpt(const std::string& body) {
  constexpr std::size_t kLimit = 200;
  return body.size() <= kLimit ? body : body.substr(0, kLimit) + "...";
}

json parse(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error&) {
    throw ProtocolError("response is not JSON: " + excerpt(body));
  }
}

const json& require(const json& doc, const std::string& key, const std::string& body) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw ProtocolError("response lacks key '" + key + "': " + excerpt(body));
  }
  return doc.at(key);
}

}  // namespace

std::string evaluate_request(const std::string& model, std::span<const double> input) {
  json doc;
  doc["name"] = model;
  doc["input"] = json::array({json(std::vector<double>(input.begin(), input.end()))});
  doc["config"] = json::object();
  return doc.dump();
}

std::vector<double> parse_evaluate_response(const std::string& body) {
  const auto doc = parse(body);
  const auto& output = require(doc, "output", body);
  if (!output.is_array() || output.size() != 1 || !output[0].is_array()) {
    throw ProtocolError("'output' must hold exactly one vector: " + excerpt(body));
  }
  std::vector<double> values;
  for (const auto& v : output[0]) {
    if (!v.is_number()) throw ProtocolError("'output' holds a non-number: " + excerpt(body));
    values.push_back(v.get<double>());
  }
  return values;
}

std::string sizes_request(const std::string& model) { return json{{"name", model}}.dump(); }

std::vector<std::size_t> parse_sizes_response(const std::string& body, const std::string& key) {
  const auto doc = parse(body);
  const auto& sizes = require(doc, key, body);
  if (!sizes.is_array() || sizes.empty()) {
    throw ProtocolError("'" + key + "' must be a non-empty list: " + excerpt(body));
  }
  std::vector<std::size_t> out;
  for (const auto& s : sizes) {
    if (!s.is_number_integer() || s.get<long long>() <= 0) {
      throw ProtocolError("'" + key + "' must hold positive integers: " + excerpt(body));
    }
    out.push_back(s.get<std::size_t>());
  }
  return out;
}

}  // namespace ldcube::protocol
