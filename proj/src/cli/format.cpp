#include <charconv>
#include <cmath>
#include <ostream>

#include "ldcube/cli.hpp"
#include "ldcube/error.hpp"

namespace ldcube::cli {
namespace {

std::string json_number(double value) { return std::isfinite(value) ? format_double(value) : "null"; }

std::string json_array(const std::vector<double>& values) {
  std::string s = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ", ";
    s += json_number(values[i]);
  }
  return s + "]";
}

std::string json_string(std::string_view text) {
  std::string s = "\"";
  for (char c : text) {
    switch (c) {
      case '"': s += "\\\""; break;
      case '\\': s += "\\\\"; break;
      case '\n': s += "\\n"; break;
      case '\t': s += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
          s += buf;
        } else {
          s += c;
        }
    }
  }
  return s + "\"";
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string s = "\"";
  for (char c : text) {
    if (c == '"') s += '"';
    s += c;
  }
  return s + "\"";
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const InvalidArgument*>(&error) || dynamic_cast<const ParseError*>(&error) ||
      dynamic_cast<const PolicyError*>(&error) || dynamic_cast<const IncompatibleRandomization*>(&error) ||
      dynamic_cast<const CapacityError*>(&error) || dynamic_cast<const NotPositiveDefinite*>(&error)) {
    return kUsage;
  }
  return kEvaluationFailure;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_points_csv(std::ostream& out, const Matrix& points) {
  for (std::size_t j = 0; j < points.cols(); ++j) out << (j ? ",x" : "x") << j + 1;
  out << "\r\n";
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto row = points.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << format_double(row[j]);
    }
    out << "\r\n";
  }
}

void write_result_json(std::ostream& out, const ProblemFile& file, const StoppingResult& r) {
  const std::string problem = file.remote ? file.remote->model : file.problem;
  out << "{\n"
      << "  \"problem\": " << json_string(problem) << ",\n"
      << "  \"criterion\": " << json_string(file.criterion == Criterion::Replicated ? "replicated" : "fourier")
      << ",\n"
      << "  \"estimate\": " << json_array(r.estimate) << ",\n"
      << "  \"error_bound\": " << json_array(r.error_bound) << ",\n"
      << "  \"n_used\": " << r.n_used << ",\n"
      << "  \"R\": " << r.replications << ",\n"
      << "  \"stages\": " << r.stages << ",\n"
      << "  \"converged\": " << (r.converged ? "true" : "false") << ",\n"
      << "  \"wall_time\": " << json_number(r.wall_time) << ",\n"
      << "  \"evaluation_time\": " << json_number(r.evaluation_time) << "\n"
      << "}\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "epsilon,n_used,wall_time_seconds,estimate,converged,mode,workers,error\r\n";
  for (const auto& r : records) {
    out << format_double(r.epsilon) << ',' << r.n_used << ',' << format_double(r.wall_time_seconds) << ','
        << format_double(r.estimate) << ',' << (r.converged ? "true" : "false") << ','
        << (r.mode == SweepMode::Serial ? "serial" : "parallel") << ',' << r.workers << ','
        << csv_field(r.error) << "\r\n";
  }
}

}  // namespace ldcube::cli
