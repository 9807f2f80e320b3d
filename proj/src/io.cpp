#include "framekit/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "framekit/error.hpp"

namespace framekit::io {

using nlohmann::json;

namespace {

Complex parse_complex(const json& pair) {
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
    throw Error(ErrorKind::ParseError, "expected a [re, im] pair, got " + pair.dump());
  }
  return {pair[0].get<double>(), pair[1].get<double>()};
}

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace

Frame frame_from_json(std::string_view text) {
  const json doc = parse(text);
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("vectors")) {
    throw Error(ErrorKind::ParseError, "frame JSON needs \"dim\" and \"vectors\"");
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long>() < 1) {
    throw Error(ErrorKind::ParseError, "\"dim\" must be a positive integer");
  }
  const auto dim = doc["dim"].get<Eigen::Index>();
  const json& vectors = doc["vectors"];
  if (!vectors.is_array() || vectors.empty()) {
    throw Error(ErrorKind::ParseError, "\"vectors\" must be a non-empty array");
  }
  CMatrix synthesis(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t n = 0; n < vectors.size(); ++n) {
    const json& v = vectors[n];
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != dim) {
      std::ostringstream os;
      os << "vector " << n << " does not have " << dim << " entries";
      throw Error(ErrorKind::ParseError, os.str());
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      synthesis(i, static_cast<Eigen::Index>(n)) = parse_complex(v[static_cast<std::size_t>(i)]);
    }
  }
  return Frame(std::move(synthesis));
}

std::string frame_to_json(const Frame& frame) {
  json vectors = json::array();
  for (std::size_t n = 0; n < frame.count(); ++n) {
    json v = json::array();
    for (Eigen::Index i = 0; i < frame.synthesis().rows(); ++i) v.push_back(complex_pair(frame.element(n)(i)));
    vectors.push_back(std::move(v));
  }
  return json{{"dim", frame.dim()}, {"vectors", std::move(vectors)}}.dump();
}

Frame read_frame(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return frame_from_json(buffer.str());
}

void write_frame(const std::string& path, const Frame& frame) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << frame_to_json(frame) << '\n';
}

std::string weights_to_json(const WeightSeq& weights, std::string_view method) {
  json values = json::array();
  for (std::size_t n = 0; n < weights.size(); ++n) values.push_back(complex_pair(weights[n]));
  return json{{"method", method}, {"weights", std::move(values)}}.dump();
}

WeightSeq weights_from_json(std::string_view text) {
  const json doc = parse(text);
  if (!doc.is_object() || !doc.contains("weights") || !doc["weights"].is_array() ||
      doc["weights"].empty()) {
    throw Error(ErrorKind::ParseError, "weights JSON needs a non-empty \"weights\" array");
  }
  const json& values = doc["weights"];
  CVector w(static_cast<Eigen::Index>(values.size()));
  for (std::size_t n = 0; n < values.size(); ++n) w(static_cast<Eigen::Index>(n)) = parse_complex(values[n]);
  return WeightSeq(std::move(w));
}

std::string format_number(double value) {
  std::ostringstream os;
  os << std::setprecision(15) << value;
  return os.str();
}

}  // namespace framekit::io
