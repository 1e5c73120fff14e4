#include "fading/model_file.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fading/errors.hpp"

namespace fading {
namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    throw ModelError(source_ + ": field " + path + ": " + message);
  }

  double real(const json& node, const std::string& path) const {
    if (!node.is_number()) {
      fail(path, "expected a number");
    }
    const double v = node.get<double>();
    if (!std::isfinite(v)) {
      fail(path, "value is not finite");
    }
    return v;
  }

  Complex complex(const json& node, const std::string& path) const {
    if (node.is_number()) {
      return {real(node, path), 0.0};
    }
    if (node.is_array() && node.size() == 2) {
      return {real(node[0], path + "/0"), real(node[1], path + "/1")};
    }
    fail(path, "expected a number or a [re, im] pair");
  }

  CVector vector(const json& node, const std::string& path, int n) const {
    if (!node.is_array()) {
      fail(path, "expected an array of length " + std::to_string(n));
    }
    if (static_cast<int>(node.size()) != n) {
      fail(path, "expected " + std::to_string(n) + " entries, found " +
                     std::to_string(node.size()));
    }
    CVector v(n);
    for (int i = 0; i < n; ++i) {
      v(i) = complex(node[static_cast<std::size_t>(i)], path + "/" + std::to_string(i));
    }
    return v;
  }

  CMatrix matrix(const json& node, const std::string& path, int n) const {
    if (!node.is_array() || static_cast<int>(node.size()) != n) {
      fail(path, "expected " + std::to_string(n) + " rows");
    }
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
      const CVector row =
          vector(node[static_cast<std::size_t>(r)], path + "/" + std::to_string(r), n);
      m.row(r) = row.transpose();
    }
    return m;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

ScaleMixture read_mixture(const Reader& in, const json& node) {
  const std::string path = "/innovation_law";
  if (!node.is_object()) {
    in.fail(path, "expected an object");
  }
  for (const auto& [key, value] : node.items()) {
    if (key != "type" && key != "weights" && key != "scales") {
      in.fail(path + "/" + key, "unknown key");
    }
  }
  if (!node.contains("type") || node["type"] != "scale_mixture") {
    in.fail(path + "/type", "only \"scale_mixture\" is supported");
  }
  if (!node.contains("weights") || !node["weights"].is_array() || node["weights"].empty()) {
    in.fail(path + "/weights", "expected a nonempty array");
  }
  if (!node.contains("scales") || !node["scales"].is_array() ||
      node["scales"].size() != node["weights"].size()) {
    in.fail(path + "/scales", "expected an array as long as weights");
  }
  ScaleMixture mixture;
  double total = 0.0;
  for (std::size_t i = 0; i < node["weights"].size(); ++i) {
    const std::string wp = path + "/weights/" + std::to_string(i);
    const std::string sp = path + "/scales/" + std::to_string(i);
    const double w = in.real(node["weights"][i], wp);
    const double s = in.real(node["scales"][i], sp);
    if (w < 0.0) in.fail(wp, "weights must be nonnegative");
    if (!(s > 0.0)) in.fail(sp, "scales must be positive");
    mixture.weights.push_back(w);
    mixture.scales.push_back(s);
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    in.fail(path + "/weights", "weights must sum to 1");
  }
  return mixture;
}

}  // namespace

GeneralFadingProcess FadingModel::to_general() const {
  if (mixture) {
    return GeneralFadingProcess::ar_scale_mixture(gaussian, *mixture);
  }
  return GeneralFadingProcess::from_gaussian(gaussian);
}

FadingModel parse_model(std::string_view text, std::string_view source) {
  const Reader in{std::string(source)};
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Recover line and column from the byte offset.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ModelError(in.source() + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": syntax error: " + e.what());
  }
  if (!doc.is_object()) {
    in.fail("/", "model must be a JSON object");
  }
  static const std::set<std::string> known{"name", "nt", "mean", "ar", "innovation_covariance",
                                           "innovation_law"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) {
      in.fail("/" + key, "unknown key");
    }
  }
  if (!doc.contains("nt") || !doc["nt"].is_number_integer() || doc["nt"].get<long long>() < 1 ||
      doc["nt"].get<long long>() > 64) {
    in.fail("/nt", "expected an integer between 1 and 64");
  }
  const int nt = doc["nt"].get<int>();
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) in.fail("/name", "expected a string");
    name = doc["name"].get<std::string>();
  }
  if (!doc.contains("mean")) in.fail("/mean", "missing");
  const CVector mean = in.vector(doc["mean"], "/mean", nt);
  std::vector<CMatrix> ar;
  if (doc.contains("ar")) {
    if (!doc["ar"].is_array()) in.fail("/ar", "expected an array of matrices");
    for (std::size_t i = 0; i < doc["ar"].size(); ++i) {
      ar.push_back(in.matrix(doc["ar"][i], "/ar/" + std::to_string(i), nt));
    }
  }
  if (!doc.contains("innovation_covariance")) in.fail("/innovation_covariance", "missing");
  const CMatrix q = in.matrix(doc["innovation_covariance"], "/innovation_covariance", nt);
  std::optional<ScaleMixture> mixture;
  if (doc.contains("innovation_law")) {
    mixture = read_mixture(in, doc["innovation_law"]);
  }
  try {
    return FadingModel{std::move(name), GaussianVectorProcess(mean, std::move(ar), q),
                       std::move(mixture)};
  } catch (const Error& e) {
    throw ModelError(in.source() + ": " + e.what());
  }
}

FadingModel load_model(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw ModelError(path.string() + ": cannot open model file");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_model(buffer.str(), path.string());
}

}  // namespace fading
