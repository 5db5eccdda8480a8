#include "pertfool/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pertfool/errors.hpp"

namespace pertfool {

namespace {

constexpr const char* kFormat = "pertfool-model";
constexpr int kVersion = 1;

void append_array(std::string& out, std::span<const double> values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  out += ']';
}

const nlohmann::json& field(const nlohmann::json& obj, const std::string& key,
                            const std::string& where) {
  if (!obj.is_object()) throw ParseError("model: " + where + " must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("model: missing field " + where + "." + key);
  return *it;
}

std::size_t read_count(const nlohmann::json& obj, const std::string& key,
                       const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_number_unsigned()) {
    throw ParseError("model: " + where + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> read_numbers(const nlohmann::json& obj, const std::string& key,
                                 const std::string& where, std::size_t expected) {
  const auto& v = field(obj, key, where);
  const std::string path = where + "." + key;
  if (!v.is_array()) throw ParseError("model: " + path + " must be an array");
  if (v.size() != expected) {
    throw ParseError("model: " + path + " has " + std::to_string(v.size()) +
                     " numbers, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ParseError("model: " + path + "[" + std::to_string(i) + "] is not a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string save_model(const Network& net, const std::string& config_json) {
  std::string out = "{\"format\":\"";
  out += kFormat;
  out += "\",\"version\":" + std::to_string(kVersion) + ",\"layers\":[";
  for (std::size_t l = 0; l < net.depth(); ++l) {
    const Layer& layer = net.layers()[l];
    if (l) out += ',';
    out += "{\"rows\":" + std::to_string(layer.outputs());
    out += ",\"cols\":" + std::to_string(layer.inputs());
    out += ",\"act\":\"";
    out += to_string(layer.activation);
    out += "\",\"w\":";
    append_array(out, layer.weights.entries());
    out += ",\"b\":";
    append_array(out, layer.bias);
    out += '}';
  }
  out += ']';
  if (!config_json.empty()) out += ",\"config\":" + config_json;
  out += "}\n";
  return out;
}

Network load_model(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document.begin(), document.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("model: syntax error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  const auto& format = field(doc, "format", "document");
  if (!format.is_string() || format.get<std::string>() != kFormat) {
    throw ParseError(std::string("model: document.format must be \"") + kFormat + "\"");
  }
  const auto& version = field(doc, "version", "document");
  if (!version.is_number_integer() || version.get<int>() != kVersion) {
    throw ParseError("model: unsupported document.version (expected 1)");
  }
  const auto& layers_json = field(doc, "layers", "document");
  if (!layers_json.is_array() || layers_json.empty()) {
    throw ParseError("model: document.layers must be a non-empty array");
  }

  std::vector<Layer> layers;
  for (std::size_t l = 0; l < layers_json.size(); ++l) {
    const std::string where = "layers[" + std::to_string(l) + "]";
    const auto& lj = layers_json[l];
    const std::size_t rows = read_count(lj, "rows", where);
    const std::size_t cols = read_count(lj, "cols", where);
    const auto& act_json = field(lj, "act", where);
    if (!act_json.is_string()) throw ParseError("model: " + where + ".act must be a string");
    const std::string act_name = act_json.get<std::string>();
    const auto act = parse_activation(act_name);
    if (!act) {
      throw ParseError("model: " + where + ".act: unknown activation '" + act_name +
                       "' (allowed: identity, tanh, sigmoid, relu)");
    }
    auto w = read_numbers(lj, "w", where, rows * cols);
    auto b = read_numbers(lj, "b", where, rows);
    layers.push_back(Layer{Matrix(rows, cols, std::move(w)), std::move(b), *act});
  }
  try {
    return Network(std::move(layers));
  } catch (const DimensionError& e) {
    throw ParseError(std::string("model: inconsistent layers: ") + e.what());
  }
}

void save_model_file(const std::filesystem::path& path, const Network& net,
                     const std::string& config_json) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("E_IO", "cannot open " + path.string() + " for writing");
  os << save_model(net, config_json);
  if (!os) throw Error("E_IO", "failed writing " + path.string());
}

Network load_model_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("E_IO", "cannot open model file " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return load_model(ss.str());
}

}  // namespace pertfool
