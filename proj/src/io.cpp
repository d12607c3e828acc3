#include "divstab/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace divstab {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// DOM builder that stores every floating-point token as its raw text, so
/// decimal input converts to an exact rational later.
class RawNumberDomParser : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using Base = nlohmann::detail::json_sax_dom_parser<json>;
  using Base::Base;

  bool number_float(double /*value*/, const std::string& raw) {
    std::string copy = raw;
    return Base::string(copy);
  }
};

json parse_json_exact(std::string_view text) {
  json result;
  RawNumberDomParser sax(result, true);
  try {
    const bool ok = json::sax_parse(text.begin(), text.end(), &sax);
    if (!ok) throw ParseError("malformed JSON");
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed JSON: ") + ex.what());
  }
  return result;
}

std::optional<Rational> scalar_from(const json& node, const std::string& where,
                                    std::vector<std::string>& errors) {
  try {
    if (node.is_string()) return parse_rational(node.get<std::string>());
    if (node.is_number_unsigned()) return Rational(mpz_class(std::to_string(node.get<std::uint64_t>())));
    if (node.is_number_integer()) return Rational(mpz_class(std::to_string(node.get<std::int64_t>())));
  } catch (const std::invalid_argument& ex) {
    errors.push_back(where + ": " + ex.what());
    return std::nullopt;
  }
  errors.push_back(where + ": expected a number or numeric string");
  return std::nullopt;
}

std::optional<std::string> string_field(const json& obj, const char* key, const std::string& where,
                                        std::vector<std::string>& errors) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    errors.push_back(where + ": missing string field \"" + key + "\"");
    return std::nullopt;
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(NumericMode mode) {
  return mode == NumericMode::exact ? "exact" : "float";
}

Instance parse_instance(std::string_view json_text) {
  const json doc = parse_json_exact(json_text);
  std::vector<std::string> errors;
  if (!doc.is_object()) throw ValidationError({"instance document must be a JSON object"});

  std::optional<Kind> kind;
  if (auto k = string_field(doc, "kind", "instance", errors)) {
    kind = parse_kind(*k);
    if (!kind) errors.push_back("instance: unknown kind \"" + *k + "\"");
  }

  std::vector<Vertex> vertices;
  auto vs = doc.find("vertices");
  if (vs == doc.end() || !vs->is_array()) {
    errors.push_back("instance: missing array \"vertices\"");
  } else {
    for (std::size_t i = 0; i < vs->size(); ++i) {
      const json& node = (*vs)[i];
      const std::string where = "vertices[" + std::to_string(i) + "]";
      if (!node.is_object()) {
        errors.push_back(where + ": expected an object");
        continue;
      }
      Vertex v;
      if (auto id = string_field(node, "id", where, errors)) v.id = *id;
      if (auto s = node.find("side"); s != node.end()) {
        if (*s == "F") {
          v.side = Side::firm;
        } else if (*s == "W") {
          v.side = Side::worker;
        } else {
          errors.push_back(where + ": side must be \"F\" or \"W\"");
        }
      }
      if (auto q = node.find("quota"); q == node.end()) {
        errors.push_back(where + ": missing \"quota\"");
      } else if (auto value = scalar_from(*q, where + ".quota", errors)) {
        v.quota = *value;
      }
      vertices.push_back(std::move(v));
    }
  }

  std::vector<Edge> edges;
  auto es = doc.find("edges");
  if (es == doc.end() || !es->is_array()) {
    errors.push_back("instance: missing array \"edges\"");
  } else {
    for (std::size_t i = 0; i < es->size(); ++i) {
      const json& node = (*es)[i];
      const std::string where = "edges[" + std::to_string(i) + "]";
      if (!node.is_object()) {
        errors.push_back(where + ": expected an object");
        continue;
      }
      Edge e;
      if (auto id = string_field(node, "id", where, errors)) e.id = *id;
      auto ends = node.find("ends");
      if (ends == node.end() || !ends->is_array()) {
        errors.push_back(where + ": missing array \"ends\"");
      } else {
        for (const auto& end : *ends) {
          if (end.is_string()) {
            e.ends.push_back(end.get<std::string>());
          } else {
            errors.push_back(where + ": ends must be vertex id strings");
          }
        }
      }
      if (auto c = node.find("capacity"); c == node.end()) {
        errors.push_back(where + ": missing \"capacity\"");
      } else if (auto value = scalar_from(*c, where + ".capacity", errors)) {
        e.capacity = *value;
      }
      edges.push_back(std::move(e));
    }
  }

  if (!errors.empty()) throw ValidationError(std::move(errors));
  return Instance::build(*kind, std::move(vertices), std::move(edges));
}

std::string serialize_instance(const Instance& inst) {
  ordered_json doc;
  doc["kind"] = std::string(to_string(inst.kind()));
  ordered_json vertices = ordered_json::array();
  for (const Vertex& v : inst.vertices()) {
    ordered_json node;
    node["id"] = v.id;
    if (v.side) node["side"] = *v.side == Side::firm ? "F" : "W";
    node["quota"] = to_string(v.quota);
    vertices.push_back(std::move(node));
  }
  doc["vertices"] = std::move(vertices);
  ordered_json edges = ordered_json::array();
  for (const Edge& e : inst.edges()) {
    ordered_json node;
    node["id"] = e.id;
    node["ends"] = e.ends;
    node["capacity"] = to_string(e.capacity);
    edges.push_back(std::move(node));
  }
  doc["edges"] = std::move(edges);
  return doc.dump();
}

std::string instance_sha256(const Instance& inst) {
  const std::string bytes = serialize_instance(inst);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

AssignmentDocument parse_assignment(std::string_view json_text) {
  const json doc = parse_json_exact(json_text);
  std::vector<std::string> errors;
  if (!doc.is_object()) throw ValidationError({"assignment document must be a JSON object"});
  AssignmentDocument out;
  if (auto h = doc.find("instance_sha256"); h != doc.end()) {
    if (h->is_string()) {
      out.instance_sha256 = h->get<std::string>();
    } else {
      errors.push_back("assignment: instance_sha256 must be a string");
    }
  }
  if (auto m = doc.find("mode"); m != doc.end()) {
    if (*m == "exact") {
      out.mode = NumericMode::exact;
    } else if (*m == "float") {
      out.mode = NumericMode::floating;
    } else {
      errors.push_back("assignment: mode must be \"exact\" or \"float\"");
    }
  }
  auto values = doc.find("values");
  if (values == doc.end() || !values->is_object()) {
    errors.push_back("assignment: missing object \"values\"");
  } else {
    for (const auto& [key, node] : values->items()) {
      if (auto value = scalar_from(node, "values." + key, errors)) out.values.emplace(key, *value);
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return out;
}

std::string serialize_assignment(const Instance& inst, const Assignment& x) {
  ordered_json doc;
  doc["instance_sha256"] = instance_sha256(inst);
  doc["mode"] = "exact";
  ordered_json values = ordered_json::object();
  for (std::size_t e = 0; e < inst.num_edges(); ++e) values[inst.edge(e).id] = to_string(x[e]);
  doc["values"] = std::move(values);
  return doc.dump(2) + "\n";
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf.data(), end);
}

std::string serialize_float_assignment(const Instance& inst, const std::vector<double>& x) {
  ordered_json doc;
  doc["instance_sha256"] = instance_sha256(inst);
  doc["mode"] = "float";
  ordered_json values = ordered_json::object();
  for (std::size_t e = 0; e < inst.num_edges(); ++e) values[inst.edge(e).id] = format_double(x[e]);
  doc["values"] = std::move(values);
  return doc.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << contents;
}

}  // namespace divstab
