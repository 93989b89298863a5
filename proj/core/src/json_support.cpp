#include "json_support.hpp"

#include <algorithm>
#include <cmath>

namespace fgame::detail {

json parseJson(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), e.byte);
  }
}

void rejectUnknownFields(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(where + ": unknown field \"" + key + "\"");
    }
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string requireString(const json& obj, const std::string& where, const char* key) {
  const json& v = require(obj, where, key);
  if (!v.is_string()) throw ValidationError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

FeatureSet parseFeatures(const json& doc) {
  const json& f = require(doc, "document", "features");
  if (!f.is_array()) throw ValidationError("features: expected an array of names");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f[i].is_string()) throw ValidationError("features[" + std::to_string(i) + "]: expected a string");
    names.push_back(f[i].get<std::string>());
  }
  return FeatureSet(std::move(names));
}

ProductSet parseProducts(const json& doc, const FeatureSet& features) {
  auto it = doc.find("products");
  if (it == doc.end() || (it->is_string() && it->get<std::string>() == "all")) {
    return ProductSet::all(features);
  }
  if (!it->is_array()) throw ValidationError("products: expected \"all\" or an array of feature lists");
  std::vector<Product> ps;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& p = (*it)[i];
    const std::string where = "products[" + std::to_string(i) + "]";
    if (!p.is_array()) throw ValidationError(where + ": expected an array of feature names");
    std::vector<std::string> names;
    for (const auto& n : p) {
      if (!n.is_string()) throw ValidationError(where + ": expected feature names");
      names.push_back(n.get<std::string>());
    }
    try {
      ps.push_back(Product::fromNames(features, names));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return ProductSet(features, std::move(ps));
}

json emitProducts(const ProductSet& px) {
  json out = json::array();
  for (const auto& p : px) out.push_back(p.names(px.features()));
  return out;
}

json number(double v) {
  if (std::floor(v) == v && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  return v;
}

}  // namespace fgame::detail
