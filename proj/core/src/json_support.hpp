#pragma once

// Helpers shared by the document readers.

#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "fgame/errors.hpp"
#include "fgame/feature_logic.hpp"

namespace fgame::detail {

using nlohmann::json;

json parseJson(std::string_view text);

void rejectUnknownFields(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed);

const json& require(const json& obj, const std::string& where, const char* key);

std::string requireString(const json& obj, const std::string& where, const char* key);

FeatureSet parseFeatures(const json& doc);

/// "all" or a list of feature-name lists.
ProductSet parseProducts(const json& doc, const FeatureSet& features);

json emitProducts(const ProductSet& px);

/// Integral doubles as JSON integers, everything else as floats.
json number(double v);

}  // namespace fgame::detail
