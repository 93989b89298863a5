#include "fgame/solution_io.hpp"

#include <cstdio>

#include "fgame/errors.hpp"

namespace fgame {

using nlohmann::json;

json valueToJson(const bool& v) { return v; }
json valueToJson(const ExtNat& v) { return v.isInfinite() ? json("inf") : json(v.value()); }
json valueToJson(const double& v) { return v; }
json valueToJson(const EnergyValue& v) { return v.isTop() ? json("top") : json(v.credit()); }
json valueToJson(const ParityMeasure& v) { return v.isTop() ? json("top") : json(v.coords()); }

std::string valueToText(const bool& v) { return v ? "true" : "false"; }
std::string valueToText(const ExtNat& v) { return v.toString(); }
std::string valueToText(const double& v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}
std::string valueToText(const EnergyValue& v) { return v.toString(); }
std::string valueToText(const ParityMeasure& v) { return v.toString(); }

json solutionToJson(const FeaturedGame& g, const FeaturedValues& values) {
  return std::visit(
      [&](const auto& r) {
        json out = json::array();
        for (std::size_t s = 0; s < r.values.size(); ++s) {
          out.push_back({{"state", g.state(s).id}, {"cells", featureFunctionToJson(r.values[s], g.features())}});
        }
        return out;
      },
      values);
}

namespace {

template <class X>
X valueFromJson(const json& v, const std::string& where);

template <>
bool valueFromJson<bool>(const json& v, const std::string& where) {
  if (!v.is_boolean()) throw ValidationError(where + ": expected a boolean");
  return v.get<bool>();
}

template <>
ExtNat valueFromJson<ExtNat>(const json& v, const std::string& where) {
  if (v == "inf") return ExtNat::infinity();
  if (!v.is_number_unsigned()) throw ValidationError(where + ": expected a natural number or \"inf\"");
  return ExtNat(v.get<std::uint64_t>());
}

template <>
double valueFromJson<double>(const json& v, const std::string& where) {
  if (!v.is_number()) throw ValidationError(where + ": expected a number");
  return v.get<double>();
}

template <>
EnergyValue valueFromJson<EnergyValue>(const json& v, const std::string& where) {
  if (v == "top") return EnergyValue::top();
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ValidationError(where + ": expected a natural number or \"top\"");
  }
  return EnergyValue(v.get<std::int64_t>());
}

template <>
ParityMeasure valueFromJson<ParityMeasure>(const json& v, const std::string& where) {
  if (v == "top") return ParityMeasure::top();
  if (!v.is_array()) throw ValidationError(where + ": expected a measure array or \"top\"");
  std::vector<std::uint32_t> coords;
  for (const auto& c : v) {
    if (!c.is_number_unsigned()) throw ValidationError(where + ": measure coordinates must be naturals");
    coords.push_back(c.get<std::uint32_t>());
  }
  return ParityMeasure(std::move(coords));
}

template <class X>
FeaturedResult<X> readSolution(const FeaturedGame& g, const json& solution) {
  if (!solution.is_array() || solution.size() != g.states().size()) {
    throw ValidationError("solution: expected one entry per state");
  }
  FeaturedResult<X> r;
  for (std::size_t s = 0; s < g.states().size(); ++s) {
    const std::string where = "solution[" + std::to_string(s) + "]";
    const json& entry = solution[s];
    if (!entry.is_object() || !entry.contains("state") || !entry.contains("cells")) {
      throw ValidationError(where + ": expected {\"state\", \"cells\"}");
    }
    if (entry["state"] != g.state(s).id) throw ValidationError(where + ".state: expected '" + g.state(s).id + "'");
    std::vector<Cell<X>> cells;
    for (std::size_t c = 0; c < entry["cells"].size(); ++c) {
      const json& cell = entry["cells"][c];
      const std::string cw = where + ".cells[" + std::to_string(c) + "]";
      if (!cell.is_object() || !cell.contains("guard") || !cell.contains("value") || !cell["guard"].is_string()) {
        throw ValidationError(cw + ": expected {\"guard\", \"value\"}");
      }
      const FeatureExpr e = parseFeatureExpr(cell["guard"].get<std::string>(), g.features());
      cells.push_back({Guard::of(e, g.products()), valueFromJson<X>(cell["value"], cw + ".value")});
    }
    try {
      r.values.push_back(reduce(std::move(cells)));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return r;
}

}  // namespace

FeaturedValues solutionFromJson(const FeaturedGame& g, const json& solution) {
  switch (g.kind()) {
    case GameKind::Reachability:
      return readSolution<bool>(g, solution);
    case GameKind::MinReachability:
      return readSolution<ExtNat>(g, solution);
    case GameKind::Discounted:
      return readSolution<double>(g, solution);
    case GameKind::Energy:
      return readSolution<EnergyValue>(g, solution);
    case GameKind::Parity:
      return readSolution<ParityMeasure>(g, solution);
  }
  throw ValidationError("unknown game kind");
}

json strategyToJson(const FeaturedGame& g, const FeaturedStrategy& xi) {
  json out = json::array();
  for (std::size_t s = 0; s < xi.choice.size(); ++s) {
    if (!xi.choice[s]) continue;
    json cells = json::array();
    for (const auto& c : *xi.choice[s]) {
      cells.push_back({{"guard", toString(c.guard.expr(), g.features())},
                       {"transition", c.value},
                       {"to", g.state(g.transition(c.value).to).id}});
    }
    out.push_back({{"state", g.state(s).id}, {"cells", std::move(cells)}});
  }
  return out;
}

}  // namespace fgame
