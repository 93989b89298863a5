#include "fgame/fts.hpp"

#include <charconv>
#include <limits>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "fgame/errors.hpp"
#include "fgame/game_io.hpp"
#include "json_support.hpp"

namespace fgame {

using detail::json;

// ------------------------------------------------------------------ Rational

namespace {

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw ValidationError("rational weight out of range");
  }
  return static_cast<std::int64_t>(v);
}

Rational make(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::fromDouble(double v) {
  if (!std::isfinite(v)) throw ValidationError("weight must be finite");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    exponent = std::stoi(std::string(text.substr(e + 1)));
    text = text.substr(0, e);
  }
  __int128 num = 0;
  for (char c : text) {
    if (c == '.') continue;
    num = num * 10 + (c - '0');
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    exponent -= static_cast<int>(text.size() - dot - 1);
  }
  __int128 den = 1;
  for (; exponent > 0; --exponent) num *= 10;
  for (; exponent < 0; ++exponent) den *= 10;
  return make(negative ? -num : num, den);
}

std::string Rational::toString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(Rational a, Rational b) {
  return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
              static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(Rational a, Rational b) { return a + Rational(-b.num_, b.den_); }

Rational operator*(Rational a, Rational b) {
  return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

bool operator<(Rational a, Rational b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

// ----------------------------------------------------------------------- Fts

Fts::Fts(ProductSet products, std::vector<std::string> states, std::size_t initial, std::vector<std::string> actions,
         std::vector<FtsTransition> transitions)
    : products_(std::move(products)),
      states_(std::move(states)),
      initial_(initial),
      actions_(std::move(actions)),
      transitions_(std::move(transitions)) {
  if (states_.empty()) throw ValidationError("an FTS needs at least one state");
  if (initial_ >= states_.size()) throw ValidationError("initial state out of range");
  std::unordered_set<std::string> seen;
  for (const auto& s : states_) {
    if (!seen.insert(s).second) throw ValidationError("duplicate state '" + s + "'");
  }
  std::unordered_set<std::string> acts;
  for (const auto& a : actions_) {
    if (!acts.insert(a).second) throw ValidationError("duplicate action '" + a + "'");
  }
  out_.assign(states_.size(), {});
  std::size_t weightedCount = 0;
  for (std::size_t t = 0; t < transitions_.size(); ++t) {
    const auto& tr = transitions_[t];
    const std::string where = "transitions[" + std::to_string(t) + "]";
    if (tr.from >= states_.size() || tr.to >= states_.size()) throw ValidationError(where + ": endpoint out of range");
    if (!acts.count(tr.action)) throw ValidationError(where + ".action: unknown action '" + tr.action + "'");
    validate(tr.guard, features());
    if (tr.tolerance && !tr.weight) throw ValidationError(where + ": tolerance without a nominal weight");
    if (tr.tolerance && tr.tolerance->num() < 0) throw ValidationError(where + ".weight: negative tolerance");
    weightedCount += tr.weight ? 1 : 0;
    out_[tr.from].push_back(t);
    guards_.push_back(Guard::of(tr.guard, products_));
  }
  if (weightedCount != 0 && weightedCount != transitions_.size()) {
    throw ValidationError("either every transition or none carries a weight");
  }
}

bool Fts::weighted() const noexcept { return !transitions_.empty() && transitions_.front().weight.has_value(); }

bool Fts::hasTolerances() const noexcept {
  for (const auto& t : transitions_) {
    if (t.tolerance) return true;
  }
  return false;
}

// ------------------------------------------------------------------------ io

namespace {

Rational rationalFromJson(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  if (v.is_number()) return Rational::fromDouble(v.get<double>());
  if (v.is_object() && v.contains("num")) {
    detail::rejectUnknownFields(v, where, {"num", "den"});
    const json& n = v["num"];
    const json den = v.contains("den") ? v["den"] : json(1);
    if (!n.is_number_integer() || !den.is_number_integer() || den.get<std::int64_t>() == 0) {
      throw ValidationError(where + ": expected integer \"num\" and non-zero \"den\"");
    }
    return Rational(n.get<std::int64_t>(), den.get<std::int64_t>());
  }
  throw ValidationError(where + ": expected a number or {\"num\", \"den\"}");
}

json rationalToJson(Rational r) {
  if (r.den() == 1) return r.num();
  return {{"num", r.num()}, {"den", r.den()}};
}

}  // namespace

Fts parseFts(std::string_view text) {
  const json doc = detail::parseJson(text);
  detail::rejectUnknownFields(doc, "document", {"features", "products", "actions", "initial", "states", "transitions"});
  const FeatureSet features = detail::parseFeatures(doc);
  ProductSet products = detail::parseProducts(doc, features);

  const json& actions = detail::require(doc, "document", "actions");
  if (!actions.is_array()) throw ValidationError("actions: expected an array of names");
  std::vector<std::string> acts;
  for (const auto& a : actions) {
    if (!a.is_string()) throw ValidationError("actions: expected names");
    acts.push_back(a.get<std::string>());
  }

  const json& states = detail::require(doc, "document", "states");
  if (!states.is_array()) throw ValidationError("states: expected an array");
  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    detail::rejectUnknownFields(states[i], where, {"id"});
    ids.push_back(detail::requireString(states[i], where, "id"));
    if (!index.emplace(ids.back(), i).second) throw ValidationError(where + ".id: duplicate state '" + ids.back() + "'");
  }
  auto lookupState = [&](const std::string& where, const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw ValidationError(where + ": unknown state '" + id + "'");
    return it->second;
  };
  const std::size_t initial = lookupState("initial", detail::requireString(doc, "document", "initial"));

  const json& transitions = detail::require(doc, "document", "transitions");
  if (!transitions.is_array()) throw ValidationError("transitions: expected an array");
  std::vector<FtsTransition> ts;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    const json& t = transitions[i];
    detail::rejectUnknownFields(t, where, {"from", "to", "action", "guard", "weight"});
    FtsTransition tr;
    tr.from = lookupState(where + ".from", detail::requireString(t, where, "from"));
    tr.to = lookupState(where + ".to", detail::requireString(t, where, "to"));
    tr.action = detail::requireString(t, where, "action");
    if (t.contains("guard")) {
      if (!t["guard"].is_string()) throw ValidationError(where + ".guard: expected a string");
      try {
        tr.guard = parseFeatureExpr(t["guard"].get<std::string>(), features);
      } catch (const ParseError& e) {
        throw ParseError(where + ".guard: " + e.detail(), e.position());
      }
    }
    if (t.contains("weight")) {
      const json& w = t["weight"];
      if (w.is_object() && w.contains("nominal")) {
        detail::rejectUnknownFields(w, where + ".weight", {"nominal", "tolerance"});
        tr.weight = rationalFromJson(w["nominal"], where + ".weight.nominal");
        tr.tolerance = w.contains("tolerance") ? rationalFromJson(w["tolerance"], where + ".weight.tolerance")
                                               : Rational(0);
      } else {
        tr.weight = rationalFromJson(w, where + ".weight");
      }
    }
    ts.push_back(std::move(tr));
  }
  return Fts(std::move(products), std::move(ids), initial, std::move(acts), std::move(ts));
}

std::string emitFts(const Fts& f) {
  json doc;
  doc["features"] = f.features().names();
  doc["products"] = detail::emitProducts(f.products());
  doc["actions"] = f.actions();
  doc["initial"] = f.states()[f.initial()];
  json states = json::array();
  for (const auto& s : f.states()) states.push_back({{"id", s}});
  doc["states"] = std::move(states);
  json ts = json::array();
  for (const auto& t : f.transitions()) {
    json o;
    o["from"] = f.states()[t.from];
    o["to"] = f.states()[t.to];
    o["action"] = t.action;
    o["guard"] = toString(t.guard, f.features());
    if (t.weight) {
      if (t.tolerance) {
        o["weight"] = {{"nominal", rationalToJson(*t.weight)}, {"tolerance", rationalToJson(*t.tolerance)}};
      } else {
        o["weight"] = rationalToJson(*t.weight);
      }
    }
    ts.push_back(std::move(o));
  }
  doc["transitions"] = std::move(ts);
  return doc.dump(2) + "\n";
}

Fts loadFts(const std::filesystem::path& file) {
  const std::string text = readTextFile(file);
  try {
    return parseFts(text);
  } catch (const ParseError& e) {
    throw ParseError(file.string() + ": " + e.detail(), e.position());
  } catch (const ValidationError& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
}

std::pair<Fts, Fts> splitTolerances(const Fts& f) {
  std::vector<FtsTransition> low = f.transitions();
  std::vector<FtsTransition> high = f.transitions();
  for (std::size_t t = 0; t < low.size(); ++t) {
    if (!low[t].tolerance) continue;
    const Rational nominal = *low[t].weight;
    const Rational tol = *low[t].tolerance;
    low[t].weight = nominal * (Rational(1) - tol);
    high[t].weight = nominal * (Rational(1) + tol);
    low[t].tolerance.reset();
    high[t].tolerance.reset();
  }
  return {Fts(f.products(), f.states(), f.initial(), f.actions(), std::move(low)),
          Fts(f.products(), f.states(), f.initial(), f.actions(), std::move(high))};
}

}  // namespace fgame
