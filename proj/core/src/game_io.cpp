#include "fgame/game_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fgame/errors.hpp"
#include "fgame/solution_io.hpp"
#include "json_support.hpp"

namespace fgame {

using detail::json;

namespace {

GameMetadata parseMetadata(const json& m) {
  detail::rejectUnknownFields(m, "metadata",
                              {"source", "discount", "lambda", "formula", "unmatched_responses", "warnings"});
  GameMetadata md;
  if (m.contains("source")) md.source = detail::requireString(m, "metadata", "source");
  if (m.contains("formula")) md.formula = detail::requireString(m, "metadata", "formula");
  for (const char* key : {"discount", "lambda"}) {
    if (!m.contains(key)) continue;
    if (!m[key].is_number()) throw ValidationError(std::string("metadata.") + key + ": expected a number");
    (std::string_view(key) == "discount" ? md.discount : md.lambda) = m[key].get<double>();
  }
  if (m.contains("unmatched_responses")) {
    if (!m["unmatched_responses"].is_number_unsigned()) {
      throw ValidationError("metadata.unmatched_responses: expected a non-negative integer");
    }
    md.unmatchedResponses = m["unmatched_responses"].get<std::size_t>();
  }
  if (m.contains("warnings")) {
    if (!m["warnings"].is_array()) throw ValidationError("metadata.warnings: expected an array");
    for (const auto& w : m["warnings"]) {
      if (!w.is_string()) throw ValidationError("metadata.warnings: expected strings");
      md.warnings.push_back(w.get<std::string>());
    }
  }
  return md;
}

}  // namespace

json metadataToJson(const GameMetadata& md) {
  json m = json::object();
  if (!md.source.empty()) m["source"] = md.source;
  if (md.discount) m["discount"] = *md.discount;
  if (md.lambda) m["lambda"] = *md.lambda;
  if (!md.formula.empty()) m["formula"] = md.formula;
  if (md.unmatchedResponses) m["unmatched_responses"] = *md.unmatchedResponses;
  if (!md.warnings.empty()) m["warnings"] = md.warnings;
  return m;
}

FeaturedGame parseGame(std::string_view text) {
  const json doc = detail::parseJson(text);
  detail::rejectUnknownFields(doc, "document",
                              {"features", "products", "kind", "initial", "states", "transitions", "metadata"});
  const FeatureSet features = detail::parseFeatures(doc);
  ProductSet products = detail::parseProducts(doc, features);

  const std::string kindText = detail::requireString(doc, "document", "kind");
  const auto kind = parseGameKind(kindText);
  if (!kind) throw ValidationError("kind: unknown game kind '" + kindText + "'");

  const json& states = detail::require(doc, "document", "states");
  if (!states.is_array()) throw ValidationError("states: expected an array");
  std::vector<State> parsedStates;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    const json& s = states[i];
    detail::rejectUnknownFields(s, where, {"id", "owner", "accepting", "priority"});
    State st;
    st.id = detail::requireString(s, where, "id");
    const json& owner = detail::require(s, where, "owner");
    if (!owner.is_number_integer() || (owner.get<int>() != 1 && owner.get<int>() != 2)) {
      throw ValidationError(where + ".owner: expected 1 or 2");
    }
    st.owner = owner.get<int>() == 1 ? Player::One : Player::Two;
    if (s.contains("accepting")) {
      if (!s["accepting"].is_boolean()) throw ValidationError(where + ".accepting: expected a boolean");
      st.accepting = s["accepting"].get<bool>();
    }
    if (s.contains("priority")) {
      if (!s["priority"].is_number_unsigned()) {
        throw ValidationError(where + ".priority: expected a non-negative integer");
      }
      st.priority = s["priority"].get<std::uint32_t>();
    }
    if (*kind == GameKind::Parity && !st.priority) throw ValidationError(where + ": missing field \"priority\"");
    if (!index.emplace(st.id, i).second) throw ValidationError(where + ".id: duplicate state '" + st.id + "'");
    parsedStates.push_back(std::move(st));
  }

  auto lookupState = [&](const std::string& where, const std::string& id) {
    auto it = index.find(id);
    if (it == index.end()) throw ValidationError(where + ": unknown state '" + id + "'");
    return it->second;
  };

  const std::size_t initial = lookupState("initial", detail::requireString(doc, "document", "initial"));

  const json& transitions = detail::require(doc, "document", "transitions");
  if (!transitions.is_array()) throw ValidationError("transitions: expected an array");
  std::vector<Transition> parsedTransitions;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    const json& t = transitions[i];
    detail::rejectUnknownFields(t, where, {"from", "to", "guard", "weight"});
    Transition tr;
    tr.from = lookupState(where + ".from", detail::requireString(t, where, "from"));
    tr.to = lookupState(where + ".to", detail::requireString(t, where, "to"));
    if (t.contains("guard")) {
      if (!t["guard"].is_string()) throw ValidationError(where + ".guard: expected a string");
      try {
        tr.guard = parseFeatureExpr(t["guard"].get<std::string>(), features);
      } catch (const ParseError& e) {
        throw ParseError(where + ".guard: " + e.detail(), e.position());
      }
    }
    if (t.contains("weight")) {
      if (!t["weight"].is_number()) throw ValidationError(where + ".weight: expected a number");
      tr.weight = t["weight"].get<double>();
    }
    parsedTransitions.push_back(std::move(tr));
  }

  if ((*kind == GameKind::Reachability || *kind == GameKind::MinReachability) &&
      std::none_of(parsedStates.begin(), parsedStates.end(), [](const State& s) { return s.accepting; })) {
    throw ValidationError("states: " + kindText + " games need at least one accepting state");
  }

  GameMetadata md;
  if (doc.contains("metadata")) md = parseMetadata(doc["metadata"]);
  return FeaturedGame(*kind, std::move(products), std::move(parsedStates), initial, std::move(parsedTransitions),
                      std::move(md));
}

std::string emitGame(const FeaturedGame& g) {
  json doc;
  doc["features"] = g.features().names();
  doc["products"] = detail::emitProducts(g.products());
  doc["kind"] = std::string(toString(g.kind()));
  doc["initial"] = g.state(g.initial()).id;
  json states = json::array();
  const bool reach = g.kind() == GameKind::Reachability || g.kind() == GameKind::MinReachability;
  for (const auto& s : g.states()) {
    json o;
    o["id"] = s.id;
    o["owner"] = static_cast<int>(s.owner);
    if (reach || s.accepting) o["accepting"] = s.accepting;
    if (s.priority) o["priority"] = *s.priority;
    states.push_back(std::move(o));
  }
  doc["states"] = std::move(states);
  json transitions = json::array();
  for (const auto& t : g.transitions()) {
    json o;
    o["from"] = g.state(t.from).id;
    o["to"] = g.state(t.to).id;
    o["guard"] = toString(t.guard, g.features());
    if (t.weight) o["weight"] = detail::number(*t.weight);
    transitions.push_back(std::move(o));
  }
  doc["transitions"] = std::move(transitions);
  if (!g.metadata().empty()) doc["metadata"] = metadataToJson(g.metadata());
  return doc.dump(2) + "\n";
}

std::string readTextFile(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + file.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeTextFile(const std::filesystem::path& file, std::string_view text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + file.string() + "'");
  out << text;
}

FeaturedGame loadGame(const std::filesystem::path& file) {
  const std::string text = readTextFile(file);
  try {
    return parseGame(text);
  } catch (const ParseError& e) {
    throw ParseError(file.string() + ": " + e.detail(), e.position());
  } catch (const ValidationError& e) {
    throw ValidationError(file.string() + ": " + e.what());
  }
}

bool sameStructure(const FeaturedGame& a, const FeaturedGame& b) {
  if (a.kind() != b.kind() || !(a.products() == b.products()) || a.states() != b.states() ||
      a.initial() != b.initial() || a.transitions().size() != b.transitions().size() ||
      !(a.metadata() == b.metadata())) {
    return false;
  }
  for (std::size_t t = 0; t < a.transitions().size(); ++t) {
    const auto& x = a.transition(t);
    const auto& y = b.transition(t);
    if (x.from != y.from || x.to != y.to || x.weight != y.weight || !(x.guard == y.guard)) return false;
  }
  return true;
}

}  // namespace fgame
