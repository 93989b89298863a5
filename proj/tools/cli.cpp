#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fgame/errors.hpp"
#include "fgame/featured_solvers.hpp"
#include "fgame/fts.hpp"
#include "fgame/game_io.hpp"
#include "fgame/plain_solvers.hpp"
#include "fgame/solution_io.hpp"
#include "fgame/translations.hpp"

namespace fgame::cli {
namespace {

using nlohmann::json;

struct GameOptions {
  std::string game;
  std::string type;
  std::optional<double> lambda;
  double epsilon = 1e-9;
  std::vector<std::string> products;
  std::string format = "json";
};

struct SolveOptions : GameOptions {
  std::string strategy;
};

struct VerifyOptions : GameOptions {
  std::string solution;
  unsigned jobs = 1;
};

struct TranslateOptions {
  std::string fts;
  std::string second;
  std::string formula;
  std::optional<double> lambda;
  std::string out;
};

struct ProductsOptions {
  std::string file;
  std::string format = "json";
};

GameKind kindFromFlag(const std::string& s) {
  if (s == "reach") return GameKind::Reachability;
  if (s == "minreach") return GameKind::MinReachability;
  if (auto k = parseGameKind(s)) return *k;
  throw ParameterError("unknown game type '" + s + "'");
}

const char* solverName(GameKind k) {
  switch (k) {
    case GameKind::Reachability:
      return "fattrStar";
    case GameKind::MinReachability:
      return "fwattrStar";
    case GameKind::Discounted:
      return "fdattrStar";
    case GameKind::Energy:
      return "feattrStar";
    case GameKind::Parity:
      return "fpattrStar";
  }
  return "";
}

SolveParams resolveParams(const FeaturedGame& g, const GameOptions& o) {
  if (!o.type.empty() && kindFromFlag(o.type) != g.kind()) {
    throw ParameterError("--type " + o.type + " does not match the document kind '" + std::string(toString(g.kind())) +
                         "'");
  }
  if (!(o.epsilon > 0.0)) throw ParameterError("--epsilon must be positive");
  SolveParams params;
  params.epsilon = o.epsilon;
  if (g.kind() == GameKind::Discounted) {
    if (o.lambda) {
      params.lambda = *o.lambda;
    } else if (g.metadata().discount) {
      params.lambda = *g.metadata().discount;
    } else {
      throw ParameterError("--lambda is required for discounted games");
    }
    if (!(params.lambda > 0.0 && params.lambda < 1.0)) throw ParameterError("--lambda must lie in (0,1)");
  } else if (o.lambda) {
    throw ParameterError("--lambda only applies to discounted games");
  }
  return params;
}

std::string trim(std::string s) {
  const auto notSpace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notSpace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notSpace).base(), s.end());
  return s;
}

/// Product indices selected by the --product filters, all products if none.
std::vector<std::size_t> selectProducts(const ProductSet& px, const std::vector<std::string>& filters) {
  std::vector<std::size_t> out;
  if (filters.empty()) {
    for (std::size_t i = 0; i < px.size(); ++i) out.push_back(i);
    return out;
  }
  for (const auto& f : filters) {
    std::vector<std::string> names;
    std::stringstream ss(f);
    for (std::string item; std::getline(ss, item, ',');) {
      item = trim(item);
      if (!item.empty()) names.push_back(item);
    }
    Product p;
    try {
      p = Product::fromNames(px.features(), names);
    } catch (const ValidationError& e) {
      throw ParameterError(std::string("--product: ") + e.what());
    }
    auto idx = px.indexOf(p);
    if (!idx) throw ParameterError("--product: " + p.toString(px.features()) + " is not in the product set");
    if (std::find(out.begin(), out.end(), *idx) == out.end()) out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void checkFormat(const std::string& f) {
  if (f != "json" && f != "table") throw ParameterError("--format must be json or table");
}

json gameSummary(const FeaturedGame& g) {
  json o;
  o["kind"] = std::string(toString(g.kind()));
  o["states"] = g.states().size();
  o["transitions"] = g.transitions().size();
  o["initial"] = g.state(g.initial()).id;
  o["features"] = g.features().names();
  o["products"] = g.products().size();
  if (!g.metadata().empty()) o["metadata"] = metadataToJson(g.metadata());
  return o;
}

json parametersJson(const FeaturedGame& g, const SolveParams& params) {
  json o;
  o["epsilon"] = params.epsilon;
  if (g.kind() == GameKind::Discounted) o["lambda"] = params.lambda;
  return o;
}

std::string renderTable(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    out += line + "\n";
  }
  return out;
}

std::string yesNo(std::optional<bool> w) {
  if (!w) return "-";
  return *w ? "yes" : "no";
}

template <class X>
json tableJson(const FeaturedGame& g, const FeaturedResult<X>& r, const std::vector<std::size_t>& selected) {
  json table = json::array();
  for (auto p : selected) {
    const X& v = r.values[g.initial()].lookup(p);
    json row;
    row["product"] = g.products()[p].names(g.features());
    row["value"] = valueToJson(v);
    if (auto w = winsWith(v)) row["winner"] = *w;
    table.push_back(std::move(row));
  }
  return table;
}

template <class X>
std::vector<std::vector<std::string>> tableRows(const FeaturedGame& g, const FeaturedResult<X>& r,
                                                const std::vector<std::size_t>& selected) {
  std::vector<std::vector<std::string>> rows{{"product", "value", "winner"}};
  for (auto p : selected) {
    const X& v = r.values[g.initial()].lookup(p);
    rows.push_back({g.products()[p].toString(g.features()), valueToText(v), yesNo(winsWith(v))});
  }
  return rows;
}

std::size_t iterationsOf(const FeaturedValues& v) {
  return std::visit([](const auto& r) { return r.iterations; }, v);
}

// ------------------------------------------------------------------- solve

int runSolve(const SolveOptions& o, std::ostream& out) {
  checkFormat(o.format);
  const FeaturedGame g = loadGame(o.game);
  const SolveParams params = resolveParams(g, o);
  const auto selected = selectProducts(g.products(), o.products);

  const auto start = std::chrono::steady_clock::now();
  const FeaturedValues values = solveFeatured(g, params);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::optional<json> strategy;
  if (!o.strategy.empty()) {
    strategy = strategyToJson(g, extractFeaturedStrategy(g, values, params));
    writeTextFile(o.strategy, strategy->dump(2) + "\n");
  }

  if (o.format == "table") {
    std::ostringstream head;
    head << toString(g.kind()) << " game, " << g.states().size() << " states, " << g.products().size()
         << " products; " << solverName(g.kind()) << " converged after " << iterationsOf(values) << " rounds\n";
    out << head.str();
    std::visit([&](const auto& r) { out << renderTable(tableRows(g, r, selected)); }, values);
    return kOk;
  }

  json report;
  report["game"] = gameSummary(g);
  report["solver"] = solverName(g.kind());
  report["parameters"] = parametersJson(g, params);
  report["iterations"] = iterationsOf(values);
  report["duration_ms"] = ms;
  report["table"] = std::visit([&](const auto& r) { return tableJson(g, r, selected); }, values);
  report["solution"] = solutionToJson(g, values);
  if (strategy) report["strategy"] = *strategy;
  out << report.dump(2) << "\n";
  return kOk;
}

// ------------------------------------------------------------------ verify

struct Mismatch {
  std::size_t product;
  std::size_t state;
  std::string oracle;
  json featured;
  json reference;
};

template <class X>
bool agrees(const X& a, const X& b, double tolerance) {
  if constexpr (std::is_same_v<X, double>) {
    return std::fabs(a - b) <= tolerance;
  } else {
    return a == b;
  }
}

template <class X>
std::optional<Mismatch> compareProduct(const FeaturedGame& g, const FeaturedResult<X>& fr, std::size_t p,
                                       const SolveParams& params, double tolerance) {
  const GameStructure proj = projectGame(g, p);
  const PlainValues pv = solvePlain(proj, params);
  const auto& plain = std::get<PlainResult<X>>(pv);
  for (std::size_t s = 0; s < proj.size(); ++s) {
    const X& a = fr.values[s].lookup(p);
    if (!agrees(a, plain.values[s], tolerance)) {
      return Mismatch{p, s, "plain", valueToJson(a), valueToJson(plain.values[s])};
    }
  }
  if constexpr (std::is_same_v<X, ParityMeasure>) {
    const ZielonkaResult z = zielonkaOracle(proj);
    for (std::size_t s = 0; s < proj.size(); ++s) {
      const bool featuredWins = !fr.values[s].lookup(p).isTop();
      if (featuredWins != z.winner[s]) {
        return Mismatch{p, s, "zielonka", json(featuredWins), json(static_cast<bool>(z.winner[s]))};
      }
    }
  }
  return std::nullopt;
}

template <class X>
std::vector<std::optional<Mismatch>> compareAll(const FeaturedGame& g, const FeaturedResult<X>& fr,
                                                const std::vector<std::size_t>& selected, const SolveParams& params,
                                                double tolerance, unsigned jobs) {
  std::vector<std::optional<Mismatch>> results(selected.size());
  std::vector<std::exception_ptr> errors(selected.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < selected.size();) {
      try {
        results[i] = compareProduct(g, fr, selected[i], params, tolerance);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(selected.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

FeaturedValues loadSolution(const FeaturedGame& g, const std::string& file) {
  const std::string text = readTextFile(file);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError(file + ": malformed JSON");
  if (doc.is_object() && doc.contains("solution")) doc = doc["solution"];
  try {
    return solutionFromJson(g, doc);
  } catch (const ValidationError& e) {
    throw ValidationError(file + ": " + e.what());
  }
}

int runVerify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  checkFormat(o.format);
  if (o.jobs == 0) throw ParameterError("--jobs must be at least 1");
  const FeaturedGame g = loadGame(o.game);
  const SolveParams params = resolveParams(g, o);
  const auto selected = selectProducts(g.products(), o.products);
  const double tolerance =
      g.kind() == GameKind::Discounted ? 2.0 * params.epsilon / (1.0 - params.lambda) : 0.0;

  const auto start = std::chrono::steady_clock::now();
  const FeaturedValues values = o.solution.empty() ? solveFeatured(g, params) : loadSolution(g, o.solution);
  const auto results = std::visit(
      [&](const auto& r) { return compareAll(g, r, selected, params, tolerance, o.jobs); }, values);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::optional<Mismatch> first;
  for (const auto& r : results) {
    if (r) {
      first = r;
      break;
    }
  }

  if (first) {
    err << "mismatch on product " << g.products()[first->product].toString(g.features()) << " at state '"
        << g.state(first->state).id << "' against the " << first->oracle << " oracle: featured "
        << first->featured.dump() << ", oracle " << first->reference.dump() << "\n";
  }

  if (o.format == "table") {
    std::vector<std::vector<std::string>> rows{{"product", "status"}};
    for (std::size_t i = 0; i < selected.size(); ++i) {
      rows.push_back({g.products()[selected[i]].toString(g.features()), results[i] ? "mismatch" : "match"});
    }
    out << renderTable(rows);
    out << (first ? "FAILED\n" : "passed\n");
    return first ? kMismatch : kOk;
  }

  json report;
  report["game"] = gameSummary(g);
  report["solver"] = o.solution.empty() ? solverName(g.kind()) : "file";
  report["parameters"] = parametersJson(g, params);
  if (o.solution.empty()) report["iterations"] = iterationsOf(values);
  report["duration_ms"] = ms;
  report["table"] = std::visit([&](const auto& r) { return tableJson(g, r, selected); }, values);
  json check;
  check["passed"] = !first.has_value();
  check["tolerance"] = tolerance;
  json rows = json::array();
  for (std::size_t i = 0; i < selected.size(); ++i) {
    rows.push_back({{"product", g.products()[selected[i]].names(g.features())},
                    {"status", results[i] ? "mismatch" : "match"}});
  }
  check["products"] = std::move(rows);
  if (first) {
    check["counterexample"] = {{"product", g.products()[first->product].names(g.features())},
                               {"state", g.state(first->state).id},
                               {"oracle", first->oracle},
                               {"featured", first->featured},
                               {"expected", first->reference}};
  }
  report["verification"] = std::move(check);
  out << report.dump(2) << "\n";
  return first ? kMismatch : kOk;
}

// --------------------------------------------------------------- translate

void emitTranslation(const FeaturedGame& g, const std::string& outFile, std::ostream& out, std::ostream& err) {
  for (const auto& w : g.metadata().warnings) err << "warning: " << w << "\n";
  const std::string doc = emitGame(g);
  if (outFile.empty()) {
    out << doc;
  } else {
    writeTextFile(outFile, doc);
  }
}

int runMucalc(const TranslateOptions& o, std::ostream& out, std::ostream& err) {
  const Fts f = loadFts(o.fts);
  const MuFormula phi = parseMuFormula(o.formula);
  emitTranslation(mucalcToParityGame(f, phi), o.out, out, err);
  return kOk;
}

int runDistance(const TranslateOptions& o, std::ostream& out, std::ostream& err) {
  if (!o.lambda) throw ParameterError("--lambda is required");
  const Fts f1 = loadFts(o.fts);
  if (o.second.empty()) {
    if (f1.hasTolerances()) {
      const auto [low, high] = splitTolerances(f1);
      emitTranslation(distanceGame(low, high, *o.lambda), o.out, out, err);
    } else {
      emitTranslation(distanceGame(f1, f1, *o.lambda), o.out, out, err);
    }
    return kOk;
  }
  const Fts f2 = loadFts(o.second);
  emitTranslation(distanceGame(f1, f2, *o.lambda), o.out, out, err);
  return kOk;
}

// ---------------------------------------------------------------- products

int runProducts(const ProductsOptions& o, std::ostream& out) {
  checkFormat(o.format);
  const std::string text = readTextFile(o.file);
  const json probe = json::parse(text, nullptr, false);
  ProductSet px;
  try {
    if (probe.is_object() && probe.contains("actions")) {
      px = parseFts(text).products();
    } else {
      px = parseGame(text).products();
    }
  } catch (const ParseError& e) {
    throw ParseError(o.file + ": " + e.detail(), e.position());
  } catch (const ValidationError& e) {
    throw ValidationError(o.file + ": " + e.what());
  }

  if (o.format == "table") {
    std::vector<std::vector<std::string>> rows{{"product", "characteristic formula"}};
    for (const auto& p : px) rows.push_back({p.toString(px.features()), toString(charFormula(p, px.features()), px.features())});
    out << renderTable(rows);
    return kOk;
  }
  json rows = json::array();
  for (const auto& p : px) {
    rows.push_back({{"features", p.names(px.features())},
                    {"charFormula", toString(charFormula(p, px.features()), px.features())}});
  }
  json report;
  report["features"] = px.features().names();
  report["products"] = std::move(rows);
  out << report.dump(2) << "\n";
  return kOk;
}

void addGameOptions(CLI::App* sub, GameOptions& o) {
  sub->add_option("--game", o.game, "Game document (JSON)")->required();
  sub->add_option("--type", o.type, "reach|minreach|discounted|energy|parity; must match the document");
  sub->add_option("--lambda", o.lambda, "Discount factor in (0,1)");
  sub->add_option("--epsilon", o.epsilon, "Stopping precision for discounted games")->capture_default_str();
  sub->add_option("--product", o.products, "Restrict the table to a product, e.g. \"f1,f2\" (repeatable)");
  sub->add_option("--format", o.format, "json|table")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve featured games over software product lines"};
  app.name("fgame");
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solveCmd = app.add_subcommand("solve", "Solve a featured game for every product at once");
  addGameOptions(solveCmd, solve);
  solveCmd->add_option("--strategy", solve.strategy, "Write the featured player-1 strategy to FILE");

  VerifyOptions verify;
  auto* verifyCmd = app.add_subcommand("verify", "Compare the featured solution with per-product oracles");
  addGameOptions(verifyCmd, verify);
  verifyCmd->add_option("--solution", verify.solution, "Check this solution file instead of solving")
      ;
  verifyCmd->add_option("--jobs", verify.jobs, "Worker threads for the per-product loop")->capture_default_str();

  TranslateOptions translate;
  auto* translateCmd = app.add_subcommand("translate", "Build a featured game from featured transition systems");
  translateCmd->require_subcommand(1);
  auto* mucalcCmd = translateCmd->add_subcommand("mucalc", "Parity game checking a mu-calculus formula");
  mucalcCmd->add_option("fts", translate.fts, "FTS document")->required();
  mucalcCmd->add_option("formula", translate.formula, "Closed mu-calculus formula")->required();
  mucalcCmd->add_option("--out", translate.out, "Output file (default: standard output)");
  auto* distanceCmd = translateCmd->add_subcommand("distance", "Discounted game for the bisimulation distance");
  distanceCmd->add_option("fts", translate.fts, "Weighted FTS, or one with weight tolerances")
      ->required()
      ;
  distanceCmd->add_option("fts2", translate.second, "Second weighted FTS");
  distanceCmd->add_option("--lambda", translate.lambda, "Discount factor of the distance, in (0,1)");
  distanceCmd->add_option("--out", translate.out, "Output file (default: standard output)");

  ProductsOptions products;
  auto* productsCmd = app.add_subcommand("products", "List the products of a game or FTS document");
  productsCmd->add_option("--game", products.file, "Game or FTS document")->required();
  productsCmd->add_option("--format", products.format, "json|table")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParameter;
  }

  try {
    if (solveCmd->parsed()) return runSolve(solve, out);
    if (verifyCmd->parsed()) return runVerify(verify, out, err);
    if (mucalcCmd->parsed()) return runMucalc(translate, out, err);
    if (distanceCmd->parsed()) return runDistance(translate, out, err);
    if (productsCmd->parsed()) return runProducts(products, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const ConsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kConsistency;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kConsistency;
  }
  return kParameter;
}

}  // namespace fgame::cli
