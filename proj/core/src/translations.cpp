#include "fgame/translations.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <variant>

#include "fgame/errors.hpp"

namespace fgame {

// ----------------------------------------------------------------- MuFormula

namespace {

using Kind = MuFormula::Kind;

}  // namespace

MuFormula MuFormula::tt() {
  static const auto node = std::make_shared<const Node>(Node{Kind::True, {}, nullptr, nullptr});
  return MuFormula(node);
}

MuFormula MuFormula::ff() {
  static const auto node = std::make_shared<const Node>(Node{Kind::False, {}, nullptr, nullptr});
  return MuFormula(node);
}

MuFormula MuFormula::var(std::string name) {
  return MuFormula(std::make_shared<const Node>(Node{Kind::Var, std::move(name), nullptr, nullptr}));
}

MuFormula MuFormula::disj(MuFormula a, MuFormula b) {
  return MuFormula(std::make_shared<const Node>(Node{Kind::Or, {}, std::make_shared<const MuFormula>(std::move(a)),
                                                     std::make_shared<const MuFormula>(std::move(b))}));
}

MuFormula MuFormula::conj(MuFormula a, MuFormula b) {
  return MuFormula(std::make_shared<const Node>(Node{Kind::And, {}, std::make_shared<const MuFormula>(std::move(a)),
                                                     std::make_shared<const MuFormula>(std::move(b))}));
}

MuFormula MuFormula::diamond(std::string action, MuFormula body) {
  return MuFormula(std::make_shared<const Node>(
      Node{Kind::Diamond, std::move(action), std::make_shared<const MuFormula>(std::move(body)), nullptr}));
}

MuFormula MuFormula::box(std::string action, MuFormula body) {
  return MuFormula(std::make_shared<const Node>(
      Node{Kind::Box, std::move(action), std::make_shared<const MuFormula>(std::move(body)), nullptr}));
}

MuFormula MuFormula::mu(std::string var, MuFormula body) {
  return MuFormula(std::make_shared<const Node>(
      Node{Kind::Mu, std::move(var), std::make_shared<const MuFormula>(std::move(body)), nullptr}));
}

MuFormula MuFormula::nu(std::string var, MuFormula body) {
  return MuFormula(std::make_shared<const Node>(
      Node{Kind::Nu, std::move(var), std::make_shared<const MuFormula>(std::move(body)), nullptr}));
}

bool operator==(const MuFormula& a, const MuFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name()) return false;
  switch (a.kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Var:
      return true;
    case Kind::Or:
    case Kind::And:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    default:
      return a.body() == b.body();
  }
}

// -------------------------------------------------------------------- parser

namespace {

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class MuParser {
 public:
  explicit MuParser(std::string_view text) : text_(text) {
    for (std::size_t i = 0; i < text_.size();) {
      if (isIdentStart(text_[i])) {
        std::size_t j = i;
        while (j < text_.size() && isIdentChar(text_[j])) ++j;
        used_.insert(std::string(text_.substr(i, j - i)));
        i = j;
      } else {
        ++i;
      }
    }
  }

  MuFormula parse() {
    MuFormula f = parseFormula();
    skipSpace();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("formula: " + msg, pos_);
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skipSpace();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string peekIdent() {
    skipSpace();
    std::size_t j = pos_;
    if (j >= text_.size() || !isIdentStart(text_[j])) return {};
    while (j < text_.size() && isIdentChar(text_[j])) ++j;
    return std::string(text_.substr(pos_, j - pos_));
  }

  std::string ident() {
    std::string id = peekIdent();
    if (id.empty()) fail("expected an identifier");
    pos_ += id.size();
    return id;
  }

  MuFormula parseFormula() {
    const std::string id = peekIdent();
    if (id == "mu" || id == "nu") return parseFixpoint();
    return parseOr();
  }

  MuFormula parseFixpoint() {
    const std::string binder = ident();
    const std::size_t at = (skipSpace(), pos_);
    const std::string var = ident();
    if (isKeyword(var)) {
      pos_ = at;
      fail("'" + var + "' cannot be a variable");
    }
    expect(".");
    std::string unique = var;
    if (bound_.count(var)) {
      for (int k = 2;; ++k) {
        unique = var + "_" + std::to_string(k);
        if (!used_.count(unique) && !bound_.count(unique)) break;
      }
    }
    bound_.insert(unique);
    scope_.emplace_back(var, unique);
    MuFormula body = parseFormula();
    scope_.pop_back();
    return binder == "mu" ? MuFormula::mu(unique, body) : MuFormula::nu(unique, body);
  }

  MuFormula parseOr() {
    MuFormula f = parseAnd();
    while (accept("||")) f = MuFormula::disj(f, parseAnd());
    return f;
  }

  MuFormula parseAnd() {
    MuFormula f = parseUnary();
    while (accept("&&")) f = MuFormula::conj(f, parseUnary());
    return f;
  }

  MuFormula parseUnary() {
    if (accept("<")) {
      const std::string a = ident();
      expect(">");
      return MuFormula::diamond(a, parseUnary());
    }
    if (accept("[")) {
      const std::string a = ident();
      expect("]");
      return MuFormula::box(a, parseUnary());
    }
    return parseAtom();
  }

  MuFormula parseAtom() {
    if (accept("(")) {
      MuFormula f = parseFormula();
      expect(")");
      return f;
    }
    skipSpace();
    const std::size_t at = pos_;
    const std::string id = peekIdent();
    if (id.empty()) {
      if (pos_ >= text_.size()) fail("unexpected end of formula");
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    if (id == "mu" || id == "nu") return parseFixpoint();
    pos_ += id.size();
    if (id == "tt") return MuFormula::tt();
    if (id == "ff") return MuFormula::ff();
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == id) return MuFormula::var(it->second);
    }
    pos_ = at;
    fail("unbound variable '" + id + "'");
  }

  static bool isKeyword(const std::string& s) { return s == "tt" || s == "ff" || s == "mu" || s == "nu"; }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::set<std::string> used_;
  std::set<std::string> bound_;
  std::vector<std::pair<std::string, std::string>> scope_;
};

int muPrecedence(Kind k) {
  switch (k) {
    case Kind::Mu:
    case Kind::Nu:
      return 0;
    case Kind::Or:
      return 1;
    case Kind::And:
      return 2;
    case Kind::Diamond:
    case Kind::Box:
      return 3;
    default:
      return 4;
  }
}

void renderMu(const MuFormula& f, int context, std::string& out) {
  const bool paren = muPrecedence(f.kind()) < context;
  if (paren) out += '(';
  switch (f.kind()) {
    case Kind::True:
      out += "tt";
      break;
    case Kind::False:
      out += "ff";
      break;
    case Kind::Var:
      out += f.name();
      break;
    case Kind::Or:
      renderMu(f.lhs(), 1, out);
      out += " || ";
      renderMu(f.rhs(), 2, out);
      break;
    case Kind::And:
      renderMu(f.lhs(), 2, out);
      out += " && ";
      renderMu(f.rhs(), 3, out);
      break;
    case Kind::Diamond:
      out += "<" + f.name() + ">";
      renderMu(f.body(), 3, out);
      break;
    case Kind::Box:
      out += "[" + f.name() + "]";
      renderMu(f.body(), 3, out);
      break;
    case Kind::Mu:
    case Kind::Nu:
      out += (f.kind() == Kind::Mu ? "mu " : "nu ") + f.name() + ". ";
      renderMu(f.body(), 0, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace

MuFormula parseMuFormula(std::string_view text) { return MuParser(text).parse(); }

std::string toString(const MuFormula& f) {
  std::string out;
  renderMu(f, 0, out);
  return out;
}

bool occursFree(const MuFormula& f, std::string_view x) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
      return false;
    case Kind::Var:
      return f.name() == x;
    case Kind::Or:
    case Kind::And:
      return occursFree(f.lhs(), x) || occursFree(f.rhs(), x);
    case Kind::Diamond:
    case Kind::Box:
      return occursFree(f.body(), x);
    case Kind::Mu:
    case Kind::Nu:
      return f.name() != x && occursFree(f.body(), x);
  }
  return false;
}

MuFormula substitute(const MuFormula& psi, std::string_view x, const MuFormula& replacement) {
  switch (psi.kind()) {
    case Kind::True:
    case Kind::False:
      return psi;
    case Kind::Var:
      return psi.name() == x ? replacement : psi;
    case Kind::Or:
      return MuFormula::disj(substitute(psi.lhs(), x, replacement), substitute(psi.rhs(), x, replacement));
    case Kind::And:
      return MuFormula::conj(substitute(psi.lhs(), x, replacement), substitute(psi.rhs(), x, replacement));
    case Kind::Diamond:
      return MuFormula::diamond(psi.name(), substitute(psi.body(), x, replacement));
    case Kind::Box:
      return MuFormula::box(psi.name(), substitute(psi.body(), x, replacement));
    case Kind::Mu:
    case Kind::Nu:
      if (psi.name() == x) return psi;
      return psi.kind() == Kind::Mu ? MuFormula::mu(psi.name(), substitute(psi.body(), x, replacement))
                                    : MuFormula::nu(psi.name(), substitute(psi.body(), x, replacement));
  }
  return psi;
}

// --------------------------------------------------------- alternation depth

namespace {

void collectFixpoints(const MuFormula& f, std::vector<const MuFormula*>& out) {
  switch (f.kind()) {
    case Kind::Or:
    case Kind::And:
      collectFixpoints(f.lhs(), out);
      collectFixpoints(f.rhs(), out);
      return;
    case Kind::Diamond:
    case Kind::Box:
      collectFixpoints(f.body(), out);
      return;
    case Kind::Mu:
    case Kind::Nu:
      out.push_back(&f);
      collectFixpoints(f.body(), out);
      return;
    default:
      return;
  }
}

// Fixpoints strictly inside `binder` in which its variable occurs free.
std::vector<const MuFormula*> dependents(const MuFormula& binder) {
  std::vector<const MuFormula*> all;
  collectFixpoints(binder.body(), all);
  std::vector<const MuFormula*> out;
  for (const auto* theta : all) {
    if (occursFree(*theta, binder.name())) out.push_back(theta);
  }
  return out;
}

unsigned depthOf(const MuFormula& binder) {
  unsigned d = 1;
  for (const auto* theta : dependents(binder)) {
    d = std::max(d, depthOf(*theta) + (theta->kind() != binder.kind() ? 1U : 0U));
  }
  return d;
}

const MuFormula* findBinder(const MuFormula& phi, std::string_view var) {
  std::vector<const MuFormula*> all;
  collectFixpoints(phi, all);
  for (const auto* f : all) {
    if (f->name() == var) return f;
  }
  return nullptr;
}

// Max-parity priority of a binder: 2*floor(ad/2) for nu and 2*floor(ad/2)+1
// for mu, raised when needed so that the binder outranks every dependent
// fixpoint (strictly for the dual kind).
std::uint32_t maxParityPriority(const MuFormula& binder, std::map<std::string, std::uint32_t>& memo) {
  if (auto it = memo.find(binder.name()); it != memo.end()) return it->second;
  const unsigned ad = depthOf(binder);
  const std::uint32_t parity = binder.kind() == Kind::Mu ? 1 : 0;
  std::uint32_t p = 2 * (ad / 2) + parity;
  for (const auto* theta : dependents(binder)) {
    const std::uint32_t q = maxParityPriority(*theta, memo);
    const std::uint32_t need = theta->kind() == binder.kind() ? q : q + 1;
    while (p < need) p += 2;
  }
  memo[binder.name()] = p;
  return p;
}

}  // namespace

unsigned alternationDepth(const MuFormula& phi, std::string_view var) {
  const MuFormula* binder = findBinder(phi, var);
  if (!binder) throw ValidationError("variable '" + std::string(var) + "' is not bound in the formula");
  return depthOf(*binder);
}

// -------------------------------------------------------- parity translation

namespace {

void collectActions(const MuFormula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Kind::Or:
    case Kind::And:
      collectActions(f.lhs(), out);
      collectActions(f.rhs(), out);
      return;
    case Kind::Diamond:
    case Kind::Box:
      out.insert(f.name());
      collectActions(f.body(), out);
      return;
    case Kind::Mu:
    case Kind::Nu:
      collectActions(f.body(), out);
      return;
    default:
      return;
  }
}

struct Edge {
  std::size_t from;
  std::size_t to;
  FeatureExpr guard;
};

}  // namespace

FeaturedGame mucalcToParityGame(const Fts& f, const MuFormula& phi) {
  GameMetadata md;
  md.source = "mucalc";
  md.formula = toString(phi);
  {
    std::set<std::string> acts;
    collectActions(phi, acts);
    for (const auto& a : acts) {
      if (std::find(f.actions().begin(), f.actions().end(), a) == f.actions().end()) {
        md.warnings.push_back("action '" + a + "' does not occur in the FTS; its modalities have no successors");
      }
    }
  }

  std::map<std::string, std::uint32_t> binderPriority;
  {
    std::vector<const MuFormula*> all;
    collectFixpoints(phi, all);
    for (const auto* b : all) maxParityPriority(*b, binderPriority);
  }

  std::vector<MuFormula> formulas;
  std::unordered_map<std::string, std::size_t> formulaIndex;
  auto intern = [&](const MuFormula& g) {
    auto [it, inserted] = formulaIndex.try_emplace(toString(g), formulas.size());
    if (inserted) formulas.push_back(g);
    return it->second;
  };

  std::vector<std::pair<std::size_t, std::size_t>> nodes;  // (fts state, formula)
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> nodeIndex;
  std::deque<std::size_t> queue;
  auto node = [&](std::size_t s, std::size_t fi) {
    auto [it, inserted] = nodeIndex.try_emplace({s, fi}, nodes.size());
    if (inserted) {
      nodes.emplace_back(s, fi);
      queue.push_back(it->second);
    }
    return it->second;
  };

  std::vector<Edge> edges;
  std::vector<State> states;
  std::vector<bool> playerOneDeadEnd;
  std::vector<std::optional<std::uint32_t>> fixPriority;

  node(f.initial(), intern(phi));
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    const auto [s, fi] = nodes[v];
    const MuFormula psi = formulas[fi];

    State st;
    st.id = "(" + f.states()[s] + ", " + toString(psi) + ")";
    std::optional<std::uint32_t> prio;
    std::vector<Edge> out;
    switch (psi.kind()) {
      case Kind::True:
        st.owner = Player::Two;
        break;
      case Kind::False:
        st.owner = Player::One;
        break;
      case Kind::Or:
      case Kind::And:
        st.owner = psi.kind() == Kind::Or ? Player::One : Player::Two;
        out.push_back({v, node(s, intern(psi.lhs())), FeatureExpr::top()});
        out.push_back({v, node(s, intern(psi.rhs())), FeatureExpr::top()});
        break;
      case Kind::Diamond:
      case Kind::Box:
        st.owner = psi.kind() == Kind::Diamond ? Player::One : Player::Two;
        for (auto t : f.outgoing(s)) {
          const auto& tr = f.transitions()[t];
          if (tr.action != psi.name()) continue;
          out.push_back({v, node(tr.to, intern(psi.body())), tr.guard});
        }
        break;
      case Kind::Mu:
      case Kind::Nu:
        st.owner = Player::Two;
        prio = binderPriority.at(psi.name());
        out.push_back({v, node(s, intern(substitute(psi.body(), psi.name(), psi))), FeatureExpr::top()});
        break;
      case Kind::Var:
        throw ValidationError("formula is not closed: free variable '" + psi.name() + "'");
    }

    ProductMask enabled(f.products().size());
    std::optional<FeatureExpr> any;
    for (const auto& e : out) {
      enabled |= denotation(e.guard, f.products());
      any = any ? (*any || e.guard) : e.guard;
    }
    bool repaired = false;
    if (!enabled.all()) {
      out.push_back({v, v, any ? !*any : FeatureExpr::top()});
      repaired = true;
    }
    if (v >= states.size()) {
      states.resize(v + 1);
      playerOneDeadEnd.resize(v + 1, false);
      fixPriority.resize(v + 1);
    }
    states[v] = std::move(st);
    playerOneDeadEnd[v] = repaired && states[v].owner == Player::One;
    fixPriority[v] = prio;
    edges.insert(edges.end(), out.begin(), out.end());
  }

  std::uint32_t maxPriority = 0;
  for (const auto& p : fixPriority) maxPriority = std::max(maxPriority, p.value_or(0));
  const std::uint32_t shift = maxPriority % 2;
  for (std::size_t v = 0; v < states.size(); ++v) {
    states[v].priority = maxPriority - fixPriority[v].value_or(0) + shift;
    if (playerOneDeadEnd[v]) *states[v].priority += 1;
  }

  std::vector<Transition> transitions;
  transitions.reserve(edges.size());
  for (auto& e : edges) transitions.push_back({e.from, e.to, std::nullopt, std::move(e.guard)});
  return FeaturedGame(GameKind::Parity, f.products(), std::move(states), 0, std::move(transitions), std::move(md));
}

// ------------------------------------------------------ distance translation

namespace {

void requireCompatible(const Fts& f1, const Fts& f2) {
  if (!(f1.products() == f2.products())) {
    throw ValidationError("both systems must share features and products");
  }
  for (const Fts* f : {&f1, &f2}) {
    if (!f->weighted() && !f->transitions().empty()) throw ValidationError("distance games need weighted systems");
    if (f->hasTolerances()) throw ValidationError("split tolerance weights before building a distance game");
  }
}

Rational maxMismatch(const Fts& f1, const Fts& f2) {
  Rational k(0);
  for (const auto& a : f1.transitions()) {
    for (const auto& b : f2.transitions()) k = std::max(k, abs(*a.weight - *b.weight));
  }
  return k;
}

}  // namespace

FeaturedGame distanceGame(const Fts& f1, const Fts& f2, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("discount factor must lie in (0,1)");
  requireCompatible(f1, f2);
  const double root = std::sqrt(lambda);
  const double unmatchedWeight = maxMismatch(f1, f2).toDouble() / root;
  const std::size_t n = f1.products().size();

  // P1 key: (s1, s2).  P2 key: (side, s1, s2, action, weight) where the
  // challenger's component is already its target.
  using P1Key = std::pair<std::size_t, std::size_t>;
  using P2Key = std::tuple<int, std::size_t, std::size_t, std::string, Rational>;
  struct P2Less {
    bool operator()(const P2Key& a, const P2Key& b) const {
      const auto& [sa, a1, a2, aa, aw] = a;
      const auto& [sb, b1, b2, ba, bw] = b;
      if (std::tie(sa, a1, a2, aa) != std::tie(sb, b1, b2, ba)) return std::tie(sa, a1, a2, aa) < std::tie(sb, b1, b2, ba);
      return aw < bw;
    }
  };

  std::vector<State> states;
  std::vector<std::variant<P1Key, P2Key>> keys;
  std::map<P1Key, std::size_t> p1Index;
  std::map<P2Key, std::size_t, P2Less> p2Index;
  std::deque<std::size_t> queue;

  auto p1 = [&](std::size_t a, std::size_t b) {
    auto [it, inserted] = p1Index.try_emplace({a, b}, states.size());
    if (inserted) {
      states.push_back({"(" + f1.states()[a] + "," + f2.states()[b] + ")", Player::One, false, std::nullopt});
      keys.emplace_back(P1Key{a, b});
      queue.push_back(it->second);
    }
    return it->second;
  };
  auto p2 = [&](const P2Key& k) {
    auto [it, inserted] = p2Index.try_emplace(k, states.size());
    if (inserted) {
      const auto& [side, a, b, action, w] = k;
      states.push_back({"(" + f1.states()[a] + "," + f2.states()[b] + "," + action + "," + w.toString() + "," +
                            std::to_string(side) + ")",
                        Player::Two, false, std::nullopt});
      keys.emplace_back(k);
      queue.push_back(it->second);
    }
    return it->second;
  };

  std::vector<Transition> transitions;
  std::size_t unmatched = 0;
  std::vector<ProductMask> reachedBy;  // products under which a P2 state can be entered

  auto addRepair = [&](std::size_t v, const std::vector<std::pair<FeatureExpr, ProductMask>>& guards, double weight) {
    ProductMask enabled(n);
    std::optional<FeatureExpr> any;
    for (const auto& [e, m] : guards) {
      enabled |= m;
      any = any ? (*any || e) : e;
    }
    if (enabled.all()) return ProductMask(n);
    transitions.push_back({v, v, weight, any ? !*any : FeatureExpr::top()});
    return ~enabled;
  };

  p1(f1.initial(), f2.initial());
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (reachedBy.size() < states.size()) reachedBy.resize(states.size(), ProductMask(n));
    std::vector<std::pair<FeatureExpr, ProductMask>> guards;
    if (const auto* key = std::get_if<P1Key>(&keys[v])) {
      const auto [a, b] = *key;
      for (auto t : f1.outgoing(a)) {
        const auto& tr = f1.transitions()[t];
        const std::size_t w = p2({1, tr.to, b, tr.action, *tr.weight});
        if (reachedBy.size() < states.size()) reachedBy.resize(states.size(), ProductMask(n));
        reachedBy[w] |= f1.guard(t).mask();
        transitions.push_back({v, w, 0.0, tr.guard});
        guards.emplace_back(tr.guard, f1.guard(t).mask());
      }
      for (auto t : f2.outgoing(b)) {
        const auto& tr = f2.transitions()[t];
        const std::size_t w = p2({2, a, tr.to, tr.action, *tr.weight});
        if (reachedBy.size() < states.size()) reachedBy.resize(states.size(), ProductMask(n));
        reachedBy[w] |= f2.guard(t).mask();
        transitions.push_back({v, w, 0.0, tr.guard});
        guards.emplace_back(tr.guard, f2.guard(t).mask());
      }
      addRepair(v, guards, 0.0);
    } else {
      const auto [side, a, b, action, x] = std::get<P2Key>(keys[v]);
      const Fts& responder = side == 1 ? f2 : f1;
      const std::size_t from = side == 1 ? b : a;
      for (auto t : responder.outgoing(from)) {
        const auto& tr = responder.transitions()[t];
        if (tr.action != action) continue;
        const std::size_t target = side == 1 ? p1(a, tr.to) : p1(tr.to, b);
        transitions.push_back({v, target, abs(x - *tr.weight).toDouble() / root, tr.guard});
        guards.emplace_back(tr.guard, responder.guard(t).mask());
      }
      const ProductMask stuck = addRepair(v, guards, unmatchedWeight);
      if (stuck.intersects(reachedBy[v])) ++unmatched;
    }
  }

  GameMetadata md;
  md.source = "distance";
  md.discount = root;
  md.lambda = lambda;
  md.unmatchedResponses = unmatched;
  return FeaturedGame(GameKind::Discounted, f1.products(), std::move(states), 0, std::move(transitions), std::move(md));
}

double directDistanceOracle(const Fts& f1, const Fts& f2, std::size_t productIndex, double lambda, double epsilon) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("discount factor must lie in (0,1)");
  if (!(epsilon > 0.0)) throw ParameterError("precision must be positive");
  requireCompatible(f1, f2);
  if (productIndex >= f1.products().size()) throw ParameterError("product index out of range");
  const double unmatched = maxMismatch(f1, f2).toDouble() / (1.0 - std::sqrt(lambda));

  auto enabled = [&](const Fts& f, std::size_t s) {
    std::vector<std::size_t> out;
    for (auto t : f.outgoing(s)) {
      if (f.guard(t).holds(productIndex)) out.push_back(t);
    }
    return out;
  };
  const std::size_t n1 = f1.states().size();
  const std::size_t n2 = f2.states().size();
  std::vector<double> d(n1 * n2, 0.0);
  for (;;) {
    std::vector<double> next(n1 * n2, 0.0);
    double change = 0.0;
    for (std::size_t a = 0; a < n1; ++a) {
      for (std::size_t b = 0; b < n2; ++b) {
        double value = 0.0;
        // Challenges by one side answered by the other.
        auto side = [&](const Fts& ch, std::size_t cs, const Fts& re, std::size_t rs, bool first) {
          for (auto t : enabled(ch, cs)) {
            const auto& ct = ch.transitions()[t];
            double best = unmatched;
            bool answered = false;
            for (auto u : enabled(re, rs)) {
              const auto& rt = re.transitions()[u];
              if (rt.action != ct.action) continue;
              const std::size_t ta = first ? ct.to : rt.to;
              const std::size_t tb = first ? rt.to : ct.to;
              const double v = abs(*ct.weight - *rt.weight).toDouble() + lambda * d[ta * n2 + tb];
              best = answered ? std::min(best, v) : v;
              answered = true;
            }
            value = std::max(value, best);
          }
        };
        side(f1, a, f2, b, true);
        side(f2, b, f1, a, false);
        next[a * n2 + b] = value;
        change = std::max(change, std::fabs(value - d[a * n2 + b]));
      }
    }
    d = std::move(next);
    if (change < epsilon) return d[f1.initial() * n2 + f2.initial()];
  }
}

}  // namespace fgame
