#include "fgame/feature_logic.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "fgame/errors.hpp"

namespace fgame {

// ---------------------------------------------------------------- FeatureSet

FeatureSet::FeatureSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() > kMaxFeatures) {
    throw ValidationError("at most " + std::to_string(kMaxFeatures) + " features are supported");
  }
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!index_.emplace(names_[i], i).second) {
      throw ValidationError("duplicate feature '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> FeatureSet::indexOf(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ------------------------------------------------------------------- Product

Product Product::fromNames(const FeatureSet& features, std::span<const std::string> names) {
  Product p;
  for (const auto& n : names) {
    auto i = features.indexOf(n);
    if (!i) throw ValidationError("unknown feature '" + n + "'");
    if (p.has(*i)) throw ValidationError("feature '" + n + "' listed twice in a product");
    p = p.with(*i);
  }
  return p;
}

std::vector<std::string> Product::names(const FeatureSet& features) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (has(i)) out.push_back(features.name(i));
  }
  return out;
}

std::string Product::toString(const FeatureSet& features) const {
  std::string s = "{";
  bool first = true;
  for (const auto& n : names(features)) {
    if (!first) s += ',';
    s += n;
    first = false;
  }
  return s + "}";
}

bool productLess(Product a, Product b, std::size_t featureCount) noexcept {
  for (std::size_t i = 0; i < featureCount; ++i) {
    if (a.has(i) != b.has(i)) return b.has(i);
  }
  return false;
}

// --------------------------------------------------------------- ProductMask

ProductMask::ProductMask(std::size_t size, bool value) : size_(size) {
  if (words() > 1) heap_.assign(words() - 1, value ? ~std::uint64_t{0} : 0);
  inline_ = value ? ~std::uint64_t{0} : 0;
  clearPadding();
}

ProductMask ProductMask::single(std::size_t size, std::size_t index) {
  ProductMask m(size);
  m.set(index);
  return m;
}

void ProductMask::set(std::size_t i) noexcept { word(i / 64) |= std::uint64_t{1} << (i % 64); }
void ProductMask::reset(std::size_t i) noexcept { word(i / 64) &= ~(std::uint64_t{1} << (i % 64)); }

void ProductMask::clearPadding() noexcept {
  if (size_ % 64 != 0 && words() > 0) {
    word(words() - 1) &= (std::uint64_t{1} << (size_ % 64)) - 1;
  }
  if (size_ == 0) inline_ = 0;
}

bool ProductMask::none() const noexcept {
  if (inline_ != 0) return false;
  return std::all_of(heap_.begin(), heap_.end(), [](std::uint64_t w) { return w == 0; });
}

bool ProductMask::all() const noexcept { return count() == size_; }

std::size_t ProductMask::count() const noexcept {
  std::size_t c = static_cast<std::size_t>(std::popcount(inline_));
  for (auto w : heap_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t ProductMask::first() const noexcept {
  for (std::size_t w = 0; w < words(); ++w) {
    if (word(w) != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(word(w)));
  }
  return size_;
}

ProductMask& ProductMask::operator&=(const ProductMask& o) noexcept {
  inline_ &= o.inline_;
  for (std::size_t i = 0; i < heap_.size(); ++i) heap_[i] &= o.heap_[i];
  return *this;
}

ProductMask& ProductMask::operator|=(const ProductMask& o) noexcept {
  inline_ |= o.inline_;
  for (std::size_t i = 0; i < heap_.size(); ++i) heap_[i] |= o.heap_[i];
  return *this;
}

ProductMask ProductMask::operator~() const {
  ProductMask m = *this;
  m.inline_ = ~m.inline_;
  for (auto& w : m.heap_) w = ~w;
  m.clearPadding();
  return m;
}

bool ProductMask::intersects(const ProductMask& o) const noexcept {
  if ((inline_ & o.inline_) != 0) return true;
  for (std::size_t i = 0; i < heap_.size(); ++i) {
    if ((heap_[i] & o.heap_[i]) != 0) return true;
  }
  return false;
}

bool operator==(const ProductMask& a, const ProductMask& b) noexcept {
  return a.size_ == b.size_ && a.inline_ == b.inline_ && a.heap_ == b.heap_;
}

std::size_t ProductMask::hash() const noexcept {
  std::size_t h = std::hash<std::uint64_t>{}(inline_) ^ size_;
  for (auto w : heap_) h = h * 1099511628211ULL ^ std::hash<std::uint64_t>{}(w);
  return h;
}

// ---------------------------------------------------------------- ProductSet

ProductSet::ProductSet(FeatureSet features, std::vector<Product> products)
    : features_(std::move(features)), products_(std::move(products)) {
  if (products_.empty()) throw ValidationError("product set must not be empty");
  const std::uint64_t allowed =
      features_.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << features_.size()) - 1;
  for (auto p : products_) {
    if ((p.bits() & ~allowed) != 0) throw ValidationError("product mentions an unknown feature");
  }
  const std::size_t n = features_.size();
  std::sort(products_.begin(), products_.end(),
            [n](Product a, Product b) { return productLess(a, b, n); });
  for (std::size_t i = 0; i < products_.size(); ++i) {
    if (!index_.emplace(products_[i].bits(), i).second) {
      throw ValidationError("duplicate product " + products_[i].toString(features_));
    }
  }
}

ProductSet ProductSet::all(FeatureSet features) {
  if (features.size() > 20) throw ValidationError("\"products\": \"all\" supports at most 20 features");
  std::vector<Product> ps;
  ps.reserve(std::size_t{1} << features.size());
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << features.size()); ++b) ps.emplace_back(b);
  return ProductSet(std::move(features), std::move(ps));
}

std::optional<std::size_t> ProductSet::indexOf(Product p) const {
  auto it = index_.find(p.bits());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------- FeatureExpr

FeatureExpr::FeatureExpr() : FeatureExpr(top()) {}

FeatureExpr FeatureExpr::top() {
  static const auto node = std::make_shared<const Node>(Node{Kind::True});
  return FeatureExpr(node);
}

FeatureExpr FeatureExpr::bottom() {
  static const auto node = std::make_shared<const Node>(Node{Kind::False});
  return FeatureExpr(node);
}

FeatureExpr FeatureExpr::var(std::size_t feature) {
  return FeatureExpr(std::make_shared<const Node>(Node{Kind::Var, feature}));
}

FeatureExpr operator!(const FeatureExpr& e) {
  return FeatureExpr(std::make_shared<const FeatureExpr::Node>(
      FeatureExpr::Node{FeatureExpr::Kind::Not, 0, std::make_shared<const FeatureExpr>(e), nullptr}));
}

FeatureExpr operator&&(const FeatureExpr& a, const FeatureExpr& b) {
  return FeatureExpr(std::make_shared<const FeatureExpr::Node>(
      FeatureExpr::Node{FeatureExpr::Kind::And, 0, std::make_shared<const FeatureExpr>(a),
                        std::make_shared<const FeatureExpr>(b)}));
}

FeatureExpr operator||(const FeatureExpr& a, const FeatureExpr& b) {
  return FeatureExpr(std::make_shared<const FeatureExpr::Node>(
      FeatureExpr::Node{FeatureExpr::Kind::Or, 0, std::make_shared<const FeatureExpr>(a),
                        std::make_shared<const FeatureExpr>(b)}));
}

bool operator==(const FeatureExpr& a, const FeatureExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FeatureExpr::Kind::True:
    case FeatureExpr::Kind::False:
      return true;
    case FeatureExpr::Kind::Var:
      return a.feature() == b.feature();
    case FeatureExpr::Kind::Not:
      return a.lhs() == b.lhs();
    case FeatureExpr::Kind::And:
    case FeatureExpr::Kind::Or:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

// -------------------------------------------------------------------- parser

namespace {

class GuardParser {
 public:
  GuardParser(std::string_view text, const FeatureSet& features) : text_(text), features_(features) {}

  FeatureExpr parse() {
    FeatureExpr e = parseOr();
    skipSpace();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("guard \"" + std::string(text_) + "\": " + msg, pos_);
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

  FeatureExpr parseOr() {
    FeatureExpr e = parseAnd();
    while (accept("||")) e = e || parseAnd();
    return e;
  }

  FeatureExpr parseAnd() {
    FeatureExpr e = parseUnary();
    while (accept("&&")) e = e && parseUnary();
    return e;
  }

  FeatureExpr parseUnary() {
    if (accept("!")) return !parseUnary();
    return parseAtom();
  }

  FeatureExpr parseAtom() {
    skipSpace();
    if (accept("(")) {
      FeatureExpr e = parseOr();
      if (!accept(")")) fail("expected ')'");
      return e;
    }
    if (pos_ >= text_.size()) fail("unexpected end of guard");
    const char c = text_[pos_];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      fail("unexpected '" + std::string(1, c) + "'");
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view ident = text_.substr(start, pos_ - start);
    if (ident == "true") return FeatureExpr::top();
    if (ident == "false") return FeatureExpr::bottom();
    auto idx = features_.indexOf(ident);
    if (!idx) {
      pos_ = start;
      fail("unknown feature '" + std::string(ident) + "'");
    }
    return FeatureExpr::var(*idx);
  }

  std::string_view text_;
  const FeatureSet& features_;
  std::size_t pos_ = 0;
};

// Binding strength: Or < And < Not/atoms.
int precedence(FeatureExpr::Kind k) {
  switch (k) {
    case FeatureExpr::Kind::Or:
      return 1;
    case FeatureExpr::Kind::And:
      return 2;
    default:
      return 3;
  }
}

void render(const FeatureExpr& e, const FeatureSet& features, int context, std::string& out) {
  const int prec = precedence(e.kind());
  const bool paren = prec < context;
  if (paren) out += '(';
  switch (e.kind()) {
    case FeatureExpr::Kind::True:
      out += "true";
      break;
    case FeatureExpr::Kind::False:
      out += "false";
      break;
    case FeatureExpr::Kind::Var:
      out += e.feature() < features.size() ? features.name(e.feature())
                                           : "#" + std::to_string(e.feature());
      break;
    case FeatureExpr::Kind::Not:
      out += '!';
      render(e.lhs(), features, 3, out);
      break;
    case FeatureExpr::Kind::And:
      render(e.lhs(), features, 2, out);
      out += " && ";
      render(e.rhs(), features, 3, out);
      break;
    case FeatureExpr::Kind::Or:
      render(e.lhs(), features, 1, out);
      out += " || ";
      render(e.rhs(), features, 2, out);
      break;
  }
  if (paren) out += ')';
}

bool evalUnchecked(const FeatureExpr& e, Product p) {
  switch (e.kind()) {
    case FeatureExpr::Kind::True:
      return true;
    case FeatureExpr::Kind::False:
      return false;
    case FeatureExpr::Kind::Var:
      return p.has(e.feature());
    case FeatureExpr::Kind::Not:
      return !evalUnchecked(e.lhs(), p);
    case FeatureExpr::Kind::And:
      return evalUnchecked(e.lhs(), p) && evalUnchecked(e.rhs(), p);
    case FeatureExpr::Kind::Or:
      return evalUnchecked(e.lhs(), p) || evalUnchecked(e.rhs(), p);
  }
  return false;
}

}  // namespace

FeatureExpr parseFeatureExpr(std::string_view text, const FeatureSet& features) {
  return GuardParser(text, features).parse();
}

std::string toString(const FeatureExpr& e, const FeatureSet& features) {
  std::string out;
  render(e, features, 0, out);
  return out;
}

void validate(const FeatureExpr& e, const FeatureSet& features) {
  switch (e.kind()) {
    case FeatureExpr::Kind::True:
    case FeatureExpr::Kind::False:
      return;
    case FeatureExpr::Kind::Var:
      if (e.feature() >= features.size()) {
        throw ValidationError("feature variable #" + std::to_string(e.feature()) +
                              " is not in the feature set");
      }
      return;
    case FeatureExpr::Kind::Not:
      validate(e.lhs(), features);
      return;
    case FeatureExpr::Kind::And:
    case FeatureExpr::Kind::Or:
      validate(e.lhs(), features);
      validate(e.rhs(), features);
      return;
  }
}

bool eval(const FeatureExpr& e, Product p, const FeatureSet& features) {
  validate(e, features);
  return evalUnchecked(e, p);
}

ProductMask denotation(const FeatureExpr& e, const ProductSet& px) {
  validate(e, px.features());
  ProductMask m(px.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (evalUnchecked(e, px[i])) m.set(i);
  }
  return m;
}

bool sat(const FeatureExpr& e, const ProductSet& px) { return denotation(e, px).any(); }

bool equivalent(const FeatureExpr& a, const FeatureExpr& b, const ProductSet& px) {
  return denotation(a, px) == denotation(b, px);
}

FeatureExpr charFormula(Product p, const FeatureSet& features) {
  if (features.size() == 0) return FeatureExpr::top();
  auto literal = [&](std::size_t i) { return p.has(i) ? FeatureExpr::var(i) : !FeatureExpr::var(i); };
  FeatureExpr e = literal(0);
  for (std::size_t i = 1; i < features.size(); ++i) e = e && literal(i);
  return e;
}

bool validatePartition(std::span<const FeatureExpr> cells, const ProductSet& px) {
  std::vector<Guard> guards;
  guards.reserve(cells.size());
  for (const auto& c : cells) guards.push_back(Guard::of(c, px));
  if (guards.empty()) return false;
  return validatePartition(guards);
}

bool validatePartition(std::span<const Guard> cells) {
  if (cells.empty()) return false;
  ProductMask seen(cells.front().mask().size());
  for (const auto& c : cells) {
    if (c.mask().size() != seen.size()) return false;
    if (c.mask().none() || c.mask().intersects(seen)) return false;
    seen |= c.mask();
  }
  return seen.all();
}

// --------------------------------------------------------------------- Guard

Guard Guard::top(std::size_t productCount) { return Guard(FeatureExpr::top(), ProductMask(productCount, true)); }

Guard Guard::bottom(std::size_t productCount) {
  return Guard(FeatureExpr::bottom(), ProductMask(productCount, false));
}

Guard Guard::characteristic(const ProductSet& px, std::size_t index) {
  return Guard(charFormula(px[index], px.features()), ProductMask::single(px.size(), index));
}

Guard operator&&(const Guard& a, const Guard& b) {
  ProductMask m = a.mask_ & b.mask_;
  if (m == a.mask_) return a;
  if (m == b.mask_) return b;
  if (m.none()) return Guard(FeatureExpr::bottom(), std::move(m));
  return Guard(a.expr_ && b.expr_, std::move(m));
}

Guard operator||(const Guard& a, const Guard& b) {
  ProductMask m = a.mask_ | b.mask_;
  if (m.all()) return Guard(FeatureExpr::top(), std::move(m));
  if (m == a.mask_) return a;
  if (m == b.mask_) return b;
  return Guard(a.expr_ || b.expr_, std::move(m));
}

Guard operator!(const Guard& a) {
  ProductMask m = ~a.mask_;
  if (m.all()) return Guard(FeatureExpr::top(), std::move(m));
  if (m.none()) return Guard(FeatureExpr::bottom(), std::move(m));
  if (a.expr_.kind() == FeatureExpr::Kind::Not) return Guard(a.expr_.lhs(), std::move(m));
  return Guard(!a.expr_, std::move(m));
}

}  // namespace fgame
