#pragma once

// Feature sets, products, feature guards and their denotations.
//
// Every semantic question about a guard (satisfiability, equivalence,
// partition checks) is answered relative to an explicit product set by
// enumerating its products.  A Guard caches that enumeration as a bitmask
// over product indices so the symbolic combinators can work on masks.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fgame {

/// Ordered set of distinct feature names.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<std::size_t> indexOf(std::string_view name) const;

  friend bool operator==(const FeatureSet& a, const FeatureSet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr std::size_t kMaxFeatures = 64;

/// A product: the set of features present, as a bitmask over feature indices.
class Product {
 public:
  constexpr Product() = default;
  constexpr explicit Product(std::uint64_t bits) : bits_(bits) {}

  static Product fromNames(const FeatureSet& features, std::span<const std::string> names);

  constexpr bool has(std::size_t feature) const noexcept { return (bits_ >> feature) & 1U; }
  constexpr std::uint64_t bits() const noexcept { return bits_; }
  Product with(std::size_t feature) const noexcept { return Product(bits_ | (std::uint64_t{1} << feature)); }

  std::vector<std::string> names(const FeatureSet& features) const;
  /// "{}" or "{euro,dollar}".
  std::string toString(const FeatureSet& features) const;

  friend constexpr bool operator==(Product a, Product b) noexcept { return a.bits_ == b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

/// Lexicographic order on membership vectors taken in feature order
/// (absent before present).
bool productLess(Product a, Product b, std::size_t featureCount) noexcept;

/// Fixed-size bitset over the indices of a ProductSet.
class ProductMask {
 public:
  ProductMask() = default;
  explicit ProductMask(std::size_t size, bool value = false);

  static ProductMask single(std::size_t size, std::size_t index);

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t i) const noexcept { return (word(i / 64) >> (i % 64)) & 1U; }
  void set(std::size_t i) noexcept;
  void reset(std::size_t i) noexcept;

  bool none() const noexcept;
  bool any() const noexcept { return !none(); }
  bool all() const noexcept;
  std::size_t count() const noexcept;
  /// Lowest set index, or size() when empty.
  std::size_t first() const noexcept;

  ProductMask& operator&=(const ProductMask& o) noexcept;
  ProductMask& operator|=(const ProductMask& o) noexcept;
  ProductMask operator~() const;
  bool intersects(const ProductMask& o) const noexcept;

  friend ProductMask operator&(ProductMask a, const ProductMask& b) { return a &= b; }
  friend ProductMask operator|(ProductMask a, const ProductMask& b) { return a |= b; }
  friend bool operator==(const ProductMask& a, const ProductMask& b) noexcept;

  std::size_t hash() const noexcept;

 private:
  std::size_t words() const noexcept { return (size_ + 63) / 64; }
  std::uint64_t word(std::size_t w) const noexcept { return w == 0 ? inline_ : heap_[w - 1]; }
  std::uint64_t& word(std::size_t w) noexcept { return w == 0 ? inline_ : heap_[w - 1]; }
  void clearPadding() noexcept;

  std::size_t size_ = 0;
  std::uint64_t inline_ = 0;
  std::vector<std::uint64_t> heap_;
};

/// The set of products a family-based analysis ranges over, kept in
/// canonical (lexicographic) order.  Product indices are positions in that
/// order and index every ProductMask built against this set.
class ProductSet {
 public:
  ProductSet() = default;
  /// Throws ValidationError when empty, when a product mentions a feature
  /// outside `features`, or on duplicates.
  ProductSet(FeatureSet features, std::vector<Product> products);

  /// All 2^|N| subsets.
  static ProductSet all(FeatureSet features);

  const FeatureSet& features() const noexcept { return features_; }
  std::size_t size() const noexcept { return products_.size(); }
  const Product& operator[](std::size_t i) const { return products_[i]; }
  const std::vector<Product>& products() const noexcept { return products_; }
  std::optional<std::size_t> indexOf(Product p) const;
  bool contains(Product p) const { return indexOf(p).has_value(); }

  auto begin() const noexcept { return products_.begin(); }
  auto end() const noexcept { return products_.end(); }

  friend bool operator==(const ProductSet& a, const ProductSet& b) {
    return a.features_ == b.features_ && a.products_ == b.products_;
  }

 private:
  FeatureSet features_;
  std::vector<Product> products_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Immutable boolean expression over feature indices.
class FeatureExpr {
 public:
  enum class Kind : std::uint8_t { True, False, Var, Not, And, Or };

  /// The constant `true`.
  FeatureExpr();

  static FeatureExpr top();
  static FeatureExpr bottom();
  static FeatureExpr var(std::size_t feature);

  Kind kind() const noexcept { return node_->kind; }
  std::size_t feature() const noexcept { return node_->feature; }
  const FeatureExpr& lhs() const { return *node_->lhs; }
  const FeatureExpr& rhs() const { return *node_->rhs; }

  friend FeatureExpr operator!(const FeatureExpr& e);
  friend FeatureExpr operator&&(const FeatureExpr& a, const FeatureExpr& b);
  friend FeatureExpr operator||(const FeatureExpr& a, const FeatureExpr& b);

  /// Structural equality.
  friend bool operator==(const FeatureExpr& a, const FeatureExpr& b);

 private:
  struct Node {
    Kind kind;
    std::size_t feature = 0;
    std::shared_ptr<const FeatureExpr> lhs;
    std::shared_ptr<const FeatureExpr> rhs;
  };
  explicit FeatureExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Parses the guard grammar
///   expr := or ; or := and ("||" and)* ; and := unary ("&&" unary)* ;
///   unary := "!" unary | atom ; atom := "true" | "false" | ident | "(" expr ")"
/// resolving identifiers against `features`.  Throws ParseError.
FeatureExpr parseFeatureExpr(std::string_view text, const FeatureSet& features);

/// Renders in the grammar accepted by parseFeatureExpr, with minimal parentheses.
std::string toString(const FeatureExpr& e, const FeatureSet& features);

/// Throws ValidationError if a variable is outside `features`.
void validate(const FeatureExpr& e, const FeatureSet& features);

/// p |= e.  Throws ValidationError for a feature index outside `features`.
bool eval(const FeatureExpr& e, Product p, const FeatureSet& features);

/// The products of `px` satisfying `e`.
ProductMask denotation(const FeatureExpr& e, const ProductSet& px);

bool sat(const FeatureExpr& e, const ProductSet& px);
bool equivalent(const FeatureExpr& a, const FeatureExpr& b, const ProductSet& px);

/// Conjunction of the features in p and the negations of those outside it.
FeatureExpr charFormula(Product p, const FeatureSet& features);

/// Coverage, non-emptiness and pairwise disjointness over px.
bool validatePartition(std::span<const FeatureExpr> cells, const ProductSet& px);

/// A feature expression paired with its denotation over a product set.
///
/// The connectives simplify syntactically whenever the resulting denotation
/// coincides with an operand's, so repeated restriction of an already
/// refined cell does not grow its expression.
class Guard {
 public:
  Guard() = default;
  Guard(FeatureExpr expr, ProductMask mask) : expr_(std::move(expr)), mask_(std::move(mask)) {}

  static Guard top(std::size_t productCount);
  static Guard bottom(std::size_t productCount);
  static Guard of(const FeatureExpr& e, const ProductSet& px) { return Guard(e, denotation(e, px)); }
  /// Characteristic guard of px[index].
  static Guard characteristic(const ProductSet& px, std::size_t index);

  const FeatureExpr& expr() const noexcept { return expr_; }
  const ProductMask& mask() const noexcept { return mask_; }
  bool satisfiable() const noexcept { return mask_.any(); }
  bool valid() const noexcept { return mask_.all(); }
  bool holds(std::size_t productIndex) const noexcept { return mask_.test(productIndex); }

  friend Guard operator&&(const Guard& a, const Guard& b);
  friend Guard operator||(const Guard& a, const Guard& b);
  friend Guard operator!(const Guard& a);

 private:
  FeatureExpr expr_;
  ProductMask mask_;
};

bool validatePartition(std::span<const Guard> cells);

}  // namespace fgame

template <>
struct std::hash<fgame::ProductMask> {
  std::size_t operator()(const fgame::ProductMask& m) const noexcept { return m.hash(); }
};
