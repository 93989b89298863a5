#pragma once

// Featured transition systems, optionally weighted with exact rationals or
// with nominal weights carrying a relative tolerance.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fgame/feature_logic.hpp"

namespace fgame {

/// Normalized fraction with positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Shortest decimal expansion of v, e.g. 0.1 -> 1/10.
  static Rational fromDouble(double v);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double toDouble() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// "9/10", "2", "-1/3".
  std::string toString() const;

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational abs(Rational a) { return a.num_ < 0 ? Rational(-a.num_, a.den_) : a; }
  friend bool operator==(Rational a, Rational b) noexcept = default;
  friend bool operator<(Rational a, Rational b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

struct FtsTransition {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string action;
  FeatureExpr guard;
  /// Exact weight, or the nominal weight when `tolerance` is set.
  std::optional<Rational> weight;
  std::optional<Rational> tolerance;
};

class Fts {
 public:
  /// Throws ValidationError on dangling endpoints, unknown actions, invalid
  /// guards, negative tolerances or a mix of weighted and unweighted
  /// transitions.
  Fts(ProductSet products, std::vector<std::string> states, std::size_t initial, std::vector<std::string> actions,
      std::vector<FtsTransition> transitions);

  const ProductSet& products() const noexcept { return products_; }
  const FeatureSet& features() const noexcept { return products_.features(); }
  const std::vector<std::string>& states() const noexcept { return states_; }
  std::size_t initial() const noexcept { return initial_; }
  const std::vector<std::string>& actions() const noexcept { return actions_; }
  const std::vector<FtsTransition>& transitions() const noexcept { return transitions_; }
  const std::vector<std::size_t>& outgoing(std::size_t s) const { return out_.at(s); }
  const Guard& guard(std::size_t t) const { return guards_.at(t); }

  bool weighted() const noexcept;
  bool hasTolerances() const noexcept;

 private:
  ProductSet products_;
  std::vector<std::string> states_;
  std::size_t initial_;
  std::vector<std::string> actions_;
  std::vector<FtsTransition> transitions_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<Guard> guards_;
};

Fts parseFts(std::string_view text);
std::string emitFts(const Fts& f);
Fts loadFts(const std::filesystem::path& file);

/// Copies taking every weight at nominal*(1-tolerance), resp.
/// nominal*(1+tolerance).  Exact weights are kept in both.
std::pair<Fts, Fts> splitTolerances(const Fts& f);

}  // namespace fgame
