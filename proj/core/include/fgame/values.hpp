#pragma once

// Value domains of the five game kinds.

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace fgame {

/// Natural numbers extended with infinity (minimum-reachability values).
class ExtNat {
 public:
  constexpr ExtNat() = default;
  constexpr explicit ExtNat(std::uint64_t v) : v_(v) {}
  static constexpr ExtNat infinity() { return ExtNat(kInf); }

  constexpr bool isInfinite() const noexcept { return v_ == kInf; }
  constexpr std::uint64_t value() const noexcept { return v_; }

  /// Saturating addition of a non-negative weight.
  constexpr ExtNat plus(std::uint64_t w) const noexcept {
    if (isInfinite() || w >= kInf - v_) return infinity();
    return ExtNat(v_ + w);
  }

  friend constexpr auto operator<=>(ExtNat a, ExtNat b) noexcept = default;
  friend constexpr bool operator==(ExtNat a, ExtNat b) noexcept = default;

  std::string toString() const { return isInfinite() ? "inf" : std::to_string(v_); }

 private:
  static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t v_ = 0;
};

/// Element of W = {0, ..., M, top}.  The bound M lives in EnergyDomain.
class EnergyValue {
 public:
  constexpr EnergyValue() = default;
  constexpr explicit EnergyValue(std::int64_t credit) : v_(credit) {}
  static constexpr EnergyValue top() { return EnergyValue(kTop); }

  constexpr bool isTop() const noexcept { return v_ == kTop; }
  constexpr std::int64_t credit() const noexcept { return v_; }

  friend constexpr auto operator<=>(EnergyValue a, EnergyValue b) noexcept = default;
  friend constexpr bool operator==(EnergyValue a, EnergyValue b) noexcept = default;

  std::string toString() const { return isTop() ? "top" : std::to_string(v_); }

 private:
  static constexpr std::int64_t kTop = std::numeric_limits<std::int64_t>::max();
  std::int64_t v_ = 0;
};

struct EnergyDomain {
  std::int64_t bound = 0;

  /// x ⊖ w: credit needed before a move of weight w when x is needed after it.
  constexpr EnergyValue minus(EnergyValue x, std::int64_t w) const noexcept {
    if (x.isTop()) return x;
    const std::int64_t d = x.credit() - w;
    if (d > bound) return EnergyValue::top();
    return EnergyValue(d < 0 ? 0 : d);
  }
};

/// Small progress measure: one coordinate per priority, even coordinates
/// always zero, or top.
class ParityMeasure {
 public:
  ParityMeasure() = default;
  explicit ParityMeasure(std::vector<std::uint32_t> coords) : coords_(std::move(coords)) {}
  static ParityMeasure top() {
    ParityMeasure m;
    m.top_ = true;
    return m;
  }

  bool isTop() const noexcept { return top_; }
  const std::vector<std::uint32_t>& coords() const noexcept { return coords_; }

  /// Lexicographic order, top greatest.
  friend std::strong_ordering operator<=>(const ParityMeasure& a, const ParityMeasure& b) {
    if (a.top_ || b.top_) return a.top_ <=> b.top_;
    return a.coords_ <=> b.coords_;
  }
  friend bool operator==(const ParityMeasure& a, const ParityMeasure& b) {
    return a.top_ == b.top_ && (a.top_ || a.coords_ == b.coords_);
  }

  std::string toString() const;

 private:
  std::vector<std::uint32_t> coords_;
  bool top_ = false;
};

/// The measure lattice of a parity game: bound[i] is the number of states
/// with priority i for odd i and 0 for even i.
class MeasureSpace {
 public:
  MeasureSpace() = default;
  explicit MeasureSpace(std::vector<std::uint32_t> bounds) : bounds_(std::move(bounds)) {}
  /// Bounds derived from a list of state priorities.
  static MeasureSpace forPriorities(const std::vector<std::uint32_t>& priorities);

  std::size_t dimension() const noexcept { return bounds_.size(); }
  const std::vector<std::uint32_t>& bounds() const noexcept { return bounds_; }

  ParityMeasure zero() const { return ParityMeasure(std::vector<std::uint32_t>(bounds_.size(), 0)); }

  /// Least m with m >=_p next if p is even, least m with m >_p next (or top)
  /// if p is odd, where >=_p compares coordinates 0..p lexicographically.
  ParityMeasure prog(const ParityMeasure& next, std::uint32_t priority) const;

  /// Comparison of the prefixes 0..k.
  static std::strong_ordering comparePrefix(const ParityMeasure& a, const ParityMeasure& b, std::uint32_t k);

 private:
  std::vector<std::uint32_t> bounds_;
};

}  // namespace fgame
