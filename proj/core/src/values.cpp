#include "fgame/values.hpp"

#include <algorithm>

namespace fgame {

std::string ParityMeasure::toString() const {
  if (top_) return "top";
  std::string s = "[";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(coords_[i]);
  }
  return s + "]";
}

MeasureSpace MeasureSpace::forPriorities(const std::vector<std::uint32_t>& priorities) {
  std::uint32_t maxPriority = 0;
  for (auto p : priorities) maxPriority = std::max(maxPriority, p);
  std::vector<std::uint32_t> bounds(priorities.empty() ? 1 : maxPriority + 1, 0);
  for (auto p : priorities) {
    if (p % 2 == 1) ++bounds[p];
  }
  return MeasureSpace(std::move(bounds));
}

std::strong_ordering MeasureSpace::comparePrefix(const ParityMeasure& a, const ParityMeasure& b,
                                                 std::uint32_t k) {
  if (a.isTop() || b.isTop()) return a.isTop() <=> b.isTop();
  const std::size_t n = std::min<std::size_t>(k + 1, a.coords().size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coords()[i] != b.coords()[i]) return a.coords()[i] <=> b.coords()[i];
  }
  return std::strong_ordering::equal;
}

ParityMeasure MeasureSpace::prog(const ParityMeasure& next, std::uint32_t priority) const {
  if (next.isTop()) return next;
  std::vector<std::uint32_t> m(bounds_.size(), 0);
  const std::size_t last = std::min<std::size_t>(priority, bounds_.size() - 1);
  for (std::size_t i = 0; i <= last; ++i) m[i] = next.coords()[i];
  if (priority % 2 == 0) return ParityMeasure(std::move(m));
  for (std::size_t i = last + 1; i-- > 0;) {
    if (m[i] < bounds_[i]) {
      ++m[i];
      return ParityMeasure(std::move(m));
    }
    m[i] = 0;
  }
  return ParityMeasure::top();
}

}  // namespace fgame
