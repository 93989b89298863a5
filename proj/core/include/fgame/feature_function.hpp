#pragma once

// Canonical guard-partition-indexed maps Bool(N) -> X.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "fgame/errors.hpp"
#include "fgame/feature_logic.hpp"

namespace fgame {

template <class X>
struct Cell {
  Guard guard;
  X value;
};

/// A map from products to X, stored as (guard, value) cells whose guards
/// partition the product set.  Every instance produced by the free
/// functions below is canonical: no two cells carry equal values, and cells
/// are ordered by their first product.
template <class X>
class FeatureFunction {
 public:
  FeatureFunction() = default;

  static FeatureFunction constant(std::size_t productCount, X value) {
    FeatureFunction f;
    f.cells_.push_back({Guard::top(productCount), std::move(value)});
    return f;
  }

  const std::vector<Cell<X>>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }
  std::size_t productCount() const noexcept {
    return cells_.empty() ? 0 : cells_.front().guard.mask().size();
  }

  const X& lookup(std::size_t productIndex) const {
    for (const auto& c : cells_) {
      if (c.guard.holds(productIndex)) return c.value;
    }
    throw ValidationError("feature function has no cell for product #" + std::to_string(productIndex));
  }

  auto begin() const noexcept { return cells_.begin(); }
  auto end() const noexcept { return cells_.end(); }

  template <class Eq = std::equal_to<X>>
  bool isCanonical(Eq eq = {}) const {
    std::vector<Guard> guards;
    for (const auto& c : cells_) guards.push_back(c.guard);
    if (!validatePartition(guards)) return false;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      for (std::size_t j = i + 1; j < cells_.size(); ++j) {
        if (eq(cells_[i].value, cells_[j].value)) return false;
      }
      if (i > 0 && cells_[i - 1].guard.mask().first() > cells_[i].guard.mask().first()) return false;
    }
    return true;
  }

  /// Merges equal-valued cells of a known partition.
  template <class Eq = std::equal_to<X>>
  static FeatureFunction canonical(std::vector<Cell<X>> cells, Eq eq = {}) {
    FeatureFunction f;
    for (auto& c : cells) {
      auto it = std::find_if(f.cells_.begin(), f.cells_.end(),
                             [&](const Cell<X>& d) { return eq(d.value, c.value); });
      if (it == f.cells_.end()) {
        f.cells_.push_back(std::move(c));
      } else {
        it->guard = it->guard || c.guard;
      }
    }
    std::sort(f.cells_.begin(), f.cells_.end(), [](const Cell<X>& a, const Cell<X>& b) {
      return a.guard.mask().first() < b.guard.mask().first();
    });
    return f;
  }

  /// Replaces every guard through `rewrite` (a mask-preserving substitution).
  template <class Fn>
  void rewriteGuards(Fn&& rewrite) {
    for (auto& c : cells_) c.guard = rewrite(c.guard);
  }

 private:
  std::vector<Cell<X>> cells_;
};

/// Canonical equivalent of an arbitrary cell list.  Throws ValidationError
/// when the guards do not partition the product set.
template <class X, class Eq = std::equal_to<X>>
FeatureFunction<X> reduce(std::vector<Cell<X>> cells, Eq eq = {}) {
  std::vector<Guard> guards;
  guards.reserve(cells.size());
  for (const auto& c : cells) guards.push_back(c.guard);
  if (!validatePartition(guards)) throw ValidationError("cell guards do not form a partition");
  return FeatureFunction<X>::canonical(std::move(cells), eq);
}

template <class X, class Eq = std::equal_to<X>>
FeatureFunction<X> reduce(const FeatureFunction<X>& f, Eq eq = {}) {
  return reduce(std::vector<Cell<X>>(f.cells().begin(), f.cells().end()), eq);
}

/// Pairwise intersection of the two partitions with op applied per cell.
template <class A, class B, class Op, class Eq = std::equal_to<std::invoke_result_t<Op, const A&, const B&>>>
auto combine(const FeatureFunction<A>& f1, const FeatureFunction<B>& f2, Op op, Eq eq = {}) {
  using R = std::invoke_result_t<Op, const A&, const B&>;
  std::vector<Cell<R>> cells;
  cells.reserve(f1.size() * f2.size());
  for (const auto& a : f1) {
    for (const auto& b : f2) {
      if (!a.guard.mask().intersects(b.guard.mask())) continue;
      cells.push_back({a.guard && b.guard, op(a.value, b.value)});
    }
  }
  return FeatureFunction<R>::canonical(std::move(cells), eq);
}

/// Applies fn to every cell value.
template <class X, class Fn, class Eq = std::equal_to<std::invoke_result_t<Fn, const X&>>>
auto map(const FeatureFunction<X>& f, Fn fn, Eq eq = {}) {
  using R = std::invoke_result_t<Fn, const X&>;
  std::vector<Cell<R>> cells;
  cells.reserve(f.size());
  for (const auto& c : f) cells.push_back({c.guard, fn(c.value)});
  return FeatureFunction<R>::canonical(std::move(cells), eq);
}

/// Keeps f on `guard` and assigns `neutral` to the products outside it.
template <class X, class Eq = std::equal_to<X>>
FeatureFunction<X> restrict(const FeatureFunction<X>& f, const Guard& guard, const X& neutral, Eq eq = {}) {
  if (guard.valid()) return f;
  std::vector<Cell<X>> cells;
  cells.reserve(f.size() + 1);
  for (const auto& c : f) {
    if (c.guard.mask().intersects(guard.mask())) cells.push_back({c.guard && guard, c.value});
  }
  Guard outside = !guard;
  if (outside.satisfiable()) cells.push_back({std::move(outside), neutral});
  return FeatureFunction<X>::canonical(std::move(cells), eq);
}

/// Product-wise equality, independent of how the cells are drawn.
template <class X, class Eq = std::equal_to<X>>
bool sameFunction(const FeatureFunction<X>& f1, const FeatureFunction<X>& f2, Eq eq = {}) {
  for (const auto& a : f1) {
    for (const auto& b : f2) {
      if (a.guard.mask().intersects(b.guard.mask()) && !eq(a.value, b.value)) return false;
    }
  }
  return true;
}

/// Products on which f1 and f2 differ.
template <class X, class Eq = std::equal_to<X>>
ProductMask differingProducts(const FeatureFunction<X>& f1, const FeatureFunction<X>& f2, Eq eq = {}) {
  ProductMask out(f1.productCount());
  for (const auto& a : f1) {
    for (const auto& b : f2) {
      if (a.guard.mask().intersects(b.guard.mask()) && !eq(a.value, b.value)) {
        out |= a.guard.mask() & b.guard.mask();
      }
    }
  }
  return out;
}

}  // namespace fgame
