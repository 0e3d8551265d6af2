#include "supanova/ideal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace supanova {

std::vector<GridElement> OrderIdeal::insert(const PosetGrid& grid, const GridElement& p) {
  grid.require_member(p);
  if (elements_.count(p)) {
    throw std::logic_error("element already in ideal: " + to_string(p));
  }
  std::vector<GridElement> down = grid.covers_down(p);
  if (elements_.empty() && !down.empty()) {
    throw std::logic_error("first ideal element must be the grid least element");
  }
  for (const auto& q : down) {
    if (!elements_.count(q)) {
      throw std::logic_error("inserting " + to_string(p) +
                             " would break downward closure; missing " + to_string(q));
    }
  }
  elements_.insert(p);
  std::vector<GridElement> removed;
  for (const auto& q : down) {
    auto it = antichain_.find(q);
    if (it != antichain_.end()) {
      removed.push_back(q);
      antichain_.erase(it);
    }
  }
  antichain_.insert(p);
  return removed;
}

OrderIdeal OrderIdeal::down_closure(const PosetGrid& grid,
                                    const std::vector<GridElement>& generators) {
  std::set<GridElement> all;
  for (const auto& g : generators) {
    auto lower = grid.lower_set(g);
    all.insert(lower.begin(), lower.end());
  }
  OrderIdeal ideal;
  ideal.elements_ = all;
  for (const auto& p : all) {
    bool maximal = true;
    for (const auto& q : all) {
      if (p != q && grid.less_equal(p, q)) {
        maximal = false;
        break;
      }
    }
    if (maximal) ideal.antichain_.insert(p);
  }
  return ideal;
}

bool OrderIdeal::is_valid(const PosetGrid& grid) const {
  for (const auto& p : elements_) {
    for (const auto& q : grid.covers_down(p)) {
      if (!elements_.count(q)) return false;
    }
  }
  std::set<GridElement> expected;
  for (const auto& p : elements_) {
    bool maximal = true;
    for (const auto& q : elements_) {
      if (p != q && grid.less_equal(p, q)) {
        maximal = false;
        break;
      }
    }
    if (maximal) expected.insert(p);
  }
  return expected == antichain_;
}

SparseIntTensor combination_coefficients(const PosetGrid& grid, const OrderIdeal& ideal) {
  SparseIntTensor d;
  for (const auto& p : ideal.elements()) {
    d.add_scaled(moebius_tensor(grid, p), 1);
  }
  return d;
}

bool top_down_coefficient_check(const PosetGrid& grid, const OrderIdeal& ideal) {
  SparseIntTensor d = combination_coefficients(grid, ideal);
  for (const auto& s : ideal.elements()) {
    std::int64_t above = 0;
    for (const auto& t : ideal.elements()) {
      if (s != t && grid.less_equal(s, t)) above += d.at(t);
    }
    if (d.at(s) != 1 - above) return false;
  }
  return true;
}

std::vector<GridElement> admissible_covers(const PosetGrid& grid, const OrderIdeal& ideal,
                                           const GridElement& p) {
  if (!ideal.contains(p)) {
    throw std::logic_error("admissible_covers requires p in the ideal");
  }
  std::vector<GridElement> out;
  for (const auto& r : grid.covers_up(p)) {
    if (ideal.contains(r)) continue;
    bool admissible = true;
    for (const auto& q : grid.covers_down(r)) {
      if (!ideal.contains(q)) {
        admissible = false;
        break;
      }
    }
    if (admissible) out.push_back(r);
  }
  return out;
}

double propagated_uncertainty(const SparseIntTensor& combination,
                              const std::map<GridElement, double>& uncertainty) {
  KahanAccumulator acc;
  for (const auto& [p, coeff] : combination) {
    auto it = uncertainty.find(p);
    if (it == uncertainty.end()) {
      throw std::invalid_argument("missing uncertainty for " + to_string(p));
    }
    double c = static_cast<double>(coeff);
    acc.add(c * c * it->second * it->second);
  }
  return std::sqrt(acc.value());
}

}  // namespace supanova
