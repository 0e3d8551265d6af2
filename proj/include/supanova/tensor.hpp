#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>

#include "supanova/poset.hpp"

namespace supanova {

// Neumaier-compensated accumulator, used for every floating-point reduction
// so that results are independent of evaluation concurrency.
class KahanAccumulator {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Sparse integer tensor over grid elements. Entries are exact 64-bit signed
// integers; zero entries are never stored; overflow raises instead of
// wrapping.
class SparseIntTensor {
 public:
  using Map = std::map<GridElement, std::int64_t>;

  std::int64_t at(const GridElement& p) const {
    auto it = entries_.find(p);
    return it == entries_.end() ? 0 : it->second;
  }
  void add(const GridElement& p, std::int64_t delta);
  void add_scaled(const SparseIntTensor& other, std::int64_t factor);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }
  const Map& entries() const { return entries_; }

  bool operator==(const SparseIntTensor&) const = default;

 private:
  Map entries_;
};

using SparseRealTensor = std::map<GridElement, double>;

// M^(p): entry at q is the product over axes of mu_axis(q_i, p_i), assembled
// as the tensor product of the per-axis Moebius vectors.
SparseIntTensor moebius_tensor(const PosetGrid& grid, const GridElement& p);

// sum_q T_q * f(q) with compensated summation.
double reduce_product(const SparseIntTensor& t,
                      const std::function<double(const GridElement&)>& f);
double reduce_product(const SparseIntTensor& t, const SparseRealTensor& values);

}  // namespace supanova
