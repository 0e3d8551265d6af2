#include "supanova/tensor.hpp"

#include <stdexcept>

namespace supanova {

void SparseIntTensor::add(const GridElement& p, std::int64_t delta) {
  if (delta == 0) return;
  auto [it, inserted] = entries_.emplace(p, delta);
  if (!inserted) {
    std::int64_t result = 0;
    if (__builtin_add_overflow(it->second, delta, &result)) {
      throw std::overflow_error("integer tensor entry overflow at " + to_string(p));
    }
    if (result == 0) {
      entries_.erase(it);
    } else {
      it->second = result;
    }
  }
}

void SparseIntTensor::add_scaled(const SparseIntTensor& other, std::int64_t factor) {
  if (factor == 0) return;
  for (const auto& [p, v] : other.entries_) {
    std::int64_t scaled = 0;
    if (__builtin_mul_overflow(v, factor, &scaled)) {
      throw std::overflow_error("integer tensor scale overflow at " + to_string(p));
    }
    add(p, scaled);
  }
}

SparseIntTensor moebius_tensor(const PosetGrid& grid, const GridElement& p) {
  grid.require_member(p);
  std::vector<std::vector<std::pair<AxisElement, std::int64_t>>> vectors;
  vectors.reserve(grid.dimension());
  for (std::size_t i = 0; i < grid.dimension(); ++i) {
    auto v = grid.axis(i).moebius_vector(p[i]);
    vectors.emplace_back(v.begin(), v.end());
  }
  SparseIntTensor out;
  GridElement q(grid.dimension());
  std::vector<std::size_t> idx(grid.dimension(), 0);
  while (true) {
    std::int64_t prod = 1;
    for (std::size_t i = 0; i < grid.dimension(); ++i) {
      const auto& [el, value] = vectors[i][idx[i]];
      q[i] = el;
      if (__builtin_mul_overflow(prod, value, &prod)) {
        throw std::overflow_error("moebius tensor product overflow");
      }
    }
    out.add(q, prod);
    std::size_t k = 0;
    while (k < grid.dimension()) {
      if (++idx[k] < vectors[k].size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == grid.dimension()) break;
  }
  return out;
}

double reduce_product(const SparseIntTensor& t,
                      const std::function<double(const GridElement&)>& f) {
  KahanAccumulator acc;
  for (const auto& [p, coeff] : t) {
    acc.add(static_cast<double>(coeff) * f(p));
  }
  return acc.value();
}

double reduce_product(const SparseIntTensor& t, const SparseRealTensor& values) {
  KahanAccumulator acc;
  for (const auto& [p, coeff] : t) {
    auto it = values.find(p);
    if (it != values.end()) acc.add(static_cast<double>(coeff) * it->second);
  }
  return acc.value();
}

}  // namespace supanova
