#include "supanova/poset.hpp"

#include <algorithm>
#include <cstring>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace supanova {

bool is_canonical_set(const VertexSet& s) {
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i - 1] >= s[i]) return false;
  }
  return true;
}

VertexSet canonical_set(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(const VertexSet& s, Vertex v) {
  return std::binary_search(s.begin(), s.end(), v);
}

bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string set_to_string(const VertexSet& s) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  os << '}';
  return os.str();
}

AxisElement AxisElement::subset(VertexSet s) {
  if (!is_canonical_set(s)) {
    throw std::invalid_argument("subset element must be strictly increasing: " +
                                set_to_string(s));
  }
  return AxisElement(std::move(s));
}

std::uint64_t AxisElement::index() const {
  if (!holds_index()) throw std::logic_error("axis element does not hold an index");
  return std::get<std::uint64_t>(value_);
}

const VertexSet& AxisElement::subset() const {
  if (!holds_subset()) throw std::logic_error("axis element does not hold a subset");
  return std::get<VertexSet>(value_);
}

std::string AxisElement::to_string() const {
  if (holds_index()) return std::to_string(index());
  return set_to_string(subset());
}

std::string to_string(const GridElement& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) os << ',';
    os << p[i].to_string();
  }
  os << ')';
  return os.str();
}

namespace {

void append_be(std::string& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

}  // namespace

std::string grid_key(const GridElement& p) {
  std::string out;
  for (const auto& c : p) {
    if (c.holds_index()) {
      out.push_back('i');
      append_be(out, c.index(), 8);
    } else {
      const VertexSet& s = c.subset();
      out.push_back('s');
      append_be(out, s.size(), 4);
      for (Vertex v : s) append_be(out, v, 4);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Axis kinds
// ---------------------------------------------------------------------------

namespace {

class ChainNatAxis final : public AxisImpl {
 public:
  std::string name() const override { return "chain-nat"; }
  AxisElement least() const override { return AxisElement::index(0); }
  bool contains(const AxisElement& s) const override { return s.holds_index(); }
  bool less_equal(const AxisElement& s, const AxisElement& t) const override {
    return s.index() <= t.index();
  }
  std::vector<AxisElement> covers_up(const AxisElement& s) const override {
    return {AxisElement::index(s.index() + 1)};
  }
  std::vector<AxisElement> covers_down(const AxisElement& s) const override {
    if (s.index() == 0) return {};
    return {AxisElement::index(s.index() - 1)};
  }
  std::uint64_t linear_extension_rank(const AxisElement& s) const override {
    return s.index();
  }
  std::optional<std::int64_t> moebius_closed_form(const AxisElement& s,
                                                  const AxisElement& t) const override {
    if (s.index() == t.index()) return 1;
    if (s.index() + 1 == t.index()) return -1;
    return 0;
  }
  std::optional<std::map<AxisElement, std::int64_t>> moebius_vector_closed_form(
      const AxisElement& p) const override {
    std::map<AxisElement, std::int64_t> v;
    v[p] = 1;
    if (p.index() > 0) v[AxisElement::index(p.index() - 1)] = -1;
    return v;
  }
};

class ChainBoundedAxis final : public AxisImpl {
 public:
  explicit ChainBoundedAxis(std::uint64_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("bounded chain needs n >= 1");
  }
  std::string name() const override { return "chain[" + std::to_string(n_) + "]"; }
  AxisElement least() const override { return AxisElement::index(1); }
  bool contains(const AxisElement& s) const override {
    return s.holds_index() && s.index() >= 1 && s.index() <= n_;
  }
  bool less_equal(const AxisElement& s, const AxisElement& t) const override {
    return s.index() <= t.index();
  }
  std::vector<AxisElement> covers_up(const AxisElement& s) const override {
    if (s.index() >= n_) return {};
    return {AxisElement::index(s.index() + 1)};
  }
  std::vector<AxisElement> covers_down(const AxisElement& s) const override {
    if (s.index() <= 1) return {};
    return {AxisElement::index(s.index() - 1)};
  }
  std::uint64_t linear_extension_rank(const AxisElement& s) const override {
    return s.index();
  }
  std::optional<std::int64_t> moebius_closed_form(const AxisElement& s,
                                                  const AxisElement& t) const override {
    if (s.index() == t.index()) return 1;
    if (s.index() + 1 == t.index()) return -1;
    return 0;
  }
  std::optional<std::map<AxisElement, std::int64_t>> moebius_vector_closed_form(
      const AxisElement& p) const override {
    std::map<AxisElement, std::int64_t> v;
    v[p] = 1;
    if (p.index() > 1) v[AxisElement::index(p.index() - 1)] = -1;
    return v;
  }

 private:
  std::uint64_t n_;
};

class BooleanAlgebraAxis final : public AxisImpl {
 public:
  explicit BooleanAlgebraAxis(Vertex n) : n_(n) {}
  std::string name() const override { return "boolean[" + std::to_string(n_) + "]"; }
  AxisElement least() const override { return AxisElement::subset({}); }
  bool contains(const AxisElement& s) const override {
    if (!s.holds_subset()) return false;
    const VertexSet& u = s.subset();
    return u.empty() || u.back() < n_;
  }
  bool less_equal(const AxisElement& s, const AxisElement& t) const override {
    return is_subset(s.subset(), t.subset());
  }
  std::vector<AxisElement> covers_up(const AxisElement& s) const override {
    const VertexSet& u = s.subset();
    std::vector<AxisElement> out;
    for (Vertex v = 0; v < n_; ++v) {
      if (!set_contains(u, v)) out.push_back(AxisElement::subset(set_union(u, {v})));
    }
    return out;
  }
  std::vector<AxisElement> covers_down(const AxisElement& s) const override {
    const VertexSet& u = s.subset();
    std::vector<AxisElement> out;
    for (Vertex v : u) out.push_back(AxisElement::subset(set_difference(u, {v})));
    return out;
  }
  std::uint64_t linear_extension_rank(const AxisElement& s) const override {
    return s.subset().size();
  }
  std::optional<std::int64_t> moebius_closed_form(const AxisElement& s,
                                                  const AxisElement& t) const override {
    if (!is_subset(s.subset(), t.subset())) return 0;
    std::size_t diff = t.subset().size() - s.subset().size();
    return (diff % 2 == 0) ? 1 : -1;
  }
  std::optional<std::map<AxisElement, std::int64_t>> moebius_vector_closed_form(
      const AxisElement& p) const override {
    const VertexSet& u = p.subset();
    if (u.size() > 30) throw std::invalid_argument("moebius vector over 2^30 entries");
    std::map<AxisElement, std::int64_t> out;
    std::uint64_t total = std::uint64_t{1} << u.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      VertexSet v;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) v.push_back(u[i]);
      }
      std::size_t diff = u.size() - v.size();
      out[AxisElement::subset(std::move(v))] = (diff % 2 == 0) ? 1 : -1;
    }
    return out;
  }

 private:
  Vertex n_;
};

class ExplicitAxis final : public AxisImpl {
 public:
  ExplicitAxis(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& covers)
      : n_(n), leq_(n, std::vector<char>(n, 0)) {
    if (n == 0) throw std::invalid_argument("explicit poset needs at least one element");
    std::vector<std::vector<std::size_t>> up(n);
    for (auto [lo, hi] : covers) {
      if (lo >= n || hi >= n) throw std::invalid_argument("cover id out of range");
      if (lo == hi) throw std::invalid_argument("reflexive cover");
      up[lo].push_back(hi);
    }
    // Reflexive-transitive closure by DFS from each element.
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::size_t> stack{s};
      leq_[s][s] = 1;
      while (!stack.empty()) {
        std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : up[u]) {
          if (!leq_[s][v]) {
            leq_[s][v] = 1;
            stack.push_back(v);
          }
        }
      }
    }
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        if (s != t && leq_[s][t] && leq_[t][s]) {
          throw std::invalid_argument("cover relation contains a cycle");
        }
      }
    }
    // Unique least element.
    std::size_t least_count = 0;
    for (std::size_t s = 0; s < n; ++s) {
      bool is_least = true;
      for (std::size_t t = 0; t < n; ++t) {
        if (!leq_[s][t]) {
          is_least = false;
          break;
        }
      }
      if (is_least) {
        least_ = s;
        ++least_count;
      }
    }
    if (least_count != 1) {
      throw std::invalid_argument("explicit poset must have a unique least element");
    }
    // True covers derived from the closure (input may carry redundant edges).
    covers_up_.resize(n);
    covers_down_.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        if (s == t || !leq_[s][t]) continue;
        bool is_cover = true;
        for (std::size_t w = 0; w < n; ++w) {
          if (w != s && w != t && leq_[s][w] && leq_[w][t]) {
            is_cover = false;
            break;
          }
        }
        if (is_cover) {
          covers_up_[s].push_back(t);
          covers_down_[t].push_back(s);
        }
      }
    }
    // Rank = longest chain below, a valid linear-extension key.
    rank_.assign(n, 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t s : covers_down_[t]) {
          if (rank_[t] < rank_[s] + 1) {
            rank_[t] = rank_[s] + 1;
            changed = true;
          }
        }
      }
    }
  }

  std::string name() const override { return "explicit[" + std::to_string(n_) + "]"; }
  AxisElement least() const override { return AxisElement::index(least_); }
  bool contains(const AxisElement& s) const override {
    return s.holds_index() && s.index() < n_;
  }
  bool less_equal(const AxisElement& s, const AxisElement& t) const override {
    return leq_[s.index()][t.index()] != 0;
  }
  std::vector<AxisElement> covers_up(const AxisElement& s) const override {
    std::vector<AxisElement> out;
    for (std::size_t t : covers_up_[s.index()]) out.push_back(AxisElement::index(t));
    return out;
  }
  std::vector<AxisElement> covers_down(const AxisElement& s) const override {
    std::vector<AxisElement> out;
    for (std::size_t t : covers_down_[s.index()]) out.push_back(AxisElement::index(t));
    return out;
  }
  std::uint64_t linear_extension_rank(const AxisElement& s) const override {
    return rank_[s.index()];
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<std::vector<char>> leq_;
  std::size_t least_ = 0;
  std::vector<std::vector<std::size_t>> covers_up_;
  std::vector<std::vector<std::size_t>> covers_down_;
  std::vector<std::uint64_t> rank_;
};

}  // namespace

// ---------------------------------------------------------------------------
// PosetAxis
// ---------------------------------------------------------------------------

PosetAxis::PosetAxis(std::shared_ptr<const AxisImpl> impl)
    : impl_(std::move(impl)), memo_(std::make_shared<MoebiusMemo>()) {
  if (!impl_) throw std::invalid_argument("null axis implementation");
}

PosetAxis PosetAxis::chain_nat() { return PosetAxis(std::make_shared<ChainNatAxis>()); }

PosetAxis PosetAxis::chain_bounded(std::uint64_t n) {
  return PosetAxis(std::make_shared<ChainBoundedAxis>(n));
}

PosetAxis PosetAxis::boolean_algebra(Vertex n) {
  return PosetAxis(std::make_shared<BooleanAlgebraAxis>(n));
}

PosetAxis PosetAxis::explicit_poset(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& covers) {
  return PosetAxis(std::make_shared<ExplicitAxis>(n, covers));
}

void PosetAxis::require_member(const AxisElement& s) const {
  if (!impl_->contains(s)) {
    throw std::domain_error("element " + s.to_string() + " is not in axis " + impl_->name());
  }
}

bool PosetAxis::less_equal(const AxisElement& s, const AxisElement& t) const {
  require_member(s);
  require_member(t);
  return impl_->less_equal(s, t);
}

bool PosetAxis::less(const AxisElement& s, const AxisElement& t) const {
  return less_equal(s, t) && !(s == t);
}

std::vector<AxisElement> PosetAxis::covers_up(const AxisElement& s) const {
  require_member(s);
  auto out = impl_->covers_up(s);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AxisElement> PosetAxis::covers_down(const AxisElement& s) const {
  require_member(s);
  auto out = impl_->covers_down(s);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<AxisElement> PosetAxis::lower_set(const AxisElement& p) const {
  require_member(p);
  // Grow upward from the least element, pruned by <= p: every s <= p lies on
  // a saturated chain from the bottom whose members all stay below p. Upward
  // covers are much cheaper than downward ones on the subgraph-family axes.
  AxisElement bottom = impl_->least();
  std::set<AxisElement> seen{bottom};
  std::vector<AxisElement> queue{bottom};
  while (!queue.empty()) {
    AxisElement u = std::move(queue.back());
    queue.pop_back();
    for (auto& r : impl_->covers_up(u)) {
      if (impl_->less_equal(r, p) && seen.insert(r).second) queue.push_back(r);
    }
  }
  std::vector<AxisElement> out(seen.begin(), seen.end());
  return out;
}

std::int64_t PosetAxis::moebius(const AxisElement& s, const AxisElement& t) const {
  require_member(s);
  require_member(t);
  if (auto cf = impl_->moebius_closed_form(s, t)) return *cf;
  if (s == t) return 1;
  if (!impl_->less_equal(s, t)) return 0;
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto it = memo_->values.find({s, t});
    if (it != memo_->values.end()) return it->second;
  }

  // mu(s, u) for every u in [s, t], by the defining recursion
  // mu(s, u) = -sum_{s <= v < u} mu(s, v), evaluated along a linear extension.
  std::set<AxisElement> seen{s};
  std::vector<AxisElement> frontier{s};
  while (!frontier.empty()) {
    AxisElement u = std::move(frontier.back());
    frontier.pop_back();
    for (auto& r : impl_->covers_up(u)) {
      if (impl_->less_equal(r, t) && seen.insert(r).second) frontier.push_back(r);
    }
  }
  std::vector<AxisElement> interval(seen.begin(), seen.end());
  std::stable_sort(interval.begin(), interval.end(),
                   [&](const AxisElement& a, const AxisElement& b) {
                     return impl_->linear_extension_rank(a) < impl_->linear_extension_rank(b);
                   });
  std::map<AxisElement, std::int64_t> mu;
  for (const auto& u : interval) {
    if (u == s) {
      mu[u] = 1;
      continue;
    }
    std::int64_t acc = 0;
    for (const auto& [v, value] : mu) {
      if (impl_->less_equal(v, u) && !(v == u)) acc += value;
    }
    mu[u] = -acc;
  }
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    for (const auto& [u, value] : mu) memo_->values.insert({{s, u}, value});
  }
  return mu.at(t);
}

std::map<AxisElement, std::int64_t> PosetAxis::moebius_vector(const AxisElement& p) const {
  require_member(p);
  if (auto cf = impl_->moebius_vector_closed_form(p)) return *cf;

  // Dual single-pass recursion over the principal lower set:
  // mu(p, p) = 1 and mu(s, p) = -sum_{s < u <= p} mu(u, p).
  std::vector<AxisElement> lower = lower_set(p);
  std::stable_sort(lower.begin(), lower.end(),
                   [&](const AxisElement& a, const AxisElement& b) {
                     return impl_->linear_extension_rank(a) > impl_->linear_extension_rank(b);
                   });
  std::map<AxisElement, std::int64_t> mu;
  for (const auto& s : lower) {
    if (s == p) {
      mu[s] = 1;
      continue;
    }
    std::int64_t acc = 0;
    for (const auto& [u, value] : mu) {
      if (impl_->less_equal(s, u) && !(s == u)) acc += value;
    }
    mu[s] = -acc;
  }
  std::map<AxisElement, std::int64_t> out;
  for (auto& [s, value] : mu) {
    if (value != 0) out.emplace(s, value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PosetGrid
// ---------------------------------------------------------------------------

PosetGrid::PosetGrid(std::vector<PosetAxis> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw std::invalid_argument("grid needs at least one axis");
}

GridElement PosetGrid::least() const {
  GridElement p;
  p.reserve(axes_.size());
  for (const auto& a : axes_) p.push_back(a.least());
  return p;
}

bool PosetGrid::contains(const GridElement& p) const {
  if (p.size() != axes_.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!axes_[i].contains(p[i])) return false;
  }
  return true;
}

void PosetGrid::require_member(const GridElement& p) const {
  if (!contains(p)) {
    throw std::domain_error("element " + supanova::to_string(p) + " is not in the grid");
  }
}

bool PosetGrid::less_equal(const GridElement& p, const GridElement& q) const {
  require_member(p);
  require_member(q);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!axes_[i].impl().less_equal(p[i], q[i])) return false;
  }
  return true;
}

bool PosetGrid::less(const GridElement& p, const GridElement& q) const {
  return less_equal(p, q) && p != q;
}

std::vector<GridElement> PosetGrid::covers_up(const GridElement& p) const {
  require_member(p);
  std::vector<GridElement> out;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    for (auto& c : axes_[i].impl().covers_up(p[i])) {
      GridElement q = p;
      q[i] = std::move(c);
      out.push_back(std::move(q));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GridElement> PosetGrid::covers_down(const GridElement& p) const {
  require_member(p);
  std::vector<GridElement> out;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    for (auto& c : axes_[i].impl().covers_down(p[i])) {
      GridElement q = p;
      q[i] = std::move(c);
      out.push_back(std::move(q));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t PosetGrid::moebius(const GridElement& p, const GridElement& q) const {
  require_member(p);
  require_member(q);
  std::int64_t prod = 1;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    prod *= axes_[i].moebius(p[i], q[i]);
    if (prod == 0) return 0;
  }
  return prod;
}

std::uint64_t PosetGrid::linear_extension_rank(const GridElement& p) const {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    sum += axes_[i].linear_extension_rank(p[i]);
  }
  return sum;
}

std::vector<GridElement> PosetGrid::lower_set(const GridElement& p) const {
  require_member(p);
  std::vector<std::vector<AxisElement>> per_axis;
  per_axis.reserve(axes_.size());
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    per_axis.push_back(axes_[i].lower_set(p[i]));
  }
  std::vector<GridElement> out;
  GridElement current(axes_.size());
  // Iterative cartesian product.
  std::vector<std::size_t> idx(axes_.size(), 0);
  while (true) {
    for (std::size_t i = 0; i < axes_.size(); ++i) current[i] = per_axis[i][idx[i]];
    out.push_back(current);
    std::size_t k = 0;
    while (k < axes_.size()) {
      if (++idx[k] < per_axis[k].size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == axes_.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace supanova
