#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace supanova {

using Vertex = std::uint32_t;

// Strictly increasing, duplicate-free vertex list. All subset-valued poset
// elements are kept in this canonical form so that equality is structural.
using VertexSet = std::vector<Vertex>;

bool is_canonical_set(const VertexSet& s);
VertexSet canonical_set(VertexSet s);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool set_contains(const VertexSet& s, Vertex v);
bool is_subset(const VertexSet& a, const VertexSet& b);
std::string set_to_string(const VertexSet& s);

// One coordinate of a grid element. Chain-like axes (including explicit
// posets, which number their elements) use an integer index; subset-ordered
// axes use a canonical VertexSet.
class AxisElement {
 public:
  AxisElement() : value_(std::uint64_t{0}) {}

  static AxisElement index(std::uint64_t i) { return AxisElement(i); }
  static AxisElement subset(VertexSet s);

  bool holds_index() const { return value_.index() == 0; }
  bool holds_subset() const { return value_.index() == 1; }
  std::uint64_t index() const;
  const VertexSet& subset() const;

  bool operator==(const AxisElement&) const = default;
  auto operator<=>(const AxisElement&) const = default;

  std::string to_string() const;

 private:
  explicit AxisElement(std::uint64_t i) : value_(i) {}
  explicit AxisElement(VertexSet s) : value_(std::move(s)) {}
  std::variant<std::uint64_t, VertexSet> value_;
};

using GridElement = std::vector<AxisElement>;

std::string to_string(const GridElement& p);

// Canonical byte encoding of a grid element; fixed-width big-endian fields so
// that lexicographic byte order is deterministic across platforms. Used for
// cache keys, digests, and tie-breaking.
std::string grid_key(const GridElement& p);

// Interface implemented by every axis kind. Axes are immutable after
// construction; all queries must be safe for concurrent readers.
class AxisImpl {
 public:
  virtual ~AxisImpl() = default;

  virtual std::string name() const = 0;
  virtual AxisElement least() const = 0;
  virtual bool contains(const AxisElement& s) const = 0;
  // Assumes both arguments are members.
  virtual bool less_equal(const AxisElement& s, const AxisElement& t) const = 0;
  virtual std::vector<AxisElement> covers_up(const AxisElement& s) const = 0;
  virtual std::vector<AxisElement> covers_down(const AxisElement& s) const = 0;

  // Any monotone rank: s < t implies rank(s) < rank(t). Sorting by
  // (rank, element) yields a deterministic linear extension.
  virtual std::uint64_t linear_extension_rank(const AxisElement& s) const = 0;

  // Closed-form Moebius values where available; nullopt falls back to the
  // memoized recursion.
  virtual std::optional<std::int64_t> moebius_closed_form(
      const AxisElement& s, const AxisElement& t) const {
    (void)s;
    (void)t;
    return std::nullopt;
  }
  virtual std::optional<std::map<AxisElement, std::int64_t>>
  moebius_vector_closed_form(const AxisElement& p) const {
    (void)p;
    return std::nullopt;
  }
};

// Value-semantic handle on an immutable axis, with a shared memo cache for
// the generic Moebius recursion (single-writer inserts under a mutex).
class PosetAxis {
 public:
  explicit PosetAxis(std::shared_ptr<const AxisImpl> impl);

  // The natural numbers with least element 0.
  static PosetAxis chain_nat();
  // {1, ..., n} as a chain with least element 1.
  static PosetAxis chain_bounded(std::uint64_t n);
  // Subsets of {0, ..., n-1} ordered by inclusion.
  static PosetAxis boolean_algebra(Vertex n);
  // Finite poset given by a cover list over element ids 0..n-1. The order is
  // the reflexive-transitive closure; a unique least element is required.
  static PosetAxis explicit_poset(
      std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& covers);

  std::string name() const { return impl_->name(); }
  AxisElement least() const { return impl_->least(); }
  bool contains(const AxisElement& s) const { return impl_->contains(s); }
  bool less_equal(const AxisElement& s, const AxisElement& t) const;
  bool less(const AxisElement& s, const AxisElement& t) const;
  std::vector<AxisElement> covers_up(const AxisElement& s) const;
  std::vector<AxisElement> covers_down(const AxisElement& s) const;
  std::uint64_t linear_extension_rank(const AxisElement& s) const {
    return impl_->linear_extension_rank(s);
  }

  std::int64_t moebius(const AxisElement& s, const AxisElement& t) const;
  std::map<AxisElement, std::int64_t> moebius_vector(const AxisElement& p) const;

  // All s <= p, discovered by downward closure over covers.
  std::vector<AxisElement> lower_set(const AxisElement& p) const;

  const AxisImpl& impl() const { return *impl_; }

 private:
  void require_member(const AxisElement& s) const;

  std::shared_ptr<const AxisImpl> impl_;
  struct MoebiusMemo {
    std::mutex mutex;
    std::map<std::pair<AxisElement, AxisElement>, std::int64_t> values;
  };
  std::shared_ptr<MoebiusMemo> memo_;
};

// Direct product of axes with componentwise order.
class PosetGrid {
 public:
  explicit PosetGrid(std::vector<PosetAxis> axes);

  std::size_t dimension() const { return axes_.size(); }
  const PosetAxis& axis(std::size_t i) const { return axes_.at(i); }
  const std::vector<PosetAxis>& axes() const { return axes_; }

  GridElement least() const;
  bool contains(const GridElement& p) const;
  bool less_equal(const GridElement& p, const GridElement& q) const;
  bool less(const GridElement& p, const GridElement& q) const;

  // Covers in a product order differ from the covered element in exactly one
  // coordinate, by a cover on that axis.
  std::vector<GridElement> covers_up(const GridElement& p) const;
  std::vector<GridElement> covers_down(const GridElement& p) const;

  std::int64_t moebius(const GridElement& p, const GridElement& q) const;
  std::uint64_t linear_extension_rank(const GridElement& p) const;

  // All q <= p (cartesian product of the per-axis lower sets).
  std::vector<GridElement> lower_set(const GridElement& p) const;

  void require_member(const GridElement& p) const;

 private:
  std::vector<PosetAxis> axes_;
};

}  // namespace supanova
