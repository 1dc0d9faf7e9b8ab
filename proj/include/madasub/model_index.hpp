#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace madasub {

// A model S, i.e. a subset of the variables {1,...,p}.
//
// Members are stored 0-based and sorted; user-facing encodings (hex
// bitstrings, index lists) are 1-based. The sorted member list is the
// canonical form, so equality and hashing are on (p, members).
class ModelIndex {
 public:
  using Index = std::uint32_t;

  ModelIndex() = default;
  explicit ModelIndex(std::size_t p) : p_(p) {}
  // Throws ConfigError on out-of-range or duplicate indices.
  ModelIndex(std::size_t p, std::vector<Index> members);
  ModelIndex(std::size_t p, std::initializer_list<Index> members)
      : ModelIndex(p, std::vector<Index>(members)) {}

  static ModelIndex full(std::size_t p);
  // Bit j of mask is variable j+1. Requires p <= 64.
  static ModelIndex from_mask(std::uint64_t mask, std::size_t p);
  // Inverse of to_hex().
  static ModelIndex from_hex(const std::string& hex, std::size_t p);

  std::size_t p() const { return p_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::span<const Index> members() const { return members_; }

  bool contains(Index j) const;
  ModelIndex with(Index j) const;
  ModelIndex without(Index j) const;
  // S xor {j}
  ModelIndex toggled(Index j) const;

  ModelIndex set_union(const ModelIndex& other) const;
  ModelIndex set_intersection(const ModelIndex& other) const;
  ModelIndex set_difference(const ModelIndex& other) const;
  ModelIndex symmetric_difference(const ModelIndex& other) const;

  std::uint64_t mask() const;  // requires p <= 64
  std::vector<bool> indicators() const;

  // Hex bitstring, ceil(p/4) digits, most significant digit first;
  // the least-significant bit is variable 1.
  std::string to_hex() const;
  // "{1,4,7}" with 1-based indices.
  std::string to_string() const;

  std::size_t hash() const;

  friend bool operator==(const ModelIndex& a, const ModelIndex& b) {
    return a.p_ == b.p_ && a.members_ == b.members_;
  }

 private:
  std::size_t p_ = 0;
  std::vector<Index> members_;
};

struct ModelIndexHash {
  std::size_t operator()(const ModelIndex& s) const { return s.hash(); }
};

}  // namespace madasub

template <>
struct std::hash<madasub::ModelIndex> {
  std::size_t operator()(const madasub::ModelIndex& s) const { return s.hash(); }
};
