#include "madasub/model_index.hpp"

#include <algorithm>
#include <iterator>

#include "madasub/errors.hpp"

namespace madasub {

ModelIndex::ModelIndex(std::size_t p, std::vector<Index> members)
    : p_(p), members_(std::move(members)) {
  if (!std::is_sorted(members_.begin(), members_.end())) {
    std::sort(members_.begin(), members_.end());
  }
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw ConfigError("model contains a duplicate variable index");
  }
  if (!members_.empty() && members_.back() >= p_) {
    throw ConfigError("variable index " + std::to_string(members_.back() + 1) +
                      " exceeds p = " + std::to_string(p_));
  }
}

ModelIndex ModelIndex::full(std::size_t p) {
  std::vector<Index> all(p);
  for (std::size_t j = 0; j < p; ++j) all[j] = static_cast<Index>(j);
  return ModelIndex(p, std::move(all));
}

ModelIndex ModelIndex::from_mask(std::uint64_t mask, std::size_t p) {
  if (p > 64) throw ConfigError("bit mask encoding requires p <= 64");
  std::vector<Index> members;
  for (std::size_t j = 0; j < p; ++j) {
    if ((mask >> j) & 1u) members.push_back(static_cast<Index>(j));
  }
  if (p < 64 && (mask >> p) != 0) throw ConfigError("mask has bits beyond p");
  return ModelIndex(p, std::move(members));
}

ModelIndex ModelIndex::from_hex(const std::string& hex, std::size_t p) {
  const std::size_t digits = (p + 3) / 4;
  if (hex.size() != digits) {
    throw ConfigError("hex model encoding has " + std::to_string(hex.size()) +
                      " digits, expected " + std::to_string(digits));
  }
  std::vector<Index> members;
  for (std::size_t d = 0; d < digits; ++d) {
    const char c = hex[digits - 1 - d];
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      throw ConfigError(std::string("invalid hex digit '") + c + "'");
    }
    for (int b = 0; b < 4; ++b) {
      if ((v >> b) & 1) members.push_back(static_cast<Index>(4 * d + b));
    }
  }
  return ModelIndex(p, std::move(members));
}

bool ModelIndex::contains(Index j) const {
  return std::binary_search(members_.begin(), members_.end(), j);
}

ModelIndex ModelIndex::with(Index j) const {
  if (contains(j)) return *this;
  return toggled(j);
}

ModelIndex ModelIndex::without(Index j) const {
  if (!contains(j)) return *this;
  return toggled(j);
}

ModelIndex ModelIndex::toggled(Index j) const {
  if (j >= p_) throw ConfigError("variable index out of range");
  ModelIndex out(p_);
  out.members_.reserve(members_.size() + 1);
  auto it = std::lower_bound(members_.begin(), members_.end(), j);
  out.members_.insert(out.members_.end(), members_.begin(), it);
  if (it != members_.end() && *it == j) {
    ++it;
  } else {
    out.members_.push_back(j);
  }
  out.members_.insert(out.members_.end(), it, members_.end());
  return out;
}

namespace {

void require_same_p(const ModelIndex& a, const ModelIndex& b) {
  if (a.p() != b.p()) throw ConfigError("set operation on models with different p");
}

}  // namespace

ModelIndex ModelIndex::set_union(const ModelIndex& other) const {
  require_same_p(*this, other);
  ModelIndex out(p_);
  std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                 other.members_.end(), std::back_inserter(out.members_));
  return out;
}

ModelIndex ModelIndex::set_intersection(const ModelIndex& other) const {
  require_same_p(*this, other);
  ModelIndex out(p_);
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out.members_));
  return out;
}

ModelIndex ModelIndex::set_difference(const ModelIndex& other) const {
  require_same_p(*this, other);
  ModelIndex out(p_);
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out.members_));
  return out;
}

ModelIndex ModelIndex::symmetric_difference(const ModelIndex& other) const {
  require_same_p(*this, other);
  ModelIndex out(p_);
  std::set_symmetric_difference(members_.begin(), members_.end(),
                                other.members_.begin(), other.members_.end(),
                                std::back_inserter(out.members_));
  return out;
}

std::uint64_t ModelIndex::mask() const {
  if (p_ > 64) throw ConfigError("bit mask encoding requires p <= 64");
  std::uint64_t m = 0;
  for (Index j : members_) m |= std::uint64_t{1} << j;
  return m;
}

std::vector<bool> ModelIndex::indicators() const {
  std::vector<bool> out(p_, false);
  for (Index j : members_) out[j] = true;
  return out;
}

std::string ModelIndex::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (p_ + 3) / 4;
  std::string nibbles(digits, 0);
  for (Index j : members_) nibbles[j / 4] |= static_cast<char>(1 << (j % 4));
  std::string out(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    out[digits - 1 - d] = kDigits[static_cast<int>(nibbles[d])];
  }
  return out;
}

std::string ModelIndex::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(members_[i] + 1);
  }
  return out + "}";
}

std::size_t ModelIndex::hash() const {
  // FNV-1a over p and the member list.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(p_);
  for (Index j : members_) mix(j);
  return static_cast<std::size_t>(h);
}

}  // namespace madasub
