#include <doctest.h>

#include <unordered_set>

#include "madasub/errors.hpp"
#include "madasub/model_index.hpp"
#include "test_util.hpp"

using madasub::ModelIndex;

TEST_CASE("members are sorted and validated") {
  ModelIndex s(6, {4, 0, 2});
  CHECK(s.size() == 3);
  CHECK(std::vector<ModelIndex::Index>(s.members().begin(), s.members().end()) ==
        std::vector<ModelIndex::Index>{0, 2, 4});
  CHECK_THROWS_AS(ModelIndex(3, {3}), madasub::ConfigError);
  CHECK_THROWS_AS(ModelIndex(3, {1, 1}), madasub::ConfigError);
  CHECK(ModelIndex(5).empty());
  CHECK(ModelIndex::full(5).size() == 5);
}

TEST_CASE("set algebra") {
  const ModelIndex a(8, {0, 1, 5});
  const ModelIndex b(8, {1, 3, 5, 7});
  CHECK(a.set_union(b) == ModelIndex(8, {0, 1, 3, 5, 7}));
  CHECK(a.set_intersection(b) == ModelIndex(8, {1, 5}));
  CHECK(a.set_difference(b) == ModelIndex(8, {0}));
  CHECK(a.symmetric_difference(b) == ModelIndex(8, {0, 3, 7}));
  CHECK(a.with(3) == ModelIndex(8, {0, 1, 3, 5}));
  CHECK(a.without(1) == ModelIndex(8, {0, 5}));
  CHECK(a.toggled(1).toggled(1) == a);
  CHECK(a.contains(5));
  CHECK_FALSE(a.contains(4));
}

TEST_CASE("hex encoding: least-significant bit is variable 1") {
  CHECK(ModelIndex(10, {0}).to_hex() == "001");
  CHECK(ModelIndex(10, {0, 4, 9}).to_hex() == "211");
  CHECK(ModelIndex(4).to_hex() == "0");
  CHECK(ModelIndex(10, {0, 4, 9}).to_string() == "{1,5,10}");
  CHECK(ModelIndex::from_hex("211", 10) == ModelIndex(10, {0, 4, 9}));
  CHECK_THROWS_AS(ModelIndex::from_hex("400", 10), madasub::ConfigError);
}

TEST_CASE("encoding is injective on the full model space") {
  const std::size_t p = 10;
  std::unordered_set<std::string> hexes;
  std::unordered_set<ModelIndex> models;
  for (std::uint64_t m = 0; m < (1u << p); ++m) {
    const ModelIndex s = ModelIndex::from_mask(m, p);
    CHECK(s.mask() == m);
    CHECK(ModelIndex::from_hex(s.to_hex(), p) == s);
    hexes.insert(s.to_hex());
    models.insert(s);
  }
  CHECK(hexes.size() == (1u << p));
  CHECK(models.size() == (1u << p));
}

TEST_CASE("long bitstrings round-trip beyond 64 variables") {
  madasub::Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const ModelIndex s = testutil::random_model(300, rng, 0.1);
    CHECK(ModelIndex::from_hex(s.to_hex(), 300) == s);
    const auto ind = s.indicators();
    std::size_t count = 0;
    for (bool b : ind) count += b;
    CHECK(count == s.size());
  }
}
