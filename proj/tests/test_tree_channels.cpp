#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "polarcc/io.hpp"
#include "polarcc/tree.hpp"

#include <random>
#include <sstream>

using namespace polarcc;
using testutil::random_mixture;

TEST_CASE("tree type bit conventions") {
  const TreeType t(3, 3);  // 3 = 011
  CHECK(t.bits() == "011");
  CHECK(t.bit(1) == 0);
  CHECK(t.bit(2) == 1);
  CHECK(t.bit(3) == 1);
  CHECK(TreeType::from_bits("011").index == 3);
  CHECK(TreeType::from_bits("").n == 0);
  CHECK_THROWS_AS(TreeType::from_bits("01a"), std::invalid_argument);
  CHECK_THROWS_AS(TreeType(2, 4), std::invalid_argument);
}

TEST_CASE("type 011 composes check then variable twice") {
  std::mt19937_64 gen(31);
  const Density w = random_mixture(gen, 4);
  const Density via_type =
      evaluate_tree_channel(w, TreeType::from_bits("011"), QuantizerMode::exact());
  const Density s1 = chk_conv(w, w);
  const Density s2 = var_conv(s1, s1);
  const Density s3 = var_conv(s2, s2);
  CHECK(via_type == s3);
}

TEST_CASE("erasure recursion closed forms") {
  const Density d = evaluate_tree_channel(make_bec(0.5), TreeType::from_bits("011"),
                                          QuantizerMode::exact());
  CHECK(d.mass_at(0.0) == 0.31640625);  // 0.5 -> 0.75 -> 0.5625 -> 0.31640625

  for (int n : {1, 3, 6}) {
    const Density all_var = evaluate_tree_channel(
        make_bec(0.5), TreeType(n, (std::uint64_t(1) << n) - 1), QuantizerMode::exact());
    CHECK(all_var.mass_at(0.0) == std::pow(0.5, double(std::uint64_t(1) << n)));
  }
}

TEST_CASE("full profile of the half-erasure channel at height two") {
  const TreeProfile p = evaluate_all(make_bec(0.5), 2, QuantizerMode::exact());
  REQUIRE(p.size() == 4);
  const double expect[] = {0.9375, 0.5625, 0.4375, 0.0625};
  for (int i = 0; i < 4; ++i) CHECK(p.bhattacharyya[i] == expect[i]);
}

TEST_CASE("shared-prefix evaluation matches independent per-type evaluation") {
  std::mt19937_64 gen(33);
  const Density w = random_mixture(gen, 4);
  for (auto mode : {QuantizerMode::exact(), QuantizerMode::degrade(33),
                    QuantizerMode::upgrade(33)}) {
    const int n = 3;
    const TreeProfile p = evaluate_all(w, n, mode);
    for (std::uint64_t i = 0; i < 8; ++i) {
      const Density d = evaluate_tree_channel(w, TreeType(n, i), mode);
      CHECK(p.capacity[Eigen::Index(i)] == capacity(d));
      CHECK(p.bhattacharyya[Eigen::Index(i)] == bhattacharyya(d));
    }
  }
}

TEST_CASE("parallel evaluation is schedule independent") {
  std::mt19937_64 gen(35);
  const Density w = random_mixture(gen, 4);
  const TreeProfile serial = evaluate_all(w, 5, QuantizerMode::degrade(257), 1);
  const TreeProfile parallel = evaluate_all(w, 5, QuantizerMode::degrade(257), 4);
  CHECK((serial.capacity == parallel.capacity).all());
  CHECK((serial.bhattacharyya == parallel.bhattacharyya).all());
}

TEST_CASE("erasure fast path equals the generic evaluator exactly") {
  for (double eps : {0.0, 0.3, 0.5, 1.0}) {
    for (int n : {0, 1, 4}) {
      const TreeProfile fast = bec_tree_profile(eps, n);
      for (auto mode : {QuantizerMode::exact(), QuantizerMode::degrade(17),
                        QuantizerMode::upgrade(4097)}) {
        const TreeProfile gen = evaluate_all(make_bec(eps), n, mode);
        CHECK((fast.capacity == gen.capacity).all());
        CHECK((fast.bhattacharyya == gen.bhattacharyya).all());
      }
    }
  }
  CHECK(bec_tree_profile(0.5, 1).bhattacharyya[0] == 0.75);
  CHECK(bec_tree_profile(0.5, 1).bhattacharyya[1] == 0.25);
  CHECK((bec_tree_profile(0.0, 5).bhattacharyya == 0.0).all());
  CHECK_THROWS_AS(bec_tree_profile(1.5, 2), std::invalid_argument);
}

TEST_CASE("prefix consistency with the split channels") {
  std::mt19937_64 gen(37);
  const Density w = random_mixture(gen, 4);
  const int n = 3;
  const TreeProfile full = evaluate_all(w, n, QuantizerMode::exact());
  const TreeProfile chk_half = evaluate_all(chk_conv(w, w), n - 1, QuantizerMode::exact());
  const TreeProfile var_half = evaluate_all(var_conv(w, w), n - 1, QuantizerMode::exact());
  for (Eigen::Index s = 0; s < chk_half.size(); ++s) {
    CHECK(full.capacity[s] == chk_half.capacity[s]);
    CHECK(full.capacity[s + chk_half.size()] == var_half.capacity[s]);
    CHECK(full.bhattacharyya[s] == chk_half.bhattacharyya[s]);
    CHECK(full.bhattacharyya[s + chk_half.size()] == var_half.bhattacharyya[s]);
  }
}

TEST_CASE("degrade and upgrade bracket the exact profile") {
  std::mt19937_64 gen(39);
  for (int trial = 0; trial < 5; ++trial) {
    const Density w = trial == 0 ? make_bsc(0.11002) : random_mixture(gen, 4);
    for (int n : {1, 2, 3}) {
      const TreeProfile exact = evaluate_all(w, n, QuantizerMode::exact());
      const TreeProfile down = evaluate_all(w, n, QuantizerMode::degrade(129));
      const TreeProfile up = evaluate_all(w, n, QuantizerMode::upgrade(129));
      for (Eigen::Index i = 0; i < exact.size(); ++i) {
        CHECK(down.capacity[i] <= exact.capacity[i] + 1e-12);
        CHECK(exact.capacity[i] <= up.capacity[i] + 1e-12);
        CHECK(down.bhattacharyya[i] + 1e-12 >= exact.bhattacharyya[i]);
        CHECK(exact.bhattacharyya[i] + 1e-12 >= up.bhattacharyya[i]);
      }
    }
  }
}

TEST_CASE("mean capacity is conserved level by level") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Density w = random_mixture(gen, 4);
    const TreeProfile p = evaluate_all(w, 3, QuantizerMode::exact());
    CHECK(std::abs(p.capacity.mean() - capacity(w)) <= 1e-9);
  }
}

TEST_CASE("polarization fraction") {
  CHECK(polarization_fraction(bec_tree_profile(0.5, 0), 0.1) == 1.0);
  CHECK(polarization_fraction(bec_tree_profile(0.5, 8), 0.1) <
        polarization_fraction(bec_tree_profile(0.5, 4), 0.1));
  CHECK(polarization_fraction(bec_tree_profile(0.0, 4), 0.2) == 0.0);
  CHECK_THROWS_AS(polarization_fraction(bec_tree_profile(0.5, 2), 0.6),
                  std::invalid_argument);
}

TEST_CASE("profile round-trips through its text form") {
  const TreeProfile p = evaluate_all(make_bsc(0.2), 3, QuantizerMode::degrade(65));
  std::stringstream ss;
  write_profile_csv(ss, p);
  const auto rows = read_profile_csv(ss);
  REQUIRE(rows.size() == 8);
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].index == i);
    CHECK(rows[i].sigma == TreeType(3, i).bits());
    CHECK(rows[i].capacity ==
          doctest::Approx(p.capacity[Eigen::Index(i)]).epsilon(1e-12));
    CHECK(rows[i].bhattacharyya ==
          doctest::Approx(p.bhattacharyya[Eigen::Index(i)]).epsilon(1e-12));
  }
}
