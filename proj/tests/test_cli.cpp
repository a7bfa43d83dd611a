#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polarcc/cli_app.hpp"
#include "polarcc/io.hpp"

#include <sstream>

using namespace polarcc;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("functionals command") {
  const Run r = invoke({"functionals", "--channel", "bec:0.5"});
  REQUIRE(r.status == 0);
  std::istringstream is(r.out);
  const auto rows = read_functionals_csv(is);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].channel == "bec:0.5");
  CHECK(rows[0].capacity == 0.5);
  CHECK(rows[0].bhattacharyya == 0.5);
  CHECK(rows[0].entropy == 0.5);

  const Run j = invoke({"functionals", "--channel", "bsc:0.11002", "--format", "json"});
  REQUIRE(j.status == 0);
  const auto obj = nlohmann::json::parse(j.out);
  CHECK(std::abs(obj["bhattacharyya"].get<double>() - 0.6258) < 1e-4);
  CHECK(std::abs(obj["capacity"].get<double>() - 0.5) < 1e-4);
}

TEST_CASE("evolve command emits a parseable density") {
  const Run r = invoke({"evolve", "--channel", "bec:0.5", "--sigma", "011", "--quantizer",
                     "exact"});
  REQUIRE(r.status == 0);
  std::string line = r.out;
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  const Density d = to_density(parse_channel_spec(line));
  CHECK(std::abs(d.mass_at(0.0) - 0.31640625) <= 1e-12);

  const Run j = invoke({"evolve", "--channel", "bsc:0.11002", "--sigma", "0", "--format",
                     "json"});
  REQUIRE(j.status == 0);
  const auto obj = nlohmann::json::parse(j.out);
  CHECK(obj["sigma"] == "0");
  CHECK(obj["density"].is_string());
}

TEST_CASE("profile command") {
  const Run r = invoke({"profile", "--channel", "bec:0.5", "--n", "3"});
  REQUIRE(r.status == 0);
  std::istringstream is(r.out);
  const auto rows = read_profile_csv(is);
  REQUIRE(rows.size() == 8);
  CHECK(rows[3].sigma == "011");
  CHECK(std::abs(rows[3].bhattacharyya - 0.31640625) <= 1e-12);
}

TEST_CASE("bounds command in pair and set forms") {
  const Run pair = invoke({"bounds", "--p", "bsc:0.11002", "--q", "bec:0.5", "--n", "1",
                        "--grid", "513"});
  REQUIRE(pair.status == 0);
  std::istringstream is(pair.out);
  const auto rows = read_bounds_csv(is);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n == 1);
  CHECK(std::abs(rows[0].lower - 0.407) < 5e-3);

  const Run set = invoke({"bounds", "--channel", "bsc:0.11002", "--channel", "bec:0.5",
                       "--n", "1", "--grid", "513"});
  REQUIRE(set.status == 0);
  CHECK(set.out == pair.out);

  const Run missing = invoke({"bounds", "--n", "1"});
  CHECK(missing.status == 2);
}

TEST_CASE("table command matches the library") {
  const Run r = invoke({"table", "--p", "bsc:0.11002", "--q", "bec:0.5", "--nmax", "2",
                     "--grid", "257", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto arr = nlohmann::json::parse(r.out);
  REQUIRE(arr.size() == 3);
  const auto rows = bound_table(make_bsc(0.11002), make_bec(0.5), 2, 257);
  for (int k = 0; k <= 2; ++k) {
    CHECK(arr[size_t(k)]["n"] == k);
    CHECK(arr[size_t(k)]["upper"].get<double>() ==
          doctest::Approx(rows[size_t(k)].upper).epsilon(1e-12));
    CHECK(arr[size_t(k)]["lower"].get<double>() ==
          doctest::Approx(rows[size_t(k)].lower).epsilon(1e-12));
  }
}

TEST_CASE("universal command") {
  const Run r = invoke({"universal", "--capacity", "0.5", "--grid", "128"});
  REQUIRE(r.status == 0);
  const auto obj = nlohmann::json::parse(r.out);
  CHECK(obj["m"] == 128);
  CHECK(std::abs(obj["var_max"].get<double>() - 0.3916) < 5e-4);
  CHECK(std::abs(obj["chk_max"].get<double>() - 0.799) < 0.01);
  CHECK(std::abs(obj["bound"].get<double>() -
                 (1.0 - 0.5 * (obj["var_max"].get<double>() +
                               obj["chk_max"].get<double>()))) <= 1e-12);
  CHECK(obj["delta"].get<double>() == quantization_delta(128));
}

TEST_CASE("construct command") {
  const Run r = invoke({"construct", "--p", "bec:0.5", "--q", "bsc:0.11002", "--n", "6",
                     "--pb", "0.1", "--grid", "513"});
  REQUIRE(r.status == 0);
  const auto obj = nlohmann::json::parse(r.out);
  CHECK(obj["n"] == 6);
  const auto indices = obj["indices"].get<std::vector<std::uint32_t>>();
  CHECK(obj["rate"].get<double>() ==
        doctest::Approx(indices.size() / 64.0).epsilon(1e-12));
  CHECK(obj["union_bound"].get<double>() <= 0.1);
  CHECK(std::is_sorted(indices.begin(), indices.end()));

  const Run proxy = invoke({"construct", "--p", "bec:0.5", "--q", "bsc:0.11002", "--n", "6",
                         "--pb", "0.1", "--grid", "513", "--selector", "bec-proxy"});
  REQUIRE(proxy.status == 0);
  CHECK(nlohmann::json::parse(proxy.out)["rate"].get<double>() <=
        obj["rate"].get<double>() + 1e-12);
}

TEST_CASE("simulate command defaults to both design channels") {
  const std::vector<std::string> args{"simulate", "--p", "bec:0.5", "--q",
                                      "bsc:0.11002", "--n", "5", "--pb", "0.2",
                                      "--grid", "257", "--trials", "50", "--seed", "3"};
  const Run r = invoke(args);
  REQUIRE(r.status == 0);
  std::istringstream is(r.out);
  const auto rows = read_sim_csv(is);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].channel == "bec:0.5");
  CHECK(rows[1].channel == "bsc:0.11002");
  CHECK(rows[0].block_length == 32);
  CHECK(rows[0].seed == 3);

  // Same invocation, same bytes.
  const Run again = invoke(args);
  CHECK(again.out == r.out);

  const Run single = invoke({"simulate", "--p", "bec:0.5", "--q", "bsc:0.11002", "--n", "5",
                          "--pb", "0.2", "--grid", "257", "--trials", "50", "--seed",
                          "3", "--channel", "bec:0.25"});
  REQUIRE(single.status == 0);
  std::istringstream is2(single.out);
  CHECK(read_sim_csv(is2).size() == 1);
}

TEST_CASE("exit codes") {
  CHECK(invoke({}).status == 2);
  CHECK(invoke({"frobnicate"}).status == 2);
  CHECK(invoke({"functionals"}).status == 2);                               // missing flag
  CHECK(invoke({"functionals", "--channel", "bad:1"}).status == 2);        // bad spec
  CHECK(invoke({"functionals", "--channel", "bec:7"}).status == 2);        // out of range
  CHECK(invoke({"profile", "--channel", "bec:0.5", "--n", "2", "--quantizer", "softly"})
            .status == 2);
  CHECK(invoke({"universal", "--capacity", "0.5", "--grid", "2"}).status == 2);
  CHECK(invoke({"--help"}).status == 0);
  CHECK(invoke({"table", "--help"}).status == 0);
}
