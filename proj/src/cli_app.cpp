#include "polarcc/cli_app.hpp"

#include "polarcc/io.hpp"

#include <CLI11.hpp>

#include <stdexcept>
#include <thread>

namespace polarcc::cli {

namespace {

struct CommonOpts {
  std::string p, q, channel;
  std::vector<std::string> channels;
  int n = 0;
  int nmax = 0;
  int grid = QuantizerMode::default_grid;
  std::string quantizer = "degrade";
  std::string format = "csv";
  std::string selector = "greedy";
  std::string sigma;
  double capacity_target = 0.5;
  double pb = 0.0;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
};

int resolved_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

QuantizerMode make_mode(const std::string& name, int grid) {
  if (name == "exact") return QuantizerMode::exact();
  if (name == "degrade") return QuantizerMode::degrade(grid);
  if (name == "upgrade") return QuantizerMode::upgrade(grid);
  throw std::invalid_argument("unknown quantizer: " + name);
}

IndexSelector make_selector(const std::string& name) {
  if (name == "greedy") return IndexSelector::Greedy;
  if (name == "bec-proxy") return IndexSelector::BecProxy;
  throw std::invalid_argument("unknown selector: " + name);
}

void add_format(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_grid(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--grid", o.grid, "Quantizer grid size")->capture_default_str();
}

void add_pair(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--p", o.p, "First channel spec")->required();
  cmd->add_option("--q", o.q, "Second channel spec")->required();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Compound-rate bounds for polar codes over sets of binary-input symmetric "
      "channels, with density evolution, code construction and simulation."};
  app.require_subcommand(1);
  CommonOpts o;
  app.add_option("--threads", o.threads,
                 "Worker threads for tree evaluation (0 = all cores)");

  auto* fn = app.add_subcommand("functionals",
                                "Capacity, entropy and Bhattacharyya parameter of a channel");
  fn->add_option("--channel", o.channel, "Channel spec (bec:e | bsc:p | mix:d@w,...)")
      ->required();
  add_format(fn, o);

  auto* ev = app.add_subcommand("evolve",
                                "Density of one tree channel, printed in the mix: grammar");
  ev->add_option("--channel", o.channel, "Channel spec")->required();
  ev->add_option("--sigma", o.sigma, "Tree type as a bit string, first level first")
      ->required();
  ev->add_option("--quantizer", o.quantizer, "exact | degrade | upgrade")
      ->check(CLI::IsMember({"exact", "degrade", "upgrade"}))
      ->capture_default_str();
  add_grid(ev, o);
  add_format(ev, o);

  auto* pr = app.add_subcommand("profile",
                                "Capacity/Bhattacharyya profile of all tree channels");
  pr->add_option("--channel", o.channel, "Channel spec")->required();
  pr->add_option("--n", o.n, "Tree height")->required();
  pr->add_option("--quantizer", o.quantizer, "exact | degrade | upgrade")
      ->check(CLI::IsMember({"exact", "degrade", "upgrade"}))
      ->capture_default_str();
  add_grid(pr, o);
  add_format(pr, o);

  auto* bd = app.add_subcommand("bounds", "Compound-rate bound row at one height");
  bd->add_option("--p", o.p, "First channel spec");
  bd->add_option("--q", o.q, "Second channel spec");
  bd->add_option("--channel", o.channels,
                 "Channel set member (repeatable; overrides --p/--q)");
  bd->add_option("--n", o.n, "Tree height")->required();
  add_grid(bd, o);
  add_format(bd, o);

  auto* tb = app.add_subcommand("table", "Compound-rate bound rows for heights 0..nmax");
  add_pair(tb, o);
  tb->add_option("--nmax", o.nmax, "Largest tree height")->required();
  add_grid(tb, o);
  add_format(tb, o);

  auto* un = app.add_subcommand("universal",
                                "Height-one lower bound over all channels of one capacity");
  un->add_option("--capacity", o.capacity_target, "Common capacity of the class")
      ->required();
  un->add_option("--grid", o.grid, "Polytope grid size")->default_val(1024);

  auto* cn = app.add_subcommand("construct", "Information set of a compound code");
  add_pair(cn, o);
  cn->add_option("--n", o.n, "Tree height (block length 2^n)")->required();
  cn->add_option("--pb", o.pb, "Block-error budget")->required();
  cn->add_option("--selector", o.selector, "greedy | bec-proxy")
      ->check(CLI::IsMember({"greedy", "bec-proxy"}))
      ->capture_default_str();
  add_grid(cn, o);

  auto* sm = app.add_subcommand("simulate", "Monte Carlo block-error simulation");
  add_pair(sm, o);
  sm->add_option("--n", o.n, "Tree height (block length 2^n)")->required();
  sm->add_option("--pb", o.pb, "Block-error budget for the construction")->required();
  sm->add_option("--channel", o.channels,
                 "Channel to simulate on (repeatable; default: both --p and --q)");
  sm->add_option("--trials", o.trials, "Number of trials")->capture_default_str();
  sm->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sm->add_option("--selector", o.selector, "greedy | bec-proxy")
      ->check(CLI::IsMember({"greedy", "bec-proxy"}))
      ->capture_default_str();
  add_grid(sm, o);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("polarcc");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "usage error: " << e.what() << '\n';
      return 2;
    }

    const int threads = resolved_threads(o.threads);

    if (fn->parsed()) {
      const ChannelSpec spec = parse_channel_spec(o.channel);
      const Functionals f = functionals(to_density(spec));
      if (o.format == "json")
        out << nlohmann::json{{"channel", format_channel_spec(spec)},
                              {"capacity", f.capacity},
                              {"entropy", f.entropy},
                              {"bhattacharyya", f.bhattacharyya}}
                   .dump()
            << '\n';
      else
        write_functionals_csv(out, format_channel_spec(spec), f);
    } else if (ev->parsed()) {
      const Density d = evaluate_tree_channel(to_density(parse_channel_spec(o.channel)),
                                              TreeType::from_bits(o.sigma),
                                              make_mode(o.quantizer, o.grid));
      if (o.format == "json")
        out << nlohmann::json{{"sigma", o.sigma},
                              {"capacity", capacity(d)},
                              {"bhattacharyya", bhattacharyya(d)},
                              {"density", density_to_spec(d)}}
                   .dump()
            << '\n';
      else
        out << density_to_spec(d) << '\n';
    } else if (pr->parsed()) {
      const TreeProfile p = evaluate_all(to_density(parse_channel_spec(o.channel)), o.n,
                                         make_mode(o.quantizer, o.grid), threads);
      if (o.format == "json")
        out << profile_json(p).dump() << '\n';
      else
        write_profile_csv(out, p);
    } else if (bd->parsed()) {
      BoundRow row;
      if (!o.channels.empty()) {
        std::vector<Density> members;
        for (const std::string& c : o.channels)
          members.push_back(to_density(parse_channel_spec(c)));
        row = set_bounds(members, o.n, o.grid, threads);
      } else if (!o.p.empty() && !o.q.empty()) {
        row = pairwise_bounds(to_density(parse_channel_spec(o.p)),
                              to_density(parse_channel_spec(o.q)), o.n, o.grid, threads);
      } else {
        throw std::invalid_argument("bounds needs --p and --q, or at least one --channel");
      }
      if (o.format == "json")
        out << bounds_json({row}).dump() << '\n';
      else
        write_bounds_csv(out, {row});
    } else if (tb->parsed()) {
      const auto rows = bound_table(to_density(parse_channel_spec(o.p)),
                                    to_density(parse_channel_spec(o.q)), o.nmax, o.grid,
                                    threads);
      if (o.format == "json")
        out << bounds_json(rows).dump() << '\n';
      else
        write_bounds_csv(out, rows);
    } else if (un->parsed()) {
      try {
        const double var = var_conv_max(o.capacity_target);
        const double chk = solve_kkt(build_polytope(o.capacity_target, o.grid)).objective;
        out << universal_json(var, chk, 1.0 - 0.5 * (var + chk), o.grid,
                              quantization_delta(o.grid))
                   .dump()
            << '\n';
      } catch (const std::runtime_error& e) {
        throw std::runtime_error("universal(capacity=" + fmt15(o.capacity_target) +
                                 ", grid=" + std::to_string(o.grid) + "): " + e.what());
      }
    } else if (cn->parsed()) {
      const CompoundCode built = build_compound_code(
          parse_channel_spec(o.p), parse_channel_spec(o.q), o.n, o.pb, o.grid,
          make_selector(o.selector), threads);
      out << construct_json(built).dump() << '\n';
    } else if (sm->parsed()) {
      const ChannelSpec p = parse_channel_spec(o.p);
      const ChannelSpec q = parse_channel_spec(o.q);
      const CompoundCode built = build_compound_code(p, q, o.n, o.pb, o.grid,
                                                     make_selector(o.selector), threads);
      std::vector<ChannelSpec> targets;
      if (o.channels.empty()) {
        targets = {p, q};
      } else {
        for (const std::string& c : o.channels) targets.push_back(parse_channel_spec(c));
      }
      std::vector<SimReport> reports;
      for (const ChannelSpec& t : targets)
        reports.push_back(simulate(t, built.code, o.trials, o.seed));
      write_sim_csv(out, reports);
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace polarcc::cli
