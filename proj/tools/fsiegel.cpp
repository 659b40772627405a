// fsiegel: census and verification of the finite Siegel-space statements over F = GF(q).
//
// Exit codes: 0 all pass, 1 any verification failure, 2 usage error, 3 all cells resource-skipped.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "fsiegel/dispatch.hpp"

namespace {

using namespace fsiegel;

constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t env_cap(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return fallback;
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used != std::string(v).size() || x == 0) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw UsageError(std::string(name) + " must be a positive integer");
  }
}

void validate(RunConfig& cfg) {
  if (cfg.q_list.empty() || cfg.n_list.empty()) throw UsageError("--q and --n need at least one value");
  for (int q : cfg.q_list) {
    if (!is_odd_prime(q)) throw UsageError("q = " + std::to_string(q) + " is not an odd prime");
    if (!is_compiled_field_order(q)) {
      std::string list;
      for (int c : compiled_field_orders()) list += (list.empty() ? "" : ",") + std::to_string(c);
      throw UsageError("q = " + std::to_string(q) + " is not compiled in (available: " + list + ")");
    }
  }
  for (int n : cfg.n_list) {
    if (n < 1) throw UsageError("n must be positive");
  }
  if (cfg.command == "verify") {
    if (cfg.checks.empty() || (cfg.checks.size() == 1 && cfg.checks[0] == "all")) cfg.checks = verify_check_ids();
    for (const auto& c : cfg.checks) {
      if (!is_verify_check(c)) throw UsageError("unknown check id: " + c);
    }
  }
  try {
    parse_group(cfg.group);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
  if (cfg.jobs == 0) cfg.jobs = 1;
}

VerificationReport run(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::pair<int, int>> cells;
  for (int q : cfg.q_list) {
    for (int n : cfg.n_list) cells.emplace_back(q, n);
  }
  std::vector<std::vector<CheckRecord>> results(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      CellRequest req;
      req.command = cfg.command;
      req.n = cells[i].second;
      req.checks = cfg.checks;
      req.group = parse_group(cfg.group);
      req.caps = cfg.caps;
      req.enumerate = cfg.enumerate;
      req.group_cap = cfg.group_cap;
      results[i] = run_cell(cells[i].first, req);
    }
  };
  const unsigned width = std::min<std::size_t>(cfg.jobs, cells.size());
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  VerificationReport rep;
  rep.config = cfg;
  std::vector<int> seen;
  for (int q : cfg.q_list) {
    if (std::find(seen.begin(), seen.end(), q) != seen.end()) continue;
    seen.push_back(q);
    rep.fields.push_back(field_parameters(q));
  }
  for (auto& r : results) {
    for (auto& rec : r) rep.records.push_back(std::move(rec));
  }
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Census and verification of finite Siegel-space statements over GF(q)", "fsiegel"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "json";
  std::optional<std::uint64_t> cap_group, cap_points;
  std::vector<std::string> positional_checks;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q_list, "Field orders, comma separated")->delimiter(',');
    sub->add_option("--n", cfg.n_list, "Half dimensions, comma separated")->delimiter(',');
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "md"}));
    sub->add_option("--cap-group", cap_group, "Largest group enumerated element by element");
    sub->add_option("--cap-points", cap_points, "Largest Lagrangian set enumerated");
    sub->add_option("--jobs", cfg.jobs, "Worker threads across grid cells");
    sub->add_option("--out", cfg.out, "Write the report to this file instead of stdout");
  };

  auto* census = app.add_subcommand("census", "Stratum counts of the Lagrangian Grassmannian");
  common(census);
  auto* verify = app.add_subcommand("verify", "Run verification checks");
  common(verify);
  verify->add_option("--checks", cfg.checks, "Check ids, comma separated, or all")->delimiter(',');
  verify->add_option("check", positional_checks, "Check ids (alternative to --checks)");
  auto* orbits = app.add_subcommand("orbits", "Orbit partition under a group's generators");
  common(orbits);
  orbits->add_option("--group", cfg.group, "sp | spf | sp0")->check(CLI::IsMember({"sp", "spf", "sp0"}));
  auto* group = app.add_subcommand("group", "Generators and order of a group");
  common(group);
  group->add_option("--group", cfg.group, "sp | spf | sp0")->check(CLI::IsMember({"sp", "spf", "sp0"}));
  group->add_flag("--enumerate", cfg.enumerate, "Enumerate the group element by element");
  group->add_option("--cap", cfg.group_cap, "Element cap for --enumerate");
  auto* witness = app.add_subcommand("witness", "Explicit Lagrangians with prescribed type and image membership");
  common(witness);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.checks.insert(cfg.checks.end(), positional_checks.begin(), positional_checks.end());
    cfg.format = parse_format(format);
    cfg.caps.group = cap_group.value_or(env_cap("FSIEGEL_CAP_GROUP", cfg.caps.group));
    cfg.caps.points = cap_points.value_or(env_cap("FSIEGEL_CAP_POINTS", cfg.caps.points));
    if (cfg.caps.group == 0 || cfg.caps.points == 0) throw UsageError("caps must be positive");
    validate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "fsiegel: " << e.what() << "\n";
    return kUsageError;
  }

  VerificationReport rep;
  try {
    rep = run(cfg);
  } catch (const ParameterError& e) {
    std::cerr << "fsiegel: " << e.what() << "\n";
    return kUsageError;
  }
  const auto text = render(rep, cfg.format);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      std::cerr << "fsiegel: cannot write " << cfg.out << "\n";
      return 1;
    }
    f << text;
  }
  return rep.exit_code();
}
