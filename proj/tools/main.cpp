#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scenarios/registry.hpp"
#include "warplab/types.hpp"

namespace {

using namespace warplab::cli;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string default_out() {
  const char* env = std::getenv("WARPLAB_OUT");
  return env && *env ? env : "warplab-out";
}

Config resolve(const Scenario& s, const std::string& file, const std::vector<std::string>& sets, long seed) {
  Config c = scenario_config(s);
  if (!file.empty()) c.load_file(file);
  c.apply_overrides(sets);
  if (seed >= 0) c.set("seed", std::to_string(seed), "cli");
  return c;
}

void print_checks(const RunReport& r) {
  for (const auto& c : r.checks)
    std::printf("  %-4s %-40s %.3e %s %.3e\n", c.pass ? "ok" : "FAIL", c.name.c_str(), c.value, c.relation.c_str(),
                c.tolerance);
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"warplab: scenario runner for the deformation and measurement toolkit"};
  app.require_subcommand(1);

  std::string name, file, out = default_out(), param, values;
  std::vector<std::string> sets;
  long seed = -1;

  auto* run = app.add_subcommand("run", "run one scenario and write its report");
  run->add_option("scenario", name, "scenario name")->required();
  run->add_option("--config", file, "key = value file");
  run->add_option("--set", sets, "key=value override (repeatable)");
  run->add_option("--out", out, "output directory (default $WARPLAB_OUT or ./warplab-out)");
  run->add_option("--seed", seed, "seed override")->check(CLI::NonNegativeNumber);

  auto* sw = app.add_subcommand("sweep", "run a scenario over values of one parameter");
  sw->add_option("scenario", name, "scenario name")->required();
  sw->add_option("--param", param, "sweepable parameter")->required();
  sw->add_option("--values", values, "comma-separated values")->required();
  sw->add_option("--config", file, "key = value file");
  sw->add_option("--set", sets, "key=value override (repeatable)");
  sw->add_option("--out", out, "output directory");
  sw->add_option("--seed", seed, "seed override")->check(CLI::NonNegativeNumber);

  auto* list = app.add_subcommand("list", "list scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (list->parsed()) {
      for (const auto& s : registry()) std::printf("%-20s %s\n", s.name.c_str(), s.anchor.c_str());
      return kExitPass;
    }
    const Scenario& s = find_scenario(name);
    const Config c = resolve(s, file, sets, seed);
    if (run->parsed()) {
      const RunReport r = run_scenario(s, c);
      const auto paths = emit(r, out);
      std::printf("%s: %s (%.2f s)\n", r.scenario.c_str(), r.passed() ? "pass" : "FAIL", r.wall_clock);
      print_checks(r);
      std::printf("  report: %s\n", paths.front().string().c_str());
      return r.passed() ? kExitPass : kExitFail;
    }
    const SweepResult res = sweep(s, c, param, split(values));
    for (std::size_t i = 0; i < res.runs.size(); ++i) {
      const auto dir = std::filesystem::path(out) / (s.name + "-" + param + "-" + std::to_string(i));
      emit(res.runs[i], dir);
      std::printf("%s %s=%s: %s\n", s.name.c_str(), param.c_str(), split(values)[i].c_str(),
                  res.runs[i].passed() ? "pass" : "FAIL");
    }
    const auto paths = emit(res.summary, out);
    std::printf("%s: %s\n", res.summary.scenario.c_str(), res.summary.passed() ? "pass" : "FAIL");
    print_checks(res.summary);
    std::printf("  report: %s\n", paths.front().string().c_str());
    return res.summary.passed() ? kExitPass : kExitFail;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const warplab::PreconditionError& e) {
    std::fprintf(stderr, "error: scenario '%s' rejected its parameters: %s\n", name.c_str(), e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
}
