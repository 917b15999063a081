// catbranch: simulate | verify | convert
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "catbranch/contour.hpp"
#include "catbranch/io.hpp"
#include "catbranch/particle.hpp"
#include "catbranch/points.hpp"
#include "catbranch/replicas.hpp"
#include "catbranch/suites.hpp"

namespace fs = std::filesystem;
using namespace catbranch;

namespace {

enum Exit { kOk = 0, kTestFailure = 1, kInput = 2, kOverflow = 3 };

std::string default_out() {
  const char* env = std::getenv("CATBRANCH_OUT");
  return env && *env ? env : "catbranch_out";
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory '" + dir + "'");
  return dir;
}

std::string forest_text(const FamilyForest& f) {
  std::ostringstream os;
  write_forest(os, f);
  return os.str();
}

// Config entries become "--key=value" tokens placed before the user's own flags; with
// take-last semantics the command line wins.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string cfg;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) cfg = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) cfg = args[i].substr(9);
  }
  if (cfg.empty() || args.empty()) return args;
  std::istringstream in(read_file(cfg));
  std::vector<std::string> out{args[0]};
  for (const auto& [k, v] : read_key_values(in)) out.push_back("--" + k + "=" + v);
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

struct SimulateArgs {
  SimConfig cfg;
  std::string representation = "galton_watson";
  std::string rate_convention = "birth_rate";
  std::size_t replicas = 1;
  std::vector<double> levels;
  std::string catalyst_file;
  bool no_forests = false;
};

void write_gnuplot(const fs::path& dir, std::size_t replicas, bool has_catalyst) {
  std::ostringstream gp;
  gp << "set datafile separator ','\nset key top right\nset xlabel 't'\nset ylabel 'mass'\n";
  gp << "set terminal pngcairo size 900,600\nset output 'masses.png'\n";
  gp << "plot ";
  bool first = true;
  for (std::size_t r = 0; r < replicas; ++r) {
    if (has_catalyst) {
      gp << (first ? "" : ", \\\n     ") << "'catalyst_mass_" << r << ".csv' every ::1 with steps title 'X " << r << "'";
      first = false;
    }
    gp << (first ? "" : ", \\\n     ") << "'reactant_mass_" << r << ".csv' every ::1 with steps title 'Y " << r << "'";
    first = false;
  }
  gp << "\n";
  write_file((dir / "plot.gp").string(), gp.str());
}

int cmd_simulate(const SimulateArgs& a, std::uint64_t seed, unsigned jobs, const std::string& out_dir) {
  SimConfig cfg = a.cfg;
  cfg.seed = seed;
  cfg.representation = parse_representation(a.representation);
  cfg.rate_convention = parse_rate_convention(a.rate_convention);
  cfg.record_forest = !a.no_forests || !a.levels.empty();
  cfg.validate();
  if (a.replicas == 0) throw InputError("replicas must be >= 1");
  std::optional<MassPath> quenched;
  if (!a.catalyst_file.empty()) {
    std::istringstream in(read_file(a.catalyst_file));
    quenched = read_mass_path(in);
  }
  fs::path dir = ensure_dir(out_dir);

  auto results = run_replicas<JointResult>(a.replicas, jobs, [&](std::size_t r) {
    SimConfig c = cfg;
    c.seed = stream_seed(seed, r);
    if (!quenched) return simulate_joint(c);
    JointResult j;
    j.reactant = simulate_reactant_quenched(c, *quenched);
    return j;
  });

  nlohmann::json summary;
  summary["seed"] = seed;
  summary["n"] = cfg.n;
  summary["b1"] = cfg.b1;
  summary["b2"] = cfg.b2;
  summary["x0"] = cfg.x0;
  summary["y0"] = cfg.y0;
  summary["delta"] = cfg.delta;
  summary["t_max"] = cfg.t_max;
  summary["representation"] = to_string(cfg.representation);
  summary["rate_convention"] = to_string(cfg.rate_convention);
  summary["quenched_catalyst"] = quenched ? a.catalyst_file : "";
  nlohmann::json reps = nlohmann::json::array();
  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& jr = results[r];
    const std::string tag = std::to_string(r);
    nlohmann::json row;
    auto dump = [&](const std::string& who, const Population& p) {
      std::ostringstream m;
      write_mass_path(m, p.mass);
      write_file((dir / (who + "_mass_" + tag + ".csv")).string(), m.str());
      double T0 = stopping_time(p.mass, 0.0);
      row[who] = {{"final_mass", p.mass.values.back()},
                  {"events", p.events},
                  {"extinction_time", std::isfinite(T0) ? nlohmann::json(T0) : nlohmann::json(nullptr)}};
      if (a.no_forests && a.levels.empty()) return;
      if (!a.no_forests) {
        write_file((dir / (who + "_forest_" + tag + ".txt")).string(), forest_text(p.forest));
        std::ostringstream c;
        write_excursion(c, contour_from_forest(p.forest, 2.0 * cfg.n));
        write_file((dir / (who + "_contour_" + tag + ".txt")).string(), c.str());
      }
      for (std::size_t k = 0; k < a.levels.size(); ++k) {
        double t = a.levels[k];
        if (p.forest.height_cap && t > *p.forest.height_cap) continue;
        std::ostringstream pp;
        write_point_process(pp, point_process_at_level(p.forest, t, 1.0 / cfg.n));
        write_file((dir / (who + "_points_" + tag + "_L" + std::to_string(k) + ".csv")).string(), pp.str());
      }
    };
    if (!quenched) dump("catalyst", jr.catalyst);
    dump("reactant", jr.reactant);
    reps.push_back(row);
  }
  summary["replicas"] = reps;
  write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
  write_gnuplot(dir, results.size(), !quenched);
  std::printf("wrote %zu replica(s) to %s\n", results.size(), dir.string().c_str());
  return kOk;
}

int cmd_verify(const std::vector<std::string>& suites, std::optional<std::size_t> replicas, std::uint64_t seed,
               unsigned jobs, const std::string& out_dir) {
  std::vector<int> ids;
  for (const auto& s : suites) {
    if (s == "all") {
      for (int i = 1; i <= kCriteria; ++i) ids.push_back(i);
    } else {
      ids.push_back(suite_id(s));
    }
  }
  if (ids.empty()) throw InputError("no suite selected");
  fs::path dir = ensure_dir(out_dir);
  SuiteOptions opt;
  opt.seed = seed;
  opt.jobs = jobs;
  opt.replicas = replicas;
  bool ok = true;
  nlohmann::json report;
  report["seed"] = seed;
  report["alpha"] = 0.01;
  nlohmann::json arr = nlohmann::json::array();
  for (int id : ids) {
    CriterionResult r = run_criterion(id, opt);
    ok = ok && r.pass();
    std::printf("%s %s\n", r.pass() ? "PASS" : "FAIL", r.name.c_str());
    for (const auto& rep : r.reports)
      std::printf("  %-4s %s stat=%.6g target=%s\n", rep.pass ? "ok" : "FAIL", rep.name.c_str(), rep.statistic,
                  rep.target.c_str());
    arr.push_back({{"suite", r.name},
                   {"pass", r.pass()},
                   {"reports", nlohmann::json::parse(to_json(r.reports))},
                   {"notes", r.notes}});
  }
  report["suites"] = arr;
  report["pass"] = ok;
  write_file((dir / "verify_report.json").string(), report.dump(2) + "\n");
  return ok ? kOk : kTestFailure;
}

int cmd_convert(const std::string& input, const std::string& what, double speed, std::optional<double> level,
                std::optional<double> spacing, const std::string& output) {
  std::istringstream in(read_file(input));
  std::ostringstream os;
  if (what == "forest-to-contour") {
    write_excursion(os, contour_from_forest(read_forest(in), speed));
  } else if (what == "contour-to-forest") {
    write_forest(os, tree_from_excursion(read_excursion(in)));
  } else if (what == "forest-to-points") {
    if (!level) throw InputError("forest-to-points needs --level");
    write_point_process(os, point_process_at_level(read_forest(in), *level, spacing.value_or(1.0)));
  } else {
    throw InputError("unknown conversion '" + what + "'");
  }
  if (output.empty() || output == "-")
    std::cout << os.str();
  else
    write_file(output, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catalytic branching: simulation, verification, conversion"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out_dir = default_out();

  auto common = [&](CLI::App* sub, bool needs_seed) {
    sub->add_option("--config", config, "key=value file; command-line flags override it");
    if (needs_seed) sub->add_option("--seed", seed, "master seed")->required();
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory (default $CATBRANCH_OUT or ./catbranch_out)");
  };

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "particle system runs");
  common(sim, true);
  sim->add_option("--n", sa.cfg.n, "rescaling index");
  sim->add_option("--b1", sa.cfg.b1, "catalyst branching rate");
  sim->add_option("--b2", sa.cfg.b2, "reactant branching rate");
  sim->add_option("--x0", sa.cfg.x0, "initial catalyst mass");
  sim->add_option("--y0", sa.cfg.y0, "initial reactant mass");
  sim->add_option("--delta", sa.cfg.delta, "truncation threshold for the reactant forest");
  sim->add_option("--t-max", sa.cfg.t_max, "time horizon");
  sim->add_option("--max-live", sa.cfg.max_live, "live-population cap");
  sim->add_option("--representation", sa.representation, "galton_watson | birth_death");
  sim->add_option("--rate-convention", sa.rate_convention, "birth_rate | lifetime");
  sim->add_option("--replicas", sa.replicas, "number of replicas");
  sim->add_option("--level", sa.levels, "write the genealogical point process at these levels")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sim->add_option("--catalyst-file", sa.catalyst_file, "quenched catalyst mass path (t,value CSV)");
  sim->add_flag("--no-forests", sa.no_forests, "write mass paths only");

  std::vector<std::string> suites;
  std::optional<std::size_t> replicas;
  auto* ver = app.add_subcommand("verify", "acceptance suites");
  common(ver, true);
  std::string suite_help = "suite name or 'all':";
  for (const auto& s : suite_names()) suite_help += " " + s;
  ver->add_option("--suite", suites, suite_help)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  ver->add_option("--replicas", replicas, "override the replica count");

  std::string input, what, output;
  double speed = 1.0;
  std::optional<double> level, spacing;
  auto* conv = app.add_subcommand("convert", "forest / contour / point-process conversions");
  common(conv, false);
  conv->add_option("--input", input, "input file")->required();
  conv->add_option("--what", what, "forest-to-contour | contour-to-forest | forest-to-points")->required();
  conv->add_option("--speed", speed, "contour speed for forest-to-contour");
  conv->add_option("--level", level, "level for forest-to-points");
  conv->add_option("--spacing", spacing, "index spacing for forest-to-points");
  conv->add_option("--output", output, "output file (default stdout)");

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  }

  try {
    if (*sim) return cmd_simulate(sa, seed, jobs, out_dir);
    if (*ver) return cmd_verify(suites.empty() ? std::vector<std::string>{"all"} : suites, replicas, seed, jobs, out_dir);
    return cmd_convert(input, what, speed, level, spacing, output);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  } catch (const OverflowError& e) {
    std::fprintf(stderr, "overflow: %s\n", e.what());
    return kOverflow;
  } catch (const std::bad_alloc&) {
    std::fprintf(stderr, "overflow: out of memory\n");
    return kOverflow;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInput;
  }
}
