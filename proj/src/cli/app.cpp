#include "kdoptics/cli/app.hpp"

#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "kdoptics/errors.hpp"
#include "scenarios.hpp"

#ifndef KDOPTICS_VERSION
#define KDOPTICS_VERSION "unknown"
#endif

namespace kdoptics::cli {

namespace {

using nlohmann::json;

// Parses the command line into the fields below; returns an exit code if parsing ends the run.
struct Invocation {
  std::string subcommand;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  bool seed_given = false;
  unsigned threads = 1;
};

int write_results(const Invocation& inv, const Section& cfg, const RunContext& ctx, const json& results) {
  json doc = {{"tool", "kdoptics"},
              {"version", KDOPTICS_VERSION},
              {"scenario", inv.subcommand},
              {"seed", ctx.seed},
              {"config", cfg.echo()},
              {"results", results},
              {"files", ctx.files},
              {"warnings", ctx.warnings},
              {"budget_failures", ctx.budget_failures}};
  const std::filesystem::path path = ctx.out_dir / "results.json";
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << doc.dump(2) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Invocation inv;
  CLI::App app{"Kirkwood-Dirac distributions of classical optical fields", "kdoptics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", inv.config_path, "JSON scenario configuration");
  app.add_option("--out", inv.out_dir, "output directory (created if missing)");
  app.add_option("--seed", inv.seed, "random seed for sampled scenarios")->each([&](const std::string&) {
    inv.seed_given = true;
  });
  app.add_option("--threads", inv.threads, "worker threads for grid evaluations")->check(CLI::Range(1u, 1024u));
  app.set_version_flag("--version", KDOPTICS_VERSION);
  const std::map<std::string, std::string> about = {
      {"pol", "polarization KD table for a Stokes state and two basis axes"},
      {"mzi", "Mach-Zehnder phase scan and reconstruction, optionally from a sampled ensemble"},
      {"noisy", "noisy joint intensities and their inversion to the KD table"},
      {"space", "position/direction KD map of a Gauss-Schell, coherent or incoherent beam"},
      {"young", "two-aperture KD distribution: narrow Gaussian apertures vs closed form"},
      {"gauss-schell", "Gauss-Schell KD map on a grid vs its closed form"},
      {"wigner", "Gauss-Schell Wigner function and the Wigner-to-KD chain"},
      {"wigner-pol", "discrete polarization Wigner table and its KD transform"},
      {"fig3", "KD map of a narrow off-axis Gaussian beam"},
      {"selfcheck", "run the reproduction checks of every module"},
  };
  for (const auto& [name, scenario] : scenarios()) app.add_subcommand(name, about.at(name));

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  inv.subcommand = app.get_subcommands().front()->get_name();

  try {
    json raw = inv.config_path.empty() ? json::object() : load_config(inv.config_path);
    Section cfg(raw, "");
    RunContext ctx;
    ctx.out_dir = inv.out_dir;
    ctx.threads = inv.threads;
    ctx.seed = cfg.u64("seed", 1);
    if (inv.seed_given) {
      ctx.seed = inv.seed;
      cfg.note("seed", ctx.seed);
    }
    std::filesystem::create_directories(ctx.out_dir);

    const json results = scenarios().at(inv.subcommand)(cfg, ctx);
    write_results(inv, cfg, ctx, results);
    for (const std::string& line : ctx.log) out << line << '\n';
    for (const std::string& w : ctx.warnings) err << "warning: " << w << '\n';
    if (!ctx.budget_failures.empty()) {
      for (const std::string& f : ctx.budget_failures) err << "budget: " << f << '\n';
      return kBudgetError;
    }
    out << "wrote " << (ctx.out_dir / "results.json").string() << '\n';
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPreconditionError;
  } catch (const NumericalBudgetError& e) {
    err << "numerical budget exceeded: " << e.what() << '\n';
    return kBudgetError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace kdoptics::cli
