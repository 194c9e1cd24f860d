#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "runner.hpp"

using ppext::cli::ExperimentConfig;

namespace {

// Flags shared by every leaf command. All bind into the same config; only
// the selected command's parse is used.
void add_common(CLI::App* sub, ExperimentConfig& c) {
  sub->add_option("--alpha", c.alpha, "alpha as an exact rational, e.g. 2 or 5/2");
  sub->add_option("--ell1", c.ell1, "ell1 as an exact rational, e.g. 1/4");
  sub->add_option("--n", c.n, "degree N (node count for 'nodes')");
  sub->add_option("--n-min", c.n_min, "smallest degree N");
  sub->add_option("--n-max", c.n_max, "largest degree N");
  sub->add_option("--n-list", c.n_list, "degrees N, comma separated")->delimiter(',');
  sub->add_option("--s-min", c.s_min, "smallest level s");
  sub->add_option("--s-max", c.s_max, "largest level s");
  sub->add_option("--p", c.p_list, "derivative orders p, comma separated")->delimiter(',');
  sub->add_option("--q", c.q_list, "orders q, comma separated")->delimiter(',');
  sub->add_option("--w", c.w_list, "exponents w, comma separated")->delimiter(',');
  sub->add_option("--r", c.r, "power r of N in the non-Leja comparison");
  sub->add_option("--depth", c.depth, "depth for 'levels'");
  sub->add_option("--depth-offset", c.depth_offset, "grid Y_{s+offset} for 2^s <= N+1");
  sub->add_option("--headroom", c.headroom, "guard bits over the exact level widths");
  sub->add_option("--samples", c.samples, "sample count (collar samples, demo samples, random points)");
  sub->add_option("--function", c.function,
                  "f: exp, exp:c, sin, sin:c, recip, poly:c0,c1,..., omega:m");
  sub->add_option("--n-tail", c.n_tail, "terms of the Newton tail estimate");
  sub->add_option("--eps", c.eps, "interval demo: K = [-eps, eps]");
  sub->add_option("--delta", c.delta, "interval demo: cutoff width");
  sub->add_option("--x", c.x, "evaluation points: decimals, p/q, or node:k")->delimiter(',');
  sub->add_option("--seed", c.seed, "seed for random evaluation points");
  sub->add_option("--out", c.reports_path, "reports JSON path");
  sub->add_option("--summary", c.summary_path, "summary CSV path (empty to skip)");
  sub->add_option("--terms", c.terms_path, "per-term CSV path (optional)");
  sub->add_option("--jobs", c.jobs, "worker threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ppext: numerical checks for polynomial interpolation and extension on Cantor-type sets"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_in;
  std::string config_out;
  app.add_option("--config", config_in, "read the experiment config from JSON; flags are ignored");
  app.add_option("--write-config", config_out, "write the resolved config JSON and exit");

  std::map<CLI::App*, std::string> leaf;
  std::map<std::string, CLI::App*> groups;
  for (const std::string& name : ppext::cli::commands()) {
    auto space = name.find(' ');
    CLI::App* sub = nullptr;
    if (space == std::string::npos) {
      sub = app.add_subcommand(name, ppext::cli::describe_command(name));
    } else {
      std::string group = name.substr(0, space);
      CLI::App*& g = groups[group];
      if (!g) {
        g = app.add_subcommand(group, group == "verify" ? "asserted checks of the stated bounds"
                                                        : "demonstrations, always exit 0 with data");
        g->require_subcommand(1);
      }
      sub = g->add_subcommand(name.substr(space + 1), ppext::cli::describe_command(name));
    }
    sub->footer("Checks: " + ppext::cli::describe_command(name));
    add_common(sub, cfg);
    leaf[sub] = name;
  }
  // --config may stand alone
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : ppext::cli::kConfigError;
  }

  if (!config_in.empty()) {
    try {
      std::ifstream f(config_in);
      if (!f) throw ppext::ConfigError("cannot read " + config_in);
      cfg = ppext::cli::config_from_json(ppext::cli::json::parse(f));
    } catch (const ppext::cli::json::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return ppext::cli::kConfigError;
    } catch (const ppext::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return ppext::cli::kConfigError;
    }
  } else {
    for (const auto& [sub, name] : leaf) {
      if (sub->parsed()) cfg.command = name;
    }
    if (cfg.command.empty()) {
      std::cerr << app.help();
      return ppext::cli::kConfigError;
    }
  }

  if (!config_out.empty()) {
    try {
      ExperimentConfig resolved = ppext::cli::resolve(cfg);
      ppext::cli::write_atomic(config_out, ppext::cli::to_json(resolved).dump(2) + "\n");
      return ppext::cli::kOk;
    } catch (const std::exception& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return ppext::cli::kConfigError;
    }
  }
  return ppext::cli::run(cfg);
}
