#include "maslovflow/cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "maslovflow/cli/config.hpp"
#include "maslovflow/cli/expression.hpp"
#include "maslovflow/harness.hpp"

namespace maslovflow::cli {

namespace fs = std::filesystem;

namespace {

harness::Scenario resolve(const std::string& target) {
  if (!target.empty() && target.front() == '@') {
    auto sc = harness::find_builtin(target.substr(1));
    if (!sc) throw Error(ErrorCode::ConfigError, "no built-in scenario '" + target.substr(1) + "'");
    return *sc;
  }
  return load_config(target);
}

int exit_for(ErrorCode code) { return is_numerical(code) ? kNumerical : kConfig; }

maslov::MaslovOptions pair_options(const harness::Scenario& sc) {
  maslov::MaslovOptions opts;
  opts.flow = sc.options.flow;
  opts.lagrangian_tol = sc.options.lagrangian_tol;
  return opts;
}

int sf_value(const harness::Scenario& sc) {
  if (sc.kind == harness::ScenarioKind::PairPathOnly) return maslov::maslov_index_block(sc.pair_path, pair_options(sc)).index;
  return bvp::sf_bvp(sc.family, sc.boundary, sc.options).value;
}

int mas_value(const harness::Scenario& sc) {
  if (sc.kind == harness::ScenarioKind::PairPathOnly) return maslov::maslov_index(sc.pair_path, pair_options(sc)).index;
  return bvp::mas_bvp(sc.family, sc.boundary, sc.options).value;
}

std::vector<flow::SpectrumSample> trace_samples(const harness::Scenario& sc, const std::string& what, int points) {
  if (sc.kind == harness::ScenarioKind::PairPathOnly) {
    if (what != "eigenphases") throw Error(ErrorCode::ConfigError, "pair_path scenarios only have eigenphase traces");
    return maslov::eigenphase_trace(sc.pair_path, points, pair_options(sc));
  }
  if (what == "eigenvalues") return bvp::eigenvalue_trace(sc.family, sc.boundary, points, sc.options);
  return bvp::eigenphase_trace(sc.family, sc.boundary, points, sc.options);
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
  f << text;
}

std::string csv(const std::vector<flow::SpectrumSample>& samples) {
  std::ostringstream os;
  flow::write_trace_csv(os, samples);
  return os.str();
}

int report_exit(const harness::VerificationReport& r) {
  if (r.error_code) return exit_for(*r.error_code);
  return r.agree && r.expected_match ? kOk : kDisagree;
}

int cmd_verify(const std::string& target, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const harness::Scenario sc = resolve(target);
  const harness::VerificationReport r = harness::run_scenario(sc);
  const std::string json = harness::to_json(r);
  if (out_dir.empty()) {
    out << json;
  } else {
    write_file(fs::path(out_dir) / (sc.name + ".json"), json);
  }
  if (r.error_code) err << sc.name << ": " << r.error << "\n";
  else if (!r.agree) err << sc.name << ": sf = " << r.sf << " but mas = " << r.mas << "\n";
  else if (!r.expected_match) err << sc.name << ": result differs from the expected values\n";
  return report_exit(r);
}

int cmd_sweep(std::uint64_t seed, int trials, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  const harness::SweepSummary summary = harness::property_sweep(seed, trials);
  const std::string json = harness::to_json(summary);
  if (out_dir.empty()) {
    out << json;
  } else {
    write_file(fs::path(out_dir) / "sweep.json", json);
  }
  for (const auto& suite : summary.suites) {
    for (const auto& f : suite.failures) err << suite.name << ": " << f << "\n";
  }
  return summary.all_passed() ? kOk : kDisagree;
}

int cmd_batch(const std::vector<std::string>& targets, const std::string& out_dir, int points, std::ostream& out,
              std::ostream& err) {
  std::vector<harness::Scenario> scenarios;
  if (targets.empty()) {
    scenarios = harness::builtin_scenarios();
  } else {
    for (const auto& t : targets) scenarios.push_back(resolve(t));
  }
  const auto reports = harness::run_scenarios(scenarios);
  const fs::path dir(out_dir);
  int code = kOk;
  std::ostringstream summary;
  summary << "{\n  \"scenarios\": [";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    write_file(dir / (r.name + ".json"), harness::to_json(r));
    if (!r.error_code) {
      try {
        const std::string what = scenarios[k].kind == harness::ScenarioKind::PairPathOnly ? "eigenphases" : "eigenvalues";
        write_file(dir / (r.name + "_" + what + ".csv"), csv(trace_samples(scenarios[k], what, points)));
        if (scenarios[k].kind != harness::ScenarioKind::PairPathOnly) {
          write_file(dir / (r.name + "_eigenphases.csv"), csv(trace_samples(scenarios[k], "eigenphases", points)));
        }
      } catch (const Error& e) {
        err << r.name << ": trace failed: " << e.what() << "\n";
      }
    }
    const int c = report_exit(r);
    if (c != kOk) err << r.name << ": " << (r.error_code ? r.error : "pipelines or expectations disagree") << "\n";
    code = std::max(code, c);
    summary << (k ? ",\n" : "\n") << "    {\"name\": \"" << r.name << "\", \"sf\": " << r.sf << ", \"mas\": " << r.mas
            << ", \"agree\": " << (r.agree ? "true" : "false") << ", \"exit\": " << c << "}";
  }
  summary << "\n  ],\n  \"exit\": " << code << "\n}\n";
  write_file(dir / "summary.json", summary.str());
  out << summary.str();
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral flow and Maslov index verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "maslovflow 1.0.0");

  std::string target, out_dir, what = "eigenvalues";
  int points = 201;
  std::uint64_t seed = 42;
  int trials = 50;
  std::vector<std::string> batch_targets;

  auto* verify = app.add_subcommand("verify", "Run both pipelines and print the report JSON");
  verify->add_option("config", target, "Config file or @NAME of a built-in scenario")->required();
  verify->add_option("--out", out_dir, "Write <name>.json into this directory");

  auto* sf = app.add_subcommand("sf", "Print the spectral flow");
  sf->add_option("config", target)->required();

  auto* mas = app.add_subcommand("maslov", "Print the Maslov index");
  mas->add_option("config", target)->required();

  auto* trace = app.add_subcommand("trace", "Write eigenvalue or eigenphase traces as CSV");
  trace->add_option("config", target)->required();
  trace->add_option("--what", what)->check(CLI::IsMember({"eigenvalues", "eigenphases"}));
  trace->add_option("--points", points)->check(CLI::Range(2, 100000));
  trace->add_option("--out", out_dir, "CSV file (default: standard output)");

  auto* sweep = app.add_subcommand("sweep", "Run the randomized property suites");
  sweep->add_option("--seed", seed);
  sweep->add_option("--trials", trials);
  sweep->add_option("--out", out_dir, "Write sweep.json into this directory");

  auto* scen = app.add_subcommand("scenarios", "List the built-in scenarios");

  auto* batch = app.add_subcommand("batch", "Verify several scenarios and write reports, traces and a summary");
  batch->add_option("configs", batch_targets, "Configs or @NAMEs (default: all built-ins)");
  batch->add_option("--out", out_dir)->required();
  batch->add_option("--points", points)->check(CLI::Range(2, 100000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int c = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return c == 0 ? kOk : kConfig;
  }

  try {
    if (*verify) return cmd_verify(target, out_dir, out, err);
    if (*sf) {
      out << sf_value(resolve(target)) << "\n";
      return kOk;
    }
    if (*mas) {
      out << mas_value(resolve(target)) << "\n";
      return kOk;
    }
    if (*trace) {
      const std::string text = csv(trace_samples(resolve(target), what, points));
      if (out_dir.empty()) out << text;
      else write_file(out_dir, text);
      return kOk;
    }
    if (*sweep) return cmd_sweep(seed, trials, out_dir, out, err);
    if (*scen) {
      for (const auto& sc : harness::builtin_scenarios()) {
        out << "@" << sc.name << "\t" << harness::to_string(sc.kind) << "\t" << sc.description << "\n";
      }
      return kOk;
    }
    if (*batch) return cmd_batch(batch_targets, out_dir, points, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}

}  // namespace maslovflow::cli
