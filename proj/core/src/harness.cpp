#include "maslovflow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

namespace maslovflow::harness {

namespace {

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string number_list(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out += ", ";
    out += number(xs[k]);
  }
  return out + "]";
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::FirstOrder: return "first_order";
    case ScenarioKind::SecondOrder: return "second_order";
    case ScenarioKind::PairPathOnly: return "pair_path";
  }
  return "unknown";
}

VerificationReport run_scenario(const Scenario& sc) {
  VerificationReport rep;
  rep.name = sc.name;
  rep.kind = sc.kind;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (sc.kind == ScenarioKind::PairPathOnly) {
      maslov::MaslovOptions opts;
      opts.flow = sc.options.flow;
      opts.lagrangian_tol = sc.options.lagrangian_tol;
      maslov::MaslovResult block = maslov::maslov_index_block(sc.pair_path, opts);
      maslov::MaslovResult mas = maslov::maslov_index(sc.pair_path, opts);
      rep.sf = block.index;
      rep.mas = mas.index;
      rep.sf_report = std::move(block.report);
      rep.mas_report = std::move(mas.report);
      rep.residuals.lagrangian = mas.lagrangian_residual;
      rep.residuals.unitary = std::max(mas.circle_residual, block.circle_residual);
    } else {
      bvp::BvpResult sf = bvp::sf_bvp(sc.family, sc.boundary, sc.options);
      bvp::BvpResult mas = bvp::mas_bvp(sc.family, sc.boundary, sc.options);
      rep.sf = sf.value;
      rep.mas = mas.value;
      rep.sf_report = std::move(sf.report);
      rep.mas_report = std::move(mas.report);
      rep.residuals.transport = mas.transport_residual;
      rep.residuals.lagrangian = std::max(sf.lagrangian_residual, mas.lagrangian_residual);
      rep.residuals.unitary = mas.unitary_residual;
    }
    rep.agree = rep.sf == rep.mas;
    rep.expected_match = (!sc.expected.sf || *sc.expected.sf == rep.sf) &&
                         (!sc.expected.mas || *sc.expected.mas == rep.mas);
  } catch (const Error& e) {
    rep.error_code = e.code();
    rep.error = e.what();
    rep.agree = false;
  }
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<VerificationReport> run_scenarios(const std::vector<Scenario>& scenarios) {
  std::vector<VerificationReport> out(scenarios.size());
  parallel_for(static_cast<int>(scenarios.size()),
               [&](int k) { out[static_cast<std::size_t>(k)] = run_scenario(scenarios[static_cast<std::size_t>(k)]); });
  return out;
}

Scenario refined(const Scenario& sc) {
  Scenario out = sc;
  out.options.shooting.steps *= 2;
  out.options.shooting.grid *= 2;
  out.options.flow.initial_segments *= 2;
  return out;
}

std::string to_json(const VerificationReport& r) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"name\": " << quoted(r.name) << ",\n";
  os << "  \"kind\": " << quoted(to_string(r.kind)) << ",\n";
  os << "  \"sf\": " << r.sf << ",\n";
  os << "  \"mas\": " << r.mas << ",\n";
  os << "  \"agree\": " << (r.agree ? "true" : "false") << ",\n";
  os << "  \"expected_match\": " << (r.expected_match ? "true" : "false") << ",\n";
  os << "  \"residuals\": {\"transport\": " << number(r.residuals.transport)
     << ", \"lagrangian\": " << number(r.residuals.lagrangian) << ", \"unitary\": " << number(r.residuals.unitary)
     << "},\n";
  os << "  \"partitions\": {\"sf\": " << number_list(r.sf_report.partition)
     << ", \"mas\": " << number_list(r.mas_report.partition) << "},\n";
  if (r.error_code) {
    os << "  \"error\": {\"code\": " << quoted(to_string(*r.error_code)) << ", \"message\": " << quoted(r.error)
       << "},\n";
  }
  os << "  \"wall_ms\": " << number(r.wall_ms) << "\n";
  os << "}\n";
  return os.str();
}

std::string to_json(const SweepSummary& summary) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"seed\": " << summary.seed << ",\n";
  os << "  \"trials\": " << summary.trials << ",\n";
  os << "  \"all_passed\": " << (summary.all_passed() ? "true" : "false") << ",\n";
  os << "  \"suites\": [\n";
  for (std::size_t k = 0; k < summary.suites.size(); ++k) {
    const SuiteResult& s = summary.suites[k];
    os << "    {\"name\": " << quoted(s.name) << ", \"trials\": " << s.trials << ", \"passed\": " << s.passed
       << ", \"failed\": " << s.failed << ", \"worst_residual\": " << number(s.worst_residual) << ", \"failures\": [";
    for (std::size_t f = 0; f < s.failures.size(); ++f) os << (f ? ", " : "") << quoted(s.failures[f]);
    os << "]}" << (k + 1 < summary.suites.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MASLOVFLOW_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace maslovflow::harness
