#include <chrono>
#include <cstdio>
#include <sstream>

#include "adatest/error.hpp"
#include "adatest/eval.hpp"
#include "adatest/parallel.hpp"
#include "adatest/rng.hpp"

namespace adatest {
namespace {

std::uint64_t method_tag(const std::string& method) {
  if (method == "adatest") return 1;
  if (method == "mero") return 2;
  if (method == "triage") return 3;
  throw UsageError("unknown method '" + method + "' (expected adatest, mero or triage)");
}

struct Cell {
  std::size_t vectors = 0;
  std::uint64_t evaluated = 0;
  double seconds = 0.0;
  std::vector<TrojanOutcome> outcomes;  // one per trojan covered by the cell
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace

std::vector<DetectionReport> run_campaign(const Netlist& netlist, const Profile& profile,
                                          const CampaignConfig& config, unsigned jobs) {
  if (config.trojan_count == 0 || config.runs_per_trojan == 0) {
    throw UsageError("campaign needs at least one trojan and one run");
  }
  for (const std::string& m : config.methods) method_tag(m);
  config.adatest.validate();

  const auto trojans =
      sample_trojans(netlist, profile, config.trojan_count, config.trigger_size,
                     derive_seed(config.seed, Stream::kCampaign, {0}));
  std::vector<Netlist> trojaned;
  trojaned.reserve(trojans.size());
  for (const TrojanSpec& t : trojans) trojaned.push_back(insert_trojan(netlist, t));

  const std::size_t T = trojans.size();
  const std::size_t R = config.runs_per_trojan;
  std::vector<DetectionReport> reports;
  for (const std::string& method : config.methods) {
    const std::uint64_t tag = method_tag(method);
    std::vector<Cell> cells;

    if (method == "adatest") {
      cells.resize(T * R);
      parallel_for(cells.size(), jobs, [&](std::size_t c) {
        const std::size_t t = c / R;
        const std::size_t r = c % R;
        AdaTestConfig cfg = config.adatest;
        cfg.seed = derive_seed(config.seed, Stream::kCampaign, {tag, t, r});
        const TrojanOracle oracle = [&](std::span<const PatternVector> batch) {
          return outputs_differ(netlist, trojaned[t], batch);
        };
        Stopwatch watch;
        AdaTestResult run = run_adatest(netlist, profile, cfg, oracle);
        cells[c].seconds = watch.seconds();
        cells[c].vectors = run.test_set.size();
        cells[c].evaluated = run.test_set.size() + run.iterations * cfg.candidate_count;
        cells[c].outcomes = evaluate_trojans(
            netlist, run.test_set.vectors, std::span<const TrojanSpec>(&trojans[t], 1));
      });
    } else {
      cells.resize(R);
      parallel_for(R, jobs, [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(config.seed, Stream::kCampaign, {tag, r});
        Stopwatch watch;
        BaselineResult b = method == "mero"
                               ? run_mero(netlist, profile, config.mero, seed)
                               : run_triage(netlist, profile, config.triage, seed);
        cells[r].seconds = watch.seconds();
        cells[r].vectors = b.vectors.size();
        cells[r].evaluated = b.evaluated;
        cells[r].outcomes = evaluate_trojans(netlist, b.vectors, trojans);
      });
    }

    DetectionReport report;
    report.circuit = netlist.name();
    report.method = method;
    report.config = config;
    report.seed = config.seed;
    report.trojans.resize(T);
    double seconds = 0.0;
    for (std::size_t t = 0; t < T; ++t) report.trojans[t].id = trojans[t].id;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Cell& cell = cells[c];
      report.test_vector_count += static_cast<double>(cell.vectors);
      report.evaluated_vector_count += static_cast<double>(cell.evaluated);
      seconds += cell.seconds;
      for (std::size_t k = 0; k < cell.outcomes.size(); ++k) {
        const TrojanOutcome& o = cell.outcomes[k];
        TrojanSummary& s = report.trojans[method == "adatest" ? c / R : k];
        s.trigger_coverage_pct +=
            100.0 * static_cast<double>(o.trigger_nodes_hit) / static_cast<double>(o.trigger_size);
        s.detection_rate += o.detected ? 1.0 : 0.0;
        s.full_trigger_rate += o.triggered ? 1.0 : 0.0;
      }
    }
    const double runs = static_cast<double>(R);
    const double n_cells = static_cast<double>(cells.size());
    report.test_vector_count /= n_cells;
    report.evaluated_vector_count /= n_cells;
    if (config.timing) report.generation_time_seconds = seconds / n_cells;
    for (TrojanSummary& s : report.trojans) {
      s.trigger_coverage_pct /= runs;
      s.detection_rate /= runs;
      s.full_trigger_rate /= runs;
      report.trigger_coverage_pct += s.trigger_coverage_pct;
      report.trojan_coverage_pct += 100.0 * s.detection_rate;
      report.full_trigger_pct += 100.0 * s.full_trigger_rate;
    }
    report.trigger_coverage_pct /= static_cast<double>(T);
    report.trojan_coverage_pct /= static_cast<double>(T);
    report.full_trigger_pct /= static_cast<double>(T);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string reports_csv(std::span<const DetectionReport> reports) {
  const bool timing = !reports.empty() && reports.front().generation_time_seconds.has_value();
  std::ostringstream out;
  out << "circuit,method,test_vectors,evaluated_vectors,trigger_coverage_pct,"
         "trojan_coverage_pct,full_trigger_pct";
  if (timing) out << ",generation_time_s";
  out << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  for (const DetectionReport& r : reports) {
    out << r.circuit << ',' << r.method << ',' << num(r.test_vector_count) << ','
        << num(r.evaluated_vector_count) << ',' << num(r.trigger_coverage_pct) << ','
        << num(r.trojan_coverage_pct) << ',' << num(r.full_trigger_pct);
    if (timing) {
      std::snprintf(buf, sizeof buf, "%.4f", r.generation_time_seconds.value_or(0.0));
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace adatest
