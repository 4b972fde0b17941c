#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adatest/netlist.hpp"
#include "adatest/profile.hpp"
#include "adatest/tpg.hpp"
#include "adatest/trojan.hpp"

namespace adatest {

struct TrojanOutcome {
  std::string id;
  std::size_t trigger_nodes_hit = 0;  // individually driven to their rare value
  std::size_t trigger_size = 0;
  bool triggered = false;  // some vector activates the full trigger
  bool detected = false;   // some vector yields a PO mismatch
  std::optional<std::size_t> first_detecting_vector;
};

std::vector<TrojanOutcome> evaluate_trojans(const Netlist& golden,
                                            std::span<const PatternVector> vectors,
                                            std::span<const TrojanSpec> trojans,
                                            unsigned jobs = 1);

// Percentages in [0, 100]; both throw UsageError on an empty trojan list.
double trigger_coverage(const Netlist& golden, std::span<const PatternVector> vectors,
                        std::span<const TrojanSpec> trojans);
double trojan_coverage(const Netlist& golden, std::span<const PatternVector> vectors,
                       std::span<const TrojanSpec> trojans);

// True when some vector in `vectors` makes `trojaned` and `golden` differ at
// a primary output.
bool outputs_differ(const Netlist& golden, const Netlist& trojaned,
                    std::span<const PatternVector> vectors);

struct MeroConfig {
  std::uint64_t target_activations = 1000;  // N
  std::size_t random_pool = 2500;
};

struct BaselineResult {
  std::vector<PatternVector> vectors;  // retained test set
  std::uint64_t evaluated = 0;         // vectors simulated along the way
  std::size_t generations = 0;         // GA generations (TRIAGE only)
  std::vector<double> best_fitness;    // per generation (TRIAGE only)
};

BaselineResult run_mero(const Netlist& netlist, const Profile& profile, const MeroConfig& config,
                        std::uint64_t seed);

struct TriageConfig {
  std::size_t population = 100;
  std::size_t select = 20;
  double p_cross = 0.9;
  double p_mut = 0.05;
  std::size_t stagnation_window = 20;
  std::size_t max_generations = 1000;
};

// fitness(v) = #activated rare nodes + (sum of CC+CO over activated rare
// nodes) / (sum of CC+CO over all rare nodes).
double triage_fitness(const DagState& state, const Profile& profile, const RareView& rare);

// `initial` overrides the random first population when non-empty.
BaselineResult run_triage(const Netlist& netlist, const Profile& profile,
                          const TriageConfig& config, std::uint64_t seed,
                          std::span<const PatternVector> initial = {});

struct CampaignConfig {
  std::vector<std::string> methods{"adatest", "mero", "triage"};
  std::size_t trojan_count = 10;
  std::size_t runs_per_trojan = 3;
  std::size_t trigger_size = 3;
  AdaTestConfig adatest;
  MeroConfig mero;
  TriageConfig triage;
  std::uint64_t seed = 1;
  bool timing = false;
};

struct TrojanSummary {
  std::string id;
  double trigger_coverage_pct = 0.0;
  double detection_rate = 0.0;
  double full_trigger_rate = 0.0;
};

struct DetectionReport {
  std::string circuit;
  std::string method;
  double test_vector_count = 0.0;  // mean retained size over runs
  double evaluated_vector_count = 0.0;
  std::optional<double> generation_time_seconds;
  double trigger_coverage_pct = 0.0;
  double trojan_coverage_pct = 0.0;
  double full_trigger_pct = 0.0;
  std::vector<TrojanSummary> trojans;
  CampaignConfig config;
  std::uint64_t seed = 0;
};

// AdaTest runs once per (trojan, run) with the Trojan as termination oracle;
// MERO and TRIAGE build one test set per run, evaluated on every Trojan.
std::vector<DetectionReport> run_campaign(const Netlist& netlist, const Profile& profile,
                                          const CampaignConfig& config, unsigned jobs = 1);

std::string reports_csv(std::span<const DetectionReport> reports);

}  // namespace adatest
