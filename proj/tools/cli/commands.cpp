#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "adatest/error.hpp"
#include "adatest/eval.hpp"
#include "adatest/hwgen.hpp"
#include "adatest/netlist.hpp"
#include "adatest/patterns.hpp"
#include "adatest/profile.hpp"
#include "adatest/sat.hpp"
#include "adatest/serialize.hpp"
#include "adatest/tpg.hpp"
#include "adatest/trojan.hpp"
#include "json.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace adatest::cli {
namespace {

ojson parsed(const std::string& text) { return ojson::parse(text); }

Netlist load_combinational(const std::string& path) {
  Netlist n = read_bench_file(path);
  n.require_combinational();
  return n;
}

}  // namespace

void cmd_profile(const ProfileOptions& o) {
  RunManifest manifest("profile");
  const Netlist netlist = load_combinational(o.bench);
  manifest.add_input(o.bench);
  const Profile profile = profile_circuit(netlist, o.theta, o.trials, o.seed, o.jobs);
  write_text_file(o.out, profile_to_json(profile, netlist));
  manifest.set_config({{"theta", o.theta}, {"trials", o.trials}, {"jobs", o.jobs}});
  manifest.add_seed("seed", o.seed);
  manifest.add_output(o.out);
  manifest.write(o.out);
  std::cerr << netlist.name() << ": " << profile.rare_set.size() << " rare nodes (theta "
            << o.theta << ", " << o.trials << " trials)\n";
}

void cmd_generate(const GenerateOptions& o) {
  RunManifest manifest("generate");
  const Netlist netlist = load_combinational(o.bench);
  manifest.add_input(o.bench);
  AdaTestConfig config;
  if (!o.config.empty()) {
    config = config_from_json(read_text_file(o.config));
    manifest.add_input(o.config);
  }
  if (o.init) config.init = parse_init_mode(*o.init);
  if (o.seed) config.seed = *o.seed;
  config.validate();

  Profile profile;
  if (!o.profile.empty()) {
    profile = profile_from_json(read_text_file(o.profile), netlist);
    manifest.add_input(o.profile);
  } else {
    profile = profile_circuit(netlist, config.theta, config.trials, config.seed, o.jobs);
  }

  const AdaTestResult result = run_adatest(netlist, profile, config, {}, o.jobs);
  const std::string trace = o.trace.empty() ? o.out + ".trace.csv" : o.trace;
  write_text_file(o.out, write_patterns(result.test_set.vectors));
  write_text_file(trace, trace_csv(result.trace));

  manifest.set_config(parsed(config_to_json(config)));
  manifest.add_seed("seed", config.seed);
  manifest.add_output(o.out);
  manifest.add_output(trace);
  manifest.write(o.out);
  std::cerr << netlist.name() << ": " << result.test_set.size() << " vectors after "
            << result.iterations << " iterations (stop: " << stop_reason_name(result.reason)
            << ", coverage " << result.trace.back().coverage_pct << "%)";
  if (result.init.random_fallback) std::cerr << " [SAT init fell back to random vectors]";
  std::cerr << "\n";
}

void cmd_inject(const InjectOptions& o) {
  RunManifest manifest("inject");
  const Netlist netlist = load_combinational(o.bench);
  const Profile profile = profile_from_json(read_text_file(o.profile), netlist);
  manifest.add_input(o.bench);
  manifest.add_input(o.profile);
  const auto trojans = sample_trojans(netlist, profile, o.count, o.q, o.seed);
  const fs::path dir(o.out_dir);
  for (const TrojanSpec& t : trojans) {
    const fs::path spec = dir / (t.id + ".json");
    const fs::path bench = dir / (t.id + ".bench");
    write_text_file(spec, trojan_to_json(t, netlist));
    write_text_file(bench, write_bench(insert_trojan(netlist, t)));
    manifest.add_output(spec);
    manifest.add_output(bench);
  }
  manifest.set_config({{"q", o.q}, {"count", o.count}});
  manifest.add_seed("seed", o.seed);
  manifest.write(dir / "inject");
  std::cerr << netlist.name() << ": wrote " << trojans.size() << " trojans to " << o.out_dir
            << "\n";
}

void cmd_detect(const DetectOptions& o) {
  RunManifest manifest("detect");
  const Netlist golden = load_combinational(o.bench);
  manifest.add_input(o.bench);
  const auto vectors = read_pattern_file(o.patterns, golden.primary_inputs().size());
  manifest.add_input(o.patterns);

  std::vector<fs::path> files;
  if (!fs::is_directory(o.trojan_dir)) {
    throw InputError("trojan directory '" + o.trojan_dir + "' does not exist");
  }
  for (const auto& entry : fs::directory_iterator(o.trojan_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.path().extension() == ".json" && name.find(".manifest.") == std::string::npos) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no trojan specs (*.json) in '" + o.trojan_dir + "'");
  std::vector<TrojanSpec> trojans;
  for (const fs::path& f : files) {
    trojans.push_back(trojan_from_json(read_text_file(f), golden));
    manifest.add_input(f);
  }

  PatternReport report;
  report.circuit = golden.name();
  report.test_vector_count = vectors.size();
  report.outcomes = evaluate_trojans(golden, vectors, trojans, o.jobs);
  write_text_file(o.out, pattern_report_to_json(report));
  manifest.add_output(o.out);
  manifest.write(o.out);
  std::cerr << golden.name() << ": trigger coverage "
            << trigger_coverage(golden, vectors, trojans) << "%, trojan coverage "
            << trojan_coverage(golden, vectors, trojans) << "%\n";
}

void cmd_bench(const BenchOptions& o) {
  RunManifest manifest("bench");
  CampaignSpec spec = campaign_from_json(read_text_file(o.campaign));
  manifest.add_input(o.campaign);
  if (o.timing) spec.config.timing = true;
  const fs::path base = fs::path(o.campaign).parent_path();
  std::vector<DetectionReport> reports;
  for (const std::string& c : spec.circuits) {
    fs::path path(c);
    if (path.is_relative() && !fs::exists(path)) path = base / path;
    const Netlist netlist = load_combinational(path.string());
    manifest.add_input(path);
    const Profile profile =
        profile_circuit(netlist, spec.theta, spec.trials, spec.config.seed, o.jobs);
    auto r = run_campaign(netlist, profile, spec.config, o.jobs);
    for (auto& report : r) {
      std::cerr << report.circuit << " " << report.method << ": " << report.test_vector_count
                << " vectors, trigger " << report.trigger_coverage_pct << "%, trojan "
                << report.trojan_coverage_pct << "%\n";
      reports.push_back(std::move(report));
    }
  }
  const std::string json_out = o.json.empty() ? o.out + ".json" : o.json;
  write_text_file(o.out, reports_csv(reports));
  write_text_file(json_out, reports_to_json(reports));
  manifest.set_config({{"circuits", spec.circuits}, {"theta", spec.theta},
                       {"trials", spec.trials}, {"jobs", o.jobs}, {"timing", spec.config.timing}});
  manifest.add_seed("seed", spec.config.seed);
  manifest.add_output(o.out);
  manifest.add_output(json_out);
  manifest.write(o.out);
}

void cmd_emit_hw(const EmitHwOptions& o) {
  RunManifest manifest("emit-hw");
  const auto vectors = read_pattern_file(o.patterns);
  manifest.add_input(o.patterns);
  if (vectors.empty()) throw InputError("pattern file '" + o.patterns + "' holds no vectors");
  if (o.chunk != 0 && !o.cluster.empty()) {
    throw UsageError("--chunk and --cluster are mutually exclusive");
  }
  if (o.rom_width == 0) throw UsageError("--rom-width must be at least 1");

  TpgPlan plan;
  if (!o.cluster.empty()) {
    const Netlist netlist = load_combinational(o.cluster);
    manifest.add_input(o.cluster);
    plan = plan_clustered(netlist, vectors,
                          o.centralized ? TestMode::Centralized : TestMode::Distributed);
  } else if (o.chunk != 0) {
    plan = plan_chunked(vectors, o.chunk);
  } else {
    plan = plan_single(vectors, o.init_position);
  }
  if (o.centralized) plan.mode = TestMode::Centralized;

  const fs::path dir(o.out_dir);
  ojson j;
  j["mode"] = std::string(test_mode_name(plan.mode));
  j["width"] = plan.width;
  j["length"] = plan.length;
  j["chunk_size"] = plan.chunk_size;
  ojson parts = ojson::array();
  if (!plan.clusters.empty()) {
    for (std::size_t c = 0; c < plan.clusters.size(); ++c) {
      const fs::path f = dir / ("cluster_" + std::to_string(c + 1) + ".json");
      write_text_file(f, tap_matrix_to_json(plan.clusters[c].tap));
      manifest.add_output(f);
      parts.push_back({{"file", f.filename().string()}, {"inputs", plan.clusters[c].inputs}});
    }
    j["clusters"] = std::move(parts);
  } else {
    for (std::size_t s = 0; s < plan.segments.size(); ++s) {
      const fs::path f = plan.segments.size() == 1
                             ? dir / "tap.json"
                             : dir / ("segment_" + std::to_string(s + 1) + ".json");
      write_text_file(f, tap_matrix_to_json(plan.segments[s].tap));
      manifest.add_output(f);
      parts.push_back({{"file", f.filename().string()},
                       {"first", plan.segments[s].first},
                       {"count", plan.segments[s].count}});
    }
    j["segments"] = std::move(parts);
    std::size_t best = 0;
    sweep_chunk_sizes(vectors, &best);
    j["best_chunk_size"] = best;
  }
  const CostEstimate cost = estimate_cost(plan);
  j["cost"] = {{"ff_count", cost.ff_count},
               {"counter_bits", cost.counter_bits},
               {"or_tap_count", cost.or_tap_count},
               {"mux_2to1_count", cost.mux_2to1_count},
               {"cycles_total", cost.cycles_total},
               {"total", cost.total()}};
  if (!plan.note.empty()) j["note"] = plan.note;

  const fs::path hw = dir / "tpg.bench";
  write_text_file(hw, emit_structural(plan));
  manifest.add_output(hw);

  if (!o.golden.empty()) {
    const Netlist golden = load_combinational(o.golden);
    manifest.add_input(o.golden);
    std::vector<BitVector> responses;
    for (const DagState& s : simulate_batch(golden, vectors)) {
      responses.push_back(primary_outputs_of(s, golden));
    }
    const fs::path rom = dir / "rom.hex";
    write_text_file(rom, rom_image(responses, o.rom_width));
    manifest.add_output(rom);
    const ResponseBuffer buffer = size_response_buffer(golden.primary_outputs().size(), o.rom_width);
    j["response_buffer"] = {{"po_count", golden.primary_outputs().size()},
                            {"rom_word_bits", o.rom_width},
                            {"cycles_per_comparison", buffer.cycles_per_comparison},
                            {"buffer_needed", buffer.buffer_needed}};
  }
  const fs::path plan_file = dir / "plan.json";
  write_text_file(plan_file, j.dump(2) + "\n");
  manifest.add_output(plan_file);
  manifest.set_config({{"chunk", o.chunk}, {"cluster", o.cluster}, {"centralized", o.centralized},
                       {"init_position", o.init_position}, {"rom_width", o.rom_width}});
  manifest.write(plan_file);
}

void cmd_unroll(const UnrollOptions& o) {
  RunManifest manifest("unroll");
  const Netlist netlist = read_bench_file(o.bench);
  manifest.add_input(o.bench);
  if (!netlist.is_sequential()) throw InputError("'" + o.bench + "' has no flip-flops");
  write_text_file(o.out, write_bench(unroll_sequential(netlist, o.frames)));
  manifest.set_config({{"frames", o.frames}});
  manifest.add_output(o.out);
  manifest.write(o.out);
}

void cmd_export_cnf(const ExportCnfOptions& o) {
  RunManifest manifest("export-cnf");
  const Netlist netlist = load_combinational(o.bench);
  manifest.add_input(o.bench);
  const Cnf cnf = encode_cnf(netlist);
  std::string text = "c " + netlist.name() + "\n";
  for (NodeId pi : netlist.primary_inputs()) {
    text += "c input " + netlist.node_name(pi) + " " + std::to_string(cnf.node_var[pi.index]) + "\n";
  }
  text += to_dimacs(cnf);
  write_text_file(o.out, text);
  manifest.add_output(o.out);
  manifest.write(o.out);
}

}  // namespace adatest::cli
