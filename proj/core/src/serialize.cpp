#include "adatest/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "adatest/error.hpp"
#include "json.hpp"

namespace adatest {
namespace {

using json = nlohmann::ordered_json;

json parse(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InputError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key, std::string_view what) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(std::string(what) + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string(what) + ": field '" + key + "' has the wrong type");
  }
}

NodeId node_named(const Netlist& netlist, const std::string& name, std::string_view what) {
  if (auto id = netlist.find(name)) return *id;
  throw InputError(std::string(what) + ": unknown node '" + name + "' in netlist '" +
                   netlist.name() + "'");
}

json adatest_json(const AdaTestConfig& c) {
  json j;
  j["theta"] = c.theta;
  j["trials"] = c.trials;
  j["candidate_count"] = c.candidate_count;
  j["select_count"] = c.select_count;
  j["max_iterations"] = c.max_iterations;
  j["coverage_percent"] = c.coverage_percent;
  j["target_activations"] = c.target_activations;
  j["lambda1"] = c.lambda1;
  j["lambda2"] = c.lambda2;
  j["lambda3"] = c.lambda3;
  j["mutation_rate"] = c.mutation_rate;
  j["explore_fraction"] = c.explore_fraction;
  j["init"] = std::string(init_mode_name(c.init));
  j["seed"] = c.seed;
  return j;
}

// Assigns j[key] to `out` when present; config errors are usage errors.
template <typename T>
void take(const json& j, const char* key, T& out, std::string_view what) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string(what) + ": '" + key + "' has the wrong type");
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    std::string_view what) {
  if (!j.is_object()) throw UsageError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw UsageError(std::string(what) + ": unknown key '" + key + "'");
  }
}

AdaTestConfig adatest_from(const json& j, AdaTestConfig c, std::string_view what) {
  reject_unknown(j,
                 {"theta", "trials", "candidate_count", "select_count", "max_iterations",
                  "coverage_percent", "target_activations", "lambda1", "lambda2", "lambda3",
                  "mutation_rate", "explore_fraction", "init", "seed"},
                 what);
  take(j, "theta", c.theta, what);
  take(j, "trials", c.trials, what);
  take(j, "candidate_count", c.candidate_count, what);
  take(j, "select_count", c.select_count, what);
  take(j, "max_iterations", c.max_iterations, what);
  take(j, "coverage_percent", c.coverage_percent, what);
  take(j, "target_activations", c.target_activations, what);
  take(j, "lambda1", c.lambda1, what);
  take(j, "lambda2", c.lambda2, what);
  take(j, "lambda3", c.lambda3, what);
  take(j, "mutation_rate", c.mutation_rate, what);
  take(j, "explore_fraction", c.explore_fraction, what);
  take(j, "seed", c.seed, what);
  std::string init(init_mode_name(c.init));
  take(j, "init", init, what);
  c.init = parse_init_mode(init);
  c.validate();
  return c;
}

json campaign_json(const CampaignConfig& c) {
  json j;
  j["methods"] = c.methods;
  j["trojan_count"] = c.trojan_count;
  j["runs_per_trojan"] = c.runs_per_trojan;
  j["trigger_size"] = c.trigger_size;
  j["seed"] = c.seed;
  j["adatest"] = adatest_json(c.adatest);
  j["mero"] = {{"target_activations", c.mero.target_activations},
               {"random_pool", c.mero.random_pool}};
  j["triage"] = {{"population", c.triage.population},
                 {"select", c.triage.select},
                 {"p_cross", c.triage.p_cross},
                 {"p_mut", c.triage.p_mut},
                 {"stagnation_window", c.triage.stagnation_window},
                 {"max_generations", c.triage.max_generations}};
  return j;
}

json outcome_json(const TrojanOutcome& o) {
  json j;
  j["id"] = o.id;
  j["trigger_nodes_hit"] = o.trigger_nodes_hit;
  j["trigger_size"] = o.trigger_size;
  j["triggered"] = o.triggered;
  j["detected"] = o.detected;
  j["first_detecting_vector"] =
      o.first_detecting_vector ? json(*o.first_detecting_vector) : json(nullptr);
  return j;
}

}  // namespace

std::string profile_to_json(const Profile& profile, const Netlist& netlist) {
  json j;
  j["circuit"] = profile.circuit;
  j["theta"] = profile.theta;
  j["trials"] = profile.trials;
  j["seed"] = profile.seed;
  j["rare_count"] = profile.rare_set.size();
  json nodes = json::array();
  for (std::uint32_t i = 0; i < netlist.node_count(); ++i) {
    const NodeId id{i};
    const Scoap& s = profile.scoap.at(i);
    const auto rare = profile.rare_index(id);
    json n;
    n["name"] = netlist.node_name(id);
    n["p_one"] = profile.p_one.at(i);
    n["p_trans"] = profile.p_trans.at(i);
    n["cc0"] = s.cc0;
    n["cc1"] = s.cc1;
    n["co"] = s.observable() ? json(s.co) : json(nullptr);
    n["rare"] = rare.has_value();
    n["rare_value"] = rare ? json(profile.rare_set[*rare].rare_value ? 1 : 0) : json(nullptr);
    nodes.push_back(std::move(n));
  }
  j["nodes"] = std::move(nodes);
  return j.dump(2) + "\n";
}

Profile profile_from_json(std::string_view text, const Netlist& netlist) {
  constexpr std::string_view what = "profile";
  const json j = parse(text, what);
  Profile p;
  p.circuit = field<std::string>(j, "circuit", what);
  p.theta = field<double>(j, "theta", what);
  p.trials = field<std::uint64_t>(j, "trials", what);
  p.seed = field<std::uint64_t>(j, "seed", what);
  if (!j.contains("nodes")) throw InputError("profile: missing field 'nodes'");
  const json& nodes = j.at("nodes");
  if (!nodes.is_array() || nodes.size() != netlist.node_count()) {
    throw InputError("profile has " + std::to_string(nodes.size()) + " nodes; netlist '" +
                     netlist.name() + "' has " + std::to_string(netlist.node_count()));
  }
  const std::size_t n = netlist.node_count();
  p.p_one.assign(n, 0.0);
  p.p_trans.assign(n, 0.0);
  p.scoap.assign(n, Scoap{});
  for (const json& e : nodes) {
    const NodeId id = node_named(netlist, field<std::string>(e, "name", what), what);
    p.p_one[id.index] = field<double>(e, "p_one", what);
    p.p_trans[id.index] = field<double>(e, "p_trans", what);
    Scoap& s = p.scoap[id.index];
    s.cc0 = field<std::uint64_t>(e, "cc0", what);
    s.cc1 = field<std::uint64_t>(e, "cc1", what);
    s.co = e.at("co").is_null() ? kUnobservable : field<std::uint64_t>(e, "co", what);
    if (field<bool>(e, "rare", what)) {
      p.rare_set.push_back(RareNode{id, field<int>(e, "rare_value", what) != 0,
                                    p.p_one[id.index], p.p_trans[id.index]});
    }
  }
  std::sort(p.rare_set.begin(), p.rare_set.end(),
            [](const RareNode& a, const RareNode& b) { return a.node < b.node; });
  return p;
}

std::string trojan_to_json(const TrojanSpec& spec, const Netlist& netlist) {
  json j;
  j["id"] = spec.id;
  json trigger = json::array();
  for (const TriggerLiteral& t : spec.trigger) {
    trigger.push_back({{"node", netlist.node_name(t.node)}, {"value", t.value ? 1 : 0}});
  }
  j["trigger"] = std::move(trigger);
  j["payload"] = netlist.node_name(spec.payload);
  j["witness"] = spec.witness.to_string();
  return j.dump(2) + "\n";
}

TrojanSpec trojan_from_json(std::string_view text, const Netlist& netlist) {
  constexpr std::string_view what = "trojan spec";
  const json j = parse(text, what);
  TrojanSpec spec;
  spec.id = field<std::string>(j, "id", what);
  if (!j.contains("trigger") || !j.at("trigger").is_array()) {
    throw InputError("trojan spec: 'trigger' must be an array");
  }
  for (const json& t : j.at("trigger")) {
    spec.trigger.push_back({node_named(netlist, field<std::string>(t, "node", what), what),
                            field<int>(t, "value", what) != 0});
  }
  std::sort(spec.trigger.begin(), spec.trigger.end(),
            [](const TriggerLiteral& a, const TriggerLiteral& b) { return a.node < b.node; });
  spec.payload = node_named(netlist, field<std::string>(j, "payload", what), what);
  if (j.contains("witness")) spec.witness = BitVector::from_string(field<std::string>(j, "witness", what));
  validate_trojan(netlist, spec);
  return spec;
}

std::string tap_matrix_to_json(const TapMatrix& tap) {
  json j;
  j["rows"] = tap.rows;
  j["cols"] = tap.cols();
  j["init_position"] = tap.init_position;
  std::string bits;
  bits.reserve(tap.rows * tap.cols());
  for (std::size_t i = 0; i < tap.rows; ++i) {
    for (std::size_t s = 1; s <= tap.cols(); ++s) bits += tap.at(i, s) ? '1' : '0';
  }
  j["bits"] = std::move(bits);
  return j.dump(2) + "\n";
}

TapMatrix tap_matrix_from_json(std::string_view text) {
  constexpr std::string_view what = "tap matrix";
  const json j = parse(text, what);
  TapMatrix tap;
  tap.rows = field<std::size_t>(j, "rows", what);
  const auto cols = field<std::size_t>(j, "cols", what);
  tap.init_position = field<std::size_t>(j, "init_position", what);
  const auto bits = field<std::string>(j, "bits", what);
  if (bits.size() != tap.rows * cols || bits.find_first_not_of("01") != std::string::npos) {
    throw InputError("tap matrix: 'bits' must hold rows*cols 0/1 characters");
  }
  if (cols > 0 && (tap.init_position < 1 || tap.init_position > cols)) {
    throw InputError("tap matrix: init_position out of range");
  }
  tap.columns.assign(cols, BitVector(tap.rows));
  for (std::size_t i = 0; i < tap.rows; ++i) {
    for (std::size_t s = 0; s < cols; ++s) tap.columns[s].set(i, bits[i * cols + s] == '1');
  }
  return tap;
}

std::string config_to_json(const AdaTestConfig& config) {
  return adatest_json(config).dump(2) + "\n";
}

AdaTestConfig config_from_json(std::string_view text, AdaTestConfig base) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  return adatest_from(j, base, "config");
}

CampaignSpec campaign_from_json(std::string_view text) {
  constexpr std::string_view what = "campaign";
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("campaign config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"circuits", "methods", "trojan_count", "runs_per_trojan", "trigger_size",
                  "seed", "theta", "trials", "timing", "adatest", "mero", "triage"},
                 what);
  CampaignSpec spec;
  take(j, "circuits", spec.circuits, what);
  if (spec.circuits.empty()) throw UsageError("campaign: 'circuits' must list at least one file");
  CampaignConfig& c = spec.config;
  take(j, "methods", c.methods, what);
  take(j, "trojan_count", c.trojan_count, what);
  take(j, "runs_per_trojan", c.runs_per_trojan, what);
  take(j, "trigger_size", c.trigger_size, what);
  take(j, "seed", c.seed, what);
  take(j, "timing", c.timing, what);
  take(j, "theta", spec.theta, what);
  take(j, "trials", spec.trials, what);
  c.adatest.theta = spec.theta;
  c.adatest.trials = spec.trials;
  if (j.contains("adatest")) c.adatest = adatest_from(j.at("adatest"), c.adatest, "campaign.adatest");
  if (j.contains("mero")) {
    const json& m = j.at("mero");
    reject_unknown(m, {"target_activations", "random_pool"}, "campaign.mero");
    take(m, "target_activations", c.mero.target_activations, "campaign.mero");
    take(m, "random_pool", c.mero.random_pool, "campaign.mero");
  }
  if (j.contains("triage")) {
    const json& t = j.at("triage");
    constexpr std::string_view tw = "campaign.triage";
    reject_unknown(t,
                   {"population", "select", "p_cross", "p_mut", "stagnation_window",
                    "max_generations"},
                   tw);
    take(t, "population", c.triage.population, tw);
    take(t, "select", c.triage.select, tw);
    take(t, "p_cross", c.triage.p_cross, tw);
    take(t, "p_mut", c.triage.p_mut, tw);
    take(t, "stagnation_window", c.triage.stagnation_window, tw);
    take(t, "max_generations", c.triage.max_generations, tw);
  }
  return spec;
}

std::string reports_to_json(std::span<const DetectionReport> reports) {
  json all = json::array();
  for (const DetectionReport& r : reports) {
    json j;
    j["circuit"] = r.circuit;
    j["method"] = r.method;
    j["test_vector_count"] = r.test_vector_count;
    j["evaluated_vector_count"] = r.evaluated_vector_count;
    if (r.generation_time_seconds) j["generation_time_seconds"] = *r.generation_time_seconds;
    j["trigger_coverage_pct"] = r.trigger_coverage_pct;
    j["trojan_coverage_pct"] = r.trojan_coverage_pct;
    j["full_trigger_pct"] = r.full_trigger_pct;
    json per = json::array();
    for (const TrojanSummary& s : r.trojans) {
      per.push_back({{"id", s.id},
                     {"trigger_coverage_pct", s.trigger_coverage_pct},
                     {"detection_rate", s.detection_rate},
                     {"full_trigger_rate", s.full_trigger_rate}});
    }
    j["trojans"] = std::move(per);
    j["config"] = campaign_json(r.config);
    j["seed"] = r.seed;
    all.push_back(std::move(j));
  }
  return all.dump(2) + "\n";
}

std::string pattern_report_to_json(const PatternReport& report) {
  json j;
  j["circuit"] = report.circuit;
  j["method"] = "patterns";
  j["test_vector_count"] = report.test_vector_count;
  std::size_t detected = 0;
  std::size_t triggered = 0;
  double trigger_sum = 0.0;
  json per = json::array();
  for (const TrojanOutcome& o : report.outcomes) {
    detected += o.detected ? 1 : 0;
    triggered += o.triggered ? 1 : 0;
    trigger_sum += static_cast<double>(o.trigger_nodes_hit) / static_cast<double>(o.trigger_size);
    per.push_back(outcome_json(o));
  }
  const double n = static_cast<double>(std::max<std::size_t>(report.outcomes.size(), 1));
  j["trigger_coverage_pct"] = 100.0 * trigger_sum / n;
  j["trojan_coverage_pct"] = 100.0 * static_cast<double>(detected) / n;
  j["full_trigger_pct"] = 100.0 * static_cast<double>(triggered) / n;
  j["trojans"] = std::move(per);
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace adatest
