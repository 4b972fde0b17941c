#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adatest/eval.hpp"
#include "adatest/hwgen.hpp"
#include "adatest/profile.hpp"
#include "adatest/tpg.hpp"
#include "adatest/trojan.hpp"

// JSON documents exchanged between pipeline stages. Readers throw
// InputError on malformed documents and UsageError on bad configuration.
namespace adatest {

std::string profile_to_json(const Profile& profile, const Netlist& netlist);
Profile profile_from_json(std::string_view text, const Netlist& netlist);

std::string trojan_to_json(const TrojanSpec& spec, const Netlist& netlist);
TrojanSpec trojan_from_json(std::string_view text, const Netlist& netlist);

std::string tap_matrix_to_json(const TapMatrix& tap);
TapMatrix tap_matrix_from_json(std::string_view text);

std::string config_to_json(const AdaTestConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
AdaTestConfig config_from_json(std::string_view text, AdaTestConfig base = {});

struct CampaignSpec {
  std::vector<std::string> circuits;
  double theta = 0.1;
  std::uint64_t trials = 100000;
  CampaignConfig config;
};
CampaignSpec campaign_from_json(std::string_view text);

std::string reports_to_json(std::span<const DetectionReport> reports);

struct PatternReport {
  std::string circuit;
  std::size_t test_vector_count = 0;
  std::vector<TrojanOutcome> outcomes;
};
std::string pattern_report_to_json(const PatternReport& report);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace adatest
