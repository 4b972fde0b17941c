#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace adatest::cli {

struct ProfileOptions {
  std::string bench;
  double theta = 0.1;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out;
};

struct GenerateOptions {
  std::string bench;
  std::string profile;  // computed on the fly when empty
  std::string config;
  std::optional<std::string> init;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string out;
  std::string trace;  // defaults to <out>.trace.csv
};

struct InjectOptions {
  std::string bench;
  std::string profile;
  std::size_t q = 3;
  std::size_t count = 10;
  std::uint64_t seed = 1;
  std::string out_dir;
};

struct DetectOptions {
  std::string bench;
  std::string trojan_dir;
  std::string patterns;
  unsigned jobs = 1;
  std::string out;
};

struct BenchOptions {
  std::string campaign;
  unsigned jobs = 1;
  bool timing = false;
  std::string out;   // CSV
  std::string json;  // defaults to <out>.json
};

struct EmitHwOptions {
  std::string patterns;
  std::size_t chunk = 0;    // 0: single register
  std::string cluster;      // bench file; enables circuit partitioning
  bool centralized = false;
  std::size_t init_position = 1;
  std::string golden;       // bench file for the ROM image
  std::size_t rom_width = 32;
  std::string out_dir;
};

struct UnrollOptions {
  std::string bench;
  std::size_t frames = 2;
  std::string out;
};

struct ExportCnfOptions {
  std::string bench;
  std::string out;
};

void cmd_profile(const ProfileOptions& o);
void cmd_generate(const GenerateOptions& o);
void cmd_inject(const InjectOptions& o);
void cmd_detect(const DetectOptions& o);
void cmd_bench(const BenchOptions& o);
void cmd_emit_hw(const EmitHwOptions& o);
void cmd_unroll(const UnrollOptions& o);
void cmd_export_cnf(const ExportCnfOptions& o);

}  // namespace adatest::cli
