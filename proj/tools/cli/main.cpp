#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "adatest/error.hpp"
#include "commands.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInput = 2, kInternal = 3 };

}  // namespace

int main(int argc, char** argv) {
  using namespace adatest::cli;
  CLI::App app{"Rare-node test pattern generation for hardware Trojan detection"};
  app.set_version_flag("--version", ADATEST_VERSION);
  app.require_subcommand(1);

  ProfileOptions profile;
  auto* p = app.add_subcommand("profile", "Estimate transition probabilities, rare nodes and SCOAP");
  p->add_option("bench", profile.bench, "Netlist (.bench)")->required();
  p->add_option("--theta", profile.theta, "Rare-node threshold on p(1-p)")->capture_default_str();
  p->add_option("--trials", profile.trials, "Random input vectors")->capture_default_str();
  p->add_option("--seed", profile.seed)->capture_default_str();
  p->add_option("--jobs", profile.jobs, "Worker threads")->capture_default_str();
  p->add_option("-o,--out", profile.out, "Profile JSON")->required();

  GenerateOptions generate;
  auto* g = app.add_subcommand("generate", "Run adaptive test pattern generation");
  g->add_option("bench", generate.bench)->required();
  g->add_option("--profile", generate.profile, "Profile JSON (computed when omitted)");
  g->add_option("--config", generate.config, "Configuration JSON");
  g->add_option("--init", generate.init, "Initial test set: sat or random");
  g->add_option("--seed", generate.seed);
  g->add_option("--jobs", generate.jobs)->capture_default_str();
  g->add_option("-o,--out", generate.out, "Pattern file")->required();
  g->add_option("--trace", generate.trace, "Coverage trace CSV (default <out>.trace.csv)");

  InjectOptions inject;
  auto* i = app.add_subcommand("inject", "Sample and insert rare-node Trojans");
  i->add_option("bench", inject.bench)->required();
  i->add_option("--profile", inject.profile)->required();
  i->add_option("-q,--trigger-size", inject.q)->capture_default_str();
  i->add_option("--count", inject.count)->capture_default_str();
  i->add_option("--seed", inject.seed)->capture_default_str();
  i->add_option("--out-dir", inject.out_dir)->required();

  DetectOptions detect;
  auto* d = app.add_subcommand("detect", "Measure trigger and Trojan coverage of a pattern file");
  d->add_option("bench", detect.bench, "Golden netlist")->required();
  d->add_option("--trojans", detect.trojan_dir, "Directory of Trojan spec JSON files")->required();
  d->add_option("--patterns", detect.patterns)->required();
  d->add_option("--jobs", detect.jobs)->capture_default_str();
  d->add_option("-o,--out", detect.out, "Report JSON")->required();

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Run a detection campaign (AdaTest, MERO, TRIAGE)");
  b->add_option("campaign", bench.campaign, "Campaign JSON")->required();
  b->add_option("--jobs", bench.jobs)->capture_default_str();
  b->add_flag("--timing", bench.timing, "Record generation wall-clock time in the reports");
  b->add_option("-o,--out", bench.out, "Summary CSV")->required();
  b->add_option("--json", bench.json, "Full report JSON (default <out>.json)");

  EmitHwOptions hw;
  auto* h = app.add_subcommand("emit-hw", "Map a pattern file onto a shift-register TPG");
  h->add_option("patterns", hw.patterns)->required();
  h->add_option("--chunk", hw.chunk, "Split the test set into segments of this size");
  h->add_option("--cluster", hw.cluster, "Partition by the PI clusters of this netlist");
  h->add_flag("--centralized", hw.centralized, "Cost clusters as tested one after another");
  h->add_option("--init-position", hw.init_position, "Initial stage of the 1")->capture_default_str();
  h->add_option("--golden", hw.golden, "Netlist whose responses fill the ROM image");
  h->add_option("--rom-width", hw.rom_width, "ROM word width in bits")->capture_default_str();
  h->add_option("--out-dir", hw.out_dir)->required();

  UnrollOptions unroll;
  auto* u = app.add_subcommand("unroll", "Time-frame expand a sequential netlist");
  u->add_option("bench", unroll.bench)->required();
  u->add_option("--frames", unroll.frames)->capture_default_str();
  u->add_option("-o,--out", unroll.out)->required();

  ExportCnfOptions cnf;
  auto* c = app.add_subcommand("export-cnf", "Write the circuit's CNF in DIMACS format");
  c->add_option("bench", cnf.bench)->required();
  c->add_option("-o,--out", cnf.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (p->parsed()) cmd_profile(profile);
    if (g->parsed()) cmd_generate(generate);
    if (i->parsed()) cmd_inject(inject);
    if (d->parsed()) cmd_detect(detect);
    if (b->parsed()) cmd_bench(bench);
    if (h->parsed()) cmd_emit_hw(hw);
    if (u->parsed()) cmd_unroll(unroll);
    if (c->parsed()) cmd_export_cnf(cnf);
  } catch (const adatest::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const adatest::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}
