#include "adatest/eval.hpp"

#include <algorithm>
#include <bit>

#include "adatest/error.hpp"
#include "adatest/parallel.hpp"

namespace adatest {
namespace {

void require_trojans(std::span<const TrojanSpec> trojans) {
  if (trojans.empty()) throw UsageError("coverage needs at least one trojan");
}

std::vector<std::uint64_t> po_words(const WordSimulator& sim) {
  std::vector<std::uint64_t> out;
  for (NodeId po : sim.netlist().primary_outputs()) out.push_back(sim.value(po));
  return out;
}

}  // namespace

bool outputs_differ(const Netlist& golden, const Netlist& trojaned,
                    std::span<const PatternVector> vectors) {
  if (golden.primary_outputs().size() != trojaned.primary_outputs().size()) {
    throw InputError("netlists have different output counts");
  }
  const PatternBatch batch(vectors, golden.primary_inputs().size());
  check_width(trojaned, batch.width());
  WordSimulator g(golden);
  WordSimulator t(trojaned);
  for (std::size_t b = 0; b < batch.block_count(); ++b) {
    g.run(batch.block(b));
    t.run(batch.block(b));
    const std::uint64_t mask = batch.lane_mask(b);
    const auto gp = golden.primary_outputs();
    const auto tp = trojaned.primary_outputs();
    for (std::size_t k = 0; k < gp.size(); ++k) {
      if (((g.value(gp[k]) ^ t.value(tp[k])) & mask) != 0) return true;
    }
  }
  return false;
}

std::vector<TrojanOutcome> evaluate_trojans(const Netlist& golden,
                                            std::span<const PatternVector> vectors,
                                            std::span<const TrojanSpec> trojans,
                                            unsigned jobs) {
  const PatternBatch batch(vectors, golden.primary_inputs().size());
  check_width(golden, batch.width());
  const std::size_t blocks = batch.block_count();

  std::vector<std::vector<std::uint64_t>> golden_values(blocks);
  std::vector<std::vector<std::uint64_t>> golden_po(blocks);
  {
    WordSimulator sim(golden);
    for (std::size_t b = 0; b < blocks; ++b) {
      sim.run(batch.block(b));
      golden_values[b].assign(sim.values().begin(), sim.values().end());
      golden_po[b] = po_words(sim);
    }
  }

  std::vector<TrojanOutcome> out(trojans.size());
  parallel_for(trojans.size(), jobs, [&](std::size_t i) {
    const TrojanSpec& spec = trojans[i];
    const Netlist trojaned = insert_trojan(golden, spec);
    TrojanOutcome& o = out[i];
    o.id = spec.id;
    o.trigger_size = spec.trigger.size();
    std::vector<std::uint8_t> hit(spec.trigger.size(), 0);
    WordSimulator sim(trojaned);
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::uint64_t mask = batch.lane_mask(b);
      std::uint64_t full = mask;
      for (std::size_t k = 0; k < spec.trigger.size(); ++k) {
        const std::uint64_t v = golden_values[b][spec.trigger[k].node.index];
        const std::uint64_t lit = (spec.trigger[k].value ? v : ~v) & mask;
        if (lit != 0) hit[k] = 1;
        full &= lit;
      }
      if (full != 0) o.triggered = true;
      if (o.detected) continue;
      sim.run(batch.block(b));
      std::uint64_t diff = 0;
      const auto pos = trojaned.primary_outputs();
      for (std::size_t k = 0; k < pos.size(); ++k) diff |= sim.value(pos[k]) ^ golden_po[b][k];
      diff &= mask;
      if (diff != 0) {
        o.detected = true;
        o.first_detecting_vector = b * 64 + static_cast<std::size_t>(std::countr_zero(diff));
      }
    }
    o.trigger_nodes_hit = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  });
  return out;
}

double trigger_coverage(const Netlist& golden, std::span<const PatternVector> vectors,
                        std::span<const TrojanSpec> trojans) {
  require_trojans(trojans);
  double sum = 0.0;
  for (const TrojanOutcome& o : evaluate_trojans(golden, vectors, trojans)) {
    sum += static_cast<double>(o.trigger_nodes_hit) / static_cast<double>(o.trigger_size);
  }
  return 100.0 * sum / static_cast<double>(trojans.size());
}

double trojan_coverage(const Netlist& golden, std::span<const PatternVector> vectors,
                       std::span<const TrojanSpec> trojans) {
  require_trojans(trojans);
  std::size_t detected = 0;
  for (const TrojanOutcome& o : evaluate_trojans(golden, vectors, trojans)) {
    detected += o.detected ? 1 : 0;
  }
  return 100.0 * static_cast<double>(detected) / static_cast<double>(trojans.size());
}

}  // namespace adatest
