#pragma once

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "busembed/exact_solver.hpp"
#include "busembed/random_gen.hpp"

namespace busembed {

struct ExperimentConfig {
  int k_min = 3;
  int k_max = 20;
  std::vector<int> points_per_color = {2, 3, 4};
  int trials = 100;
  int width = 1024;
  int height = 768;
  uint64_t seed = 1;
  int threads = 1;
  int exact_color_cap = 14;  // cells beyond run out of solver budget
};

struct RateCell {
  int k = 0, l = 0;
  int feasible = 0;
  int trials = 0;  // 0 marks an incomplete cell
  uint64_t cell_seed = 0;
};

struct RateTable {
  std::vector<RateCell> cells;  // deterministic (k, l) order
};

inline RateTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.k_min < 3) throw std::invalid_argument("k_min must be >= 3");
  for (int l : cfg.points_per_color)
    if (l < 2) throw std::invalid_argument("points per color must be >= 2");

  RateTable table;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k)
    for (int l : cfg.points_per_color)
      table.cells.push_back({k, l, 0, 0, mix_seed(cfg.seed, k, l)});

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= table.cells.size()) return;
      RateCell& cell = table.cells[i];
      if (cell.k > cfg.exact_color_cap) continue;  // incomplete, trials = 0
      for (int t = 0; t < cfg.trials; ++t) {
        auto inst = generate_random(cell.k, cell.l,
                                    mix_seed(cell.cell_seed, (uint64_t)t),
                                    cfg.width, cfg.height);
        auto res = solve_bep(inst);
        if (res.feasible) {
          auto report = validate_planarity(inst, res.layout);
          if (!report.empty())
            throw Error("experiment: solver produced an invalid layout");
          ++cell.feasible;
        }
        ++cell.trials;
      }
    }
  };

  int threads = std::max(1, cfg.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return table;
}

inline std::string rate_table_csv(const RateTable& table,
                                  const ExperimentConfig& cfg) {
  std::string out;
  out += "# busembed feasibility-rate experiment\n";
  out += std::string("# prng=") + kPrngName +
         " seed=" + std::to_string(cfg.seed) +
         " area=" + std::to_string(cfg.width) + "x" +
         std::to_string(cfg.height) + " trials=" + std::to_string(cfg.trials) +
         "\n";
  out += "k,l,feasible,trials,rate,seed\n";
  for (const auto& c : table.cells) {
    out += std::to_string(c.k) + "," + std::to_string(c.l) + "," +
           std::to_string(c.feasible) + "," + std::to_string(c.trials) + ",";
    if (c.trials == 0)
      out += "incomplete";
    else
      out += (Rat(c.feasible) / Rat(c.trials)).str();
    out += "," + std::to_string(c.cell_seed) + "\n";
  }
  return out;
}

}  // namespace busembed
