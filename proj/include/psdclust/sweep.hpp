#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "psdclust/config.hpp"
#include "psdclust/genmodel.hpp"

namespace psdclust {

struct SweepCell {
  std::vector<std::string> axis_names;   // 0, 1 or 2 entries
  std::vector<double> axis_values;
  double model_distance = 0.0;           // min pairwise model distance
  double mean_ce = 0.0;
  double std_ce = 0.0;
  int trials = 0;
};

// Builds the generative models named by the config (files are loaded here).
std::vector<GenerativeModel> build_models(const ExperimentConfig& config);

// Dispatches the configured algorithm on prepared PSD estimates; tsc reads
// the raw observations instead.
ClusteringResult run_clustering(const ExperimentConfig& config,
                                const std::vector<PsdEstimate>& psds,
                                const std::vector<Observation>& observations, std::uint64_t seed);

// One dataset -> PSD estimates -> configured algorithm -> clustering error.
// `config` must already carry the cell's obs_len / sigma / sampling_prob.
struct TrialOutcome {
  double ce = 0.0;
  ClusteringResult result;
};
TrialOutcome run_single_trial(const ExperimentConfig& config,
                              const std::vector<GenerativeModel>& models, std::uint64_t seed);

// Runs the full sweep grid. Trial seeds are derived from (master_seed, axis
// indices, trial index), so results are independent of `threads` and adding
// grid points never changes existing cells.
std::vector<SweepCell> run_sweep(const ExperimentConfig& config, int threads = 1);

// CSV with a config-hash comment line and a header naming the axes.
void write_sweep_csv(std::ostream& out, const ExperimentConfig& config,
                     const std::vector<SweepCell>& cells);

// ConditionReport fields as CSV (theory subcommand).
void write_condition_csv(std::ostream& out, const ExperimentConfig& config);

}  // namespace psdclust
