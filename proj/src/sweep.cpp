#include "psdclust/sweep.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "psdclust/eval.hpp"
#include "psdclust/fft.hpp"
#include "psdclust/loader.hpp"
#include "psdclust/parallel.hpp"
#include "psdclust/rng.hpp"
#include "psdclust/theory.hpp"

namespace psdclust {

namespace {

GenerativeModel build_file_model(const ModelSpec& spec) {
  const Observation series =
      load_series(spec.path, SeriesFormat::OneColumnText, 0, false, false);
  std::vector<double> values = series.samples;
  if (!is_power_of_two(values.size())) {
    throw DataError(spec.path + ": tabulated PSD needs a power-of-two number of values");
  }
  const int max_lag = std::min(kModelMaxLag, static_cast<int>(values.size()) / 2 - 1);
  try {
    return model_from_psd(std::move(values), max_lag);
  } catch (const std::invalid_argument& err) {
    throw DataError(spec.path + ": " + err.what());
  }
}

// Applies one sweep cell to a copy of the base config.
ExperimentConfig cell_config(const ExperimentConfig& base, const std::vector<SweepAxis>& axes,
                             const std::vector<std::size_t>& index) {
  ExperimentConfig cfg = base;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const double value = axes[a].values[index[a]];
    switch (axes[a].kind) {
      case SweepAxisKind::Nu2: break;  // handled by rebuilding the model
      case SweepAxisKind::ObsLen: cfg.obs_len = static_cast<std::size_t>(value); break;
      case SweepAxisKind::Sigma: cfg.sigma = value; break;
      case SweepAxisKind::InvP: cfg.sampling_prob = 1.0 / value; break;
    }
  }
  return cfg;
}

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += (v - mean) * (v - mean);
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

std::string format_value(double value) {
  std::ostringstream out;
  out.precision(10);
  out << value;
  return out.str();
}

}  // namespace

std::vector<GenerativeModel> build_models(const ExperimentConfig& config) {
  std::vector<GenerativeModel> models(config.models.size());

  // Tabulated models fix the common grid; resonator models follow it.
  std::size_t grid = kModelGridSize;
  bool grid_from_file = false;
  for (std::size_t m = 0; m < config.models.size(); ++m) {
    if (!config.models[m].from_file) continue;
    models[m] = build_file_model(config.models[m]);
    const std::size_t file_grid = models[m].psd.grid_size();
    if (grid_from_file && file_grid != grid) {
      throw DataError(config.models[m].path + ": tabulated PSDs must share one grid size");
    }
    grid = file_grid;
    grid_from_file = true;
  }
  const int max_lag = std::min(kModelMaxLag, static_cast<int>(grid) / 2 - 1);
  for (std::size_t m = 0; m < config.models.size(); ++m) {
    if (config.models[m].from_file) continue;
    models[m] = ar2_model(config.models[m].pole_radius, config.models[m].pole_angle, grid,
                          max_lag);
  }
  return models;
}

ClusteringResult run_clustering(const ExperimentConfig& config,
                                const std::vector<PsdEstimate>& psds,
                                const std::vector<Observation>& observations,
                                std::uint64_t seed) {
  const int explicit_clusters = config.num_clusters;

  switch (config.algorithm) {
    case Algorithm::Nnpc: {
      const DistanceMatrix distances = pairwise_distances(psds, config.metric);
      const NeighborGraph graph = nnpc_adjacency(distances, config.num_neighbors);
      const int clusters = config.use_eigengap
                               ? eigengap_estimate(graph.adjacency, config.eigengap_max)
                               : explicit_clusters;
      return spectral_cluster(graph.adjacency, clusters, seed);
    }
    case Algorithm::Km:
      return km_farthest(pairwise_distances(psds, config.metric), explicit_clusters);
    case Algorithm::Kmit:
      return kmit(psds, explicit_clusters, config.kmit_iterations, config.metric);
    case Algorithm::SingleLinkage:
      return hierarchical(pairwise_distances(psds, config.metric), Linkage::Single,
                          explicit_clusters);
    case Algorithm::AverageLinkage:
      return hierarchical(pairwise_distances(psds, config.metric), Linkage::Average,
                          explicit_clusters);
    case Algorithm::CompleteLinkage:
      return hierarchical(pairwise_distances(psds, config.metric), Linkage::Complete,
                          explicit_clusters);
    case Algorithm::Tsc: {
      std::vector<std::vector<double>> series;
      series.reserve(observations.size());
      for (const auto& obs : observations) series.push_back(obs.samples);
      return tsc_baseline(series, explicit_clusters, config.num_neighbors, seed);
    }
  }
  throw std::logic_error("run_clustering: unreachable");
}

TrialOutcome run_single_trial(const ExperimentConfig& config,
                              const std::vector<GenerativeModel>& models, std::uint64_t seed) {
  CorruptionSpec corruption{config.sigma, config.sampling_prob, seed};
  const std::vector<Observation> dataset =
      make_dataset(models, config.n_per_model, config.obs_len, corruption);

  WindowFunction window = bartlett_window(config.window_len);
  if (config.bias_correction) window = bias_corrected_window(window, config.sampling_prob);
  const std::size_t grid = choose_grid_size(config.obs_len);

  std::vector<PsdEstimate> psds;
  psds.reserve(dataset.size());
  for (const auto& obs : dataset) {
    PsdEstimate psd = bt_psd(estimate_acf(obs), window, grid);
    psds.push_back(config.normalize ? normalize_power(psd) : std::move(psd));
  }

  std::vector<int> truth;
  truth.reserve(dataset.size());
  for (const auto& obs : dataset) truth.push_back(obs.label);

  TrialOutcome outcome;
  outcome.result = run_clustering(config, psds, dataset, mix_seed(seed, 0xC1ULL));
  outcome.ce = clustering_error(outcome.result.assignments, truth);
  return outcome;
}

std::vector<SweepCell> run_sweep(const ExperimentConfig& config, int threads) {
  if (config.models.size() < 2) {
    throw ConfigError("run_sweep: clustering needs at least two models");
  }

  const auto& axes = config.sweep;

  bool any_tabulated = false;
  for (const auto& spec : config.models) any_tabulated = any_tabulated || spec.from_file;
  if (any_tabulated) {
    std::size_t longest = config.obs_len;
    for (const auto& axis : axes) {
      if (axis.kind != SweepAxisKind::ObsLen) continue;
      for (double v : axis.values) longest = std::max(longest, static_cast<std::size_t>(v));
    }
    if (longest > 2048) {
      throw ConfigError(
          "run_sweep: tabulated models sample through the exact Gaussian path, which caps M at "
          "2048");
    }
  }
  const std::size_t count1 = axes.empty() ? 1 : axes[0].values.size();
  const std::size_t count2 = axes.size() < 2 ? 1 : axes[1].values.size();

  // Models per cell. Only a nu2 axis changes them; all other cells share the
  // base set.
  const std::vector<GenerativeModel> base_models = build_models(config);
  int nu2_axis = -1;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].kind == SweepAxisKind::Nu2) nu2_axis = static_cast<int>(a);
  }
  std::vector<std::vector<GenerativeModel>> models_by_nu2;
  if (nu2_axis >= 0) {
    for (double nu2 : axes[nu2_axis].values) {
      std::vector<GenerativeModel> models = base_models;
      models[1] = ar2_model(config.models[1].pole_radius, nu2,
                            base_models[1].psd.grid_size(), base_models[1].max_lag());
      models_by_nu2.push_back(std::move(models));
    }
  }

  struct Task {
    std::size_t i1, i2;
    int trial;
  };
  std::vector<Task> tasks;
  tasks.reserve(count1 * count2 * static_cast<std::size_t>(config.trials));
  for (std::size_t i1 = 0; i1 < count1; ++i1) {
    for (std::size_t i2 = 0; i2 < count2; ++i2) {
      for (int trial = 0; trial < config.trials; ++trial) tasks.push_back({i1, i2, trial});
    }
  }

  std::vector<double> ce(tasks.size(), 0.0);
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    const ExperimentConfig cfg = cell_config(config, axes, {task.i1, task.i2});
    const std::vector<GenerativeModel>& models =
        nu2_axis < 0 ? base_models
                     : models_by_nu2[nu2_axis == 0 ? task.i1 : task.i2];
    const std::uint64_t seed = mix_seed(config.master_seed, task.i1, task.i2,
                                        static_cast<std::uint64_t>(task.trial));
    ce[static_cast<std::size_t>(t)] = run_single_trial(cfg, models, seed).ce;
  });

  std::vector<SweepCell> cells;
  cells.reserve(count1 * count2);
  std::size_t cursor = 0;
  for (std::size_t i1 = 0; i1 < count1; ++i1) {
    for (std::size_t i2 = 0; i2 < count2; ++i2) {
      SweepCell cell;
      for (std::size_t a = 0; a < axes.size(); ++a) {
        cell.axis_names.push_back(to_string(axes[a].kind));
        cell.axis_values.push_back(axes[a].values[a == 0 ? i1 : i2]);
      }
      const std::vector<GenerativeModel>& models =
          nu2_axis < 0 ? base_models : models_by_nu2[nu2_axis == 0 ? i1 : i2];
      double min_dist = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < models.size(); ++i) {
        for (std::size_t j = i + 1; j < models.size(); ++j) {
          min_dist = std::min(min_dist, model_distance(models[i], models[j]));
        }
      }
      cell.model_distance = min_dist;

      std::vector<double> trial_ce(ce.begin() + cursor, ce.begin() + cursor + config.trials);
      cursor += config.trials;
      double mean = 0.0;
      for (double v : trial_ce) mean += v;
      mean /= static_cast<double>(config.trials);
      cell.mean_ce = mean;
      cell.std_ce = sample_std(trial_ce, mean);
      cell.trials = config.trials;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& config,
                     const std::vector<SweepCell>& cells) {
  out << "# psdclust sweep config_hash=" << config_hash(config) << "\n";
  if (!cells.empty()) {
    for (const auto& name : cells.front().axis_names) out << name << ",";
    out << "model_distance,mean_ce,std_ce,trials\n";
  }
  for (const auto& cell : cells) {
    for (double value : cell.axis_values) out << format_value(value) << ",";
    out << format_value(cell.model_distance) << "," << format_value(cell.mean_ce) << ","
        << format_value(cell.std_ce) << "," << cell.trials << "\n";
  }
}

void write_condition_csv(std::ostream& out, const ExperimentConfig& config) {
  if (config.models.size() < 2) throw ConfigError("theory: need at least two models");
  const std::vector<GenerativeModel> models = build_models(config);
  const WindowFunction window = bartlett_window(config.window_len);
  const ConditionReport report =
      clustering_condition(models, window, static_cast<double>(config.obs_len), config.sigma,
                           config.sampling_prob);
  out << "# psdclust theory config_hash=" << config_hash(config) << "\n";
  out << "min_model_distance,rhs,mu_max,satisfied,margin\n";
  out << format_value(report.min_model_distance) << "," << format_value(report.rhs) << ","
      << format_value(report.mu_max) << "," << (report.satisfied ? 1 : 0) << ","
      << format_value(report.margin) << "\n";
}

}  // namespace psdclust
