#include "psdclust/loader.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "psdclust/eval.hpp"
#include "psdclust/rng.hpp"
#include "psdclust/sweep.hpp"

namespace psdclust {

namespace {

[[noreturn]] void data_fail(const std::string& path, int line, const std::string& message) {
  throw DataError(path + ":" + std::to_string(line) + ": " + message);
}

double parse_sample(const std::string& path, int line, const std::string& token) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) data_fail(path, line, "bad number '" + token + "'");
    if (!std::isfinite(value)) data_fail(path, line, "non-finite value '" + token + "'");
    return value;
  } catch (const DataError&) {
    throw;
  } catch (const std::exception&) {
    data_fail(path, line, "bad number '" + token + "'");
  }
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::string csv_field(const std::string& path, int line, const std::string& row, int column) {
  std::stringstream stream(row);
  std::string field;
  for (int c = 0; c <= column; ++c) {
    if (!std::getline(stream, field, ',')) {
      data_fail(path, line, "missing column " + std::to_string(column));
    }
  }
  return trim(field);
}

}  // namespace

Observation load_series(const std::string& path, SeriesFormat format, int csv_column,
                        bool csv_header, bool center) {
  std::ifstream file(path);
  if (!file) throw DataError(path + ": cannot open file");

  Observation obs;
  std::string raw;
  int line = 0;
  while (std::getline(file, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) continue;
    if (format == SeriesFormat::CsvColumn) {
      if (csv_header && line == 1) continue;
      obs.samples.push_back(parse_sample(path, line, csv_field(path, line, text, csv_column)));
    } else {
      obs.samples.push_back(parse_sample(path, line, text));
    }
  }
  if (obs.samples.size() < 2) throw DataError(path + ": need at least 2 samples");

  if (center) {
    double mean = 0.0;
    for (double v : obs.samples) mean += v;
    mean /= static_cast<double>(obs.samples.size());
    for (double& v : obs.samples) v -= mean;
  }
  obs.mask.assign(obs.samples.size(), 1);
  return obs;
}

void save_series(const std::string& path, const Observation& obs) {
  std::ofstream file(path);
  if (!file) throw DataError(path + ": cannot open file for writing");
  file << std::setprecision(17);
  for (double v : obs.samples) file << v << "\n";
  if (!file) throw DataError(path + ": write failed");
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataError(path + ": cannot open labels file");
  std::vector<int> labels;
  std::string raw;
  int line = 0;
  while (std::getline(file, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty()) continue;
    try {
      std::size_t used = 0;
      const int value = std::stoi(text, &used);
      if (used != text.size()) data_fail(path, line, "bad label '" + text + "'");
      labels.push_back(value);
    } catch (const DataError&) {
      throw;
    } catch (const std::exception&) {
      data_fail(path, line, "bad label '" + text + "'");
    }
  }
  if (labels.empty()) throw DataError(path + ": empty labels file");
  return labels;
}

FileClusterResult cluster_files(const std::vector<std::string>& paths,
                                const ExperimentConfig& config) {
  if (paths.size() < 2) throw DataError("cluster_files: need at least 2 files");

  std::vector<Observation> observations;
  observations.reserve(paths.size());
  std::size_t longest = 0;
  for (const auto& path : paths) {
    observations.push_back(load_series(path, config.input_format, config.csv_column,
                                       config.csv_header, config.center));
    longest = std::max(longest, observations.back().length());
  }

  const std::size_t grid = choose_grid_size(longest);
  WindowFunction window = bartlett_window(config.window_len);
  if (config.bias_correction && config.sampling_prob < 1.0) {
    window = bias_corrected_window(window, config.sampling_prob);
  }
  for (const auto& obs : observations) {
    if (window.half_support() >= static_cast<int>(obs.length())) {
      throw DataError("cluster_files: window support exceeds a series length; lower W");
    }
  }

  std::vector<PsdEstimate> psds;
  psds.reserve(observations.size());
  for (const auto& obs : observations) {
    PsdEstimate psd = bt_psd(estimate_acf(obs), window, grid);
    psds.push_back(config.normalize ? normalize_power(psd) : std::move(psd));
  }

  FileClusterResult out;
  const std::uint64_t seed = mix_seed(config.master_seed, 0xC11ULL);
  ClusteringResult clustering = run_clustering(config, psds, observations, seed);
  out.assignments = std::move(clustering.assignments);
  out.eigenvalues = std::move(clustering.eigenvalues);

  if (!config.labels_file.empty()) {
    const std::vector<int> truth = load_labels(config.labels_file);
    if (truth.size() != paths.size()) {
      throw DataError(config.labels_file + ": expected " + std::to_string(paths.size()) +
                      " labels, got " + std::to_string(truth.size()));
    }
    out.ce = clustering_error(out.assignments, truth);
    out.entropy = confusion_entropy(out.assignments, truth);
  }
  return out;
}

void write_cluster_csv(std::ostream& out, const ExperimentConfig& config,
                       const std::vector<std::string>& paths, const FileClusterResult& result) {
  out << "# psdclust cluster config_hash=" << config_hash(config) << "\n";
  out << "path,cluster\n";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    out << paths[i] << "," << result.assignments[i] << "\n";
  }
  if (!result.eigenvalues.empty()) {
    out << "# eigenvalues";
    std::ostringstream fmt;
    fmt.precision(10);
    for (double v : result.eigenvalues) fmt << "," << v;
    out << fmt.str() << "\n";
  }
  if (result.ce.has_value()) {
    std::ostringstream fmt;
    fmt.precision(10);
    fmt << "# ce," << *result.ce << "\n# entropy," << *result.entropy << "\n";
    out << fmt.str();
  }
}

}  // namespace psdclust
