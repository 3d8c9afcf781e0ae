#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "psdclust/cluster.hpp"
#include "psdclust/distance.hpp"

namespace psdclust {

// Config-file problems (unknown keys, bad values, bad ranges). CLI exit 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input-data problems (unreadable files, parse failures). CLI exit 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { Nnpc, Km, Kmit, SingleLinkage, AverageLinkage, CompleteLinkage, Tsc };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm algorithm);

struct ModelSpec {
  bool from_file = false;
  double pole_radius = 0.0;
  double pole_angle = 0.0;
  std::string path;
};

enum class SweepAxisKind { Nu2, ObsLen, Sigma, InvP };

std::string to_string(SweepAxisKind kind);

struct SweepAxis {
  SweepAxisKind kind = SweepAxisKind::Sigma;
  std::vector<double> values;
};

enum class SeriesFormat { OneColumnText, CsvColumn };

// Flat key = value experiment description. Unknown keys are rejected.
// See the README for the full schema.
struct ExperimentConfig {
  std::vector<ModelSpec> models;
  int n_per_model = 25;
  std::size_t obs_len = 2000;
  double sigma = 0.0;
  double sampling_prob = 1.0;
  int window_len = 101;
  bool bias_correction = true;
  Metric metric = Metric::L1;
  Algorithm algorithm = Algorithm::Nnpc;
  int num_neighbors = 10;
  int num_clusters = 2;
  bool use_eigengap = false;
  int eigengap_max = 8;
  int kmit_iterations = 100;
  int trials = 10;
  std::uint64_t master_seed = 1;
  bool normalize = false;
  bool center = false;
  SeriesFormat input_format = SeriesFormat::OneColumnText;
  int csv_column = 0;
  bool csv_header = false;
  std::string labels_file;
  std::vector<SweepAxis> sweep;  // at most two, distinct axes
};

ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

// Canonical serialization of the parsed config; basis of the config hash.
std::string describe(const ExperimentConfig& config);

// 16 hex digits, FNV-1a over the canonical serialization.
std::string config_hash(const ExperimentConfig& config);

}  // namespace psdclust
