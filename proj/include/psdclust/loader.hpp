#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "psdclust/config.hpp"
#include "psdclust/spectra.hpp"

namespace psdclust {

// Reads one real-valued series from a plain text or CSV file. Parse failures
// and non-finite values raise DataError with the offending line number.
// With center = true the sample mean is subtracted.
Observation load_series(const std::string& path, SeriesFormat format, int csv_column = 0,
                        bool csv_header = false, bool center = false);

// One sample per line, full precision; load_series reads it back exactly.
void save_series(const std::string& path, const Observation& obs);

std::vector<int> load_labels(const std::string& path);

struct FileClusterResult {
  std::vector<int> assignments;
  std::vector<double> eigenvalues;
  std::optional<double> ce;
  std::optional<double> entropy;
};

// Loads the files, estimates PSDs with the configured window, clusters with
// the configured algorithm. CE and entropy are filled when the config names
// a labels file.
FileClusterResult cluster_files(const std::vector<std::string>& paths,
                                const ExperimentConfig& config);

void write_cluster_csv(std::ostream& out, const ExperimentConfig& config,
                       const std::vector<std::string>& paths, const FileClusterResult& result);

}  // namespace psdclust
