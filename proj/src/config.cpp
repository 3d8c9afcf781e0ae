#include "psdclust/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace psdclust {

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "nnpc") return Algorithm::Nnpc;
  if (name == "km") return Algorithm::Km;
  if (name == "kmit") return Algorithm::Kmit;
  if (name == "sl") return Algorithm::SingleLinkage;
  if (name == "al") return Algorithm::AverageLinkage;
  if (name == "cl") return Algorithm::CompleteLinkage;
  if (name == "tsc") return Algorithm::Tsc;
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Nnpc: return "nnpc";
    case Algorithm::Km: return "km";
    case Algorithm::Kmit: return "kmit";
    case Algorithm::SingleLinkage: return "sl";
    case Algorithm::AverageLinkage: return "al";
    case Algorithm::CompleteLinkage: return "cl";
    case Algorithm::Tsc: return "tsc";
  }
  return "?";
}

std::string to_string(SweepAxisKind kind) {
  switch (kind) {
    case SweepAxisKind::Nu2: return "nu2";
    case SweepAxisKind::ObsLen: return "M";
    case SweepAxisKind::Sigma: return "sigma";
    case SweepAxisKind::InvP: return "inv_p";
  }
  return "?";
}

namespace {

struct Cursor {
  std::string origin;
  int line = 0;

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
  }
};

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream stream(text);
  std::string token;
  while (stream >> token) parts.push_back(token);
  return parts;
}

double parse_double(const Cursor& cur, const std::string& token) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) cur.fail("bad number '" + token + "'");
    if (!std::isfinite(value)) cur.fail("non-finite number '" + token + "'");
    return value;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    cur.fail("bad number '" + token + "'");
  }
}

// Angles accept a trailing "pi" multiplier, e.g. "0.7pi".
double parse_angle(const Cursor& cur, const std::string& token) {
  if (token.size() > 2 && token.substr(token.size() - 2) == "pi") {
    return parse_double(cur, token.substr(0, token.size() - 2)) * std::numbers::pi;
  }
  return parse_double(cur, token);
}

long long parse_int(const Cursor& cur, const std::string& token) {
  long long value = 0;
  const auto result = std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    cur.fail("bad integer '" + token + "'");
  }
  return value;
}

bool parse_bool(const Cursor& cur, const std::string& token) {
  if (token == "true" || token == "1") return true;
  if (token == "false" || token == "0") return false;
  cur.fail("bad boolean '" + token + "' (use true/false)");
}

SweepAxisKind axis_from_string(const Cursor& cur, const std::string& token) {
  if (token == "nu2") return SweepAxisKind::Nu2;
  if (token == "M") return SweepAxisKind::ObsLen;
  if (token == "sigma") return SweepAxisKind::Sigma;
  if (token == "inv_p") return SweepAxisKind::InvP;
  cur.fail("unknown sweep axis '" + token + "' (nu2, M, sigma, inv_p)");
}

void validate(const ExperimentConfig& config, const std::string& origin) {
  auto fail = [&](const std::string& message) { throw ConfigError(origin + ": " + message); };
  if (config.n_per_model < 1) fail("n_per_model must be >= 1");
  if (config.obs_len < 2) fail("M must be >= 2");
  if (config.sigma < 0.0) fail("sigma must be >= 0");
  if (!(config.sampling_prob > 0.0) || config.sampling_prob > 1.0) fail("p must be in (0, 1]");
  if (config.window_len < 3 || config.window_len % 2 == 0) fail("window length must be odd >= 3");
  if (config.num_neighbors < 1) fail("q must be >= 1");
  if (!config.use_eigengap && config.num_clusters < 1) fail("L must be >= 1 or 'eigengap'");
  if (config.use_eigengap && config.algorithm != Algorithm::Nnpc) {
    fail("L = eigengap needs the neighbor graph, so it requires algorithm nnpc");
  }
  if (config.eigengap_max < 2) fail("eigengap_max must be >= 2");
  if (config.kmit_iterations < 0) fail("kmit_iters must be >= 0");
  if (config.trials < 1) fail("trials must be >= 1");
  if (config.csv_column < 0) fail("csv_column must be >= 0");
  if (config.sweep.size() > 2) fail("at most two sweep axes");
  std::set<SweepAxisKind> seen;
  for (const auto& axis : config.sweep) {
    if (!seen.insert(axis.kind).second) fail("sweep axes must be distinct");
    if (axis.values.empty()) fail("sweep axis needs at least one value");
    for (double v : axis.values) {
      switch (axis.kind) {
        case SweepAxisKind::Nu2:
          if (v < 0.0 || v > std::numbers::pi) fail("nu2 values must lie in [0, pi]");
          break;
        case SweepAxisKind::ObsLen:
          if (v < 2.0 || v != std::floor(v)) fail("M values must be integers >= 2");
          break;
        case SweepAxisKind::Sigma:
          if (v < 0.0) fail("sigma values must be >= 0");
          break;
        case SweepAxisKind::InvP:
          if (v < 1.0) fail("inv_p values must be >= 1");
          break;
      }
    }
    if (axis.kind == SweepAxisKind::Nu2) {
      if (config.models.size() < 2) fail("nu2 sweep needs at least two models");
      if (config.models[1].from_file) fail("nu2 sweep requires model 2 to be an ar2 model");
    }
  }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig config;
  std::set<std::string> assigned;
  Cursor cur{origin, 0};

  std::istringstream stream(text);
  std::string raw;
  while (std::getline(stream, raw)) {
    ++cur.line;
    const auto comment = raw.find('#');
    if (comment != std::string::npos) raw.erase(comment);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) cur.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) cur.fail("empty key");
    if (value.empty()) cur.fail("empty value for key '" + key + "'");

    const bool repeatable = (key == "model" || key == "sweep");
    if (!repeatable && !assigned.insert(key).second) cur.fail("duplicate key '" + key + "'");

    if (key == "model") {
      const auto parts = split_ws(value);
      ModelSpec spec;
      if (parts.size() == 3 && parts[0] == "ar2") {
        spec.pole_radius = parse_double(cur, parts[1]);
        spec.pole_angle = parse_angle(cur, parts[2]);
        if (!(spec.pole_radius > 0.0) || !(spec.pole_radius < 1.0)) {
          cur.fail("ar2 pole radius must be in (0, 1)");
        }
        if (spec.pole_angle < 0.0 || spec.pole_angle > std::numbers::pi) {
          cur.fail("ar2 pole angle must be in [0, pi]");
        }
      } else if (parts.size() == 2 && parts[0] == "file") {
        spec.from_file = true;
        spec.path = parts[1];
      } else {
        cur.fail("model must be 'ar2 <a> <nu>' or 'file <path>'");
      }
      config.models.push_back(std::move(spec));
    } else if (key == "sweep") {
      const auto parts = split_ws(value);
      if (parts.size() < 2) cur.fail("sweep must be '<axis> <v1> [v2 ...]'");
      SweepAxis axis;
      axis.kind = axis_from_string(cur, parts[0]);
      for (std::size_t i = 1; i < parts.size(); ++i) {
        axis.values.push_back(axis.kind == SweepAxisKind::Nu2 ? parse_angle(cur, parts[i])
                                                              : parse_double(cur, parts[i]));
      }
      config.sweep.push_back(std::move(axis));
    } else if (key == "n_per_model") {
      config.n_per_model = static_cast<int>(parse_int(cur, value));
    } else if (key == "M") {
      const long long len = parse_int(cur, value);
      if (len < 2) cur.fail("M must be >= 2");
      config.obs_len = static_cast<std::size_t>(len);
    } else if (key == "sigma") {
      config.sigma = parse_double(cur, value);
    } else if (key == "p") {
      config.sampling_prob = parse_double(cur, value);
    } else if (key == "window") {
      const auto parts = split_ws(value);
      if (parts.size() != 2 || parts[0] != "bartlett") {
        cur.fail("window must be 'bartlett <length>'");
      }
      config.window_len = static_cast<int>(parse_int(cur, parts[1]));
    } else if (key == "bias_correction") {
      config.bias_correction = parse_bool(cur, value);
    } else if (key == "metric") {
      try {
        config.metric = metric_from_string(value);
      } catch (const std::invalid_argument& err) {
        cur.fail(err.what());
      }
    } else if (key == "algorithm") {
      try {
        config.algorithm = algorithm_from_string(value);
      } catch (const std::invalid_argument& err) {
        cur.fail(err.what());
      }
    } else if (key == "q") {
      config.num_neighbors = static_cast<int>(parse_int(cur, value));
    } else if (key == "L") {
      if (value == "eigengap") {
        config.use_eigengap = true;
      } else {
        config.num_clusters = static_cast<int>(parse_int(cur, value));
      }
    } else if (key == "eigengap_max") {
      config.eigengap_max = static_cast<int>(parse_int(cur, value));
    } else if (key == "kmit_iters") {
      config.kmit_iterations = static_cast<int>(parse_int(cur, value));
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_int(cur, value));
    } else if (key == "master_seed") {
      config.master_seed = static_cast<std::uint64_t>(parse_int(cur, value));
    } else if (key == "normalize") {
      config.normalize = parse_bool(cur, value);
    } else if (key == "center") {
      config.center = parse_bool(cur, value);
    } else if (key == "input_format") {
      if (value == "text") {
        config.input_format = SeriesFormat::OneColumnText;
      } else if (value == "csv") {
        config.input_format = SeriesFormat::CsvColumn;
      } else {
        cur.fail("input_format must be 'text' or 'csv'");
      }
    } else if (key == "csv_column") {
      config.csv_column = static_cast<int>(parse_int(cur, value));
    } else if (key == "csv_header") {
      config.csv_header = parse_bool(cur, value);
    } else if (key == "labels_file") {
      config.labels_file = value;
    } else {
      cur.fail("unknown key '" + key + "'");
    }
  }

  validate(config, origin);
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError(path + ": cannot open config file");
  std::ostringstream content;
  content << file.rdbuf();
  return parse_config_text(content.str(), path);
}

std::string describe(const ExperimentConfig& config) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& model : config.models) {
    if (model.from_file) {
      out << "model=file " << model.path << "\n";
    } else {
      out << "model=ar2 " << model.pole_radius << " " << model.pole_angle << "\n";
    }
  }
  out << "n_per_model=" << config.n_per_model << "\n";
  out << "M=" << config.obs_len << "\n";
  out << "sigma=" << config.sigma << "\n";
  out << "p=" << config.sampling_prob << "\n";
  out << "window=bartlett " << config.window_len << "\n";
  out << "bias_correction=" << (config.bias_correction ? "true" : "false") << "\n";
  out << "metric=" << to_string(config.metric) << "\n";
  out << "algorithm=" << to_string(config.algorithm) << "\n";
  out << "q=" << config.num_neighbors << "\n";
  if (config.use_eigengap) {
    out << "L=eigengap\n";
    out << "eigengap_max=" << config.eigengap_max << "\n";
  } else {
    out << "L=" << config.num_clusters << "\n";
  }
  out << "kmit_iters=" << config.kmit_iterations << "\n";
  out << "trials=" << config.trials << "\n";
  out << "master_seed=" << config.master_seed << "\n";
  out << "normalize=" << (config.normalize ? "true" : "false") << "\n";
  out << "center=" << (config.center ? "true" : "false") << "\n";
  out << "input_format=" << (config.input_format == SeriesFormat::OneColumnText ? "text" : "csv")
      << "\n";
  out << "csv_column=" << config.csv_column << "\n";
  out << "csv_header=" << (config.csv_header ? "true" : "false") << "\n";
  if (!config.labels_file.empty()) out << "labels_file=" << config.labels_file << "\n";
  for (const auto& axis : config.sweep) {
    out << "sweep=" << to_string(axis.kind);
    for (double v : axis.values) out << " " << v;
    out << "\n";
  }
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = describe(config);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buffer);
}

}  // namespace psdclust
