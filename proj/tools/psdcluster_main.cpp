#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "psdclust/config.hpp"
#include "psdclust/loader.hpp"
#include "psdclust/rng.hpp"
#include "psdclust/sweep.hpp"
#include "psdclust/theory.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;

struct GlobalOptions {
  std::string out_path;
  int threads = 0;
  bool seed_set = false;
  std::uint64_t seed = 0;
};

int effective_threads(const GlobalOptions& opts) {
  if (opts.threads > 0) return opts.threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

psdclust::ExperimentConfig load_config(const std::string& path, const GlobalOptions& opts) {
  psdclust::ExperimentConfig config = psdclust::parse_config_file(path);
  if (opts.seed_set) config.master_seed = opts.seed;
  return config;
}

// Writes to --out when given, stdout otherwise.
void emit(const GlobalOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opts.out_path);
  if (!file) throw psdclust::DataError(opts.out_path + ": cannot open output file");
  file << text;
  if (!file) throw psdclust::DataError(opts.out_path + ": write failed");
}

void run_validate_bounds(const GlobalOptions& opts) {
  using namespace psdclust;
  std::ostringstream out;
  out.precision(10);
  out << "suite,case,empirical,bound,pass\n";

  // Mask quadratic-form tail bound on random symmetric matrices.
  const std::uint64_t seed = opts.seed_set ? opts.seed : 20240915ULL;
  const double probs[] = {0.3, 0.5, 0.9};
  const double scales[] = {2.0, 3.0, 4.0};
  const int dim = 50;
  for (int case_idx = 0; case_idx < 20; ++case_idx) {
    Rng rng(mix_seed(seed, 0xBADCAFEULL, static_cast<std::uint64_t>(case_idx)));
    Eigen::MatrixXd raw(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) raw(i, j) = rng.gauss();
    }
    const Eigen::MatrixXd mat = 0.5 * (raw + raw.transpose());
    const double prob = probs[case_idx % 3];
    const double scale = scales[(case_idx / 3) % 3];
    const double threshold = scale * std::sqrt(static_cast<double>(dim)) * spectral_norm(mat);
    const double bound = quadform_tail_bound(mat, prob, threshold);
    const double empirical = quadform_mc_tail(mat, prob, threshold, 100000,
                                              mix_seed(seed, 0x7A11ULL, case_idx));
    const double slack =
        bound >= 1.0 ? 0.0 : 3.0 * std::sqrt(bound * (1.0 - bound) / 100000.0);
    const bool pass = bound >= 1.0 || empirical <= bound + slack;
    out << "quadform_tail,case" << case_idx << "_p" << prob << "_c" << scale << ","
        << empirical << "," << bound << "," << (pass ? 1 : 0) << "\n";
  }

  // Inner-product dominance bound for a pair of resonator models.
  const GenerativeModel model_a = ar2_model(0.6, 0.7 * std::numbers::pi);
  const GenerativeModel model_b = ar2_model(0.6, 0.4 * std::numbers::pi);
  const int obs_len = 64;
  for (double sigma : {0.0, 0.5}) {
    const Eigen::MatrixXd cov_a = toeplitz_cov(model_a, sigma, obs_len);
    const Eigen::MatrixXd cov_b = toeplitz_cov(model_b, sigma, obs_len);
    const double bound = prop1_bound(cov_a, cov_b);
    const Eigen::LLT<Eigen::MatrixXd> chol_a(cov_a);
    const Eigen::LLT<Eigen::MatrixXd> chol_b(cov_b);
    const Eigen::MatrixXd root_a = chol_a.matrixL();
    const Eigen::MatrixXd root_b = chol_b.matrixL();
    const int trials = 100000;
    int dominated = 0;
    for (int trial = 0; trial < trials; ++trial) {
      Rng rng(mix_seed(seed, 0x9B0BULL, static_cast<std::uint64_t>(trial)));
      Eigen::VectorXd y1(obs_len), y2(obs_len), y3(obs_len);
      for (int i = 0; i < obs_len; ++i) y1(i) = rng.gauss();
      for (int i = 0; i < obs_len; ++i) y2(i) = rng.gauss();
      for (int i = 0; i < obs_len; ++i) y3(i) = rng.gauss();
      const Eigen::VectorXd within_i = root_b * y1;
      const Eigen::VectorXd within_v = root_b * y2;
      const Eigen::VectorXd cross_j = root_a * y3;
      if (std::abs(cross_j.dot(within_i)) >= std::abs(within_v.dot(within_i))) ++dominated;
    }
    const double empirical = static_cast<double>(dominated) / trials;
    out << "innerprod_dominance,sigma" << sigma << "," << empirical << "," << bound << ","
        << (empirical >= bound ? 1 : 0) << "\n";
  }

  emit(opts, out.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PSD-distance clustering of stationary process observations"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  app.add_option("--out", opts.out_path, "Write output to this file instead of stdout");
  app.add_option("--threads", opts.threads, "Worker threads (default: hardware concurrency)");
  auto* seed_opt = app.add_option("--seed", opts.seed, "Override the config master seed");

  std::string config_path;
  std::vector<std::string> files;

  auto* sweep_cmd = app.add_subcommand("sweep", "Run the experiment sweep from a config file");
  sweep_cmd->add_option("config", config_path, "Config file")->required();

  auto* cluster_cmd = app.add_subcommand("cluster", "Cluster series files");
  cluster_cmd->add_option("config", config_path, "Config file")->required();
  cluster_cmd->add_option("files", files, "Series files")->required()->expected(-2);

  auto* theory_cmd = app.add_subcommand("theory", "Evaluate the clustering condition");
  theory_cmd->add_option("config", config_path, "Config file")->required();

  app.add_subcommand("validate-bounds", "Monte-Carlo checks of the analytic bounds");

  CLI11_PARSE(app, argc, argv);
  opts.seed_set = seed_opt->count() > 0;

  try {
    if (sweep_cmd->parsed()) {
      const psdclust::ExperimentConfig config = load_config(config_path, opts);
      const auto cells = psdclust::run_sweep(config, effective_threads(opts));
      std::ostringstream out;
      psdclust::write_sweep_csv(out, config, cells);
      emit(opts, out.str());
    } else if (cluster_cmd->parsed()) {
      const psdclust::ExperimentConfig config = load_config(config_path, opts);
      const psdclust::FileClusterResult result = psdclust::cluster_files(files, config);
      std::ostringstream out;
      psdclust::write_cluster_csv(out, config, files, result);
      emit(opts, out.str());
    } else if (theory_cmd->parsed()) {
      const psdclust::ExperimentConfig config = load_config(config_path, opts);
      std::ostringstream out;
      psdclust::write_condition_csv(out, config);
      emit(opts, out.str());
    } else {
      run_validate_bounds(opts);
    }
  } catch (const psdclust::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfigError;
  } catch (const psdclust::DataError& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return kExitDataError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
