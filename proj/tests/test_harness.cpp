#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "psdclust/config.hpp"
#include "psdclust/genmodel.hpp"
#include "psdclust/loader.hpp"
#include "psdclust/sweep.hpp"

using namespace psdclust;

namespace {

const std::string kBaseConfig =
    "model = ar2 0.6 0.7pi\n"
    "model = ar2 0.6 0.4pi\n"
    "n_per_model = 4\n"
    "M = 300\n"
    "sigma = 0.2\n"
    "p = 1\n"
    "window = bartlett 51\n"
    "metric = L1\n"
    "algorithm = nnpc\n"
    "q = 3\n"
    "L = 2\n"
    "trials = 2\n"
    "master_seed = 11\n";

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("psdclust_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string sweep_csv(const ExperimentConfig& config, int threads) {
  std::ostringstream out;
  write_sweep_csv(out, config, run_sweep(config, threads));
  return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig config = parse_config_text(kBaseConfig, "test.cfg");
  CHECK(config.models.size() == 2);
  CHECK(config.models[0].pole_radius == doctest::Approx(0.6));
  CHECK(config.models[0].pole_angle == doctest::Approx(0.7 * std::numbers::pi));
  CHECK(config.obs_len == 300);
  CHECK(config.window_len == 51);
  CHECK(config.algorithm == Algorithm::Nnpc);
  CHECK(config.num_neighbors == 3);
  CHECK(config.trials == 2);
  CHECK_FALSE(config.use_eigengap);
}

TEST_CASE("config errors carry the offending line") {
  SUBCASE("unknown key") {
    try {
      parse_config_text(kBaseConfig + "bogus = 1\n", "test.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
      CHECK(std::string(err.what()).find("test.cfg:14") != std::string::npos);
      CHECK(std::string(err.what()).find("bogus") != std::string::npos);
    }
  }

  SUBCASE("bad value") {
    try {
      parse_config_text("model = ar2 0.6 0.7pi\nM = twelve\n", "test.cfg");
      FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
      CHECK(std::string(err.what()).find(":2") != std::string::npos);
    }
  }

  SUBCASE("duplicate scalar key") {
    CHECK_THROWS_AS(parse_config_text(kBaseConfig + "M = 400\n", "t"), ConfigError);
  }

  SUBCASE("p out of range") {
    CHECK_THROWS_AS(parse_config_text(kBaseConfig + "p = 1.5\n", "t"), ConfigError);
  }

  SUBCASE("eigengap is only available for graph algorithms") {
    std::string text = kBaseConfig;
    text.replace(text.find("L = 2"), 5, "L = eigengap");
    CHECK_NOTHROW(parse_config_text(text, "t"));
    text.replace(text.find("algorithm = nnpc"), 16, "algorithm = km  ");
    CHECK_THROWS_AS(parse_config_text(text, "t"), ConfigError);
  }

  SUBCASE("sweep axes must be distinct and at most two") {
    CHECK_THROWS_AS(
        parse_config_text(kBaseConfig + "sweep = sigma 0.1\nsweep = sigma 0.5\n", "t"),
        ConfigError);
    CHECK_THROWS_AS(parse_config_text(kBaseConfig + "sweep = sigma 0.1\nsweep = M 200\n" +
                                          "sweep = inv_p 1 2\n",
                                      "t"),
                    ConfigError);
  }

  SUBCASE("angles accept the pi suffix") {
    const ExperimentConfig config =
        parse_config_text(kBaseConfig + "sweep = nu2 0.5pi 1.2\n", "t");
    CHECK(config.sweep[0].values[0] == doctest::Approx(0.5 * std::numbers::pi));
    CHECK(config.sweep[0].values[1] == doctest::Approx(1.2));
  }
}

TEST_CASE("models are optional until a sweep needs them") {
  // file clustering does not involve generative models
  const std::string no_models =
      "M = 300\nwindow = bartlett 51\nalgorithm = nnpc\nq = 2\nL = 2\n";
  const ExperimentConfig config = parse_config_text(no_models, "t");
  CHECK(config.models.empty());
  CHECK_THROWS_AS(run_sweep(config, 1), ConfigError);
}

TEST_CASE("config hash is stable and content-sensitive") {
  const ExperimentConfig a = parse_config_text(kBaseConfig, "a");
  const ExperimentConfig b = parse_config_text(kBaseConfig + "# comment\n", "b");
  CHECK(config_hash(a) == config_hash(b));
  const ExperimentConfig c = parse_config_text(kBaseConfig + "normalize = true\n", "c");
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("series loading") {
  TempDir dir;

  SUBCASE("plain column") {
    write_file(dir.file("x.txt"), "1.0\n2.0\n");
    const Observation obs = load_series(dir.file("x.txt"), SeriesFormat::OneColumnText);
    CHECK(obs.samples == std::vector<double>{1.0, 2.0});
    CHECK(obs.mask.size() == 2);
  }

  SUBCASE("parse failure cites the line") {
    write_file(dir.file("bad.txt"), "1.0\n2.0\nabc\n4.0\n");
    try {
      load_series(dir.file("bad.txt"), SeriesFormat::OneColumnText);
      FAIL("expected DataError");
    } catch (const DataError& err) {
      CHECK(std::string(err.what()).find(":3") != std::string::npos);
    }
  }

  SUBCASE("non-finite values are rejected") {
    write_file(dir.file("inf.txt"), "1.0\ninf\n");
    CHECK_THROWS_AS(load_series(dir.file("inf.txt"), SeriesFormat::OneColumnText), DataError);
    write_file(dir.file("nan.txt"), "nan\n1.0\n");
    CHECK_THROWS_AS(load_series(dir.file("nan.txt"), SeriesFormat::OneColumnText), DataError);
  }

  SUBCASE("csv column with header") {
    write_file(dir.file("d.csv"), "t,value\n0,1.5\n1,2.5\n2,3.5\n");
    const Observation obs = load_series(dir.file("d.csv"), SeriesFormat::CsvColumn, 1, true);
    CHECK(obs.samples == std::vector<double>{1.5, 2.5, 3.5});
  }

  SUBCASE("missing csv column is reported") {
    write_file(dir.file("e.csv"), "1,2\n3\n");
    CHECK_THROWS_AS(load_series(dir.file("e.csv"), SeriesFormat::CsvColumn, 1), DataError);
  }

  SUBCASE("centering subtracts the mean") {
    write_file(dir.file("c.txt"), "1.0\n3.0\n");
    const Observation obs =
        load_series(dir.file("c.txt"), SeriesFormat::OneColumnText, 0, false, true);
    CHECK(obs.samples == std::vector<double>{-1.0, 1.0});
  }

  SUBCASE("save then load round-trips exactly") {
    const GenerativeModel model = ar2_model(0.7, 1.3, 1 << 14, 256);
    const Observation obs = sample_ar2(model, 200, 77);
    save_series(dir.file("rt.txt"), obs);
    const Observation loaded = load_series(dir.file("rt.txt"), SeriesFormat::OneColumnText);
    CHECK(loaded.samples == obs.samples);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_series(dir.file("nope.txt"), SeriesFormat::OneColumnText), DataError);
  }
}

TEST_CASE("sweep output is deterministic and thread-independent") {
  const ExperimentConfig config = parse_config_text(kBaseConfig, "cfg");
  const std::string serial = sweep_csv(config, 1);
  CHECK(sweep_csv(config, 1) == serial);
  CHECK(sweep_csv(config, 4) == serial);
  CHECK(serial.find("config_hash=") != std::string::npos);
  CHECK(serial.find("model_distance,mean_ce,std_ce,trials") != std::string::npos);
}

TEST_CASE("sweep headers name the axes") {
  const ExperimentConfig config =
      parse_config_text(kBaseConfig + "sweep = sigma 0.1 0.3\nsweep = inv_p 1 2\n", "cfg");
  const std::string csv = sweep_csv(config, 2);
  CHECK(csv.find("sigma,inv_p,model_distance,mean_ce,std_ce,trials") != std::string::npos);
  // 2 x 2 grid -> four data rows
  int rows = 0;
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#' && line.find("mean_ce") == std::string::npos) ++rows;
  }
  CHECK(rows == 4);
}

TEST_CASE("longer observations do not hurt the easy regime") {
  std::string text = kBaseConfig;
  text.replace(text.find("model = ar2 0.6 0.4pi"), 21, "model = ar2 0.6 0.62pi");
  text.replace(text.find("sigma = 0.2"), 11, "sigma = 0.5");
  text.replace(text.find("n_per_model = 4"), 15, "n_per_model = 8");
  text.replace(text.find("window = bartlett 51"), 20, "window = bartlett 101");
  const ExperimentConfig config =
      parse_config_text(text + "sweep = M 200 2000\n", "cfg");
  const auto cells = run_sweep(config, 2);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].axis_values[0] == doctest::Approx(200.0));
  CHECK(cells[1].mean_ce <= cells[0].mean_ce);
  CHECK(cells[0].model_distance == doctest::Approx(0.2).epsilon(0.05));
}

TEST_CASE("condition report csv") {
  const ExperimentConfig config = parse_config_text(kBaseConfig, "cfg");
  std::ostringstream out;
  write_condition_csv(out, config);
  const std::string csv = out.str();
  CHECK(csv.find("config_hash=") != std::string::npos);
  CHECK(csv.find("min_model_distance,rhs,mu_max,satisfied,margin") != std::string::npos);
  // experiment-scale constants leave the condition unsatisfied
  CHECK(csv.find(",0,-") != std::string::npos);
}

TEST_CASE("tabulated model files mix with resonator models") {
  TempDir dir;
  // smooth unit-power bump, power-of-two grid
  std::ostringstream psd_text;
  psd_text << std::setprecision(17);
  const std::size_t grid = 4096;
  for (std::size_t k = 0; k < grid; ++k) {
    psd_text << 1.0 + 0.9 * std::cos(2.0 * std::numbers::pi * 3.0 * static_cast<double>(k) /
                                     static_cast<double>(grid))
             << "\n";
  }
  write_file(dir.file("tab.txt"), psd_text.str());

  std::string text = kBaseConfig;
  text.replace(text.find("model = ar2 0.6 0.4pi"), 21,
               "model = file " + dir.file("tab.txt"));
  ExperimentConfig config = parse_config_text(text, "cfg");
  config.obs_len = 800;
  config.window_len = 101;

  const auto models = build_models(config);
  CHECK(models[0].psd.grid_size() == grid);  // resonator follows the file grid
  CHECK(models[1].psd.grid_size() == grid);
  CHECK_FALSE(models[1].ar2.has_value());

  const auto cells = run_sweep(config, 2);
  CHECK(cells.at(0).mean_ce <= 0.5);
  CHECK(cells.at(0).model_distance > 0.1);

  SUBCASE("the exact sampler caps the observation length") {
    config.obs_len = 4000;
    CHECK_THROWS_AS(run_sweep(config, 1), ConfigError);
  }
}

TEST_CASE("cluster files end to end") {
  TempDir dir;
  const GenerativeModel first = ar2_model(0.6, 0.7 * std::numbers::pi, 1 << 14, 1024);
  const GenerativeModel second = ar2_model(0.6, 0.4 * std::numbers::pi, 1 << 14, 1024);
  std::vector<std::string> paths;
  for (int i = 0; i < 3; ++i) {
    const std::string path = dir.file("a" + std::to_string(i) + ".txt");
    save_series(path, sample_ar2(first, 2000, 100 + i));
    paths.push_back(path);
  }
  for (int i = 0; i < 3; ++i) {
    const std::string path = dir.file("b" + std::to_string(i) + ".txt");
    save_series(path, sample_ar2(second, 2000, 200 + i));
    paths.push_back(path);
  }

  ExperimentConfig config = parse_config_text(kBaseConfig, "cfg");
  config.window_len = 101;
  config.num_neighbors = 2;

  SUBCASE("distinct models land in distinct clusters") {
    const FileClusterResult result = cluster_files(paths, config);
    REQUIRE(result.assignments.size() == 6);
    CHECK(result.assignments[0] == result.assignments[1]);
    CHECK(result.assignments[0] == result.assignments[2]);
    CHECK(result.assignments[3] == result.assignments[4]);
    CHECK(result.assignments[3] == result.assignments[5]);
    CHECK(result.assignments[0] != result.assignments[3]);
    CHECK_FALSE(result.ce.has_value());
    CHECK(result.eigenvalues.size() == 6);
  }

  SUBCASE("labels file adds CE and entropy") {
    write_file(dir.file("labels.txt"), "1\n1\n1\n2\n2\n2\n");
    config.labels_file = dir.file("labels.txt");
    const FileClusterResult result = cluster_files(paths, config);
    REQUIRE(result.ce.has_value());
    CHECK(*result.ce == doctest::Approx(0.0));
    CHECK(*result.entropy == doctest::Approx(0.0));

    std::ostringstream out;
    write_cluster_csv(out, config, paths, result);
    CHECK(out.str().find("path,cluster") != std::string::npos);
    CHECK(out.str().find("# ce,") != std::string::npos);
    CHECK(out.str().find("# entropy,") != std::string::npos);
  }

  SUBCASE("identical file twice with one cluster") {
    ExperimentConfig single = config;
    single.num_clusters = 1;
    single.num_neighbors = 1;
    const FileClusterResult result = cluster_files({paths[0], paths[0]}, single);
    CHECK(result.assignments == std::vector<int>{0, 0});
  }

  SUBCASE("label count mismatch is a data error") {
    write_file(dir.file("short.txt"), "1\n2\n");
    config.labels_file = dir.file("short.txt");
    CHECK_THROWS_AS(cluster_files(paths, config), DataError);
  }
}
