#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hydra/model.hpp"
#include "hydra/serialize.hpp"
#include "hydra/version.hpp"
#include "synthetic.hpp"

using namespace hydra;

TEST_SUITE_BEGIN("serialize");

namespace {

std::string tmp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

RunManifest manifest() {
  RunManifest m;
  m.version = HYDRA_VERSION_STRING;
  m.command = "test";
  return m;
}

}  // namespace

TEST_CASE("bank round-trips exactly") {
  HydraConfig config;
  config.k = 3;
  config.g = 4;
  auto bank = generate_bank(config, 64);
  const auto path = tmp_path("hydra_bank.json");
  save_bank(bank, path, manifest());
  auto loaded = load_bank(path);
  CHECK(loaded == bank);

  // Re-saving the loaded bank produces identical bytes.
  const auto path2 = tmp_path("hydra_bank2.json");
  save_bank(loaded, path2, manifest());
  CHECK(slurp(path) == slurp(path2));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("model round-trips to identical predictions and bytes") {
  auto train = synth::sine_pulse(24, 60, 5);
  HydraConfig config;
  config.k = 2;
  config.g = 4;
  auto model = fit_model(train, config);

  const auto path = tmp_path("hydra_model.json");
  save_model(model, path, manifest());
  auto loaded = load_model(path);

  auto test = synth::sine_pulse(10, 60, 6);
  CHECK(model_predict(model, test) == model_predict(loaded, test));

  const auto path2 = tmp_path("hydra_model2.json");
  save_model(loaded, path2, manifest());
  CHECK(slurp(path) == slurp(path2));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("logistic model round-trips its protocol and log") {
  auto train = synth::sine_pulse(60, 30, 7);
  HydraConfig config;
  config.k = 2;
  config.g = 2;
  FitOptions options;
  options.classifier = "logistic";
  options.protocol.validation_size = 8;
  options.protocol.minibatch = 8;
  options.protocol.max_epochs = 3;
  options.protocol.stop_patience = 1000;
  auto model = fit_model(train, config, options);

  const auto path = tmp_path("hydra_logistic.json");
  save_model(model, path, manifest());
  auto loaded = load_model(path);
  REQUIRE(!loaded.is_ridge());
  const auto& a = std::get<LogisticModel>(model.classifier);
  const auto& b = std::get<LogisticModel>(loaded.classifier);
  CHECK(a.protocol == b.protocol);
  CHECK(a.log.epoch_val_loss == b.log.epoch_val_loss);
  CHECK(a.weights == b.weights);
  std::remove(path.c_str());
}

TEST_CASE("features round-trip via the JSON container") {
  auto data = synth::random_dataset(4, 32, 3);
  HydraConfig config;
  config.k = 2;
  config.g = 2;
  auto bank = generate_bank(config, 32);
  auto features = transform(data, bank, config);

  const auto path = tmp_path("hydra_features.json");
  save_features_json(features, path, manifest());
  auto loaded = load_features_json(path);
  CHECK(loaded.values == features.values);
  CHECK(loaded.layout == features.layout);
  std::remove(path.c_str());
}

TEST_CASE("features CSV carries manifest header and canonical names") {
  auto data = synth::random_dataset(2, 16, 4);
  HydraConfig config;
  config.k = 1;
  config.g = 2;
  auto bank = generate_bank(config, 16);
  auto features = transform(data, bank, config);

  const auto path = tmp_path("hydra_features.csv");
  save_features_csv(features, path, manifest());
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# tool: hydra", 0) == 0);
  while (std::getline(in, line) && line[0] == '#') {
  }
  CHECK(line.rfind("d1_g0_smax_0,", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("truncated model file fails cleanly") {
  auto train = synth::sine_pulse(16, 40, 2);
  HydraConfig config;
  config.k = 1;
  config.g = 2;
  config.count_min = CountMode::off;
  config.clip = true;
  auto model = fit_model(train, config);
  const auto path = tmp_path("hydra_trunc.json");
  save_model(model, path, manifest());
  auto bytes = slurp(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<long>(bytes.size() / 2));
  out.close();
  CHECK_THROWS_AS(load_model(path), Error);
  std::remove(path.c_str());
}

TEST_SUITE_END();
