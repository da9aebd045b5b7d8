#include "hydra/serialize.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

namespace hydra {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

json manifest_json(const RunManifest& m) {
  json j{{"tool", m.tool}, {"version", m.version}, {"command", m.command}};
  for (const auto& [k, v] : m.params) j["params"][k] = v;
  return j;
}

void write_manifest_comments(std::ostream& out, const RunManifest& m) {
  out << "# tool: " << m.tool << " " << m.version << "\n";
  out << "# command: " << m.command << "\n";
  for (const auto& [k, v] : m.params) out << "# " << k << ": " << v << "\n";
}

json config_json(const HydraConfig& c) {
  return json{{"k", c.k},
              {"g", c.g},
              {"seed", c.seed},
              {"count_max", count_mode_name(c.count_max)},
              {"count_min", count_mode_name(c.count_min)},
              {"clip", c.clip},
              {"use_diff", c.use_diff},
              {"batch_size", c.batch_size}};
}

HydraConfig config_from_json(const json& j) {
  HydraConfig c;
  c.k = j.at("k").get<int>();
  c.g = j.at("g").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.count_max = parse_count_mode(j.at("count_max").get<std::string>());
  c.count_min = parse_count_mode(j.at("count_min").get<std::string>());
  c.clip = j.at("clip").get<bool>();
  c.use_diff = j.at("use_diff").get<bool>();
  c.batch_size = j.at("batch_size").get<int>();
  return c;
}

json bank_json(const KernelBank& b) {
  return json{{"input_len", b.input_len},
              {"seed", b.seed},
              {"g", b.g},
              {"k", b.k},
              {"dilations", b.dilations},
              {"paddings", b.paddings},
              {"diff_group_cutoff", b.diff_group_cutoff},
              {"weights", b.weights}};
}

KernelBank bank_from_json(const json& j) {
  KernelBank b;
  b.input_len = j.at("input_len").get<int>();
  b.seed = j.at("seed").get<std::uint64_t>();
  b.g = j.at("g").get<int>();
  b.k = j.at("k").get<int>();
  b.dilations = j.at("dilations").get<std::vector<int>>();
  b.paddings = j.at("paddings").get<std::vector<int>>();
  b.diff_group_cutoff = j.at("diff_group_cutoff").get<int>();
  b.weights = j.at("weights").get<std::vector<double>>();
  const std::size_t expect = b.dilations.size() * b.kernels_per_dilation() * 9;
  if (b.weights.size() != expect)
    throw Error(Errc::parse_error, "bank weights size mismatch");
  return b;
}

json scaler_json(const ScalerStats& s) {
  return json{{"mean", s.mean}, {"stdev", s.stdev}};
}

ScalerStats scaler_from_json(const json& j) {
  ScalerStats s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stdev = j.at("stdev").get<std::vector<double>>();
  return s;
}

json layout_json(const FeatureLayout& l) {
  return json{{"g", l.g}, {"k", l.k}, {"dilations", l.dilations}, {"channels", l.channel_tags}};
}

FeatureLayout layout_from_json(const json& j) {
  FeatureLayout l;
  l.g = j.at("g").get<int>();
  l.k = j.at("k").get<int>();
  l.dilations = j.at("dilations").get<std::vector<int>>();
  l.channel_tags = j.at("channels").get<std::vector<std::string>>();
  return l;
}

json load_container(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, "'" + path + "': " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format)
    throw Error(Errc::parse_error, "'" + path + "' is not a " + format + " file");
  if (j.value("format_version", 0) != 1)
    throw Error(Errc::parse_error, "'" + path + "': unsupported format version");
  return j;
}

void dump_container(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw Error(Errc::io_error, "write failed for '" + path + "'");
}

}  // namespace

void save_bank(const KernelBank& bank, const std::string& path, const RunManifest& manifest) {
  json j{{"format", "hydra.bank"}, {"format_version", 1}, {"manifest", manifest_json(manifest)}};
  j["bank"] = bank_json(bank);
  dump_container(j, path);
}

KernelBank load_bank(const std::string& path) {
  try {
    return bank_from_json(load_container(path, "hydra.bank").at("bank"));
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, "'" + path + "': " + e.what());
  }
}

void save_model(const Model& model, const std::string& path, const RunManifest& manifest) {
  json j{{"format", "hydra.model"}, {"format_version", 1}, {"manifest", manifest_json(manifest)}};
  j["config"] = config_json(model.config);
  j["bank"] = bank_json(model.bank);
  j["class_names"] = model.class_names;
  j["normalize_input"] = model.normalize_input;
  j["trained_on"] = model.trained_on;
  if (model.is_ridge()) {
    const auto& m = std::get<RidgeModel>(model.classifier);
    j["classifier"] = json{{"type", "ridge"},
                           {"n_classes", m.n_classes},
                           {"n_features", m.n_features},
                           {"weights", m.weights},
                           {"intercepts", m.intercepts},
                           {"alpha", m.alpha},
                           {"scaler", scaler_json(m.scaler)}};
  } else {
    const auto& m = std::get<LogisticModel>(model.classifier);
    json events = json::array();
    for (const auto& e : m.log.lr_events) events.push_back({{"update", e.update}, {"lr", e.lr}});
    j["classifier"] =
        json{{"type", "logistic"},
             {"n_classes", m.n_classes},
             {"n_features", m.n_features},
             {"weights", m.weights},
             {"intercepts", m.intercepts},
             {"scaler", scaler_json(m.scaler)},
             {"protocol",
              {{"validation_size", m.protocol.validation_size},
               {"minibatch", m.protocol.minibatch},
               {"lr", m.protocol.lr},
               {"lr_patience", m.protocol.lr_patience},
               {"stop_patience", m.protocol.stop_patience},
               {"max_epochs", m.protocol.max_epochs},
               {"seed", m.protocol.seed}}},
             {"training_log",
              {{"epoch_val_loss", m.log.epoch_val_loss},
               {"lr_events", events},
               {"stop_update", m.log.stop_update},
               {"best_update", m.log.best_update},
               {"best_val_loss", m.log.best_val_loss},
               {"total_updates", m.log.total_updates}}}};
  }
  dump_container(j, path);
}

Model load_model(const std::string& path) {
  json j = load_container(path, "hydra.model");
  try {
    Model model;
    model.config = config_from_json(j.at("config"));
    model.bank = bank_from_json(j.at("bank"));
    model.class_names = j.at("class_names").get<std::vector<std::string>>();
    model.normalize_input = j.at("normalize_input").get<bool>();
    model.trained_on = j.value("trained_on", "");
    const json& c = j.at("classifier");
    const std::string type = c.at("type").get<std::string>();
    if (type == "ridge") {
      RidgeModel m;
      m.n_classes = c.at("n_classes").get<int>();
      m.n_features = c.at("n_features").get<int>();
      m.weights = c.at("weights").get<std::vector<double>>();
      m.intercepts = c.at("intercepts").get<std::vector<double>>();
      m.alpha = c.at("alpha").get<double>();
      m.scaler = scaler_from_json(c.at("scaler"));
      model.classifier = std::move(m);
    } else if (type == "logistic") {
      LogisticModel m;
      m.n_classes = c.at("n_classes").get<int>();
      m.n_features = c.at("n_features").get<int>();
      m.weights = c.at("weights").get<std::vector<double>>();
      m.intercepts = c.at("intercepts").get<std::vector<double>>();
      m.scaler = scaler_from_json(c.at("scaler"));
      const json& p = c.at("protocol");
      m.protocol.validation_size = p.at("validation_size").get<int>();
      m.protocol.minibatch = p.at("minibatch").get<int>();
      m.protocol.lr = p.at("lr").get<double>();
      m.protocol.lr_patience = p.at("lr_patience").get<int>();
      m.protocol.stop_patience = p.at("stop_patience").get<int>();
      m.protocol.max_epochs = p.at("max_epochs").get<int>();
      m.protocol.seed = p.at("seed").get<std::uint64_t>();
      const json& l = c.at("training_log");
      m.log.epoch_val_loss = l.at("epoch_val_loss").get<std::vector<double>>();
      for (const auto& e : l.at("lr_events"))
        m.log.lr_events.push_back({e.at("update").get<long>(), e.at("lr").get<double>()});
      m.log.stop_update = l.at("stop_update").get<long>();
      m.log.best_update = l.at("best_update").get<long>();
      m.log.best_val_loss = l.at("best_val_loss").get<double>();
      m.log.total_updates = l.at("total_updates").get<long>();
      model.classifier = std::move(m);
    } else {
      throw Error(Errc::parse_error, "unknown classifier type '" + type + "'");
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, "'" + path + "': " + e.what());
  }
}

void save_features_json(const FeatureMatrix& features, const std::string& path,
                        const RunManifest& manifest) {
  json j{{"format", "hydra.features"},
         {"format_version", 1},
         {"manifest", manifest_json(manifest)},
         {"rows", features.rows},
         {"cols", features.cols},
         {"layout", layout_json(features.layout)},
         {"values", features.values}};
  dump_container(j, path);
}

FeatureMatrix load_features_json(const std::string& path) {
  json j = load_container(path, "hydra.features");
  try {
    FeatureMatrix f;
    f.rows = j.at("rows").get<std::size_t>();
    f.cols = j.at("cols").get<std::size_t>();
    f.layout = layout_from_json(j.at("layout"));
    f.values = j.at("values").get<std::vector<double>>();
    if (f.values.size() != f.rows * f.cols)
      throw Error(Errc::parse_error, "feature matrix size mismatch");
    return f;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, "'" + path + "': " + e.what());
  }
}

void save_features_csv(const FeatureMatrix& features, const std::string& path,
                       const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  write_manifest_comments(out, manifest);
  for (std::size_t f = 0; f < features.cols; ++f) {
    if (f) out << ',';
    out << features.layout.feature_name(f);
  }
  out << '\n';
  for (std::size_t i = 0; i < features.rows; ++i) {
    const double* row = features.row(i);
    for (std::size_t f = 0; f < features.cols; ++f) {
      if (f) out << ',';
      out << format_double(row[f]);
    }
    out << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failed for '" + path + "'");
}

void save_predictions_csv(const std::string& path, const RunManifest& manifest,
                          const std::vector<int>& predicted, const std::vector<double>& scores,
                          const std::vector<std::string>& class_names) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  write_manifest_comments(out, manifest);
  const std::size_t C = class_names.size();
  out << "index,predicted_label";
  for (std::size_t c = 0; c < C; ++c) out << ",score_" << c;
  out << '\n';
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    out << i << ',' << class_names[predicted[i]];
    for (std::size_t c = 0; c < C; ++c) out << ',' << format_double(scores[i * C + c]);
    out << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failed for '" + path + "'");
}

}  // namespace hydra
