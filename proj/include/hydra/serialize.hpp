#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hydra/model.hpp"
#include "hydra/transform.hpp"

namespace hydra {

// Provenance block echoed into every output file: tool version plus the
// resolved configuration and seeds. Deliberately carries no timestamps so
// reruns with equal inputs produce byte-identical files.
struct RunManifest {
  std::string tool = "hydra";
  std::string version;           // HYDRA_VERSION_STRING
  std::string command;           // subcommand or API entry point
  std::map<std::string, std::string> params;  // resolved flags/seeds, key -> value
};

// JSON containers are versioned ({"format": ..., "version": 1}) and store
// doubles with shortest round-trip encoding, so round-trips are exact.
void save_bank(const KernelBank& bank, const std::string& path, const RunManifest& manifest);
KernelBank load_bank(const std::string& path);

void save_model(const Model& model, const std::string& path, const RunManifest& manifest);
Model load_model(const std::string& path);

void save_features_json(const FeatureMatrix& features, const std::string& path,
                        const RunManifest& manifest);
FeatureMatrix load_features_json(const std::string& path);

// CSV with '#'-prefixed manifest header lines, then canonical feature names.
void save_features_csv(const FeatureMatrix& features, const std::string& path,
                       const RunManifest& manifest);

// "index,predicted_label,score_0..score_{C-1}" with manifest header lines.
void save_predictions_csv(const std::string& path, const RunManifest& manifest,
                          const std::vector<int>& predicted,
                          const std::vector<double>& scores,
                          const std::vector<std::string>& class_names);

// Shortest-round-trip decimal encoding for a double (std::to_chars).
std::string format_double(double v);

}  // namespace hydra
