#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenario_config.hpp"

namespace wigcur {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct PipelineError : std::runtime_error {
  std::string stage;
  PipelineError(std::string stage_name, const std::string& message)
      : std::runtime_error("[" + stage_name + "] " + message), stage(std::move(stage_name)) {}
};

enum StageMask : unsigned {
  kStageSimulate = 1u << 0,
  kStageReconstruct = 1u << 1,
  kStageAnalyze = 1u << 2,
  kStageReport = 1u << 3,
  kStageAll = kStageSimulate | kStageReconstruct | kStageAnalyze | kStageReport,
};

struct ManifestEntry {
  std::string file;  // relative to the output directory
  uint64_t hash = 0;
};

struct RunManifest {
  std::string config_path;
  uint64_t config_hash = 0;
  std::vector<std::string> stages;
  std::vector<std::pair<std::string, long>> stage_walltime_ms;
  std::vector<ManifestEntry> outputs;
  int threads = 1;
};

// Runs the selected stages against out_dir. Stages communicate through the
// files they write, so any stage can be re-run alone against an existing
// output directory. mode_override narrows init_modes from the config
// ("zero" or "fitted"; empty keeps the config's selection). Writes
// manifest.txt listing every file produced by this invocation with its
// content hash; wall-time lines are prefixed "walltime_ms:" so manifests
// can be compared net of timing.
RunManifest run_scenario(const RunConfig& config, const std::string& config_path,
                         const std::string& out_dir, unsigned stages,
                         const std::string& mode_override = "", int threads = 1);

// Manifest text with the volatile wall-time lines removed.
std::string manifest_stable_view(const std::string& manifest_text);

}  // namespace wigcur
