#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <thread>

#include "field_io.hpp"
#include "topology.hpp"

namespace wigcur {

namespace fs = std::filesystem;

namespace {

std::string pair_tag(int i) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%03d", i);
  return buf;
}

struct Workspace {
  fs::path out_dir;
  RunManifest manifest;
  std::mutex manifest_mutex;

  std::string path_of(const std::string& rel) const { return (out_dir / rel).string(); }

  void record(const std::string& rel, uint64_t hash) {
    std::lock_guard<std::mutex> lock(manifest_mutex);
    manifest.outputs.push_back(ManifestEntry{rel, hash});
  }
};

void parallel_pairs(int n, int threads, const std::function<void(int)>& body,
                    const char* stage) {
  std::mutex err_mutex;
  std::string first_error;
  auto guarded = [&](int i) {
    try {
      body(i);
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (first_error.empty()) first_error = "pair " + std::to_string(i) + ": " + e.what();
    }
  };
  if (threads <= 1) {
    for (int i = 0; i < n && first_error.empty(); ++i) guarded(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min(threads, n); ++t) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) guarded(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  if (!first_error.empty()) throw PipelineError(stage, first_error);
}

struct SnapshotIndexRow {
  int index = 0;
  double tau = 0.0;
  double power_mw = 0.0;
  std::string file;
};

std::vector<SnapshotIndexRow> read_snapshot_index(const Workspace& ws, const char* stage) {
  std::vector<SnapshotIndexRow> rows;
  std::string text;
  try {
    text = read_text_file(ws.path_of("snapshots.txt"));
  } catch (const std::exception& e) {
    throw PipelineError(stage, std::string("snapshot index not found (run simulate first): ") +
                                   e.what());
  }
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    SnapshotIndexRow row;
    char file_buf[256];
    if (std::sscanf(line.c_str(), "%d %lf %lf %255s", &row.index, &row.tau, &row.power_mw,
                    file_buf) != 4) {
      throw PipelineError(stage, "malformed snapshots.txt line: " + line);
    }
    row.file = file_buf;
    rows.push_back(row);
  }
  if (rows.size() < 2) throw PipelineError(stage, "snapshot index holds fewer than two entries");
  return rows;
}

std::vector<TimedField> load_snapshots(const Workspace& ws,
                                       const std::vector<SnapshotIndexRow>& index) {
  std::vector<TimedField> fields;
  fields.reserve(index.size());
  for (const auto& row : index) {
    TimedField tf;
    tf.tau = row.tau;
    tf.w = read_scalar_field(ws.path_of(row.file));
    fields.push_back(std::move(tf));
  }
  return fields;
}

void stage_simulate(const RunConfig& cfg, Workspace& ws) {
  std::vector<Snapshot> snaps;
  try {
    snaps = snapshot_sequence(cfg.scenario);
  } catch (const std::exception& e) {
    throw PipelineError("simulate", e.what());
  }
  std::string index = "# columns: index tau power_mw file\n";
  for (size_t j = 0; j < snaps.size(); ++j) {
    const std::string rel = "w_" + pair_tag(static_cast<int>(j)) + ".field";
    FieldFileMeta meta;
    meta.name = "W_" + pair_tag(static_cast<int>(j));
    meta.provenance = "gaussian-mixture";
    const uint64_t h = write_scalar_field(snaps[j].w, meta, ws.path_of(rel));
    ws.record(rel, h);
    index += std::to_string(j) + " " + format_g9(snaps[j].tau) + " " +
             format_g9(snaps[j].power_mw) + " " + rel + "\n";
  }
  ws.record("snapshots.txt", write_text_file(index, ws.path_of("snapshots.txt")));
}

void stage_reconstruct(const RunConfig& cfg, Workspace& ws, bool zero, bool fitted,
                       int threads) {
  const auto index = read_snapshot_index(ws, "reconstruct");
  const std::vector<TimedField> snaps = load_snapshots(ws, index);
  const int n_pairs = static_cast<int>(snaps.size()) - 1;

  // The ideal squeezer current fitted to each pair is mode-independent.
  std::vector<VectorField> jsys_fields(n_pairs);
  parallel_pairs(
      n_pairs, threads,
      [&](int i) {
        jsys_fields[i] = fitted_jsys(snaps[i].w, snaps[i + 1].w, snaps[i + 1].tau - snaps[i].tau);
      },
      "reconstruct");
  for (int i = 0; i < n_pairs; ++i) {
    const std::string rel = "j_sys_" + pair_tag(i) + ".field";
    FieldFileMeta meta;
    meta.name = "J_sys_" + pair_tag(i);
    meta.provenance = "fitted-pure-squeezed";
    ws.record(rel, write_vector_field(jsys_fields[i], meta, ws.path_of(rel)));
  }

  struct ModeRun {
    InitMode mode;
    const char* tag;
  };
  std::vector<ModeRun> modes;
  if (zero) modes.push_back({InitMode::kZero, "zero"});
  if (fitted) modes.push_back({InitMode::kFittedJsys, "fitted"});

  for (const ModeRun& run : modes) {
    std::vector<ReconstructionResult> results;
    try {
      results = reconstruct_sequence(snaps, run.mode, cfg.solve, threads);
    } catch (const std::exception& e) {
      throw PipelineError("reconstruct", std::string(run.tag) + ": " + e.what());
    }
    std::string table = "# columns: pair d_tau objective_l1 residual_inf min_reduced_cost "
                        "iterations\n";
    for (int i = 0; i < n_pairs; ++i) {
      const ReconstructionResult& r = results[i];
      const std::string tag = pair_tag(i);
      FieldFileMeta meta;
      meta.provenance = "reconstructed";
      meta.name = std::string("J_exp_") + run.tag + "_" + tag;
      const std::string exp_rel = std::string("j_exp_") + run.tag + "_" + tag + ".field";
      ws.record(exp_rel, write_vector_field(r.j_exp, meta, ws.path_of(exp_rel)));

      VectorField extracted = r.j_exp;
      for (size_t k = 0; k < extracted.jx.size(); ++k) {
        extracted.jx[k] -= jsys_fields[i].jx[k];
        extracted.jp[k] -= jsys_fields[i].jp[k];
      }
      meta.name = std::string("J_env_extracted_") + run.tag + "_" + tag;
      meta.scale_factor = cfg.display.env;
      const std::string env_rel =
          std::string("j_env_extracted_") + run.tag + "_" + tag + ".field";
      ws.record(env_rel, write_vector_field(extracted, meta, ws.path_of(env_rel)));

      table += std::to_string(i) + " " + format_g9(snaps[i + 1].tau - snaps[i].tau) + " " +
               format_g9(r.objective_value) + " " + format_g9(r.residual_inf) + " " +
               format_g9(r.min_reduced_cost) + " " + std::to_string(r.iterations) + "\n";
    }
    const std::string table_rel = std::string("reconstruction_") + run.tag + ".txt";
    ws.record(table_rel, write_text_file(table, ws.path_of(table_rel)));
  }
}

void stage_analyze(const RunConfig& cfg, Workspace& ws, bool zero, bool fitted, int threads) {
  const auto index = read_snapshot_index(ws, "analyze");
  const std::vector<TimedField> snaps = load_snapshots(ws, index);
  const int n_snaps = static_cast<int>(snaps.size());
  const int n_pairs = n_snaps - 1;
  const Grid& g = snaps[0].w.grid;

  // Environment current family from each snapshot's W. File-loaded fields
  // carry no Gaussian provenance, so gradients are lattice differences,
  // consistent with the reconstruction discretization.
  for (int j = 0; j < n_snaps; ++j) {
    const std::string tag = pair_tag(j);
    VectorField damp = j_damp(snaps[j].w, cfg.scenario.env);
    VectorField diff = j_diff(snaps[j].w, cfg.scenario.env);
    VectorField env = damp;
    for (size_t k = 0; k < env.jx.size(); ++k) {
      env.jx[k] += diff.jx[k];
      env.jp[k] += diff.jp[k];
    }
    FieldFileMeta meta;
    meta.provenance = "derived";
    meta.name = "J_damp_" + tag;
    meta.scale_factor = cfg.display.damp;
    ws.record("j_damp_" + tag + ".field",
              write_vector_field(damp, meta, ws.path_of("j_damp_" + tag + ".field")));
    meta.name = "J_diff_" + tag;
    meta.scale_factor = cfg.display.diff;
    ws.record("j_diff_" + tag + ".field",
              write_vector_field(diff, meta, ws.path_of("j_diff_" + tag + ".field")));
    meta.name = "J_env_" + tag;
    meta.scale_factor = cfg.display.env;
    ws.record("j_env_" + tag + ".field",
              write_vector_field(env, meta, ws.path_of("j_env_" + tag + ".field")));
  }

  // Origin charge of every reconstructed current, then stagnation scans of
  // the final pair in each mode.
  const double loop_radius = cfg.topology.loop_radius_cells * std::max(g.hx, g.hp);
  const Loop origin_loop{Vec2{0.0, 0.0}, loop_radius, cfg.topology.loop_samples};
  std::string report = "# origin loop radius " + format_g9(loop_radius) + ", " +
                       std::to_string(cfg.topology.loop_samples) + " samples\n";
  report += "# columns: mode pair origin_charge\n";
  std::vector<const char*> tags;
  if (zero) tags.push_back("zero");
  if (fitted) tags.push_back("fitted");
  for (const char* tag : tags) {
    std::vector<int> charges(n_pairs, 0);
    parallel_pairs(
        n_pairs, threads,
        [&](int i) {
          const std::string rel = std::string("j_exp_") + tag + "_" + pair_tag(i) + ".field";
          VectorField j_exp;
          try {
            j_exp = read_vector_field(ws.path_of(rel));
          } catch (const std::exception& e) {
            throw std::runtime_error(std::string("missing reconstruction output (run "
                                                 "reconstruct first): ") +
                                     e.what());
          }
          charges[i] = winding_number(j_exp, origin_loop);
        },
        "analyze");
    for (int i = 0; i < n_pairs; ++i) {
      report += std::string(tag) + " " + std::to_string(i) + " " + std::to_string(charges[i]) +
                "\n";
    }
  }
  for (const char* tag : tags) {
    const std::string rel = std::string("j_exp_") + tag + "_" + pair_tag(n_pairs - 1) + ".field";
    const VectorField j_exp = read_vector_field(ws.path_of(rel));
    const StagnationReport sr = find_stagnation_points(j_exp, cfg.topology.floor_frac);
    report += std::string("# stagnation points, mode ") + tag + ", final pair (x p charge):\n";
    for (const StagnationPoint& pt : sr.points) {
      report += "point " + std::string(tag) + " " + format_g9(pt.x) + " " + format_g9(pt.p) +
                " " + std::to_string(pt.charge) + "\n";
    }
  }
  ws.record("topology.txt", write_text_file(report, ws.path_of("topology.txt")));
}

void stage_report(const RunConfig& cfg, Workspace& ws) {
  const auto index = read_snapshot_index(ws, "report");
  const std::vector<TimedField> snaps = load_snapshots(ws, index);
  std::string table =
      "# columns: index power_mw tau r_fit squeezing_db antisqueezing_db purity "
      "normalization_defect\n";
  for (size_t j = 0; j < snaps.size(); ++j) {
    double defect = 0.0;
    const double purity = purity_of_field(snaps[j].w, &defect);
    const double r = std::max(0.0, fitted_r(snaps[j].w));
    const DbLevels db = degraded_db_levels(r, cfg.noise);
    table += std::to_string(j) + " " + format_g9(index[j].power_mw) + " " +
             format_g9(index[j].tau) + " " + format_g9(r) + " " + format_g9(db.squeezing_db) +
             " " + format_g9(db.antisqueezing_db) + " " + format_g9(purity) + " " +
             format_g9(defect) + "\n";
    if (defect > 1e-3) {
      table += "# warning: snapshot " + std::to_string(j) +
               " normalization defect exceeds 1e-3; purity estimate unreliable\n";
    }
  }
  ws.record("db_purity.txt", write_text_file(table, ws.path_of("db_purity.txt")));
}

std::string render_manifest(const RunManifest& m) {
  std::string out = "# wigcur run manifest\n";
  out += std::string("version: ") + kToolkitVersion + "\n";
  out += "config: " + m.config_path + "\n";
  char hash_buf[24];
  std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                static_cast<unsigned long long>(m.config_hash));
  out += std::string("config_hash: fnv1a:") + hash_buf + "\n";
  out += "stages:";
  for (const std::string& s : m.stages) out += " " + s;
  out += "\n";
  for (const ManifestEntry& e : m.outputs) {
    std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                  static_cast<unsigned long long>(e.hash));
    out += "output: " + e.file + " fnv1a:" + hash_buf + "\n";
  }
  for (const auto& [stage, ms] : m.stage_walltime_ms) {
    out += "walltime_ms: " + stage + "=" + std::to_string(ms) + " threads=" +
           std::to_string(m.threads) + "\n";
  }
  return out;
}

}  // namespace

std::string manifest_stable_view(const std::string& manifest_text) {
  std::istringstream in(manifest_text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("walltime_ms:", 0) == 0) continue;
    out += line + "\n";
  }
  return out;
}

RunManifest run_scenario(const RunConfig& config, const std::string& config_path,
                         const std::string& out_dir, unsigned stages,
                         const std::string& mode_override, int threads) {
  bool zero = config.run_zero;
  bool fitted = config.run_fitted;
  if (mode_override == "zero") {
    zero = true;
    fitted = false;
  } else if (mode_override == "fitted") {
    zero = false;
    fitted = true;
  } else if (!mode_override.empty()) {
    throw PipelineError("setup", "unknown init mode override '" + mode_override + "'");
  }
  if (threads < 1) threads = 1;

  Workspace ws;
  ws.out_dir = out_dir;
  std::error_code ec;
  fs::create_directories(ws.out_dir, ec);
  if (ec) throw PipelineError("setup", "cannot create output directory: " + ec.message());

  ws.manifest.config_path = config_path;
  ws.manifest.config_hash = fnv1a64(read_text_file(config_path));
  ws.manifest.threads = threads;

  struct StageDef {
    unsigned bit;
    const char* name;
    std::function<void()> fn;
  };
  const std::vector<StageDef> defs = {
      {kStageSimulate, "simulate", [&] { stage_simulate(config, ws); }},
      {kStageReconstruct, "reconstruct",
       [&] { stage_reconstruct(config, ws, zero, fitted, threads); }},
      {kStageAnalyze, "analyze", [&] { stage_analyze(config, ws, zero, fitted, threads); }},
      {kStageReport, "report", [&] { stage_report(config, ws); }},
  };
  for (const StageDef& def : defs) {
    if (!(stages & def.bit)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    def.fn();
    const auto t1 = std::chrono::steady_clock::now();
    ws.manifest.stages.push_back(def.name);
    ws.manifest.stage_walltime_ms.emplace_back(
        def.name, std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
  }

  const std::string manifest_text = render_manifest(ws.manifest);
  write_text_file(manifest_text, ws.path_of("manifest.txt"));
  return ws.manifest;
}

}  // namespace wigcur
