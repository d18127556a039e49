// Command-line front end. Links the shared C API only.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "wigner_current.h"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string init_mode;
  int threads = 1;
  int seed = 0;  // reserved; the pipeline is deterministic and seed-free
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "scenario config file")->required();
  cmd->add_option("--out", opts.out_dir, "output directory")->required();
  cmd->add_option("--init-mode", opts.init_mode, "override reconstruction init mode")
      ->check(CLI::IsMember({"zero", "fitted"}));
  cmd->add_option("--threads", opts.threads, "worker threads for per-pair stages")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "reserved; runs are deterministic without seeding");
}

int run_stages(const CommonOpts& opts, unsigned mask) {
  wc_run_config* config = nullptr;
  wc_status status = wc_run_config_load(opts.config_path.c_str(), &config);
  if (status != WC_OK) {
    std::fprintf(stderr, "wigcur: error (%s): %s\n", wc_status_name(status), wc_last_error());
    return static_cast<int>(status);
  }
  status = wc_run(config, opts.out_dir.c_str(), mask,
                  opts.init_mode.empty() ? nullptr : opts.init_mode.c_str(), opts.threads);
  wc_run_config_free(config);
  if (status != WC_OK) {
    std::fprintf(stderr, "wigcur: error (%s): %s\n", wc_status_name(status), wc_last_error());
    return static_cast<int>(status);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wigcur: Wigner distributions and phase-space currents of squeezed light"};
  app.set_version_flag("--version", std::string(wc_version()));
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    unsigned mask;
    CommonOpts opts;
    CLI::App* cmd = nullptr;
  };
  Sub subs[] = {
      {"run", "all stages: simulate, reconstruct, analyze, report", WC_STAGE_ALL, {}, nullptr},
      {"simulate", "generate the snapshot sequence", WC_STAGE_SIMULATE, {}, nullptr},
      {"reconstruct", "solve the current reconstruction for each snapshot pair",
       WC_STAGE_RECONSTRUCT, {}, nullptr},
      {"analyze", "decompose currents and evaluate stagnation topology", WC_STAGE_ANALYZE, {},
       nullptr},
      {"report", "write the noise-level and purity table", WC_STAGE_REPORT, {}, nullptr},
  };
  for (Sub& sub : subs) {
    sub.cmd = app.add_subcommand(sub.name, sub.help);
    add_common(sub.cmd, sub.opts);
  }

  CLI11_PARSE(app, argc, argv);

  for (const Sub& sub : subs) {
    if (sub.cmd->parsed()) return run_stages(sub.opts, sub.mask);
  }
  return 1;
}
