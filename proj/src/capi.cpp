#include "wigner_current.h"

#include <cstring>
#include <string>

#include "field_io.hpp"
#include "pipeline.hpp"
#include "topology.hpp"

namespace {

thread_local std::string g_last_error;

wc_status fail(wc_status code, const char* what) {
  g_last_error = what ? what : "";
  return code;
}

// Every API body runs under this wrapper so exceptions become status codes.
template <typename Fn>
wc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return WC_OK;
  } catch (const wigcur::ConfigError& e) {
    return fail(WC_ERR_CONFIG, e.what());
  } catch (const wigcur::SolverError& e) {
    return fail(WC_ERR_SOLVER, e.what());
  } catch (const wigcur::WindingError& e) {
    return fail(WC_ERR_TOPOLOGY, e.what());
  } catch (const wigcur::IoError& e) {
    return fail(WC_ERR_IO, e.what());
  } catch (const wigcur::PipelineError& e) {
    return fail(WC_ERR_INTERNAL, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(WC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(WC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(WC_ERR_INTERNAL, "unknown error");
  }
}

}  // namespace

struct wc_run_config {
  wigcur::RunConfig config;
  std::string path;
};

struct wc_grid {
  wigcur::Grid grid;
};

struct wc_field {
  wigcur::ScalarField field;
};

struct wc_current {
  wigcur::VectorField current;
};

extern "C" {

const char* wc_version(void) { return wigcur::kToolkitVersion; }

const char* wc_status_name(wc_status status) {
  switch (status) {
    case WC_OK: return "ok";
    case WC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case WC_ERR_CONFIG: return "config error";
    case WC_ERR_SOLVER: return "solver error";
    case WC_ERR_TOPOLOGY: return "topology error";
    case WC_ERR_IO: return "io error";
    case WC_ERR_NULL_HANDLE: return "null handle";
    case WC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* wc_last_error(void) { return g_last_error.c_str(); }

wc_status wc_run_config_load(const char* path, wc_run_config** out) {
  if (!path || !out) return fail(WC_ERR_NULL_HANDLE, "wc_run_config_load: null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = new wc_run_config{wigcur::load_run_config(path), path};
    *out = handle;
  });
}

void wc_run_config_free(wc_run_config* config) { delete config; }

wc_status wc_run(const wc_run_config* config, const char* out_dir, unsigned stage_mask,
                 const char* init_mode_override, int threads) {
  if (!config || !out_dir) return fail(WC_ERR_NULL_HANDLE, "wc_run: null argument");
  if ((stage_mask & WC_STAGE_ALL) == 0) {
    return fail(WC_ERR_INVALID_ARGUMENT, "wc_run: no stages selected");
  }
  return guarded([&] {
    wigcur::run_scenario(config->config, config->path, out_dir, stage_mask,
                         init_mode_override ? init_mode_override : "", threads);
  });
}

wc_status wc_grid_create(int nx, int np, double x_half, double p_half, wc_grid** out) {
  if (!out) return fail(WC_ERR_NULL_HANDLE, "wc_grid_create: null output");
  *out = nullptr;
  return guarded([&] { *out = new wc_grid{wigcur::make_grid(nx, np, x_half, p_half)}; });
}

void wc_grid_free(wc_grid* grid) { delete grid; }

wc_status wc_grid_shape(const wc_grid* grid, int* nx, int* np) {
  if (!grid) return fail(WC_ERR_NULL_HANDLE, "wc_grid_shape: null grid");
  if (nx) *nx = grid->grid.nx;
  if (np) *np = grid->grid.np;
  return WC_OK;
}

wc_status wc_grid_spacing(const wc_grid* grid, double* hx, double* hp) {
  if (!grid) return fail(WC_ERR_NULL_HANDLE, "wc_grid_spacing: null grid");
  if (hx) *hx = grid->grid.hx;
  if (hp) *hp = grid->grid.hp;
  return WC_OK;
}

wc_status wc_squeezed_thermal_wigner(const wc_grid* grid, double r, double theta, double n_bar,
                                     wc_field** out) {
  if (!grid || !out) return fail(WC_ERR_NULL_HANDLE, "wc_squeezed_thermal_wigner: null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new wc_field{wigcur::gaussian_wigner_field(
        wigcur::squeezed_thermal_state(r, theta, n_bar), grid->grid)};
  });
}

void wc_field_free(wc_field* field) { delete field; }

wc_status wc_field_values(const wc_field* field, double* buffer, int len) {
  if (!field || !buffer) return fail(WC_ERR_NULL_HANDLE, "wc_field_values: null argument");
  if (len != static_cast<int>(field->field.values.size())) {
    return fail(WC_ERR_INVALID_ARGUMENT, "wc_field_values: buffer length must equal nx*np");
  }
  std::memcpy(buffer, field->field.values.data(), sizeof(double) * field->field.values.size());
  return WC_OK;
}

wc_status wc_field_integral(const wc_field* field, double* out) {
  if (!field || !out) return fail(WC_ERR_NULL_HANDLE, "wc_field_integral: null argument");
  return guarded([&] { *out = wigcur::quadrature_integral(field->field); });
}

wc_status wc_field_purity(const wc_field* field, double* out) {
  if (!field || !out) return fail(WC_ERR_NULL_HANDLE, "wc_field_purity: null argument");
  return guarded([&] { *out = wigcur::purity_of_field(field->field); });
}

wc_status wc_field_save(const wc_field* field, const char* name, const char* path) {
  if (!field || !name || !path) return fail(WC_ERR_NULL_HANDLE, "wc_field_save: null argument");
  return guarded([&] {
    wigcur::FieldFileMeta meta;
    meta.name = name;
    meta.provenance = field->field.provenance ? "gaussian-mixture" : "derived";
    wigcur::write_scalar_field(field->field, meta, path);
  });
}

wc_status wc_field_load(const char* path, wc_field** out) {
  if (!path || !out) return fail(WC_ERR_NULL_HANDLE, "wc_field_load: null argument");
  *out = nullptr;
  return guarded([&] { *out = new wc_field{wigcur::read_scalar_field(path)}; });
}

wc_status wc_system_current(const wc_field* field, double xi, double theta, wc_current** out) {
  if (!field || !out) return fail(WC_ERR_NULL_HANDLE, "wc_system_current: null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new wc_current{wigcur::j_sys(field->field, wigcur::SystemParams{xi, theta})};
  });
}

wc_status wc_env_current(const wc_field* field, double gamma, double n_bar, wc_current** out) {
  if (!field || !out) return fail(WC_ERR_NULL_HANDLE, "wc_env_current: null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new wc_current{wigcur::j_env(field->field, wigcur::EnvParams{gamma, n_bar})};
  });
}

void wc_current_free(wc_current* current) { delete current; }

wc_status wc_current_save(const wc_current* current, const char* name, const char* path) {
  if (!current || !name || !path) {
    return fail(WC_ERR_NULL_HANDLE, "wc_current_save: null argument");
  }
  return guarded([&] {
    wigcur::FieldFileMeta meta;
    meta.name = name;
    wigcur::write_vector_field(current->current, meta, path);
  });
}

wc_status wc_winding_number(const wc_current* current, double center_x, double center_p,
                            double radius, int samples, int* out) {
  if (!current || !out) return fail(WC_ERR_NULL_HANDLE, "wc_winding_number: null argument");
  return guarded([&] {
    *out = wigcur::winding_number(
        current->current, wigcur::Loop{wigcur::Vec2{center_x, center_p}, radius, samples});
  });
}

wc_status wc_degraded_db(double r, double eta, double theta_rms, double* squeezing_db,
                         double* antisqueezing_db) {
  if (!squeezing_db || !antisqueezing_db) {
    return fail(WC_ERR_NULL_HANDLE, "wc_degraded_db: null output");
  }
  return guarded([&] {
    const wigcur::DbLevels db =
        wigcur::degraded_db_levels(r, wigcur::NoiseModel{eta, theta_rms});
    *squeezing_db = db.squeezing_db;
    *antisqueezing_db = db.antisqueezing_db;
  });
}

}  // extern "C"
