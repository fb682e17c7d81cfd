// Copyright 2026 The photomesh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "photomesh/photomesh.h"

#include <cstring>
#include <new>
#include <string>

#include "photomesh/decompose.hpp"
#include "photomesh/error.hpp"
#include "photomesh/io.hpp"
#include "photomesh/optimize.hpp"
#include "photomesh/runner.hpp"

struct pm_matrix {
  photomesh::UnitaryMatrix value;
};

struct pm_settings {
  photomesh::MeshSettings value;
};

namespace {

using photomesh::Error;
using photomesh::ErrorCode;

thread_local std::string last_error;
thread_local double last_deviation = 0.0;

pm_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return PM_ERR_INVALID_DIMENSION;
    case ErrorCode::InvalidArgument: return PM_ERR_INVALID_ARGUMENT;
    case ErrorCode::OutOfRange: return PM_ERR_OUT_OF_RANGE;
    case ErrorCode::NotUnitary: return PM_ERR_NOT_UNITARY;
    case ErrorCode::DimensionMismatch: return PM_ERR_DIMENSION_MISMATCH;
    case ErrorCode::LayoutMismatch: return PM_ERR_LAYOUT_MISMATCH;
    case ErrorCode::Infeasible: return PM_ERR_INFEASIBLE;
    case ErrorCode::Io: return PM_ERR_IO;
    case ErrorCode::Parse: return PM_ERR_PARSE;
  }
  return PM_ERR_INTERNAL;
}

template <typename Fn>
pm_status guarded(Fn &&fn) {
  last_error.clear();
  last_deviation = 0.0;
  try {
    fn();
    return PM_OK;
  } catch (const photomesh::NotUnitaryError &e) {
    last_error = e.what();
    last_deviation = e.deviation();
    return PM_ERR_NOT_UNITARY;
  } catch (const Error &e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc &) {
    last_error = "out of memory";
  } catch (const std::exception &e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return PM_ERR_INTERNAL;
}

void require_ptr(const void *p, const char *name) {
  if (p == nullptr) throw Error(ErrorCode::InvalidArgument, std::string(name) + " is NULL");
}

photomesh::MeshKind to_kind(pm_mesh_kind kind) {
  switch (kind) {
    case PM_MESH_SQUARE: return photomesh::MeshKind::Square;
    case PM_MESH_TRIANGULAR: return photomesh::MeshKind::Triangular;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mesh kind");
}

}  // namespace

extern "C" {

const char *pm_version(void) { return photomesh::build_identifier(); }
const char *pm_last_error(void) { return last_error.c_str(); }
double pm_last_deviation(void) { return last_deviation; }

pm_status pm_matrix_haar(int n, uint64_t seed, pm_matrix **out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = new pm_matrix{photomesh::haar_random_unitary(n, seed)};
  });
}

pm_status pm_matrix_fourier(int n, pm_matrix **out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = new pm_matrix{photomesh::fourier_matrix(n)};
  });
}

pm_status pm_matrix_load(const char *path, pm_matrix **out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = new pm_matrix{photomesh::io::matrix_from_json(photomesh::io::read_json_file(path))};
  });
}

pm_status pm_matrix_save(const pm_matrix *m, const char *path) {
  return guarded([&] {
    require_ptr(m, "matrix");
    require_ptr(path, "path");
    photomesh::io::write_json_file(path, photomesh::io::matrix_to_json(m->value));
  });
}

int pm_matrix_dim(const pm_matrix *m) { return m == nullptr ? 0 : m->value.dim(); }

pm_status pm_matrix_entry(const pm_matrix *m, int row, int col, double *re, double *im) {
  return guarded([&] {
    require_ptr(m, "matrix");
    require_ptr(re, "re");
    require_ptr(im, "im");
    const int n = m->value.dim();
    if (row < 0 || row >= n || col < 0 || col >= n)
      throw Error(ErrorCode::OutOfRange, "entry index outside the matrix");
    *re = m->value(row, col).real();
    *im = m->value(row, col).imag();
  });
}

void pm_matrix_free(pm_matrix *m) { delete m; }

pm_status pm_fidelity(const pm_matrix *a, const pm_matrix *b, double *out) {
  return guarded([&] {
    require_ptr(a, "a");
    require_ptr(b, "b");
    require_ptr(out, "out");
    *out = photomesh::fidelity(a->value, b->value);
  });
}

pm_status pm_max_deviation(const pm_matrix *a, const pm_matrix *b, double *out) {
  return guarded([&] {
    require_ptr(a, "a");
    require_ptr(b, "b");
    require_ptr(out, "out");
    *out = photomesh::max_entry_deviation(a->value.matrix(), b->value.matrix());
  });
}

pm_status pm_decompose(const pm_matrix *m, pm_mesh_kind kind, pm_settings **out) {
  return guarded([&] {
    require_ptr(m, "matrix");
    require_ptr(out, "out");
    *out = new pm_settings{photomesh::decompose(m->value, to_kind(kind))};
  });
}

pm_status pm_settings_unitary(const pm_settings *s, pm_matrix **out) {
  return guarded([&] {
    require_ptr(s, "settings");
    require_ptr(out, "out");
    *out = new pm_matrix{photomesh::mesh_unitary(s->value)};
  });
}

pm_status pm_settings_load(const char *path, pm_settings **out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = new pm_settings{
        photomesh::io::settings_from_json(photomesh::io::read_json_file(path))};
  });
}

pm_status pm_settings_save(const pm_settings *s, const char *path) {
  return guarded([&] {
    require_ptr(s, "settings");
    require_ptr(path, "path");
    photomesh::io::write_json_file(path, photomesh::io::settings_to_json(s->value));
  });
}

int pm_settings_node_count(const pm_settings *s) {
  return s == nullptr ? 0 : static_cast<int>(s->value.nodes.size());
}

void pm_settings_free(pm_settings *s) { delete s; }

pm_status pm_simulate(const pm_matrix *m, pm_mesh_kind kind, double sigma, uint64_t seed,
                      pm_simulation_report *out) {
  return guarded([&] {
    require_ptr(m, "matrix");
    require_ptr(out, "out");
    const photomesh::MeshKind k = to_kind(kind);
    const int n = m->value.dim();
    if (n < 2) throw Error(ErrorCode::InvalidDimension, "simulation needs at least 2 modes");
    const auto layout = k == photomesh::MeshKind::Square ? photomesh::MeshLayout::square(n)
                                                         : photomesh::MeshLayout::triangular(n);
    const auto e = photomesh::decompose_clip_evaluate(
        m->value, k, photomesh::sample_hardware(layout, sigma, seed));
    out->fidelity = e.fidelity;
    out->affected = e.affected ? 1 : 0;
    out->n_clipped = e.n_clipped;
    out->mean_rel_deviation = e.deviation.mean_rel;
    out->max_rel_deviation = e.deviation.max_rel;
  });
}

pm_status pm_optimize(const pm_matrix *m, double sigma, uint64_t seed,
                      const pm_optimize_options *options, pm_optimization_report *out,
                      pm_settings **settings_out) {
  return guarded([&] {
    require_ptr(m, "matrix");
    require_ptr(out, "out");
    photomesh::OptimizerOptions opts;
    int extra = 0;
    if (options != nullptr) {
      extra = options->extra_layers;
      if (options->max_iters > 0) opts.max_iters = options->max_iters;
      if (options->tol > 0) opts.tol = options->tol;
    }
    if (extra < 0) throw Error(ErrorCode::InvalidArgument, "extra_layers must be >= 0");
    const photomesh::UnitaryMatrix &u = m->value;
    const int n = u.dim();
    if (n < 2) throw Error(ErrorCode::InvalidDimension, "optimization needs at least 2 modes");
    const auto base = photomesh::MeshLayout::square(n);
    const auto layout = photomesh::MeshLayout::square(n, extra);
    const auto hw = photomesh::sample_hardware(layout, sigma, seed);
    const auto base_hw = photomesh::restrict_hardware(hw, base);
    const auto direct = photomesh::clip_to_hardware(photomesh::clements_decompose(u), base_hw);
    const double f_direct = photomesh::fidelity(u, photomesh::mesh_unitary(direct.settings));
    const auto start = extra == 0 ? direct.settings
                                  : photomesh::initial_guess_redundant(u, layout, hw);
    auto r = photomesh::optimize_settings(u, layout, hw, start, opts);
    out->fidelity_direct = f_direct;
    out->fidelity_before = r.fidelity_before;
    out->fidelity_after = r.fidelity_after;
    out->enhancement = photomesh::enhancement_ratio(f_direct, r.fidelity_after);
    out->iterations = r.iterations;
    out->converged = r.converged ? 1 : 0;
    if (settings_out != nullptr) *settings_out = new pm_settings{std::move(r.settings)};
  });
}

pm_status pm_experiment_run(const char *name, const char *config_path,
                            const char *overrides_json, const char *out_dir, int jobs,
                            char *summary, size_t summary_len) {
  return guarded([&] {
    require_ptr(name, "name");
    require_ptr(out_dir, "out_dir");
    if (!photomesh::is_experiment_name(name))
      throw Error(ErrorCode::InvalidArgument,
                  std::string("unknown experiment '") + name + "' (fig2, fig3, fig4, fourier)");
    nlohmann::json config = nlohmann::json::object();
    if (config_path != nullptr) {
      config = photomesh::io::read_json_file(config_path);
      if (!config.is_object())
        throw Error(ErrorCode::InvalidArgument, "config: expected a JSON object");
    }
    if (overrides_json != nullptr) {
      nlohmann::json over;
      try {
        over = nlohmann::json::parse(overrides_json);
      } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::Parse, std::string("overrides: ") + e.what());
      }
      if (!over.is_object())
        throw Error(ErrorCode::InvalidArgument, "overrides: expected a JSON object");
      for (const auto &[key, value] : over.items()) config[key] = value;
    }
    const auto result = photomesh::run_experiment(name, config, out_dir, jobs);
    if (summary != nullptr && summary_len > 0) {
      const std::size_t len = std::min(summary_len - 1, result.summary.size());
      std::memcpy(summary, result.summary.data(), len);
      summary[len] = '\0';
    }
  });
}

}  // extern "C"
