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

#include "photomesh/runner.hpp"

#include <cmath>
#include <sstream>

#include "photomesh/error.hpp"
#include "photomesh/experiments.hpp"
#include "photomesh/io.hpp"

#ifndef PHOTOMESH_VERSION
#define PHOTOMESH_VERSION "0.0.0"
#endif

namespace photomesh {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string &path, const std::string &what) {
  throw Error(ErrorCode::InvalidArgument, "config." + path + ": " + what);
}

std::uint64_t get_seed(const json &c) {
  const json &v = c.at("seed");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
  bad("seed", "expected a non-negative integer");
}

int get_int(const json &c, const char *key, int min) {
  const json &v = c.at(key);
  if (!v.is_number_integer()) bad(key, "expected an integer");
  const long long x = v.get<long long>();
  if (x < min || x > 1'000'000'000) bad(key, "must be an integer >= " + std::to_string(min));
  return static_cast<int>(x);
}

double get_double(const json &c, const char *key, double lo, double hi, bool open_lo) {
  const json &v = c.at(key);
  if (!v.is_number()) bad(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo)) {
    std::ostringstream msg;
    msg << "must lie in " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
    bad(key, msg.str());
  }
  return x;
}

std::vector<int> get_sizes(const json &c, int min) {
  const json &v = c.at("sizes");
  if (!v.is_array() || v.empty()) bad("sizes", "expected a non-empty array");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string path = "sizes[" + std::to_string(i) + "]";
    if (!v[i].is_number_integer()) bad(path, "expected an integer");
    const long long n = v[i].get<long long>();
    if (n < min || n > 4096) bad(path, "mode count must be in [" + std::to_string(min) + ", 4096]");
    out.push_back(static_cast<int>(n));
  }
  return out;
}

std::vector<double> get_sigmas(const json &c) {
  const json &v = c.at("sigmas");
  if (!v.is_array() || v.empty()) bad("sigmas", "expected a non-empty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string path = "sigmas[" + std::to_string(i) + "]";
    if (!v[i].is_number()) bad(path, "expected a number");
    const double s = v[i].get<double>();
    if (!std::isfinite(s) || s < 0.0) bad(path, "must be finite and >= 0");
    out.push_back(s);
  }
  return out;
}

std::vector<MeshKind> get_kinds(const json &c) {
  const json &v = c.at("kinds");
  if (!v.is_array() || v.empty()) bad("kinds", "expected a non-empty array");
  std::vector<MeshKind> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string path = "kinds[" + std::to_string(i) + "]";
    if (!v[i].is_string()) bad(path, "expected \"square\" or \"triangular\"");
    try {
      out.push_back(parse_mesh_kind(v[i].get<std::string>()));
    } catch (const Error &) {
      bad(path, "expected \"square\" or \"triangular\"");
    }
  }
  return out;
}

OptimizerOptions get_options(const json &c) {
  OptimizerOptions o;
  o.max_iters = get_int(c, "max_iters", 1);
  o.tol = get_double(c, "tol", 0.0, 1.0, true);
  o.restarts = get_int(c, "restarts", 0);
  return o;
}

// Validates every field of a resolved config by reading it.
void validate(std::string_view name, const json &c) {
  get_seed(c);
  if (name == "fig2") {
    get_sizes(c, 4);
    get_int(c, "samples", 1);
  } else if (name == "fig3") {
    get_sizes(c, 2);
    get_sigmas(c);
    get_int(c, "trials", 1);
    get_kinds(c);
  } else if (name == "fig4") {
    get_sizes(c, 2);
    get_double(c, "sigma", 0.0, 1.0, false);
    get_int(c, "trials", 1);
    get_options(c);
  } else {
    get_sizes(c, 2);
    get_double(c, "threshold", 0.0, 0.5, true);
    get_int(c, "haar_samples", 1);
  }
}

std::string path_string(const std::filesystem::path &p) { return p.generic_string(); }

}  // namespace

const char *build_identifier() noexcept { return "photomesh " PHOTOMESH_VERSION; }

bool is_experiment_name(std::string_view name) noexcept {
  return name == "fig2" || name == "fig3" || name == "fig4" || name == "fourier";
}

json default_experiment_config(std::string_view name) {
  if (name == "fig2") return {{"sizes", {20, 50}}, {"samples", 5000}, {"seed", 1}};
  if (name == "fig3")
    return {{"sizes", {5, 10, 20, 50}},
            {"sigmas", {0.005, 0.01, 0.025, 0.05, 0.1}},
            {"trials", 500},
            {"kinds", {"square", "triangular"}},
            {"seed", 1}};
  if (name == "fig4") {
    const OptimizerOptions o;
    return {{"sizes", {2, 3, 4, 5, 6, 8}},
            {"sigma", 0.05},
            {"trials", 100},
            {"max_iters", o.max_iters},
            {"tol", o.tol},
            {"restarts", o.restarts},
            {"seed", 1}};
  }
  if (name == "fourier")
    return {{"sizes", {8, 16, 32}}, {"threshold", 0.1}, {"haar_samples", 100}, {"seed", 1}};
  throw Error(ErrorCode::InvalidArgument,
              "unknown experiment '" + std::string(name) + "' (fig2, fig3, fig4, fourier)");
}

json resolve_experiment_config(std::string_view name, const json &overrides) {
  json c = default_experiment_config(name);
  if (!overrides.is_null()) {
    if (!overrides.is_object())
      throw Error(ErrorCode::InvalidArgument, "config: expected a JSON object");
    for (const auto &[key, value] : overrides.items()) {
      if (!c.contains(key)) bad(key, "unknown field for experiment " + std::string(name));
      c[key] = value;
    }
  }
  validate(name, c);
  return c;
}

ExperimentOutput run_experiment(std::string_view name, const json &config,
                                const std::filesystem::path &out_dir, int jobs) {
  const json c = resolve_experiment_config(name, config);
  const std::uint64_t seed = get_seed(c);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw Error(ErrorCode::Io, "cannot create '" + path_string(out_dir) + "': " + ec.message());

  ExperimentOutput out;
  std::ostringstream summary;
  const std::string base(name);
  auto emit = [&](const std::string &file, const std::string &text) {
    const auto path = out_dir / file;
    io::write_text_file(path, text);
    out.files.push_back(path);
  };

  if (name == "fig2") {
    std::vector<SpatialStats> stats;
    for (int n : get_sizes(c, 4))
      stats.push_back(reflectivity_statistics(n, get_int(c, "samples", 1), seed, jobs));
    emit(base + ".csv", spatial_stats_csv(stats));
    summary << "fig2:";
    for (const SpatialStats &s : stats)
      summary << " N=" << s.n_modes << " mean_R=" << io::format_double(s.overall_mean);
  } else if (name == "fig3") {
    std::vector<SweepRecord> all;
    for (MeshKind kind : get_kinds(c)) {
      auto part = fidelity_sweep(get_sizes(c, 2), get_sigmas(c), get_int(c, "trials", 1), kind,
                                 seed, jobs);
      all.insert(all.end(), part.begin(), part.end());
    }
    emit(base + ".csv", sweep_csv(all));
    summary << "fig3: " << all.size() << " cells";
  } else if (name == "fig4") {
    const BenchmarkResult r =
        optimization_benchmark(get_sizes(c, 2), get_double(c, "sigma", 0.0, 1.0, false),
                               get_int(c, "trials", 1), seed, jobs, get_options(c));
    emit(base + ".csv", benchmark_csv(r.rows));
    std::ostringstream trials;
    trials << "n_modes,variant,trial,fidelity_direct,fidelity_start,fidelity_after,iterations,"
              "converged,trace_monotone\n";
    int monotone = 0;
    for (const BenchmarkTrial &t : r.trials) {
      trials << t.n_modes << "," << to_string(t.variant) << "," << t.trial << ","
             << io::format_double(t.fidelity_direct) << "," << io::format_double(t.fidelity_start)
             << "," << io::format_double(t.fidelity_after) << "," << t.iterations << ","
             << (t.converged ? "true" : "false") << "," << (t.trace_monotone ? "true" : "false")
             << "\n";
      monotone += t.trace_monotone;
    }
    emit(base + "_trials.csv", trials.str());
    summary << "fig4: " << r.rows.size() << " rows, " << monotone << "/" << r.trials.size()
            << " monotone traces";
  } else {
    const auto rows =
        fourier_reflectivity_profile(get_sizes(c, 2), get_double(c, "threshold", 0.0, 0.5, true),
                                     get_int(c, "haar_samples", 1), seed, jobs);
    emit(base + ".csv", fourier_csv(rows));
    summary << "fourier:";
    for (const FourierRow &r : rows) summary << " N=" << r.n_modes << " low=" << r.n_low_nodes;
  }

  json sidecar;
  sidecar["experiment"] = base;
  sidecar["build"] = build_identifier();
  sidecar["seed"] = seed;
  sidecar["config"] = c;
  json files = json::array();
  for (const auto &f : out.files) files.push_back(f.filename().generic_string());
  sidecar["outputs"] = files;
  const auto side = out_dir / (base + ".json");
  io::write_json_file(side, sidecar);
  out.files.push_back(side);
  summary << " -> " << path_string(out_dir / (base + ".csv"));
  out.summary = summary.str();
  return out;
}

}  // namespace photomesh
