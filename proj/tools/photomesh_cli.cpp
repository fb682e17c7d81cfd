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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "photomesh/photomesh.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

struct CliFailure {
  int exit_code;
};

int exit_code_for(pm_status s) {
  switch (s) {
    case PM_OK: return kExitOk;
    case PM_ERR_INVALID_ARGUMENT:
    case PM_ERR_INVALID_DIMENSION:
    case PM_ERR_IO:
    case PM_ERR_PARSE: return kExitUsage;
    case PM_ERR_NOT_UNITARY:
    case PM_ERR_OUT_OF_RANGE:
    case PM_ERR_DIMENSION_MISMATCH:
    case PM_ERR_LAYOUT_MISMATCH:
    case PM_ERR_INFEASIBLE: return kExitData;
    case PM_ERR_INTERNAL: break;
  }
  return kExitNumerical;
}

void check(pm_status s, const std::string &context) {
  if (s == PM_OK) return;
  std::cerr << "error: " << context << ": " << pm_last_error();
  if (s == PM_ERR_NOT_UNITARY) std::cerr << " (measured deviation " << pm_last_deviation() << ")";
  std::cerr << "\n";
  throw CliFailure{exit_code_for(s)};
}

// Owning wrappers over the opaque handles.
struct Matrix {
  pm_matrix *p = nullptr;
  ~Matrix() { pm_matrix_free(p); }
};
struct Settings {
  pm_settings *p = nullptr;
  ~Settings() { pm_settings_free(p); }
};

void write_report(const std::string &path, const json &report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << report.dump(2) << "\n";
  out.flush();
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    throw CliFailure{kExitUsage};
  }
}

pm_mesh_kind mesh_kind(const std::string &text) {
  return text == "triangular" ? PM_MESH_TRIANGULAR : PM_MESH_SQUARE;
}

json number_or_infinity(double v) {
  if (std::isinf(v)) return "∞";
  return v;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Programmable linear-optics mesh toolkit"};
  app.set_version_flag("--version", std::string(pm_version()));
  app.require_subcommand(1);
  app.fallthrough();

  int jobs = 1;
  bool strict = false;
  app.add_option("--jobs", jobs, "Worker threads for experiments")->check(CLI::Range(1, 1024));
  app.add_flag("--strict", strict, "Treat optimizer non-convergence as a failure (exit 4)");

  const std::map<std::string, std::string> kinds{{"square", "square"},
                                                 {"triangular", "triangular"}};

  // generate
  std::string gen_kind;
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto *gen = app.add_subcommand("generate", "Write a Haar-random or Fourier matrix file");
  gen->add_option("kind", gen_kind, "haar or fourier")
      ->required()
      ->check(CLI::IsMember({"haar", "fourier"}));
  gen->add_option("--n", gen_n, "Number of modes")->required()->check(CLI::Range(1, 4096));
  gen->add_option("--seed", gen_seed, "Random seed (haar only)");
  gen->add_option("--out", gen_out, "Output matrix file")->required();

  // decompose
  std::string dec_in, dec_kind = "square", dec_out;
  bool dec_verify = false;
  auto *dec = app.add_subcommand("decompose", "Decompose a matrix file into mesh settings");
  dec->add_option("matrix", dec_in, "Input matrix file")->required();
  dec->add_option("--kind", dec_kind, "square or triangular")->check(CLI::IsMember(kinds));
  dec->add_option("--out", dec_out, "Output settings file")->required();
  dec->add_flag("--verify", dec_verify, "Rebuild the matrix and print the max deviation");

  // simulate
  std::string sim_in, sim_kind = "square", sim_out;
  double sim_sigma = 0.0;
  std::uint64_t sim_seed = 0;
  auto *sim = app.add_subcommand("simulate", "Clip a decomposition to imperfect hardware");
  sim->add_option("matrix", sim_in, "Input matrix file")->required();
  sim->add_option("--kind", sim_kind, "square or triangular")->check(CLI::IsMember(kinds));
  sim->add_option("--sigma", sim_sigma, "Splitter error standard deviation")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sim->add_option("--seed", sim_seed, "Hardware seed");
  sim->add_option("--out", sim_out, "Output report file")->required();

  // optimize
  std::string opt_in, opt_out, opt_settings_out;
  double opt_sigma = 0.0;
  std::uint64_t opt_seed = 0;
  int opt_extra = 0;
  int opt_max_iters = 0;
  auto *opt = app.add_subcommand("optimize", "Optimize settings on imperfect hardware");
  opt->add_option("matrix", opt_in, "Input matrix file")->required();
  opt->add_option("--sigma", opt_sigma, "Splitter error standard deviation")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  opt->add_option("--seed", opt_seed, "Hardware seed");
  opt->add_option("--extra-layers", opt_extra, "Extra square-mesh layers")
      ->check(CLI::Range(0, 64));
  opt->add_option("--max-iters", opt_max_iters, "Iteration cap per optimizer run")
      ->check(CLI::Range(1, 1000000));
  opt->add_option("--out", opt_out, "Output report file")->required();
  opt->add_option("--settings-out", opt_settings_out, "Optional optimized settings file");

  // experiment
  std::string exp_name, exp_config, exp_out_dir = ".";
  std::optional<std::uint64_t> exp_seed;
  std::optional<int> exp_trials, exp_samples, exp_haar_samples;
  std::optional<double> exp_sigma;
  auto *exp = app.add_subcommand("experiment", "Run a Monte-Carlo harness");
  exp->add_option("name", exp_name, "fig2, fig3, fig4 or fourier")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fourier"}));
  exp->add_option("config", exp_config, "Optional JSON config file");
  exp->add_option("--out-dir", exp_out_dir, "Output directory");
  exp->add_option("--seed", exp_seed, "Master seed (overrides config)");
  exp->add_option("--trials", exp_trials, "Trials per cell (fig3, fig4)");
  exp->add_option("--samples", exp_samples, "Haar samples (fig2)");
  exp->add_option("--haar-samples", exp_haar_samples, "Haar samples (fourier)");
  exp->add_option("--sigma", exp_sigma, "Splitter error (fig4)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      Matrix m;
      if (gen_kind == "haar")
        check(pm_matrix_haar(gen_n, gen_seed, &m.p), "--n");
      else
        check(pm_matrix_fourier(gen_n, &m.p), "--n");
      check(pm_matrix_save(m.p, gen_out.c_str()), "--out");
      std::cout << "generated " << gen_kind << " n=" << gen_n << " -> " << gen_out << "\n";
    } else if (*dec) {
      Matrix m;
      check(pm_matrix_load(dec_in.c_str(), &m.p), dec_in);
      Settings s;
      check(pm_decompose(m.p, mesh_kind(dec_kind), &s.p), "decompose");
      check(pm_settings_save(s.p, dec_out.c_str()), "--out");
      std::cout << "decomposed " << dec_kind << " n=" << pm_matrix_dim(m.p)
                << " nodes=" << pm_settings_node_count(s.p) << " -> " << dec_out;
      if (dec_verify) {
        Matrix rebuilt;
        check(pm_settings_unitary(s.p, &rebuilt.p), "verify");
        double dev = 0.0;
        check(pm_max_deviation(m.p, rebuilt.p, &dev), "verify");
        std::cout << " max_deviation=" << dev;
      }
      std::cout << "\n";
    } else if (*sim) {
      Matrix m;
      check(pm_matrix_load(sim_in.c_str(), &m.p), sim_in);
      pm_simulation_report r{};
      check(pm_simulate(m.p, mesh_kind(sim_kind), sim_sigma, sim_seed, &r), "simulate");
      write_report(sim_out, {{"kind", sim_kind},
                             {"fidelity", r.fidelity},
                             {"affected", r.affected != 0},
                             {"n_clipped", r.n_clipped},
                             {"mean_rel_deviation", r.mean_rel_deviation},
                             {"max_rel_deviation", r.max_rel_deviation},
                             {"sigma", sim_sigma},
                             {"seed", sim_seed}});
      std::cout << "simulated " << sim_kind << " fidelity=" << r.fidelity
                << " n_clipped=" << r.n_clipped << " -> " << sim_out << "\n";
    } else if (*opt) {
      Matrix m;
      check(pm_matrix_load(opt_in.c_str(), &m.p), opt_in);
      pm_optimize_options o{opt_extra, opt_max_iters, 0.0};
      pm_optimization_report r{};
      Settings s;
      check(pm_optimize(m.p, opt_sigma, opt_seed, &o, &r, &s.p), "optimize");
      if (!opt_settings_out.empty())
        check(pm_settings_save(s.p, opt_settings_out.c_str()), "--settings-out");
      write_report(opt_out, {{"fidelity_direct", r.fidelity_direct},
                             {"fidelity_before", r.fidelity_before},
                             {"fidelity_after", r.fidelity_after},
                             {"enhancement", number_or_infinity(r.enhancement)},
                             {"iterations", r.iterations},
                             {"converged", r.converged != 0},
                             {"extra_layers", opt_extra},
                             {"sigma", opt_sigma},
                             {"seed", opt_seed}});
      std::cout << "optimized fidelity " << r.fidelity_direct << " -> " << r.fidelity_after
                << (r.converged ? "" : " (not converged)") << " -> " << opt_out << "\n";
      if (strict && !r.converged) {
        std::cerr << "error: optimizer did not converge within the iteration cap\n";
        return kExitNumerical;
      }
    } else if (*exp) {
      json over = json::object();
      if (exp_seed) over["seed"] = *exp_seed;
      if (exp_trials) over["trials"] = *exp_trials;
      if (exp_samples) over["samples"] = *exp_samples;
      if (exp_haar_samples) over["haar_samples"] = *exp_haar_samples;
      if (exp_sigma) over["sigma"] = *exp_sigma;
      const std::string over_text = over.dump();
      char summary[512] = {0};
      check(pm_experiment_run(exp_name.c_str(), exp_config.empty() ? nullptr : exp_config.c_str(),
                              over_text.c_str(), exp_out_dir.c_str(), jobs, summary,
                              sizeof(summary)),
            "experiment " + exp_name);
      std::cout << summary << "\n";
    }
  } catch (const CliFailure &f) {
    return f.exit_code;
  }
  return kExitOk;
}
