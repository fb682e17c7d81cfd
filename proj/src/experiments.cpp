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

#include "photomesh/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "photomesh/decompose.hpp"
#include "photomesh/error.hpp"
#include "photomesh/io.hpp"
#include "photomesh/parallel.hpp"
#include "photomesh/seeding.hpp"

namespace photomesh {

namespace {

// Samples folded into one partial sum. Fixed so that the summation order
// never depends on the thread count.
constexpr int kChunk = 50;

std::uint64_t trial_seed(std::uint64_t master, int n, double sigma, int trial) {
  return derive_seed(master, {static_cast<std::uint64_t>(n), std::bit_cast<std::uint64_t>(sigma),
                              static_cast<std::uint64_t>(trial)});
}
std::uint64_t unitary_seed(std::uint64_t trial) { return derive_seed(trial, {0}); }
std::uint64_t hardware_seed(std::uint64_t trial) { return derive_seed(trial, {1}); }

void require(bool ok, const std::string &what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

void require_sizes(const std::vector<int> &sizes, int min_n, const char *what) {
  require(!sizes.empty(), std::string(what) + ": size list is empty");
  for (int n : sizes)
    if (n < min_n) {
      std::ostringstream msg;
      msg << what << ": mode count " << n << " is below the minimum " << min_n;
      throw Error(ErrorCode::InvalidDimension, msg.str());
    }
}

double sample_std(double sum, double sum_sq, std::size_t count) {
  if (count < 2) return 0.0;
  const double mean = sum / count;
  const double var = (sum_sq - count * mean * mean) / (count - 1);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

std::string csv_number(double v) {
  if (std::isinf(v) && v > 0) return "∞";
  return io::format_double(v);
}

}  // namespace

std::string_view to_string(Region region) noexcept {
  switch (region) {
    case Region::FirstColumn: return "first_column";
    case Region::TopRow: return "top_row";
    case Region::Centre: return "centre";
  }
  return "?";
}

bool in_region(Region region, int n, const NodeId &node) noexcept {
  switch (region) {
    case Region::FirstColumn: return node.layer == 0;
    case Region::TopRow: return node.top_mode == 0 && node.layer > 0;
    case Region::Centre: {
      const double mid = 0.5 * (n - 1);
      const double half = std::max(0.1 * n, 0.5);
      return std::abs(node.layer - mid) <= half && std::abs(node.top_mode + 0.5 - mid) <= half;
    }
  }
  return false;
}

void RegionHistogram::add(double r) {
  const int bin = std::clamp(static_cast<int>(std::floor(r / kHistogramBinWidth)), 0,
                             kHistogramBins - 1);
  ++counts[bin];
  ++visits;
  sum += r;
  sum_sq += r * r;
  max_value = std::max(max_value, r);
}

void RegionHistogram::merge(const RegionHistogram &other) {
  for (int i = 0; i < kHistogramBins; ++i) counts[i] += other.counts[i];
  visits += other.visits;
  sum += other.sum;
  sum_sq += other.sum_sq;
  max_value = std::max(max_value, other.max_value);
}

double RegionHistogram::mean() const noexcept {
  return visits == 0 ? 0.0 : sum / static_cast<double>(visits);
}

double RegionHistogram::std_error() const noexcept {
  if (visits < 2) return 0.0;
  return sample_std(sum, sum_sq, visits) / std::sqrt(static_cast<double>(visits));
}

SpatialStats reflectivity_statistics(int n, int samples, std::uint64_t seed, int jobs) {
  if (n < 4) throw Error(ErrorCode::InvalidDimension,
                         "reflectivity_statistics: need at least 4 modes for a centre region");
  require(samples >= 1, "reflectivity_statistics: samples must be >= 1");

  const MeshLayout layout = MeshLayout::square(n);
  const std::size_t k_nodes = layout.size();
  std::array<std::vector<bool>, 3> member;
  for (Region r : kRegions) {
    auto &m = member[static_cast<int>(r)];
    m.resize(k_nodes);
    for (std::size_t k = 0; k < k_nodes; ++k) m[k] = in_region(r, n, layout.nodes()[k]);
  }

  struct Partial {
    std::vector<double> sums;
    std::array<RegionHistogram, 3> hist;
  };
  const int n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<Partial> partials(n_chunks);
  parallel_for(n_chunks, jobs, [&](std::size_t c) {
    Partial &p = partials[c];
    p.sums.assign(k_nodes, 0.0);
    const int end = std::min<int>(samples, (static_cast<int>(c) + 1) * kChunk);
    for (int s = static_cast<int>(c) * kChunk; s < end; ++s) {
      const UnitaryMatrix u =
          haar_random_unitary(n, derive_seed(seed, {static_cast<std::uint64_t>(n),
                                                    static_cast<std::uint64_t>(s)}));
      const MeshSettings settings = clements_decompose(u);
      for (std::size_t k = 0; k < k_nodes; ++k) {
        const double r = settings.nodes[k].reflectivity;
        p.sums[k] += r;
        for (int g = 0; g < 3; ++g)
          if (member[g][k]) p.hist[g].add(r);
      }
    }
  });

  SpatialStats stats;
  stats.n_modes = n;
  stats.samples = samples;
  stats.layout = layout;
  stats.mean_reflectivity.assign(k_nodes, 0.0);
  for (const Partial &p : partials) {
    for (std::size_t k = 0; k < k_nodes; ++k) stats.mean_reflectivity[k] += p.sums[k];
    for (int g = 0; g < 3; ++g) stats.histograms[g].merge(p.hist[g]);
  }
  double total = 0.0;
  for (double &m : stats.mean_reflectivity) {
    total += m;
    m /= samples;
  }
  stats.overall_mean = total / (static_cast<double>(samples) * k_nodes);
  return stats;
}

std::vector<SweepRecord> fidelity_sweep(const std::vector<int> &sizes,
                                        const std::vector<double> &sigmas, int trials,
                                        MeshKind kind, std::uint64_t seed, int jobs) {
  require_sizes(sizes, 2, "fidelity_sweep");
  require(!sigmas.empty(), "fidelity_sweep: sigma list is empty");
  for (double s : sigmas)
    require(s >= 0.0 && std::isfinite(s), "fidelity_sweep: sigma must be finite and >= 0");
  require(trials >= 1, "fidelity_sweep: trials must be >= 1");

  struct Cell {
    int n;
    double sigma;
  };
  std::vector<Cell> cells;
  for (int n : sizes)
    for (double s : sigmas) cells.push_back({n, s});

  const std::size_t t_count = static_cast<std::size_t>(trials);
  std::vector<Evaluation> results(cells.size() * t_count);
  parallel_for(results.size(), jobs, [&](std::size_t i) {
    const Cell &cell = cells[i / t_count];
    const int t = static_cast<int>(i % t_count);
    const std::uint64_t ts = trial_seed(seed, cell.n, cell.sigma, t);
    const UnitaryMatrix u = haar_random_unitary(cell.n, unitary_seed(ts));
    const MeshLayout layout =
        kind == MeshKind::Square ? MeshLayout::square(cell.n) : MeshLayout::triangular(cell.n);
    results[i] = decompose_clip_evaluate(u, kind, sample_hardware(layout, cell.sigma,
                                                                  hardware_seed(ts)));
  });

  std::vector<SweepRecord> records;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    SweepRecord rec;
    rec.n_modes = cells[c].n;
    rec.sigma = cells[c].sigma;
    rec.kind = kind;
    rec.trials = trials;
    std::size_t affected = 0;
    double sum = 0.0, sum_sq = 0.0, dev = 0.0, dev_max = 0.0;
    for (std::size_t t = 0; t < t_count; ++t) {
      const Evaluation &e = results[c * t_count + t];
      if (!e.affected) continue;
      ++affected;
      const double inf = 1.0 - e.fidelity;
      sum += inf;
      sum_sq += inf * inf;
      dev += e.deviation.mean_rel;
      dev_max += e.deviation.max_rel;
    }
    rec.affected_fraction = static_cast<double>(affected) / trials;
    if (affected > 0) {
      rec.mean_infidelity_affected = sum / affected;
      rec.std_infidelity_affected = sample_std(sum, sum_sq, affected);
      rec.mean_rel_deviation = dev / affected;
      rec.max_rel_deviation = dev_max / affected;
    }
    records.push_back(rec);
  }
  return records;
}

std::string_view to_string(BenchmarkVariant v) noexcept {
  return v == BenchmarkVariant::OptimizeSquare ? "optimize_square" : "optimize_extra_layer";
}

BenchmarkResult optimization_benchmark(const std::vector<int> &sizes, double sigma,
                                       int trials, std::uint64_t seed, int jobs,
                                       const OptimizerOptions &options) {
  require_sizes(sizes, 2, "optimization_benchmark");
  require(sigma >= 0.0 && std::isfinite(sigma),
          "optimization_benchmark: sigma must be finite and >= 0");
  require(trials >= 1, "optimization_benchmark: trials must be >= 1");

  const std::size_t t_count = static_cast<std::size_t>(trials);
  std::vector<std::array<BenchmarkTrial, 2>> runs(sizes.size() * t_count);
  parallel_for(runs.size(), jobs, [&](std::size_t i) {
    const int n = sizes[i / t_count];
    const int t = static_cast<int>(i % t_count);
    const std::uint64_t ts = trial_seed(seed, n, sigma, t);
    const UnitaryMatrix u = haar_random_unitary(n, unitary_seed(ts));
    const MeshLayout base = MeshLayout::square(n);
    const MeshLayout extended = MeshLayout::square(n, 1);
    const HardwareSample hw = sample_hardware(extended, sigma, hardware_seed(ts));
    const HardwareSample base_hw = restrict_hardware(hw, base);

    const ClipResult direct = clip_to_hardware(clements_decompose(u), base_hw);
    const double f_direct = fidelity(u, mesh_unitary(direct.settings));

    auto record = [&](BenchmarkVariant v, const OptimizationResult &r) {
      BenchmarkTrial out;
      out.n_modes = n;
      out.variant = v;
      out.trial = t;
      out.fidelity_direct = f_direct;
      out.fidelity_start = r.fidelity_before;
      out.fidelity_after = r.fidelity_after;
      out.iterations = r.iterations;
      out.converged = r.converged;
      out.trace_monotone = std::is_sorted(r.objective_trace.rbegin(), r.objective_trace.rend()) &&
                           r.fidelity_after >= r.fidelity_before - 1e-12;
      return out;
    };
    runs[i][0] = record(BenchmarkVariant::OptimizeSquare,
                        optimize_settings(u, base, base_hw, direct.settings, options));
    runs[i][1] = record(BenchmarkVariant::OptimizeExtraLayer,
                        optimize_settings(u, extended, hw,
                                          initial_guess_redundant(u, extended, hw), options));
  });

  BenchmarkResult result;
  for (std::size_t si = 0; si < sizes.size(); ++si)
    for (int v = 0; v < 2; ++v) {
      double direct = 0.0;
      double after = 0.0;
      for (std::size_t t = 0; t < t_count; ++t) {
        const BenchmarkTrial &tr = runs[si * t_count + t][v];
        direct += tr.fidelity_direct;
        after += tr.fidelity_after;
        result.trials.push_back(tr);
      }
      BenchmarkRow row;
      row.n_modes = sizes[si];
      row.variant = static_cast<BenchmarkVariant>(v);
      row.trials = trials;
      row.mean_fidelity_direct = direct / trials;
      row.mean_fidelity_after = after / trials;
      row.mean_enhancement = enhancement_ratio(row.mean_fidelity_direct, row.mean_fidelity_after);
      result.rows.push_back(row);
    }
  return result;
}

bool on_main_diagonal(int n, const NodeId &node) noexcept {
  return std::abs(node.top_mode - node.layer) <= 1 ||
         std::abs(node.top_mode - (n - 2 - node.layer)) <= 1;
}

std::vector<NodeId> fourier_low_nodes(int n, double threshold) {
  const MeshSettings s = clements_decompose(fourier_matrix(n));
  std::vector<NodeId> low;
  for (std::size_t k = 0; k < s.nodes.size(); ++k)
    if (s.nodes[k].reflectivity < threshold) low.push_back(s.layout.nodes()[k]);
  return low;
}

std::vector<FourierRow> fourier_reflectivity_profile(const std::vector<int> &sizes,
                                                     double threshold, int haar_samples,
                                                     std::uint64_t seed, int jobs) {
  require_sizes(sizes, 2, "fourier_reflectivity_profile");
  require(threshold > 0.0 && threshold < 0.5,
          "fourier_reflectivity_profile: threshold must lie in (0, 0.5)");
  require(haar_samples >= 1, "fourier_reflectivity_profile: haar_samples must be >= 1");

  const std::size_t h_count = static_cast<std::size_t>(haar_samples);
  std::vector<int> haar_low(sizes.size() * h_count, 0);
  parallel_for(haar_low.size(), jobs, [&](std::size_t i) {
    const int n = sizes[i / h_count];
    const auto s = static_cast<std::uint64_t>(i % h_count);
    const MeshSettings settings = clements_decompose(
        haar_random_unitary(n, derive_seed(seed, {static_cast<std::uint64_t>(n), s})));
    haar_low[i] = static_cast<int>(std::count_if(
        settings.nodes.begin(), settings.nodes.end(),
        [&](const NodeSetting &x) { return x.reflectivity < threshold; }));
  });

  std::vector<FourierRow> rows;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int n = sizes[si];
    FourierRow row;
    row.n_modes = n;
    const std::vector<NodeId> low = fourier_low_nodes(n, threshold);
    row.n_low_nodes = static_cast<int>(low.size());
    for (const NodeId &id : low)
      if (in_region(Region::Centre, n, id) && !on_main_diagonal(n, id))
        ++row.centre_offdiag_low_count;
    long long total = 0;
    for (std::size_t s = 0; s < h_count; ++s) total += haar_low[si * h_count + s];
    row.haar_mean_low_nodes = static_cast<double>(total) / haar_samples;
    rows.push_back(row);
  }
  return rows;
}

std::string spatial_stats_csv(const std::vector<SpatialStats> &stats) {
  std::ostringstream out;
  out << "n_modes,samples,field,layer,slot,top_mode,region,bin_low,value\n";
  for (const SpatialStats &s : stats) {
    const std::string prefix = std::to_string(s.n_modes) + "," + std::to_string(s.samples) + ",";
    out << prefix << "overall_mean,,,,,," << csv_number(s.overall_mean) << "\n";
    for (std::size_t k = 0; k < s.layout.size(); ++k) {
      const NodeId &id = s.layout.nodes()[k];
      out << prefix << "mean_reflectivity_map," << id.layer << "," << id.slot << ","
          << id.top_mode << ",,," << csv_number(s.mean_reflectivity[k]) << "\n";
    }
    for (Region r : kRegions) {
      const RegionHistogram &h = s.histogram(r);
      out << prefix << "region_mean,,,," << to_string(r) << ",," << csv_number(h.mean()) << "\n";
      out << prefix << "region_std_error,,,," << to_string(r) << ",,"
          << csv_number(h.std_error()) << "\n";
      out << prefix << "region_max,,,," << to_string(r) << ",," << csv_number(h.max_value)
          << "\n";
      for (int b = 0; b < kHistogramBins; ++b)
        out << prefix << "histograms,,,," << to_string(r) << ","
            << csv_number(static_cast<double>(b) / kHistogramBins) << "," << h.counts[b] << "\n";
    }
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRecord> &records) {
  std::ostringstream out;
  out << "n_modes,sigma,kind,trials,affected_fraction,mean_infidelity_affected,"
         "std_infidelity_affected,mean_rel_deviation,max_rel_deviation\n";
  for (const SweepRecord &r : records)
    out << r.n_modes << "," << csv_number(r.sigma) << "," << to_string(r.kind) << ","
        << r.trials << "," << csv_number(r.affected_fraction) << ","
        << csv_number(r.mean_infidelity_affected) << "," << csv_number(r.std_infidelity_affected)
        << "," << csv_number(r.mean_rel_deviation) << "," << csv_number(r.max_rel_deviation)
        << "\n";
  return out.str();
}

std::string benchmark_csv(const std::vector<BenchmarkRow> &rows) {
  std::ostringstream out;
  out << "n_modes,variant,trials,mean_enhancement,mean_fidelity_after,mean_fidelity_direct\n";
  for (const BenchmarkRow &r : rows)
    out << r.n_modes << "," << to_string(r.variant) << "," << r.trials << ","
        << csv_number(r.mean_enhancement) << "," << csv_number(r.mean_fidelity_after) << ","
        << csv_number(r.mean_fidelity_direct) << "\n";
  return out.str();
}

std::string fourier_csv(const std::vector<FourierRow> &rows) {
  std::ostringstream out;
  out << "n_modes,n_low_nodes,centre_offdiag_low_count,haar_mean_low_nodes\n";
  for (const FourierRow &r : rows)
    out << r.n_modes << "," << r.n_low_nodes << "," << r.centre_offdiag_low_count << ","
        << csv_number(r.haar_mean_low_nodes) << "\n";
  return out.str();
}

}  // namespace photomesh
