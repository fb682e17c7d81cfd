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

#include "photomesh/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "photomesh/error.hpp"

namespace photomesh::io {

namespace {

[[noreturn]] void parse_error(const std::string &what) {
  throw Error(ErrorCode::Parse, what);
}

const json &field(const json &j, const char *key, const std::string &where) {
  if (!j.is_object()) parse_error(where + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) parse_error(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json &j, const std::string &where) {
  if (!j.is_number()) parse_error(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error(where + ": number is not finite");
  return v;
}

int integer(const json &j, const std::string &where) {
  if (!j.is_number_integer()) parse_error(where + ": expected an integer");
  return j.get<int>();
}

MeshLayout layout_from_json(const json &j) {
  const std::string kind_text = [&] {
    const json &k = field(j, "kind", "mesh");
    if (!k.is_string()) parse_error("mesh.kind: expected a string");
    return k.get<std::string>();
  }();
  const int n = integer(field(j, "n", "mesh"), "mesh.n");
  const int extra = j.contains("extra_layers")
                        ? integer(j.at("extra_layers"), "mesh.extra_layers")
                        : 0;
  MeshKind kind;
  try {
    kind = parse_mesh_kind(kind_text);
  } catch (const Error &e) {
    parse_error(std::string("mesh.kind: ") + e.what());
  }
  if (kind == MeshKind::Triangular && extra != 0)
    parse_error("mesh.extra_layers: only square meshes take extra layers");
  return kind == MeshKind::Square ? MeshLayout::square(n, extra) : MeshLayout::triangular(n);
}

// Maps each entry of a "nodes" array onto its layout index by position.
template <typename Fn>
void for_each_node(const json &j, const MeshLayout &layout, Fn &&fn) {
  const json &nodes = field(j, "nodes", "mesh");
  if (!nodes.is_array()) parse_error("mesh.nodes: expected an array");
  if (nodes.size() != layout.size()) {
    std::ostringstream msg;
    msg << "mesh.nodes: expected " << layout.size() << " nodes, got " << nodes.size();
    parse_error(msg.str());
  }
  std::vector<bool> seen(layout.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "mesh.nodes[" + std::to_string(i) + "]";
    const int layer = integer(field(nodes[i], "layer", where), where + ".layer");
    const int top = integer(field(nodes[i], "top_mode", where), where + ".top_mode");
    const int idx = layout.find(layer, top);
    if (idx < 0 || seen[idx])
      parse_error(where + ": no free node at (layer " + std::to_string(layer) +
                  ", top_mode " + std::to_string(top) + ")");
    seen[idx] = true;
    fn(static_cast<std::size_t>(idx), nodes[i], where);
  }
}

json layout_header(const MeshLayout &layout) {
  json j;
  j["kind"] = std::string(to_string(layout.kind()));
  j["n"] = layout.n_modes();
  j["extra_layers"] = layout.extra_layers();
  return j;
}

}  // namespace

json matrix_to_json(const UnitaryMatrix &u) {
  const int n = u.dim();
  json re = json::array();
  json im = json::array();
  for (int i = 0; i < n; ++i) {
    json rr = json::array();
    json ri = json::array();
    for (int k = 0; k < n; ++k) {
      rr.push_back(u(i, k).real());
      ri.push_back(u(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  json j;
  j["n"] = n;
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

UnitaryMatrix matrix_from_json(const json &j) {
  const int n = integer(field(j, "n", "matrix"), "matrix.n");
  if (n < 1) throw Error(ErrorCode::InvalidDimension, "matrix.n: must be >= 1");
  const json &re = field(j, "re", "matrix");
  const json &im = field(j, "im", "matrix");
  ComplexMatrix m(n, n);
  for (const auto *part : {&re, &im}) {
    const char *name = part == &re ? "matrix.re" : "matrix.im";
    if (!part->is_array() || part->size() != static_cast<std::size_t>(n))
      parse_error(std::string(name) + ": expected " + std::to_string(n) + " rows");
    for (int i = 0; i < n; ++i) {
      const json &row = (*part)[i];
      const std::string where = std::string(name) + "[" + std::to_string(i) + "]";
      if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
        parse_error(where + ": expected " + std::to_string(n) + " entries");
      for (int k = 0; k < n; ++k) {
        const double v = number(row[k], where + "[" + std::to_string(k) + "]");
        if (part == &re)
          m(i, k) = Complex(v, 0.0);
        else
          m(i, k) = Complex(m(i, k).real(), v);
      }
    }
  }
  return UnitaryMatrix::from_matrix(std::move(m));
}

json settings_to_json(const MeshSettings &s) {
  json j = layout_header(s.layout);
  json nodes = json::array();
  for (std::size_t k = 0; k < s.nodes.size(); ++k) {
    const NodeId &id = s.layout.nodes()[k];
    nodes.push_back({{"layer", id.layer},
                     {"slot", id.slot},
                     {"top_mode", id.top_mode},
                     {"R", s.nodes[k].reflectivity},
                     {"phi", s.nodes[k].phase}});
  }
  j["nodes"] = std::move(nodes);
  j["output_phases"] = s.output_phases;
  return j;
}

MeshSettings settings_from_json(const json &j) {
  MeshSettings s = identity_settings(layout_from_json(j));
  for_each_node(j, s.layout, [&](std::size_t idx, const json &node, const std::string &where) {
    s.nodes[idx].reflectivity = number(field(node, "R", where), where + ".R");
    s.nodes[idx].phase = number(field(node, "phi", where), where + ".phi");
  });
  const json &phases = field(j, "output_phases", "mesh");
  if (!phases.is_array() || phases.size() != static_cast<std::size_t>(s.layout.n_modes()))
    parse_error("mesh.output_phases: expected " + std::to_string(s.layout.n_modes()) +
                " entries");
  for (std::size_t i = 0; i < phases.size(); ++i)
    s.output_phases[i] = number(phases[i], "mesh.output_phases[" + std::to_string(i) + "]");
  try {
    s.validate();
  } catch (const Error &e) {
    parse_error(std::string("mesh: ") + e.what());
  }
  return s;
}

json hardware_to_json(const HardwareSample &hw) {
  json j = layout_header(hw.layout);
  j["sigma"] = hw.sigma;
  j["seed"] = hw.seed;
  json nodes = json::array();
  for (std::size_t k = 0; k < hw.nodes.size(); ++k) {
    const NodeId &id = hw.layout.nodes()[k];
    const NodeHardware &h = hw.nodes[k];
    nodes.push_back({{"layer", id.layer},
                     {"slot", id.slot},
                     {"top_mode", id.top_mode},
                     {"r1", h.r1},
                     {"r2", h.r2},
                     {"Rmin", h.range.min},
                     {"Rmax", h.range.max}});
  }
  j["nodes"] = std::move(nodes);
  return j;
}

HardwareSample hardware_from_json(const json &j) {
  HardwareSample hw;
  hw.layout = layout_from_json(j);
  hw.sigma = number(field(j, "sigma", "hardware"), "hardware.sigma");
  const json &seed = field(j, "seed", "hardware");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
    parse_error("hardware.seed: expected a non-negative integer");
  hw.seed = seed.get<std::uint64_t>();
  hw.nodes.resize(hw.layout.size());
  for_each_node(j, hw.layout, [&](std::size_t idx, const json &node, const std::string &where) {
    NodeHardware &h = hw.nodes[idx];
    h.r1 = number(field(node, "r1", where), where + ".r1");
    h.r2 = number(field(node, "r2", where), where + ".r2");
    try {
      h.range = achievable_range(h.r1, h.r2);
    } catch (const Error &e) {
      parse_error(where + ": " + e.what());
    }
  });
  return hw;
}

json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "failed reading '" + path.string() + "'");
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::Parse, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

void write_json_file(const std::filesystem::path &path, const json &j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace photomesh::io
