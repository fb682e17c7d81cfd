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
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "photomesh/photomesh.h"

namespace {

const std::filesystem::path kDir = std::filesystem::temp_directory_path() / "photomesh_capi";

class CApi : public ::testing::Test {
 protected:
  void SetUp() override { std::filesystem::create_directories(kDir); }
  void TearDown() override { std::filesystem::remove_all(kDir); }
};

TEST_F(CApi, VersionAndErrors) {
  EXPECT_EQ(std::string(pm_version()).rfind("photomesh ", 0), 0u);
  pm_matrix *m = nullptr;
  EXPECT_EQ(pm_matrix_haar(0, 1, &m), PM_ERR_INVALID_DIMENSION);
  EXPECT_EQ(m, nullptr);
  EXPECT_STRNE(pm_last_error(), "");
  EXPECT_EQ(pm_matrix_haar(3, 1, nullptr), PM_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(pm_matrix_haar(3, 1, &m), PM_OK);
  EXPECT_STREQ(pm_last_error(), "");
  double re = 0, im = 0;
  EXPECT_EQ(pm_matrix_entry(m, 3, 0, &re, &im), PM_ERR_OUT_OF_RANGE);
  pm_matrix_free(m);
  pm_matrix_free(nullptr);
}

TEST_F(CApi, DecomposeRoundtripThroughFiles) {
  pm_matrix *u = nullptr;
  ASSERT_EQ(pm_matrix_haar(6, 4, &u), PM_OK);
  const std::string mpath = (kDir / "u.json").string();
  const std::string spath = (kDir / "s.json").string();
  ASSERT_EQ(pm_matrix_save(u, mpath.c_str()), PM_OK);
  pm_matrix *loaded = nullptr;
  ASSERT_EQ(pm_matrix_load(mpath.c_str(), &loaded), PM_OK);
  double dev = 1;
  ASSERT_EQ(pm_max_deviation(u, loaded, &dev), PM_OK);
  EXPECT_EQ(dev, 0.0);

  for (pm_mesh_kind kind : {PM_MESH_SQUARE, PM_MESH_TRIANGULAR}) {
    pm_settings *s = nullptr;
    ASSERT_EQ(pm_decompose(loaded, kind, &s), PM_OK);
    EXPECT_EQ(pm_settings_node_count(s), 15);
    ASSERT_EQ(pm_settings_save(s, spath.c_str()), PM_OK);
    pm_settings *s2 = nullptr;
    ASSERT_EQ(pm_settings_load(spath.c_str(), &s2), PM_OK);
    pm_matrix *rebuilt = nullptr;
    ASSERT_EQ(pm_settings_unitary(s2, &rebuilt), PM_OK);
    ASSERT_EQ(pm_max_deviation(u, rebuilt, &dev), PM_OK);
    EXPECT_LT(dev, 1e-10);
    double f = 0;
    ASSERT_EQ(pm_fidelity(u, rebuilt, &f), PM_OK);
    EXPECT_NEAR(f, 1.0, 1e-12);
    pm_matrix_free(rebuilt);
    pm_settings_free(s);
    pm_settings_free(s2);
  }
  pm_matrix_free(u);
  pm_matrix_free(loaded);
}

TEST_F(CApi, LoadFailures) {
  pm_matrix *m = nullptr;
  EXPECT_EQ(pm_matrix_load((kDir / "missing.json").string().c_str(), &m), PM_ERR_IO);
  const std::string bad = (kDir / "bad.json").string();
  FILE *f = std::fopen(bad.c_str(), "w");
  std::fputs("{\"n\": 2, \"re\": [[1, 0], [0, 2]], \"im\": [[0, 0], [0, 0]]}", f);
  std::fclose(f);
  EXPECT_EQ(pm_matrix_load(bad.c_str(), &m), PM_ERR_NOT_UNITARY);
  EXPECT_NEAR(pm_last_deviation(), 3.0, 1e-12);
}

TEST_F(CApi, SimulateAndOptimize) {
  pm_matrix *u = nullptr;
  ASSERT_EQ(pm_matrix_fourier(4, &u), PM_OK);
  pm_simulation_report r{};
  ASSERT_EQ(pm_simulate(u, PM_MESH_SQUARE, 0.0, 1, &r), PM_OK);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-10);
  EXPECT_EQ(r.affected, 0);
  EXPECT_EQ(pm_simulate(u, PM_MESH_SQUARE, -1.0, 1, &r), PM_ERR_INVALID_ARGUMENT);

  pm_optimize_options o{0, 0, 0.0};
  pm_optimization_report rep{};
  ASSERT_EQ(pm_optimize(u, 0.0, 1, &o, &rep, nullptr), PM_OK);
  EXPECT_EQ(rep.enhancement, 1.0);
  pm_matrix_free(u);

  ASSERT_EQ(pm_matrix_haar(2, 5, &u), PM_OK);
  o.extra_layers = 1;
  pm_settings *s = nullptr;
  ASSERT_EQ(pm_optimize(u, 0.05, 5, &o, &rep, &s), PM_OK);
  EXPECT_GE(rep.fidelity_after, 1 - 1e-6);
  EXPECT_EQ(pm_settings_node_count(s), 2);
  pm_settings_free(s);
  pm_matrix_free(u);
}

TEST_F(CApi, ExperimentRun) {
  char summary[256];
  const std::string out = (kDir / "exp").string();
  ASSERT_EQ(pm_experiment_run("fourier", nullptr, "{\"sizes\": [4, 8], \"haar_samples\": 3}",
                              out.c_str(), 2, summary, sizeof(summary)),
            PM_OK);
  EXPECT_EQ(std::string(summary).rfind("fourier:", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(kDir / "exp" / "fourier.csv"));
  EXPECT_EQ(pm_experiment_run("fig9", nullptr, nullptr, out.c_str(), 1, nullptr, 0),
            PM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(pm_experiment_run("fig2", nullptr, "{\"samples\": \"many\"}", out.c_str(), 1,
                              nullptr, 0),
            PM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(std::string(pm_last_error()).rfind("config.samples:", 0), 0u);
  EXPECT_EQ(pm_experiment_run("fig2", nullptr, "{oops", out.c_str(), 1, nullptr, 0),
            PM_ERR_PARSE);
}

}  // namespace
