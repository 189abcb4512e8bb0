/*
 * Copyright (c) 2026, hxid contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "report.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <string>

#include "csv.hpp"
#include "doctest.h"
#include "json.hpp"
#include "synth.hpp"
#include "test_util.hpp"

using namespace hxid;
namespace fs = std::filesystem;

namespace {

SweepReport tiny_report() {
  ScenarioSpec spec = scenario_by_name("roundtrip", 41);
  spec.duration_hours = 1.5;
  const RegularFrame frame = generate_euler_frame(spec);
  const auto [train, test] = split_frame(frame, {1.0, 0.5, "custom"});
  EstimationProblem problem;
  problem.frame = train;
  problem.budget = 200;
  problem.n_starts = 2;
  EvalFrames eval;
  eval.train = train;
  eval.test = test;
  return run_sweep(problem, 99, std::vector<double>{0.0, 0.35}, eval);
}

}  // namespace

TEST_CASE("JsonWriter produces well-formed nested documents") {
  JsonWriter w;
  w.begin_object();
  w.key("name").value(std::string_view("he\"llo\n"));
  w.key("flag").value(true);
  w.key("items").begin_array();
  w.value(1.5);
  w.null();
  w.begin_object().key("n").value(static_cast<long long>(-3)).end_object();
  w.end_array();
  w.key("empty").begin_object().end_object();
  w.end_object();

  const auto parsed = nlohmann::json::parse(w.str());
  CHECK(parsed["name"] == "he\"llo\n");
  CHECK(parsed["flag"] == true);
  CHECK(parsed["items"][0] == 1.5);
  CHECK(parsed["items"][1].is_null());
  CHECK(parsed["items"][2]["n"] == -3);
  CHECK(parsed["empty"].is_object());
}

TEST_CASE("floats are serialized with 17 significant digits") {
  JsonWriter w;
  w.begin_array();
  w.value(0.35);
  w.value(1.0);
  w.end_array();
  CHECK(w.str() == "[0.34999999999999998,1]");
}

TEST_CASE("non-finite values serialize as null, keeping the JSON valid") {
  JsonWriter w;
  w.begin_array();
  w.value(std::numeric_limits<double>::infinity());
  w.value(std::nan(""));
  w.value(2.0);
  w.end_array();
  CHECK(w.str() == "[null,null,2]");
  CHECK(nlohmann::json::parse(w.str()).size() == 3);
}

TEST_CASE("estimation result JSON carries the documented fields") {
  ScenarioSpec spec = scenario_by_name("roundtrip", 42);
  spec.duration_hours = 1.0;
  EstimationProblem problem;
  problem.frame = generate_euler_frame(spec);
  problem.budget = 150;
  problem.n_starts = 2;
  const EstimationResult result = estimate(problem);

  const auto j = nlohmann::json::parse(estimation_result_json(result));
  CHECK(j["initial"].size() == 4);
  CHECK(j["initial"][0] == 0.1);
  CHECK(j["params"].size() == 4);
  CHECK(j["objective"].is_number());
  CHECK(j["converged"].is_boolean());
  CHECK(j["evaluations"].is_number_integer());
  CHECK(j["sigma"] == 0.0);
  CHECK(j["per_start"].size() == 2);
  CHECK(j["per_start"][0].contains("final_j"));
  CHECK(j["per_start"][0]["discarded"].is_boolean());
}

TEST_CASE("sweep report JSON matches the documented schema") {
  const SweepReport report = tiny_report();
  const std::string text = sweep_report_json(report);
  const auto j = nlohmann::json::parse(text);

  REQUIRE(j.contains("scales"));
  REQUIRE(j.contains("rows"));
  REQUIRE(j.contains("selected_sigma"));
  REQUIRE(j.contains("selection_rule"));
  REQUIRE(j.contains("master_seed"));
  REQUIRE(j.contains("config_digest"));
  CHECK(j["scales"].size() == 2);
  CHECK(j["master_seed"] == 99);
  CHECK(j["config_digest"].is_string());
  CHECK(j["config_digest"].get<std::string>().size() == 16);

  const auto& row = j["rows"][1];
  CHECK(row["sigma"] == 0.35);
  CHECK(row["failed"] == false);
  CHECK(row["result"]["per_start"].is_array());
  for (const char* metric : {"max_ae", "mae", "mape", "mse", "rmse", "r2"}) {
    CHECK(row["metrics"]["train"]["T_co"].contains(metric));
    CHECK(row["metrics"]["test"]["T_ho"].contains(metric));
  }
}

TEST_CASE("evaluation JSON lists datasets in deterministic order") {
  const SweepReport report = tiny_report();
  const auto& metrics = report.rows[0].metrics;
  const std::string text = evaluation_json(metrics);
  const auto j = nlohmann::json::parse(text);
  CHECK(j.contains("train"));
  CHECK(j.contains("test"));
  CHECK(j["train"]["T_co"]["rmse"].is_number());
  // std::map ordering: "test" precedes "train" lexicographically.
  CHECK(text.find("\"test\"") < text.find("\"train\""));
}

TEST_CASE("sweep plots are emitted as deterministic SVG") {
  const SweepReport report = tiny_report();
  const fs::path dir =
      fs::temp_directory_path() / "hxid_plot_test";
  fs::create_directories(dir);

  write_sweep_plots(report, dir.string());
  for (const char* name : {"rmse.svg", "mape.svg", "max_ae.svg", "r2.svg"}) {
    const std::string text = read_text((dir / name).string());
    CHECK(text.rfind("<svg", 0) == 0);
    CHECK(text.find("</svg>") != std::string::npos);
    CHECK(text.find("train") != std::string::npos);
    CHECK(text.find("test") != std::string::npos);
  }
  const std::string first = read_text((dir / "rmse.svg").string());
  write_sweep_plots(report, dir.string());
  CHECK(read_text((dir / "rmse.svg").string()) == first);

  std::error_code ec;
  fs::remove_all(dir, ec);
}
