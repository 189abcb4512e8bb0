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

// Black-box tests of the hxid binary: exit codes, output contracts and
// deterministic artifacts.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int exit_code = -1;
  std::string out;
  std::string err;
};

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / "hxid_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  Invocation run(const std::string& args) const {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = "cd \"" + dir.string() + "\" && \"" HXID_CLI_BIN
                            "\" " + args + " > \"" + out.string() +
                            "\" 2> \"" + err.string() + "\"";
    Invocation inv;
    const int raw = std::system(cmd.c_str());
    inv.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    inv.out = hxid::read_text(out.string());
    inv.err = hxid::read_text(err.string());
    return inv;
  }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream f(dir / name);
    f << content;
  }
  bool exists(const std::string& name) const { return fs::exists(dir / name); }
  std::string slurp(const std::string& name) const {
    return hxid::read_text((dir / name).string());
  }
};

}  // namespace

TEST_CASE("gen writes both scenario CSVs and stays quiet without --progress") {
  Workspace ws;
  const auto inv =
      ws.run("gen --scenario misspecified --seed 3 --out data");
  CHECK(inv.exit_code == 0);
  CHECK(inv.out.empty());
  CHECK(ws.exists("data/misspecified.csv"));
  CHECK(ws.exists("data/misspecified_validation.csv"));

  const auto progress =
      ws.run("gen --scenario roundtrip --seed 3 --out data --progress");
  CHECK(progress.exit_code == 0);
  CHECK(progress.out.find("roundtrip.csv") != std::string::npos);
}

TEST_CASE("invalid scenario and unknown flags are user errors (exit 2)") {
  Workspace ws;
  CHECK(ws.run("gen --scenario bogus").exit_code == 2);
  CHECK(ws.run("gen --no-such-flag").exit_code == 2);
  CHECK(ws.run("").exit_code == 2);  // missing subcommand
  const auto inv = ws.run("gen --scenario bogus");
  CHECK(inv.err.find("unknown scenario") != std::string::npos);
}

TEST_CASE("an unwritable output path is a user error (exit 2)") {
  Workspace ws;
  const auto inv =
      ws.run("gen --scenario roundtrip --out /proc/hxid_no_such_place");
  CHECK(inv.exit_code == 2);
  CHECK_FALSE(inv.err.empty());
}

TEST_CASE("prep errors: missing input, missing channel") {
  Workspace ws;
  CHECK(ws.run("prep").exit_code == 2);
  CHECK(ws.run("prep --in nothing.csv").exit_code == 2);
  // Five channels only: T_ho missing.
  ws.write("partial.csv",
           "time,channel,value\n"
           "0,T_hi,80\n0,T_ci,45\n0,m_h,2\n0,m_c,2\n0,T_co,55\n"
           "600,T_hi,81\n600,T_ci,45\n600,m_h,2\n600,m_c,2\n600,T_co,56\n");
  const auto inv = ws.run("prep --in partial.csv --out frame.csv");
  CHECK(inv.exit_code == 2);
  CHECK(inv.err.find("T_ho") != std::string::npos);
}

TEST_CASE("prep identity on regular input with window 1") {
  Workspace ws;
  REQUIRE(ws.run("gen --scenario roundtrip --seed 4 --out data").exit_code ==
          0);
  ws.write("prep.json", "{\"filter_window\": 1}");
  REQUIRE(ws.run("prep --config prep.json --in data/roundtrip.csv "
                 "--out frame.csv").exit_code == 0);
  // The roundtrip telemetry is already regular at 30 s, so prep with an
  // identity filter reproduces the raw values exactly.
  REQUIRE(ws.run("prep --config prep.json --in data/roundtrip.csv "
                 "--out frame2.csv").exit_code == 0);
  CHECK(ws.slurp("frame.csv") == ws.slurp("frame2.csv"));
  const auto frame = hxid::read_wide_csv((ws.dir / "frame.csv").string());
  CHECK(frame.dt == 30.0);  // default cadence applied when --dt is unset

  const auto raw = hxid::read_long_csv((ws.dir / "data/roundtrip.csv").string());
  for (const auto& series : raw) {
    REQUIRE(series.samples.size() == frame.size());
    const auto col = frame.col(series.channel);
    for (std::size_t i = 0; i < col.size(); ++i) {
      CHECK(col[i] == series.samples[i].value);
    }
  }
}

TEST_CASE("estimate defaults, sigma-zero identity and iteration log") {
  Workspace ws;
  REQUIRE(ws.run("gen --scenario roundtrip --seed 4 --out data").exit_code ==
          0);
  ws.write("cfg.json",
           "{\"filter_window\": 1, \"split\": {\"train_hours\": 3}, "
           "\"budget\": 600, \"n_starts\": 2, "
           "\"iteration_log\": \"iters.csv\"}");
  REQUIRE(ws.run("prep --in data/roundtrip.csv --config cfg.json "
                 "--out frame.csv").exit_code == 0);

  const auto a = ws.run(
      "estimate --config cfg.json --in frame.csv --out a.json --seed 11");
  CHECK(a.exit_code == 0);
  CHECK(a.out.empty());
  // Explicit --sigma 0 is byte-identical to omitting it.
  const auto b = ws.run(
      "estimate --config cfg.json --in frame.csv --out b.json --seed 11 "
      "--sigma 0");
  CHECK(b.exit_code == 0);
  CHECK(ws.slurp("a.json") == ws.slurp("b.json"));

  // The documented default start is recorded in the payload (0.1 at 17
  // significant digits).
  CHECK(ws.slurp("a.json").find(
            "\"initial\":[0.10000000000000001,0.10000000000000001,"
            "0.10000000000000001,0.10000000000000001]") !=
        std::string::npos);

  // Iteration log: `start_index,evaluations,J` lines.
  REQUIRE(ws.exists("iters.csv"));
  const std::string log = ws.slurp("iters.csv");
  CHECK(log.find_first_of("0123456789") == 0);
  CHECK(log.find(',') != std::string::npos);
}

TEST_CASE("evaluate requires parameters and emits the metric tables") {
  Workspace ws;
  REQUIRE(ws.run("gen --scenario roundtrip --seed 4 --out data").exit_code ==
          0);
  ws.write("cfg.json",
           "{\"filter_window\": 1, "
           "\"split\": {\"train_hours\": 2, \"test_hours\": 1}}");
  REQUIRE(ws.run("prep --in data/roundtrip.csv --config cfg.json "
                 "--out frame.csv").exit_code == 0);

  CHECK(ws.run("evaluate --config cfg.json --in frame.csv").exit_code == 2);

  ws.write("params.json",
           "{\"filter_window\": 1, "
           "\"split\": {\"train_hours\": 2, \"test_hours\": 1}, "
           "\"params\": [0.0284, 0.2218, 2.14, -1.1161]}");
  const auto inv = ws.run(
      "evaluate --config params.json --in frame.csv --out metrics.json");
  CHECK(inv.exit_code == 0);
  const std::string text = ws.slurp("metrics.json");
  for (const char* key :
       {"\"train\"", "\"test\"", "\"T_co\"", "\"T_ho\"", "\"max_ae\"",
        "\"mae\"", "\"mape\"", "\"mse\"", "\"rmse\"", "\"r2\""}) {
    CHECK(text.find(key) != std::string::npos);
  }
}

TEST_CASE("evaluating the generating parameters on euler data is perfect") {
  Workspace ws;
  REQUIRE(ws.run("gen --scenario roundtrip --seed 4 --out data").exit_code ==
          0);
  ws.write("cfg.json",
           "{\"filter_window\": 1, \"split\": \"none\", "
           "\"params\": [0.0284, 0.2218, 2.14, -1.1161]}");
  REQUIRE(ws.run("prep --in data/roundtrip.csv --config cfg.json "
                 "--out frame.csv").exit_code == 0);
  REQUIRE(ws.run("evaluate --config cfg.json --in frame.csv "
                 "--out metrics.json").exit_code == 0);
  const std::string text = ws.slurp("metrics.json");
  CHECK(text.find("\"rmse\":0,") != std::string::npos);
  CHECK(text.find("\"r2\":1") != std::string::npos);
}

TEST_CASE("config validation: unknown keys and bad types are exit 2") {
  Workspace ws;
  ws.write("bad1.json", "{\"no_such_key\": 1}");
  CHECK(ws.run("estimate --config bad1.json").exit_code == 2);
  ws.write("bad2.json", "{\"budget\": \"lots\"}");
  CHECK(ws.run("estimate --config bad2.json").exit_code == 2);
  ws.write("bad3.json", "{\"split\": \"D9\"}");
  CHECK(ws.run("estimate --config bad3.json").exit_code == 2);
  ws.write("bad4.json", "not json at all");
  CHECK(ws.run("estimate --config bad4.json").exit_code == 2);
  const auto inv = ws.run("estimate --config bad1.json");
  CHECK(inv.err.find("no_such_key") != std::string::npos);
}

TEST_CASE("sweep writes the report and plots with the default grid") {
  Workspace ws;
  REQUIRE(ws.run("gen --scenario roundtrip --seed 4 --out data").exit_code ==
          0);
  ws.write("cfg.json",
           "{\"filter_window\": 1, "
           "\"split\": {\"train_hours\": 2, \"test_hours\": 1}, "
           "\"budget\": 200, \"n_starts\": 2, "
           "\"scales\": [0, 0.35]}");
  REQUIRE(ws.run("prep --in data/roundtrip.csv --config cfg.json "
                 "--out frame.csv").exit_code == 0);
  const auto inv = ws.run(
      "sweep --config cfg.json --in frame.csv --out out/sweep.json");
  CHECK(inv.exit_code == 0);
  CHECK(ws.exists("out/sweep.json"));
  for (const char* f : {"rmse.svg", "mape.svg", "max_ae.svg", "r2.svg"}) {
    CHECK(ws.exists(std::string("out/plots/") + f));
  }
  const std::string report = ws.slurp("out/sweep.json");
  CHECK(report.find("\"selection_rule\"") != std::string::npos);
  CHECK(report.find("\"config_digest\"") != std::string::npos);
}
