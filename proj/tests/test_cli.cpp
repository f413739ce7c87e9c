// Copyright 2026 The ssrlda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ssrlda/dataio.hpp"
#include "ssrlda/synthetic.hpp"

using namespace ssrlda;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  fs::path dir;

  Fixture() {
    dir = fs::temp_directory_path() / "ssrlda_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    ShiftedGaussianSpec spec;
    spec.per_domain = 60;
    spec.dim = 6;
    spec.informative = 4;
    spec.shifted = 2;
    const DomainPair pair = make_shifted_gaussian_pair(spec);
    save(dir / "src.csv", pair.source);
    LabeledMatrix target = pair.target;
    target.labels = pair.target_truth;
    save(dir / "tgt.csv", target);
    LabeledMatrix flat = pair.source;
    flat.values.col(1).setZero();
    save(dir / "flat_src.csv", flat);
    flat = target;
    flat.values.col(1).setZero();
    save(dir / "flat_tgt.csv", flat);
  }
  ~Fixture() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  int run(const std::string& args, const std::string& log = "log.txt") const {
    const std::string cmd = std::string(SSRLDA_CLI_PATH) + " " + args + " > " + path(log) + " 2> " + path("err.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string pair_args() const { return "--source " + path("src.csv") + " --target " + path("tgt.csv"); }
};

}  // namespace

TEST_CASE("cli solve writes its outputs") {
  Fixture f;
  CHECK(f.run("solve " + f.pair_args() + " --set layers=2 --seed 3 --out " + f.path("out")) == 0);
  for (const char* file : {"predictions.csv", "trace.csv", "model.txt", "config.txt"})
    CHECK(fs::exists(f.dir / "out" / file));
  std::ifstream in(f.dir / "out" / "predictions.csv");
  const auto table = read_csv_table(in);
  CHECK(table.size() == 61);
  CHECK(table[0] == std::vector<std::string>{"index", "prediction", "truth"});
  CHECK(f.read("out/config.txt").find("seed=3") != std::string::npos);

  CHECK(f.run("solve " + f.pair_args() + " --format json --variant omda_ad", "solve.json") == 0);
  const auto j = nlohmann::json::parse(f.read("solve.json"));
  CHECK(j["variant"] == "omda_ad");
  CHECK(j["predictions"].size() == 60);
}

TEST_CASE("cli reads a config file") {
  Fixture f;
  {
    std::ofstream c(f.dir / "c.txt");
    c << "preset=office\nlayers=1\n";
  }
  CHECK(f.run("solve " + f.pair_args() + " --config " + f.path("c.txt") + " --out " + f.path("o")) == 0);
  const std::string cfg = f.read("o/config.txt");
  CHECK(cfg.find("layers=1") != std::string::npos);
  CHECK(cfg.find("noise=0.6") != std::string::npos);
}

TEST_CASE("cli sweep exit codes") {
  Fixture f;
  CHECK(f.run("sweep " + f.pair_args() + " --axis l --values 1,2", "sweep.csv") == 0);
  std::istringstream s(f.read("sweep.csv"));
  CHECK(read_csv_table(s).size() == 3);

  const std::string flat = "--source " + f.path("flat_src.csv") + " --target " + f.path("flat_tgt.csv");
  CHECK(f.run("sweep " + flat + " --set noise=0 --set beta=0 --axis lambda --values 0,1") == 2);
  CHECK(f.read("err.txt").find("lambda") != std::string::npos);

  CHECK(f.run("sweep " + f.pair_args() + " --axis p --values 1.5") == 1);
  CHECK(f.run("sweep " + f.pair_args() + " --axis q --values 1") == 1);
}

TEST_CASE("cli bench") {
  Fixture f;
  {
    std::ofstream m(f.dir / "empty.csv");
    m << "name,source_path,target_path,config_overrides\n";
  }
  CHECK(f.run("bench --manifest " + f.path("empty.csv")) == 0);

  {
    std::ofstream m(f.dir / "tasks.csv");
    m << "syn,src.csv,tgt.csv,layers=1\nghost,none.csv,tgt.csv,\n";
  }
  CHECK(f.run("bench --manifest " + f.path("tasks.csv") + " --format json --out " + f.path("b")) == 0);
  CHECK(f.read("err.txt").find("ghost skipped") != std::string::npos);
  const auto j = nlohmann::json::parse(f.read("b/reports.json"));
  CHECK(j.size() == 2);
  CHECK(j[0]["status"] == "skipped");
  CHECK(j[1]["status"] == "ok");
  CHECK(fs::exists(f.dir / "b" / "summary.txt"));

  {
    std::ofstream m(f.dir / "broken.csv");
    m << "syn,src.csv,tgt.csv,layers=0\n";
  }
  CHECK(f.run("bench --manifest " + f.path("broken.csv")) == 2);
}

TEST_CASE("cli pad and ablate") {
  Fixture f;
  CHECK(f.run("pad " + f.pair_args() + " --folds 3", "pad.csv") == 0);
  std::istringstream s(f.read("pad.csv"));
  const auto table = read_csv_table(s);
  REQUIRE(table.size() == 3);
  CHECK(table[1][0] == "raw");
  CHECK(std::stod(table[1][2]) <= 2.0);

  CHECK(f.run("ablate " + f.pair_args() + " --format json", "abl.json") == 0);
  const auto j = nlohmann::json::parse(f.read("abl.json"));
  for (const char* m : {"svm", "full", "omda_ad", "ommda"}) CHECK(j.contains(m));
}

TEST_CASE("cli usage errors are fatal") {
  Fixture f;
  CHECK(f.run("") == 1);
  CHECK(f.run("solve " + f.pair_args() + " --format xml") == 1);
  CHECK(f.run("solve --source " + f.path("nope.csv") + " --target " + f.path("tgt.csv")) == 1);
  CHECK(f.run("solve " + f.pair_args() + " --set nonsense=1") == 1);
  CHECK(f.run("--help") == 0);
}
