// Copyright 2026 The ALIP Authors
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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any gating criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "alip/error.h"
#include "alip/io.h"
#include "alip/metrics.h"
#include "alip/model_file.h"
#include "alip/pipeline.h"
#include "alip/simgen.h"
#include "alip/solver.h"
#include "test_util.h"

namespace {

using namespace alip;
using Clock = std::chrono::steady_clock;

int failures = 0;

void Report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

double RunAcc(const HouseholdModel& m, const SimResult& sim, const Enhancements& e) {
  PipelineConfig c;
  c.enhancements = e;
  const DisaggregationResult r = Run(m, sim.series.aggregate, c);
  return Acc(*GroundTruthFor(sim.series, m), r.power);
}

void OracleEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> zreal(0.0, 800.0);
  std::uniform_int_distribution<int> zgrid(0, 80);
  int models = 0, solves = 0, mismatches = 0, infeasible = 0;
  for (int t = 0; t < 600; ++t) {
    const HouseholdModel m = Compile(testing::RandomSpecs(rng, 5, 3, true, true));
    ++models;
    for (int q = 0; q < 2; ++q) {
      // Grid readings hit exact ties between candidate sums.
      const double z = q == 0 ? 10.0 * zgrid(rng) : zreal(rng);
      for (const Enhancements& e : {Enhancements::None(), Enhancements::All()}) {
        std::optional<StateAssignment> bb, ex;
        try {
          bb = SolveBranchAndBound(BuildInstance(m, z, e), m);
        } catch (const Error&) {
        }
        try {
          ex = SolveExhaustive(m, z, e);
        } catch (const Error&) {
        }
        ++solves;
        if (!bb && !ex) {
          ++infeasible;
          continue;
        }
        if (!bb || !ex || bb->delta != ex->delta || bb->b != ex->b) ++mismatches;
      }
    }
  }
  const double secs = Seconds(start);
  Report(1, "oracle equivalence",
         mismatches == 0 && models >= 500 && secs < 60.0,
         std::to_string(models) + " models, " + std::to_string(solves) + " solves (" +
             std::to_string(infeasible) + " infeasible in both), " +
             std::to_string(mismatches) + " mismatches, " + Fixed(secs, 2) + " s");
}

void LpOptimality() {
  const auto start = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_int_distribution<int> units(0, 16 * 1000);
  int problems = 0, bad_objective = 0, bad_vector = 0;
  double worst = 0.0;
  for (int t = 0; t < 1200; ++t) {
    RefinementProblem p;
    const int k = count(rng);
    double sl = 0.0, su = 0.0;
    for (int i = 0; i < k; ++i) {
      const double a = units(rng) / 16.0, b = units(rng) / 16.0;
      p.lower.push_back(std::min(a, b));
      p.upper.push_back(std::max(a, b));
      p.p2.push_back(static_cast<std::size_t>(i));
      sl += p.lower.back();
      su += p.upper.back();
    }
    // A third of the targets fall below, inside and above the box sum.
    const double span = su - sl + 1.0;
    p.z_residual = std::max(0.0, sl + (units(rng) / 16000.0 * 3.0 - 1.0) * span);
    p.z_residual = std::round(p.z_residual * 16.0) / 16.0;
    const RefinementSolution s = SolveRefinementLp(p);
    const double expect = std::max({0.0, sl - p.z_residual, p.z_residual - su});
    worst = std::max(worst, std::abs(s.residual - expect));
    if (std::abs(s.residual - expect) > 1e-9) ++bad_objective;
    if (s.y != RefineOracle(p)) ++bad_vector;
    ++problems;
  }
  const double secs = Seconds(start);
  Report(2, "LP refinement optimality",
         bad_objective == 0 && bad_vector == 0 && problems >= 1000 && secs < 10.0,
         std::to_string(problems) + " problems, worst objective error " +
             Fixed(worst, 12) + ", " + std::to_string(bad_vector) +
             " vector mismatches, " + Fixed(secs, 2) + " s");
}

void SanityRecovery() {
  const SimScenario sc = Preset("clean", 1, 10000);
  const HouseholdModel m = CompileModelFile(sc.model);
  const double acc = RunAcc(m, Simulate(sc), Enhancements::None());
  Report(3, "sanity recovery", acc == 1.0,
         std::to_string(m.num_appliances()) + " appliances, 10000 samples, IP ACC = " +
             FormatNumber(acc));
}

void EnhancementValue() {
  const std::vector<SimScenario> suite = CollisionSuite(20, 10000, 1000);
  double sum_ip = 0.0, sum_alip = 0.0;
  int regressions = 0;
  std::string per;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const HouseholdModel m = CompileModelFile(suite[i].model);
    const SimResult sim = Simulate(suite[i]);
    const double ip = RunAcc(m, sim, Enhancements::None());
    const double alip = RunAcc(m, sim, Enhancements::All());
    sum_ip += ip;
    sum_alip += alip;
    regressions += alip < ip;
    per += (i ? " " : "") + Fixed(alip - ip, 3);
  }
  const double n = static_cast<double>(suite.size());
  const double gain = (sum_alip - sum_ip) / n;
  std::printf("     per-scenario ALIP-IP: %s\n", per.c_str());
  Report(4, "enhancement value", gain >= 0.05,
         std::to_string(suite.size()) + " scenarios x 10000 samples, mean IP " +
             Fixed(sum_ip / n) + ", mean ALIP " + Fixed(sum_alip / n) + ", gain " +
             Fixed(gain) + " (bar 0.05), " + std::to_string(regressions) +
             " per-scenario regressions");
}

void AblationDirection() {
  const SimScenario col = Preset("collision", 7, 10000);
  const HouseholdModel cm = CompileModelFile(col.model);
  const SimResult csim = Simulate(col);
  Enhancements only_rows = Enhancements::None();
  only_rows.constraints = true;
  const double c0 = RunAcc(cm, csim, Enhancements::None());
  const double c1 = RunAcc(cm, csim, only_rows);

  const SimScenario ch = Preset("chatter", 7, 10000);
  const HouseholdModel hm = CompileModelFile(ch.model);
  const SimResult hsim = Simulate(ch);
  Enhancements only_median = Enhancements::None();
  only_median.median = true;
  const double h0 = RunAcc(hm, hsim, Enhancements::None());
  const double h1 = RunAcc(hm, hsim, only_median);
  Report(5, "stage ablation direction", c1 > c0 && h1 > h0,
         "collision IP " + Fixed(c0) + " -> +constraints " + Fixed(c1) +
             "; chatter IP " + Fixed(h0) + " -> +median " + Fixed(h1));
}

void Throughput() {
  const SimScenario sc = Preset("exp1", 1, 10000);
  const HouseholdModel m = CompileModelFile(sc.model);
  const SimResult sim = Simulate(sc);
  PipelineConfig c;
  const DisaggregationResult r = Run(m, sim.series.aggregate, c);
  const double ms = r.ms_per_sample();
  Report(6, "throughput", ms < 100.0,
         "n=" + std::to_string(m.num_appliances()) + ", m=" +
             std::to_string(m.num_states()) + ", 10000 samples, 1 thread: " +
             Fixed(ms, 4) + " ms/sample (" + (ms < 20.0 ? "under" : "OVER") +
             " the 20 ms target; hard limit 100 ms)");
}

void MetricsFidelity() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> v(0.0, 5000.0);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t T = 1 + rng() % 500, n = 1 + rng() % 6;
    DenseMatrix s(T, n), e(T, n);
    for (std::size_t k = 0; k < T; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        s(k, i) = rng() % 4 ? v(rng) : 0.0;
        e(k, i) = rng() % 4 ? v(rng) : 0.0;
      }
    }
    s(0, 0) = 1.0;
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      long double ni = 0, di = 0;
      std::vector<double> si(T), ei(T);
      for (std::size_t k = 0; k < T; ++k) {
        ni += std::fabs(static_cast<long double>(s(k, i)) - e(k, i));
        di += std::fabs(static_cast<long double>(s(k, i)));
        si[k] = s(k, i);
        ei[k] = e(k, i);
      }
      num += ni;
      den += di;
      if (di > 0) {
        const double oracle = static_cast<double>(1.0L - ni / (2.0L * di));
        worst = std::max(worst, std::abs(Ac(si, ei) - oracle));
      }
    }
    worst = std::max(worst, std::abs(Acc(s, e) -
                                     static_cast<double>(1.0L - num / (2.0L * den))));
  }
  // Estimate mass far above truth mass drives AC below zero.
  const std::vector<double> truth{100, 0, 100, 0}, wild{0, 400, 0, 400};
  const double negative = Ac(truth, wild);
  Report(7, "metrics fidelity", worst <= 1e-12 && negative < 0.0,
         "worst deviation from naive oracle " + Fixed(worst, 15) +
             " over 200 random matrices; over-estimate case AC = " +
             FormatNumber(negative));
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

bool Shell(const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()) == 0; }

void Determinism(const std::string& cli, const std::string& workdir) {
  namespace fs = std::filesystem;
  fs::create_directories(workdir);
  const std::string w = workdir + "/";
  const std::string q = "'" + cli + "'";
  bool ok = true;
  std::string detail;
  for (int i = 0; i < 2; ++i) {
    ok &= Shell(q + " simulate --preset mixed --seed 3 --length 6000 --out " + w + "data" +
                std::to_string(i) + ".csv --model-out " + w + "model" + std::to_string(i) +
                ".yaml");
  }
  ok &= Slurp(w + "data0.csv") == Slurp(w + "data1.csv") && !Slurp(w + "data0.csv").empty();
  ok &= Slurp(w + "model0.yaml") == Slurp(w + "model1.yaml");
  if (!ok) detail = "simulate outputs differ or failed; ";

  const std::string inputs = " --model " + w + "model0.yaml --data " + w + "data0.csv";
  const std::vector<std::string> verbs{"run", "baseline", "ablate"};
  int compared = 0;
  for (const std::string& verb : verbs) {
    std::vector<std::string> texts;
    const std::vector<int> threads{1, 1, 4};
    for (std::size_t i = 0; i < threads.size(); ++i) {
      const std::string tag = w + verb + std::to_string(i);
      const bool ran = Shell(q + " " + verb + inputs + " --block-size 1000 --threads " +
                             std::to_string(threads[i]) + " --report " + tag +
                             ".json --plot-data " + tag + ".csv");
      if (!ran) {
        ok = false;
        detail += verb + " failed; ";
        break;
      }
      texts.push_back(Slurp(tag + ".json") + "\x1f" + Slurp(tag + ".csv"));
    }
    for (std::size_t i = 1; i < texts.size(); ++i) {
      ++compared;
      if (texts[i] != texts[0]) {
        ok = false;
        detail += verb + " output " + std::to_string(i) + " differs; ";
      }
    }
  }
  Report(8, "determinism", ok,
         detail + "simulate x2 and " + std::to_string(compared) +
             " report/plot pairs (run, baseline, ablate at --threads 1, 1, 4) compared "
             "byte-for-byte");
}

// ALIP_DATASETS="model.yaml:data.csv;model2.yaml:data2.csv". Each CSV needs a
// timestamp, aggregate and one column per model appliance id.
void DatasetCheck() {
  const char* env = std::getenv("ALIP_DATASETS");
  if (env == nullptr || std::string(env).empty()) {
    std::printf("SKIP [9] dataset ordering: ALIP_DATASETS not set (optional, not gating)\n");
    return;
  }
  std::stringstream list(env);
  std::string item;
  int total = 0, ordered = 0;
  std::string detail;
  while (std::getline(list, item, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) continue;
    try {
      const HouseholdModel m = CompileModelFile(LoadModelFile(item.substr(0, colon)));
      ColumnMap cols;
      for (const ApplianceSpec& a : m.appliances()) cols.channels.push_back(a.id);
      SimResult data;
      data.series = LoadCsv(item.substr(colon + 1), cols);
      const double ip = RunAcc(m, data, Enhancements::None());
      const double alip = RunAcc(m, data, Enhancements::All());
      ++total;
      ordered += alip >= ip;
      detail += " " + item.substr(colon + 1) + ": IP " + Fixed(ip) + " ALIP " + Fixed(alip) + ";";
    } catch (const Error& e) {
      detail += std::string(" ") + e.what() + ";";
      ++total;
    }
  }
  std::printf("%s [9] dataset ordering (not gating): %d/%d with ALIP >= IP;%s\n",
              ordered == total && total > 0 ? "PASS" : "FAIL", ordered, total,
              detail.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("ALIP acceptance checks");
  std::string cli;
  std::string workdir = (std::filesystem::temp_directory_path() / "alip_acceptance").string();
  app.add_option("--cli", cli, "Path to the alip executable")->required();
  app.add_option("--workdir", workdir, "Scratch directory");
  CLI11_PARSE(app, argc, argv);

  OracleEquivalence();
  LpOptimality();
  SanityRecovery();
  EnhancementValue();
  AblationDirection();
  Throughput();
  MetricsFidelity();
  Determinism(cli, workdir);
  DatasetCheck();
  std::printf("%d gating criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
