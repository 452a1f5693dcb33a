// Copyright 2026 The mrsplit Authors
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

// Acceptance suite: every criterion at its stated tolerance, one PASS/FAIL
// line each. Exits 1 if any criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mrsplit/diagnostics.hpp"
#include "mrsplit/trainer.hpp"
#include "mrsplit/trajectory.hpp"
#include "mrsplit/verify.hpp"

namespace {

using namespace mrs;
namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 0;

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s [%2d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::string summary(const VerificationReport& r) {
  return r.theorem + " " + std::to_string(r.trials - r.failures) + "/" + std::to_string(r.trials) +
         fmt(" (min margin %.3g)", r.min_margin + 0.0);
}

void deep_trace() {
  RodTraceConfig c;
  c.seed = kSeed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto points = rod_trace(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::map<std::string, std::map<std::size_t, double>> rod;
  for (const auto& p : points) rod[p.variant][p.iter] = p.rod_mean;
  bool ok = secs < 120.0;
  std::string detail;
  for (const char* base : {"gcn", "sage"}) {
    const double r = rod[base][128];
    ok = ok && r <= 0.01;
    detail += std::string(base) + fmt("@128=%.2e ", r);
  }
  for (const char* mrs : {"mrs-gcn", "mrs-sage"}) {
    const double r8 = rod[mrs][8], r128 = rod[mrs][128];
    ok = ok && r128 >= 0.1 && std::abs(r128 - r8) <= 0.5 * r8;
    detail += std::string(mrs) + fmt("@8=%.3f @128=%.3f ", r8, r128);
  }
  detail += fmt("runtime %.1fs", secs);
  report(1, "deep random-weight trace (50 graphs, 128 layers)", ok, detail);
}

void rank_bound() {
  const auto r = verify_rank_theorem_random(500, derive_seed(kSeed, 1));
  report(2, "rank bound rank(out) >= rank(E), 500 trials", r.passed() && r.trials == 500, summary(r));
}

void independent_pairs() {
  const auto r = verify_independence_random(500, derive_seed(kSeed, 2));
  const bool dep = !structurally_independent(Eigen::Vector2d(4, 2), Eigen::Vector2d(2, 1));
  const bool ind = structurally_independent(Eigen::Vector2d(3, 2), Eigen::Vector2d(2, 1));
  report(3, "independent pairs give rank-2 rows, 500 trials", r.passed() && r.trials == 500 && dep && ind,
         summary(r) + "; (4,2)/(2,1) " + (dep ? "dependent" : "INDEPENDENT") + ", (3,2)/(2,1) " +
             (ind ? "independent" : "DEPENDENT"));
}

void zero_convergence() {
  const auto r = verify_zero_convergence(100, derive_seed(kSeed, 3));
  report(4, "DAG mean aggregation hits exact zero, 100 DAGs", r.passed() && r.trials == 100, summary(r));
}

void dag_pair() {
  const auto r = verify_dag_pair_rank(200, 16, derive_seed(kSeed, 4));
  report(5, "DAG + reverse DAG keeps rows non-zero and rank >= 2", r.passed() && r.trials == 200, summary(r));
}

void ergodic_and_dar() {
  const auto e = verify_ergodic_dependence(20, derive_seed(kSeed, 5));
  const auto d = verify_dar_independence(100, derive_seed(kSeed, 6));
  report(6, "ergodic relations rank(E)=1; DAR pairs have an independent pair",
         e.passed() && e.trials == 20 && d.passed() && d.trials == 100, summary(e) + "; " + summary(d));
}

void gradients() {
  SplitMix64 rng(derive_seed(kSeed, 7));
  const Variant variants[] = {Variant::gcn, Variant::sage, Variant::gin};
  const JkMode jks[] = {JkMode::none, JkMode::cat, JkMode::max};
  const Activation acts[] = {Activation::identity(), Activation::sigmoid(), Activation::leaky_relu(0.2),
                             Activation::relu()};
  double worst = 0.0;
  std::size_t entries = 0, passed = 0;
  for (int t = 0; t < 50; ++t) {
    SyntheticTaskParams tp;
    tp.count = 1 + rng.below(3);
    tp.min_nodes = 4;
    tp.max_nodes = 9;
    tp.edge_probability = 0.35;
    tp.seed = rng();
    const auto task = make_synthetic_task(tp);
    ModelConfig c;
    c.variant = variants[rng.below(3)];
    c.multi_relational = rng.bernoulli(0.5);
    c.jk = jks[rng.below(3)];
    c.residual = rng.bernoulli(0.5);
    c.activation = acts[rng.below(4)];
    c.layers = 1 + rng.below(3);
    c.width = static_cast<Eigen::Index>(2 + rng.below(4));
    c.seed = rng();
    const Batch b = make_batch(task.samples, c);
    const Model m = init_model(c, b.graph.relation_count(), b.features.cols());
    const Matrix w = uniform_matrix(b.targets.rows(), 1, -1, 1, rng);
    const auto check = check_gradients(m, b, w, 1e-5);
    worst = std::max(worst, check.max_rel_error);
    entries += check.entries;
    if (check.max_rel_error <= 1e-5) ++passed;
  }
  report(7, "central finite differences, 50 random configs", passed == 50,
         std::to_string(passed) + "/50 configs, " + std::to_string(entries) + fmt(" entries, max rel error %.2e", worst));
}

void training_direction() {
  const std::vector<double> grid{0.1, 0.3, 1.0, 3.0};
  std::size_t wins = 0;
  std::string detail;
  for (std::uint64_t seed = kSeed; seed < kSeed + 3; ++seed) {
    SyntheticTaskParams tp;
    tp.seed = seed;
    const auto task = make_synthetic_task(tp);
    double best[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double best_lr[2] = {0, 0};
    for (int m = 0; m < 2; ++m)
      for (double lr : grid) {
        ModelConfig c;
        c.variant = Variant::gcn;
        c.multi_relational = m == 1;
        c.learning_rate = lr;
        c.seed = seed;
        const auto r = train(task, c);
        if (!r.diverged && r.trace.back() < best[m]) {
          best[m] = r.trace.back();
          best_lr[m] = lr;
        }
      }
    if (best[1] < best[0]) ++wins;
    detail += "seed " + std::to_string(seed) +
              fmt(": gcn %.4f (lr %g) mrs-gcn %.4f (lr %g); ", best[0], best_lr[0], best[1], best_lr[1]);
  }

  // Tied initialisation reduces the split model to the base one.
  SyntheticTaskParams tp;
  tp.seed = kSeed;
  const auto task = make_synthetic_task(tp);
  ModelConfig base, tied;
  base.multi_relational = false;
  tied.tied_init = true;
  const Batch bb = make_batch(task.samples, base), tb = make_batch(task.samples, tied);
  const auto pb = forward(init_model(base, bb.graph.relation_count(), bb.features.cols()), bb);
  const auto pt = forward(init_model(tied, tb.graph.relation_count(), tb.features.cols()), tb);
  const double gap = (pb.tape.value(pb.prediction) - pt.tape.value(pt.prediction)).cwiseAbs().maxCoeff();
  detail += fmt("tied forward gap %.2e", gap);
  report(8, "MRS-GCN below GCN final train MAE in 3/3 seeds", wins == 3 && gap <= 1e-10,
         std::to_string(wins) + "/3 seeds; " + detail);
}

void oracles() {
  SplitMix64 rng(derive_seed(kSeed, 9));
  std::size_t agree = 0;
  for (int t = 0; t < 200; ++t) {
    const auto rows = static_cast<Eigen::Index>(1 + rng.below(16));
    const auto cols = static_cast<Eigen::Index>(1 + rng.below(16));
    const auto inner = static_cast<Eigen::Index>(1 + rng.below(16));
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> a(rows, inner), b(inner, cols);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = static_cast<std::int64_t>(rng.below(9)) - 4;
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = static_cast<std::int64_t>(rng.below(9)) - 4;
    const auto m = (a * b).eval();
    if (numeric_rank(m.cast<double>()) == exact_rank_small(m)) ++agree;
  }
  double worst_rank_one = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Matrix u = uniform_matrix(1 + static_cast<Eigen::Index>(rng.below(20)), 1, -1, 1, rng);
    const Matrix v = uniform_matrix(1, 1 + static_cast<Eigen::Index>(rng.below(20)), -1, 1, rng);
    worst_rank_one = std::max(worst_rank_one, rod(u * v));
  }
  const double eye = rod(Matrix::Identity(2, 2));
  report(9, "oracle agreement", agree == 200 && worst_rank_one <= 1e-10 && std::abs(eye - 1.0) <= 1e-10,
         std::to_string(agree) + fmt("/200 exact ranks agree; max rod(rank-one) %.1e; rod(I2)=%.15f", worst_rank_one, eye));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void determinism() {
  const fs::path dir = fs::temp_directory_path() / "mrsplit_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream g(dir / "graph.tsv");
    SplitMix64 rng(4);
    const Graph graph = random_connected_graph(RandomGraphParams{}, rng);
    for (const auto& e : graph.edges())
      if (e.src < e.dst) g << e.src << '\t' << e.dst << '\n';
  }
  const std::string bin = MRSPLIT_CLI_PATH;
  const std::string input = (dir / "graph.tsv").string();
  const std::vector<std::pair<std::string, std::string>> commands{
      {"split", "split --undirected --ordering ppr --input " + input},
      {"rod-trace", "rod-trace --trials 5 --layers 16 --seed 3"},
      {"verify", "verify --trials 20 --seed 3"},
      {"train", "train --graphs 8 --epochs 5 --trials 2 --dim 8 --layers 2 --seed 3"},
  };
  std::size_t same = 0;
  std::string detail;
  for (const auto& [name, args] : commands) {
    int codes[2];
    std::string bytes[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (name + std::to_string(run) + ".out");
      const std::string cmd = bin + " " + args + " --output " + out.string() + " > /dev/null 2>&1";
      codes[run] = std::system(cmd.c_str());
      bytes[run] = slurp(out);
    }
    const bool ok = codes[0] == 0 && codes[1] == 0 && !bytes[0].empty() && bytes[0] == bytes[1];
    if (ok) ++same;
    detail += name + (ok ? " identical (" + std::to_string(bytes[0].size()) + " B); " : " DIFFERS; ");
  }
  fs::remove_all(dir);
  report(10, "byte-identical CLI outputs", same == commands.size(), detail);
}

}  // namespace

int main() {
  deep_trace();
  rank_bound();
  independent_pairs();
  zero_convergence();
  dag_pair();
  ergodic_and_dar();
  gradients();
  oracles();
  determinism();
  training_direction();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
