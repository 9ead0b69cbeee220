// Copyright 2026 The ARIANNA Authors
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

// Acceptance suite: every release-gating criterion runs here and prints a
// single PASS/FAIL line. Keep each criterion independent; a failure in one
// must not mask the others.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "arianna/dataflow.hpp"
#include "arianna/error.hpp"
#include "arianna/flow.hpp"
#include "arianna/json_netlist.hpp"
#include "arianna/selection.hpp"
#include "arianna/simulate.hpp"
#include "arianna/verilog.hpp"
#include "testgen.hpp"

using namespace arianna;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define REQUIRE_THAT(cond, ...)                                   \
  do {                                                            \
    if (!(cond)) {                                                \
      char _buf[512];                                             \
      std::snprintf(_buf, sizeof(_buf), __VA_ARGS__);             \
      throw Failure(std::string(#cond) + " — " + _buf);           \
    }                                                             \
  } while (0)

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string data_file(const std::string& name) {
  std::ifstream is(fs::path(ARIANNA_TEST_DATA_DIR) / name);
  if (!is) throw Failure("missing data file " + name);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw Failure("missing file " + p.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// ------------------------------------------------------------- corpus ----

std::vector<testgen::RandomModuleSpec> random_corpus_specs() {
  std::vector<testgen::RandomModuleSpec> specs;
  testgen::Rng rng(0xC0C0A);
  for (int i = 0; i < 30; ++i) {
    testgen::RandomModuleSpec s;
    s.seed = 101 + static_cast<uint64_t>(i);
    s.inputs = 8 + static_cast<int>(rng.below(9));
    s.outputs = 4 + static_cast<int>(rng.below(5));
    s.gates = 40 + static_cast<int>(rng.below(61));
    s.dffs = (i % 3 == 0) ? 2 + static_cast<int>(rng.below(5)) : 0;
    specs.push_back(s);
  }
  return specs;
}

struct E2eCase {
  std::string name;
  Design design;
  std::vector<std::string> outputs;
};

// End-to-end designs whose instances carry unique module defs, so the
// removed-secret text check is meaningful (a redacted instance's module
// cannot stay alive through an unredacted twin).
std::vector<E2eCase> e2e_corpus() {
  std::vector<E2eCase> cases;
  cases.push_back({"des3_like", testgen::des3_like_design(), {"dout"}});
  cases.push_back(
      {"pipeline", parse_verilog(data_file("pipeline.v"), "pipeline"), {"q"}});
  cases.push_back({"seq_core", parse_verilog(data_file("seq_core.v"), "seq_core"),
                   {"sout", "count", "probe"}});
  cases.push_back({"deep", parse_verilog(data_file("deep.v"), "deep"), {"u", "v"}});
  return cases;
}

// ----------------------------------------------------------- criteria ----

// Cluster counts on the 8-sbox fixture under both pin budgets, against
// brute-force subset enumeration.
void cluster_count_reproduction() {
  auto t0 = std::chrono::steady_clock::now();
  Design d = testgen::des3_like_design();
  InstanceTree tree = d.instance_tree();
  FilterParams fp;
  fp.max_io = 96;
  fp.selected_outputs = {"dout"};
  auto candidates = filter_modules(d, fp);
  REQUIRE_THAT(candidates.size() == 8, "got %zu candidates", candidates.size());

  auto permissive = identify_clusters(d, tree, candidates, 96);
  REQUIRE_THAT(permissive.size() == 255, "permissive bound gave %zu clusters",
               permissive.size());
  auto cfg1 = identify_clusters(d, tree, candidates, 64);
  REQUIRE_THAT(cfg1.size() == 218, "cfg1 bound gave %zu clusters", cfg1.size());

  // brute-force subset enumeration must agree exactly
  for (int max_io : {96, 64}) {
    std::set<std::string> oracle;
    for (unsigned mask = 1; mask < 256; ++mask) {
      std::vector<std::string> members;
      for (int b = 0; b < 8; ++b)
        if (mask & (1u << b))
          members.push_back("des3_like.u_sbox" + std::to_string(b + 1));
      if (is_valid_cluster(d, tree, members, max_io))
        oracle.insert(make_cluster(d, tree, members).id);
    }
    auto got = identify_clusters(d, tree, candidates, max_io);
    std::set<std::string> got_ids;
    for (const auto& c : got) got_ids.insert(c.id);
    REQUIRE_THAT(got_ids == oracle, "fixed point != brute force at max_io=%d",
                 max_io);
  }
  double dt = seconds_since(t0);
  REQUIRE_THAT(dt < 5.0, "took %.2f s (budget 5 s)", dt);
}

// NK/KN stay on the probe grid side, within the call budget, strictly
// cheaper than exhaustive; the sweep exposes a non-minimum-W optimum.
void heuristic_exhaustive_parity() {
  auto t0 = std::chrono::steady_clock::now();
  int nonmin_w_optima = 0;
  double rel_sum = 0;
  int rel_samples = 0;
  DseConfig base;  // default ranges: n in [2,8], k in [2,7]
  const int budget =
      1 + (base.n_max - base.n_min) + (base.k_max - base.k_min) + 2;

  for (const auto& spec : random_corpus_specs()) {
    Design d = testgen::random_design(spec);
    InstanceTree tree = d.instance_tree();
    WrapperModule w = build_wrapper(d, make_cluster(d, tree, {"t.u1"}));

    DseConfig nk = base, kn = base, ex = base;
    nk.strategy = DseStrategy::NK;
    kn.strategy = DseStrategy::KN;
    ex.strategy = DseStrategy::Exhaustive;
    DseOutcome rn = run_dse(d, w, nk);
    DseOutcome rk = run_dse(d, w, kn);
    DseOutcome re = run_dse(d, w, ex);

    for (const DseOutcome* oc : {&rn, &rk}) {
      REQUIRE_THAT(oc->chosen.has_value(), "seed %llu: heuristic found nothing",
                   (unsigned long long)spec.seed);
      REQUIRE_THAT(oc->chosen->second.grid_side ==
                       oc->evaluations[0].result.grid_side,
                   "seed %llu: chosen W %d != probe W %d",
                   (unsigned long long)spec.seed, oc->chosen->second.grid_side,
                   oc->evaluations[0].result.grid_side);
      REQUIRE_THAT(oc->oracle_calls <= budget, "seed %llu: %d calls > budget %d",
                   (unsigned long long)spec.seed, oc->oracle_calls, budget);
      REQUIRE_THAT(oc->oracle_calls < re.oracle_calls,
                   "seed %llu: heuristic not cheaper than exhaustive",
                   (unsigned long long)spec.seed);
    }
    REQUIRE_THAT(re.oracle_calls ==
                     (base.n_max - base.n_min + 1) * (base.k_max - base.k_min + 1),
                 "exhaustive grid incomplete");

    int min_w = INT32_MAX;
    for (const auto& e : re.evaluations) min_w = std::min(min_w, e.result.grid_side);
    if (re.chosen && re.chosen->second.grid_side > min_w) ++nonmin_w_optima;

    // heuristic area never beats the exhaustive optimum, and an excess
    // never comes from a point the heuristic accepted (its endpoint is the
    // cheapest accepted point at the pinned grid side)
    for (const DseOutcome* oc : {&rn, &rk}) {
      REQUIRE_THAT(oc->chosen->second.area_estimate >=
                       re.chosen->second.area_estimate - 1e-9,
                   "heuristic beat the exhaustive best");
      rel_sum += oc->chosen->second.area_estimate /
                 re.chosen->second.area_estimate;
      rel_samples += 1;
    }
  }
  REQUIRE_THAT(nonmin_w_optima >= 1,
               "no corpus instance with a non-minimum-W optimum (got %d)",
               nonmin_w_optima);
  REQUIRE_THAT(rel_sum / rel_samples >= 1.0 - 1e-12,
               "mean relative cost %.4f below 1", rel_sum / rel_samples);
  double dt = seconds_since(t0);
  REQUIRE_THAT(dt < 120.0, "took %.1f s (budget 120 s)", dt);
}

// Every corpus module maps to a LUT network that simulates identically for
// every K in the default range (exhaustive up to 12 inputs, 1024 random
// vectors beyond, 24 cycles for sequential logic).
void mapping_correctness() {
  std::vector<std::pair<std::string, ModuleDef>> modules;
  auto add_design = [&](const std::string& tag, const Design& d) {
    for (const auto& [name, m] : d.modules) {
      FlatModule fm = flatten(d, name);
      modules.emplace_back(tag + ":" + name, fm.flat);
    }
  };
  add_design("des3", testgen::des3_like_design());
  for (const char* f : {"inv.v", "adder4.v", "pipeline.v", "seq_core.v",
                        "shared.v", "ops.v", "quirks.v", "deep.v"})
    add_design(f, parse_verilog(data_file(f)));
  for (const auto& spec : random_corpus_specs()) {
    Design d = testgen::random_design(spec);
    FlatModule fm = flatten(d, "m");
    modules.emplace_back("rand:" + std::to_string(spec.seed), fm.flat);
  }

  DseConfig base;
  testgen::EquivalenceOptions opts;
  opts.random_vectors = 1024;
  opts.sequential_cycles = 24;
  for (const auto& [tag, flat] : modules) {
    for (int k = base.k_min; k <= base.k_max; ++k) {
      MappedNetwork net = map_to_luts(flat, k);
      ModuleDef lut_mod = build_lut_module(net, flat, "lutnet");
      std::string why;
      REQUIRE_THAT(testgen::simulation_equivalent(flat, lut_mod, opts, &why),
                   "%s at k=%d: %s", tag.c_str(), k, why.c_str());
    }
  }
}

// Original vs configured-redacted equivalence under both presets, plus the
// removed-secret check on the emitted netlist.
void end_to_end_preservation() {
  struct Preset {
    const char* name;
    int max_io;
    int max_efpgas;
  };
  const Preset presets[] = {{"cfg1", 64, 2}, {"cfg2", 96, 1}};

  for (const auto& preset : presets) {
    for (auto& e2e : e2e_corpus()) {
      FilterParams fp;
      fp.max_io = preset.max_io;
      fp.selected_outputs = e2e.outputs;
      DseConfig dc;  // default window, matching the shipped presets
      dc.strategy = DseStrategy::NK;

      testgen::RedactionBundle bundle =
          testgen::redact_design(e2e.design, fp, dc, preset.max_efpgas);
      testgen::EquivalenceOptions opts;
      opts.random_vectors = 1024;
      opts.sequential_cycles = 24;
      std::string why;
      REQUIRE_THAT(
          testgen::redaction_preserves_function(e2e.design, bundle, opts, &why),
          "%s/%s: %s", preset.name, e2e.name.c_str(), why.c_str());

      // the emitted netlist text carries no gate of a fully redacted module
      fs::path dir = fs::temp_directory_path() / "arianna_acceptance_e2e";
      fs::remove_all(dir);
      emit_redaction(bundle.redacted, bundle.plan, bundle.fabrics, dir.string());
      std::string text = read_file(dir / "top_redacted.v");
      Design back = parse_verilog(text, e2e.design.top);
      validate(back);
      InstanceTree rtree = bundle.redacted.design.instance_tree();
      InstanceTree otree = e2e.design.instance_tree();
      std::set<std::string> live_modules;
      for (const auto& n : rtree.nodes) live_modules.insert(n.module);
      int absent = 0;
      for (const auto& path : bundle.redacted.redacted_instances) {
        REQUIRE_THAT(rtree.find(path) < 0, "%s still instantiated", path.c_str());
        const std::string mod = otree.at(path).module;
        if (!live_modules.count(mod)) {
          REQUIRE_THAT(text.find("module " + mod) == std::string::npos,
                       "%s/%s: module %s text survived redaction", preset.name,
                       e2e.name.c_str(), mod.c_str());
          ++absent;
        }
      }
      REQUIRE_THAT(absent >= 1, "%s/%s: nothing was actually hidden",
                   preset.name, e2e.name.c_str());
      fs::remove_all(dir);
    }
  }
}

// Eq-1 reference points to 1e-12.
void utilization_score_exactness() {
  FabricScoreContext ctx{1.0, 1.0};
  FabricResult r;
  r.io_util = 1.0;
  r.clb_util = 1.0;
  REQUIRE_THAT(std::abs(score_fabric(r, ctx) - 0.0) < 1e-12, "T(1,1) = %.15f",
               score_fabric(r, ctx));
  r.io_util = 0.5;
  REQUIRE_THAT(std::abs(score_fabric(r, ctx) - 0.5) < 1e-12, "T(0.5,1) = %.15f",
               score_fabric(r, ctx));
  r.io_util = 0.62;  // the 100% CLB / 62% I/O reference pair
  REQUIRE_THAT(std::abs(score_fabric(r, ctx) - 0.38) < 1e-12, "T(0.62,1) = %.15f",
               score_fabric(r, ctx));
}

// enumerate_solutions == brute force on 100 random overlap structures.
void selection_soundness() {
  testgen::Rng rng(0xACCE57);
  for (int trial = 0; trial < 100; ++trial) {
    const int nf = 3 + static_cast<int>(rng.below(10));
    std::vector<CandidateFabric> fs;
    std::set<std::string> seen;
    for (int i = 0; i < nf; ++i) {
      unsigned mask = 1 + static_cast<unsigned>(rng.below(255));
      CandidateFabric f;
      for (int b = 0; b < 8; ++b)
        if (mask & (1u << b)) f.cluster.members.push_back("u.i" + std::to_string(b));
      f.cluster.id = std::to_string(mask);
      if (!seen.insert(f.cluster.id).second) continue;
      fs.push_back(std::move(f));
    }
    const int max_efpgas = 1 + static_cast<int>(rng.below(4));
    auto sols = enumerate_solutions(fs, max_efpgas);

    std::set<std::vector<size_t>> got;
    for (const auto& s : sols) {
      got.insert(s.fabrics);
      REQUIRE_THAT(static_cast<int>(s.fabrics.size()) <= max_efpgas,
                   "cardinality violated");
      std::set<std::string> used;
      size_t total = 0;
      for (size_t fi : s.fabrics) {
        used.insert(fs[fi].cluster.members.begin(), fs[fi].cluster.members.end());
        total += fs[fi].cluster.members.size();
      }
      REQUIRE_THAT(used.size() == total, "instances overlap");
    }
    std::set<std::vector<size_t>> oracle;
    for (uint64_t mask = 1; mask < (1ull << fs.size()); ++mask) {
      if (__builtin_popcountll(mask) > max_efpgas) continue;
      std::set<std::string> used;
      bool ok = true;
      std::vector<size_t> idx;
      for (size_t i = 0; i < fs.size() && ok; ++i) {
        if (!(mask & (1ull << i))) continue;
        idx.push_back(i);
        for (const auto& m : fs[i].cluster.members)
          if (!used.insert(m).second) ok = false;
      }
      if (ok) oracle.insert(idx);
    }
    REQUIRE_THAT(got == oracle, "trial %d: enumeration != brute force", trial);
  }
}

// capacity(4) = 64 and W-minimality on 1000 random count pairs.
void grid_capacity_calibration() {
  FabricParams p;
  REQUIRE_THAT(p.io_capacity(4) == 64, "capacity(4) = %d", p.io_capacity(4));
  testgen::Rng rng(0x6e1d);
  for (int t = 0; t < 1000; ++t) {
    int clb = static_cast<int>(rng.below(900));
    int io = 1 + static_cast<int>(rng.below(1200));
    int w = size_grid(clb, io, p);
    REQUIRE_THAT(w * w >= std::max(clb, 1), "W=%d too small for %d CLBs", w, clb);
    REQUIRE_THAT(p.io_capacity(w) >= io, "W=%d too small for %d pins", w, io);
    if (w > 1)
      REQUIRE_THAT((w - 1) * (w - 1) < std::max(clb, 1) ||
                       p.io_capacity(w - 1) < io,
                   "W=%d not minimal for clb=%d io=%d", w, clb, io);
  }
}

// Byte-identical artifacts across two full flow runs at workers 1 and 8.
void determinism() {
  std::map<std::string, std::string> reference;
  int run_index = 0;
  for (int workers : {1, 1, 8, 8}) {
    fs::path dir = fs::temp_directory_path() /
                   ("arianna_acceptance_det_" + std::to_string(run_index++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      std::ofstream os(dir / "des3_like.v", std::ios::binary);
      os << testgen::des3_like_verilog();
    }
    std::ostringstream y;
    y << "input: [des3_like.v]\ntop: des3_like\nselected_outputs: [dout]\n"
      << "max_io: 64\nmax_efpgas: 2\nn_range: [2, 4]\nk_range: [2, 4]\n"
      << "seed: 7\nworkers: " << workers << "\nout_dir: "
      << (dir / "out").string() << "\n";
    {
      std::ofstream os(dir / "cfg.yaml", std::ios::binary);
      os << y.str();
    }
    FlowConfig cfg = load_flow_config_file((dir / "cfg.yaml").string());
    FlowResult r = run_flow(cfg);
    REQUIRE_THAT(r.files.size() >= 7, "unexpected artifact count %zu",
                 r.files.size());
    for (const auto& f : r.files) {
      std::string name = fs::path(f).filename().string();
      std::string content = read_file(f);
      auto it = reference.find(name);
      if (it == reference.end())
        reference.emplace(name, content);
      else
        REQUIRE_THAT(it->second == content, "%s differs at workers=%d",
                     name.c_str(), workers);
    }
    fs::remove_all(dir);
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void()> fn;
  };
  const std::vector<Criterion> criteria = {
      {"cluster-count-reproduction", cluster_count_reproduction},
      {"heuristic-exhaustive-parity", heuristic_exhaustive_parity},
      {"mapping-correctness", mapping_correctness},
      {"end-to-end-preservation", end_to_end_preservation},
      {"utilization-score-exactness", utilization_score_exactness},
      {"selection-soundness", selection_soundness},
      {"grid-capacity-calibration", grid_capacity_calibration},
      {"determinism", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.fn();
      std::printf("PASS %-30s (%.2f s)\n", c.name, seconds_since(t0));
    } catch (const std::exception& e) {
      ++failures;
      std::printf("FAIL %-30s %s\n", c.name, e.what());
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
