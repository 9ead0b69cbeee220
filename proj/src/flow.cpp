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

#include "arianna/flow.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "arianna/csv.hpp"
#include "arianna/dataflow.hpp"
#include "arianna/error.hpp"
#include "arianna/json_netlist.hpp"
#include "arianna/simulate.hpp"
#include "arianna/verilog.hpp"

namespace arianna {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FlowError("parse", "cannot open input: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void write_artifact(const std::string& out_dir, const std::string& name,
                    const std::string& content, std::vector<std::string>& files) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  fs::path p = fs::path(out_dir) / name;
  std::ofstream os(p, std::ios::binary);
  if (!os) throw FlowError("emit", "cannot write " + p.string());
  os << content;
  files.push_back(p.string());
}

struct Pipeline {
  Design design;
  std::vector<CandidateRow> rows;
  std::vector<ModuleScore> candidates;
  std::vector<Cluster> clusters;
  std::vector<WrapperModule> wrappers;
};

Pipeline front_phases(const FlowConfig& cfg, std::vector<std::string>& files) {
  Pipeline p;
  p.design = load_design(cfg);

  try {
    p.rows = candidate_report(p.design, cfg.filter_params());
  } catch (const NetlistError& e) {
    throw FlowError("filter", e.what());
  }
  write_artifact(cfg.out_dir, "candidates.csv", candidates_csv(p.rows), files);
  for (const auto& r : p.rows)
    if (r.kept) p.candidates.push_back(r.score);
  if (p.candidates.empty())
    throw FlowError("filter", "no candidate modules survive filtering");

  InstanceTree tree = p.design.instance_tree();
  p.clusters =
      identify_clusters(p.design, tree, p.candidates, cfg.max_io, cfg.cluster_cap);
  write_artifact(cfg.out_dir, "clusters.csv", clusters_csv(p.clusters), files);

  p.wrappers.reserve(p.clusters.size());
  for (const auto& c : p.clusters) p.wrappers.push_back(build_wrapper(p.design, c));
  return p;
}

}  // namespace

Design load_design(const FlowConfig& cfg) {
  Design merged;
  std::string json_top;
  bool first = true;
  for (const auto& path : cfg.input) {
    Design d;
    try {
      if (ends_with(path, ".json")) {
        d = parse_json_ir(read_file(path), /*standalone=*/false);
        json_top = d.top;
      } else {
        d = parse_verilog_modules(read_file(path));
      }
    } catch (const ParseError& e) {
      throw FlowError("parse", path + ": " + e.what());
    }
    if (first) {
      merged = std::move(d);
      first = false;
    } else {
      for (auto& [name, m] : d.modules)
        if (!merged.modules.emplace(name, std::move(m)).second)
          throw FlowError("parse", "duplicate module definition: " + name);
    }
  }
  try {
    link_design(merged, !cfg.top.empty() ? cfg.top : json_top);
    check_single_clock(flatten(merged, merged.top).flat);
  } catch (const ParseError& e) {
    throw FlowError("parse", e.what());
  } catch (const NetlistError& e) {
    throw FlowError("parse", e.what());
  }
  return merged;
}

FlowResult run_flow(const FlowConfig& cfg) {
  cfg.check();
  FlowResult result;
  Pipeline p = front_phases(cfg, result.files);
  result.candidates = p.candidates.size();
  result.clusters = p.clusters.size();

  DseConfig dc = cfg.dse_config();
  std::vector<DseOutcome> outcomes;
  try {
    outcomes = dse_batch_parallel(p.design, p.wrappers, dc, cfg.workers);
  } catch (const ConfigError& e) {
    throw FlowError("dse", e.what());
  }
  write_artifact(cfg.out_dir, "dse_heatmap.csv", heatmap_csv(dse_heatmap(outcomes)),
                 result.files);

  std::vector<CandidateFabric> fabrics;
  for (size_t i = 0; i < outcomes.size(); ++i) {
    if (!outcomes[i].chosen) continue;
    fabrics.push_back({p.clusters[i], p.wrappers[i], outcomes[i].chosen->first,
                       outcomes[i].chosen->second});
  }
  if (fabrics.empty())
    throw FlowError("dse", "no feasible fabric within max_grid_side");
  result.fabrics = fabrics.size();

  Solution best;
  try {
    FabricScoreContext ctx = make_score_context(fabrics);
    auto solutions = enumerate_solutions(fabrics, cfg.max_efpgas);
    result.solutions = solutions.size();
    best = rank_and_select(solutions, fabrics, ctx);
    write_artifact(cfg.out_dir, "solutions.csv",
                   solutions_csv(solutions, fabrics), result.files);
  } catch (const NetlistError& e) {
    throw FlowError("select", e.what());
  }
  result.best = best;

  for (size_t fi : best.fabrics) {
    const CandidateFabric& f = fabrics[fi];
    if (cfg.secure_min_side > 0 && f.result.grid_side < cfg.secure_min_side)
      result.warnings.push_back(
          "selected fabric for cluster " + f.cluster.id + " has grid side " +
          std::to_string(f.result.grid_side) + " below secure_min_side " +
          std::to_string(cfg.secure_min_side));
  }

  RedactionPlan plan = plan_redaction(p.design, best, fabrics);
  RedactedDesign redacted = apply_redaction(p.design, plan, fabrics);
  for (const auto& f : emit_redaction(redacted, plan, fabrics, cfg.out_dir))
    result.files.push_back(f);
  return result;
}

CompareResult run_compare(const FlowConfig& cfg) {
  cfg.check();
  CompareResult result;
  std::vector<std::string>& files = result.files;
  Pipeline p = front_phases(cfg, files);
  result.clusters = p.clusters.size();

  DseConfig base = cfg.dse_config();
  DseConfig nk = base, kn = base, ex = base;
  nk.strategy = DseStrategy::NK;
  kn.strategy = DseStrategy::KN;
  ex.strategy = DseStrategy::Exhaustive;

  std::vector<DseOutcome> nk_out = dse_batch_parallel(p.design, p.wrappers, nk, cfg.workers);
  std::vector<DseOutcome> kn_out = dse_batch_parallel(p.design, p.wrappers, kn, cfg.workers);
  std::vector<DseOutcome> ex_out = dse_batch_parallel(p.design, p.wrappers, ex, cfg.workers);

  FabricParams fixed = base.base;
  fixed.n = 4;
  fixed.k = 4;

  std::string csv =
      "cluster_id,nk_n,nk_k,nk_area,nk_calls,kn_n,kn_k,kn_area,kn_calls,"
      "exh_n,exh_k,exh_area,exh_calls,fixed_area,nk_rel,kn_rel,fixed_rel\n";
  double nk_rel_sum = 0, kn_rel_sum = 0;
  std::vector<double> nk_rels, kn_rels;
  for (size_t i = 0; i < p.clusters.size(); ++i) {
    result.nk_calls += nk_out[i].oracle_calls;
    result.kn_calls += kn_out[i].oracle_calls;
    result.exhaustive_calls += ex_out[i].oracle_calls;
    if (!ex_out[i].chosen) {
      csv += csv_escape(p.clusters[i].id) + ",,,,,,,,,,,,,,,\n";
      continue;
    }
    FabricResult fixed_res = characterize(p.design, p.wrappers[i], fixed);
    const double best_area = ex_out[i].chosen->second.area_estimate;
    auto row_part = [&](const DseOutcome& oc) {
      if (!oc.chosen) return std::string(",,,") + std::to_string(oc.oracle_calls);
      return std::to_string(oc.chosen->first.n) + "," +
             std::to_string(oc.chosen->first.k) + "," +
             csv_double(oc.chosen->second.area_estimate) + "," +
             std::to_string(oc.oracle_calls);
    };
    double nk_rel = nk_out[i].chosen
                        ? nk_out[i].chosen->second.area_estimate / best_area
                        : 0.0;
    double kn_rel = kn_out[i].chosen
                        ? kn_out[i].chosen->second.area_estimate / best_area
                        : 0.0;
    if (nk_out[i].chosen) nk_rels.push_back(nk_rel);
    if (kn_out[i].chosen) kn_rels.push_back(kn_rel);
    nk_rel_sum += nk_rel;
    kn_rel_sum += kn_rel;
    csv += csv_escape(p.clusters[i].id) + "," + row_part(nk_out[i]) + "," +
           row_part(kn_out[i]) + "," + row_part(ex_out[i]) + "," +
           csv_double(fixed_res.area_estimate) + "," + csv_double(nk_rel) + "," +
           csv_double(kn_rel) + "," +
           csv_double(fixed_res.area_estimate / best_area) + "\n";
  }
  write_artifact(cfg.out_dir, "compare.csv", csv, files);
  write_artifact(cfg.out_dir, "dse_heatmap.csv", heatmap_csv(dse_heatmap(ex_out)),
                 files);

  auto stats = [&](const std::vector<double>& rels) {
    double mean = 0;
    for (double r : rels) mean += r;
    if (!rels.empty()) mean /= static_cast<double>(rels.size());
    double var = 0;
    for (double r : rels) var += (r - mean) * (r - mean);
    if (!rels.empty()) var /= static_cast<double>(rels.size());
    return std::make_pair(mean, std::sqrt(var));
  };
  auto [nk_mean, nk_std] = stats(nk_rels);
  auto [kn_mean, kn_std] = stats(kn_rels);
  std::string summary =
      "strategy,mean_relative_cost,std_relative_cost,total_oracle_calls\n";
  summary += "nk," + csv_double(nk_mean) + "," + csv_double(nk_std) + "," +
             std::to_string(result.nk_calls) + "\n";
  summary += "kn," + csv_double(kn_mean) + "," + csv_double(kn_std) + "," +
             std::to_string(result.kn_calls) + "\n";
  summary += "exhaustive," + csv_double(1.0) + "," + csv_double(0.0) + "," +
             std::to_string(result.exhaustive_calls) + "\n";
  write_artifact(cfg.out_dir, "compare_summary.csv", summary, files);
  return result;
}

}  // namespace arianna
