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

#include "arianna/dataflow.hpp"

#include <algorithm>
#include <deque>

#include "arianna/csv.hpp"
#include "arianna/error.hpp"

namespace arianna {
namespace {

// net -> gates reading it, and gate -> output net, over a flat module
struct FlatGraph {
  const FlatModule& fm;
  std::vector<std::vector<uint32_t>> readers;  // per net
  std::vector<int> driver;                     // per net, gate index or -1

  explicit FlatGraph(const FlatModule& f) : fm(f) {
    readers.resize(f.flat.net_names.size());
    driver.assign(f.flat.net_names.size(), -1);
    for (uint32_t gi = 0; gi < f.flat.gates.size(); ++gi) {
      const Gate& g = f.flat.gates[gi];
      for (NetId in : g.inputs) readers[in].push_back(gi);
      driver[g.output] = static_cast<int>(gi);
    }
  }

  // Forward closure from seed nets, crossing gates and DFFs alike.
  std::vector<bool> forward(const std::vector<NetId>& seeds) const {
    std::vector<bool> net_reached(fm.flat.net_names.size(), false);
    std::deque<NetId> work;
    for (NetId n : seeds)
      if (!net_reached[n]) {
        net_reached[n] = true;
        work.push_back(n);
      }
    while (!work.empty()) {
      NetId n = work.front();
      work.pop_front();
      for (uint32_t gi : readers[n]) {
        NetId out = fm.flat.gates[gi].output;
        if (!net_reached[out]) {
          net_reached[out] = true;
          work.push_back(out);
        }
      }
    }
    return net_reached;
  }

  // Backward closure from seed nets to everything that can influence them.
  std::vector<bool> backward(const std::vector<NetId>& seeds) const {
    std::vector<bool> net_reached(fm.flat.net_names.size(), false);
    std::deque<NetId> work;
    for (NetId n : seeds)
      if (!net_reached[n]) {
        net_reached[n] = true;
        work.push_back(n);
      }
    while (!work.empty()) {
      NetId n = work.front();
      work.pop_front();
      if (driver[n] < 0) continue;
      for (NetId in : fm.flat.gates[static_cast<size_t>(driver[n])].inputs)
        if (!net_reached[in]) {
          net_reached[in] = true;
          work.push_back(in);
        }
    }
    return net_reached;
  }
};

std::string relative_path(const Design& design, const std::string& path) {
  if (path == design.top) return "";
  const std::string prefix = design.top + ".";
  if (path.rfind(prefix, 0) != 0)
    throw NetlistError("instance path not under top: " + path);
  return path.substr(prefix.size());
}

std::vector<NetId> instance_output_nets(const FlatModule& fm,
                                        const std::string& rel_path) {
  auto it = fm.instance_ports.find(rel_path);
  if (it == fm.instance_ports.end())
    throw NetlistError("instance path not found: " + rel_path);
  std::vector<NetId> out;
  for (const auto& pn : it->second)
    if (pn.dir == PortDir::Output)
      out.insert(out.end(), pn.bits.begin(), pn.bits.end());
  return out;
}

}  // namespace

std::set<std::string> affected_outputs(const Design& design,
                                       const std::string& instance_path) {
  FlatModule fm = flatten(design, design.top);
  FlatGraph graph(fm);
  std::string rel = relative_path(design, instance_path);
  if (rel.empty())
    throw NetlistError("affected_outputs: top instance has no enclosing outputs");
  auto reached = graph.forward(instance_output_nets(fm, rel));

  std::set<std::string> result;
  for (const auto& p : fm.flat.ports) {
    if (p.dir != PortDir::Output) continue;
    for (NetId n : fm.flat.port_bits.at(p.name))
      if (reached[n]) {
        result.insert(p.name);
        break;
      }
  }
  return result;
}

std::vector<CandidateRow> candidate_report(const Design& design,
                                           const FilterParams& params) {
  if (params.selected_outputs.empty())
    throw NetlistError("no selected outputs given");
  if (params.max_io < 1) throw NetlistError("max_io must be >= 1");

  const ModuleDef& top = design.module(design.top);
  for (const auto& o : params.selected_outputs) {
    const PortDecl* p = top.find_port(o);
    if (!p || p->dir != PortDir::Output)
      throw NetlistError("selected output not found: " + o);
  }

  FlatModule fm = flatten(design, design.top);
  FlatGraph graph(fm);
  InstanceTree tree = design.instance_tree();

  // One backward cone per selected output; an instance affects the output
  // iff any of its output-port nets lies in the cone.
  std::map<std::string, int> score;
  for (const auto& o : params.selected_outputs) {
    auto cone = graph.backward(fm.flat.port_bits.at(o));
    for (const auto& [rel, ports] : fm.instance_ports) {
      bool hit = false;
      for (const auto& pn : ports) {
        if (pn.dir != PortDir::Output) continue;
        for (NetId n : pn.bits)
          if (cone[n]) {
            hit = true;
            break;
          }
        if (hit) break;
      }
      if (hit) score[rel] += 1;
    }
  }

  std::vector<CandidateRow> rows;
  for (size_t ni = 1; ni < tree.nodes.size(); ++ni) {  // 0 is the top
    const auto& node = tree.nodes[ni];
    std::string rel = relative_path(design, node.path);
    CandidateRow row;
    row.score.instance_path = node.path;
    row.score.module = node.module;
    row.score.score = score.count(rel) ? score[rel] : 0;
    row.score.io_pins = design.module(node.module).io_pin_count();
    std::string reason;
    if (row.score.score < params.score_threshold) reason = "score_below_threshold";
    if (row.score.io_pins > params.max_io)
      reason += reason.empty() ? "io_over_limit" : ";io_over_limit";
    row.kept = reason.empty();
    row.reason = reason;
    rows.push_back(std::move(row));
  }

  auto rank = [](const CandidateRow& a, const CandidateRow& b) {
    if (a.kept != b.kept) return a.kept;
    if (a.score.score != b.score.score) return a.score.score > b.score.score;
    if (a.score.io_pins != b.score.io_pins) return a.score.io_pins < b.score.io_pins;
    return a.score.instance_path < b.score.instance_path;
  };
  std::sort(rows.begin(), rows.end(), rank);

  if (params.top_k) {
    int kept_seen = 0;
    for (auto& row : rows) {
      if (!row.kept) continue;
      if (++kept_seen > *params.top_k) {
        row.kept = false;
        row.reason = "beyond_top_k";
      }
    }
  }
  return rows;
}

std::vector<ModuleScore> filter_modules(const Design& design,
                                        const FilterParams& params) {
  std::vector<ModuleScore> result;
  for (const auto& row : candidate_report(design, params))
    if (row.kept) result.push_back(row.score);
  return result;
}

std::string candidates_csv(const std::vector<CandidateRow>& rows) {
  std::string out = "instance_path,module,score,io_pins,kept,reason\n";
  for (const auto& r : rows) {
    out += csv_escape(r.score.instance_path) + "," + csv_escape(r.score.module) +
           "," + std::to_string(r.score.score) + "," +
           std::to_string(r.score.io_pins) + "," + (r.kept ? "kept" : "dropped") +
           "," + csv_escape(r.reason) + "\n";
  }
  return out;
}

}  // namespace arianna
