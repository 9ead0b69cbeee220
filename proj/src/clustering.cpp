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

#include "arianna/clustering.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "arianna/csv.hpp"
#include "arianna/error.hpp"

namespace arianna {
namespace {

std::string join_id(const std::vector<std::string>& members) {
  std::string id;
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) id += '+';
    id += members[i];
  }
  return id;
}

int io_of(const Design& design, const InstanceTree& tree, const std::string& path) {
  return design.module(tree.at(path).module).io_pin_count();
}

}  // namespace

Cluster make_cluster(const Design& design, const InstanceTree& tree,
                     std::vector<std::string> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  Cluster c;
  c.aggregate_io = 0;
  for (const auto& m : members) c.aggregate_io += io_of(design, tree, m);
  c.id = join_id(members);
  c.members = std::move(members);
  return c;
}

bool is_valid_cluster(const Design& design, const InstanceTree& tree,
                      const std::vector<std::string>& members, int max_io) {
  if (members.empty()) return false;
  std::vector<int> nodes;
  int total_io = 0;
  for (const auto& m : members) {
    int idx = tree.find(m);
    if (idx < 0) throw NetlistError("instance path not found: " + m);
    nodes.push_back(idx);
    total_io += io_of(design, tree, m);
  }
  for (size_t i = 0; i < nodes.size(); ++i)
    for (size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j] || tree.is_ancestor(nodes[i], nodes[j]) ||
          tree.is_ancestor(nodes[j], nodes[i]))
        return false;
  return total_io <= max_io;
}

std::vector<Cluster> identify_clusters(const Design& design,
                                       const InstanceTree& tree,
                                       const std::vector<ModuleScore>& candidates,
                                       int max_io, size_t cap) {
  const size_t ncand = candidates.size();
  std::vector<int> node(ncand);
  std::vector<int> io(ncand);
  for (size_t i = 0; i < ncand; ++i) {
    int idx = tree.find(candidates[i].instance_path);
    if (idx < 0)
      throw NetlistError("instance path not found: " + candidates[i].instance_path);
    node[i] = idx;
    io[i] = candidates[i].io_pins;
  }

  // pairwise hierarchy independence, precomputed once
  std::vector<std::vector<bool>> indep(ncand, std::vector<bool>(ncand, false));
  for (size_t i = 0; i < ncand; ++i)
    for (size_t j = 0; j < ncand; ++j)
      indep[i][j] = i != j && node[i] != node[j] &&
                    !tree.is_ancestor(node[i], node[j]) &&
                    !tree.is_ancestor(node[j], node[i]);

  using Members = std::vector<uint32_t>;  // sorted candidate indices
  struct Info { int io; };
  std::map<Members, Info> all;  // the growing set C

  auto check_cap = [&](size_t extra) {
    if (all.size() + extra > cap)
      throw FlowError("cluster",
                      "valid-cluster count exceeds the cap (" + std::to_string(cap) +
                          "); raise cluster_cap or tighten max_io");
  };

  std::vector<Members> fresh;  // clusters added in the previous iteration
  for (uint32_t i = 0; i < ncand; ++i) {
    if (io[i] > max_io) continue;  // filter_modules guarantees this anyway
    Members m{i};
    all.emplace(m, Info{io[i]});
    fresh.push_back(std::move(m));
  }
  check_cap(0);

  // Fixed point: union every current cluster with every newly found one.
  // Pairs of two old clusters were already tried in an earlier iteration.
  while (!fresh.empty()) {
    std::vector<Members> next;
    for (const auto& [c1, info1] : all) {
      for (const auto& c2 : fresh) {
        if (c1 == c2) continue;
        // cross independence and aggregate I/O of the union
        bool ok = true;
        int union_io = info1.io;
        Members uni = c1;
        for (uint32_t b : c2) {
          if (std::binary_search(c1.begin(), c1.end(), b)) continue;
          for (uint32_t a : c1)
            if (!indep[a][b]) {
              ok = false;
              break;
            }
          if (!ok) break;
          union_io += io[b];
          uni.insert(std::lower_bound(uni.begin(), uni.end(), b), b);
        }
        if (!ok || uni.size() == c1.size() || union_io > max_io) continue;
        if (all.emplace(uni, Info{union_io}).second) {
          next.push_back(std::move(uni));
          check_cap(0);
        }
      }
    }
    fresh = std::move(next);
  }

  std::vector<Cluster> result;
  result.reserve(all.size());
  for (const auto& [members, info] : all) {
    std::vector<std::string> paths;
    paths.reserve(members.size());
    for (uint32_t i : members) paths.push_back(candidates[i].instance_path);
    result.push_back(make_cluster(design, tree, std::move(paths)));
  }
  std::sort(result.begin(), result.end(),
            [](const Cluster& a, const Cluster& b) { return a.id < b.id; });
  return result;
}

WrapperModule build_wrapper(const Design& design, const Cluster& cluster) {
  InstanceTree tree = design.instance_tree();
  WrapperModule w;
  w.def.name = "cluster_wrapper";

  std::set<std::string> used_ports;
  std::set<std::string> used_insts;
  for (const auto& path : cluster.members) {
    const auto& node = tree.at(path);
    const ModuleDef& mdef = design.module(node.module);

    // top.a.u1 -> a_u1
    std::string rel = path;
    if (rel.rfind(design.top + ".", 0) == 0) rel = rel.substr(design.top.size() + 1);
    std::string prefix = rel;
    std::replace(prefix.begin(), prefix.end(), '.', '_');
    if (!used_insts.insert(prefix).second)
      throw NetlistError("wrapper prefix collision: " + prefix);

    Instance inst;
    inst.name = prefix;
    inst.module = node.module;
    for (const auto& p : mdef.ports) {
      std::string wname = prefix + "_" + p.name;
      if (!used_ports.insert(wname).second)
        throw NetlistError("wrapper port collision: " + wname);
      PortDecl wp{wname, p.dir, p.width};
      w.def.ports.push_back(wp);
      auto bits = w.def.add_signal(wname, p.width);
      w.def.port_bits[wname] = bits;
      inst.connections.push_back({p.name, bits});
      w.port_map.push_back({path, p.name, wname});
    }
    w.def.instances.push_back(std::move(inst));
  }
  return w;
}

std::string clusters_csv(const std::vector<Cluster>& clusters) {
  std::string out = "cluster_id,member_count,aggregate_io\n";
  for (const auto& c : clusters)
    out += csv_escape(c.id) + "," + std::to_string(c.members.size()) + "," +
           std::to_string(c.aggregate_io) + "\n";
  return out;
}

}  // namespace arianna
