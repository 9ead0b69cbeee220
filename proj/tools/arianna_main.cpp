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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "arianna/error.hpp"
#include "arianna/flow.hpp"
#include "arianna/json_netlist.hpp"
#include "arianna/simulate.hpp"
#include "arianna/verilog.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw arianna::ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

arianna::Design load_one(const std::string& path, const std::string& top) {
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    arianna::Design d = arianna::parse_json_ir(read_file(path));
    if (!top.empty()) d.top = top;
    return d;
  }
  return arianna::parse_verilog(read_file(path), top);
}

int cmd_flow(const std::string& config_path, const std::string& out_dir,
             const std::string& strategy, long seed, int workers) {
  arianna::FlowConfig cfg = arianna::load_flow_config_file(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!strategy.empty()) cfg.strategy = strategy;
  if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
  if (workers >= 0) cfg.workers = workers;
  arianna::FlowResult r = arianna::run_flow(cfg);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "candidates: " << r.candidates << "\n"
            << "clusters:   " << r.clusters << "\n"
            << "fabrics:    " << r.fabrics << "\n"
            << "solutions:  " << r.solutions << "\n";
  std::cout << "artifacts:\n";
  for (const auto& f : r.files) std::cout << "  " << f << "\n";
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& out_dir,
                int workers) {
  arianna::FlowConfig cfg = arianna::load_flow_config_file(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (workers >= 0) cfg.workers = workers;
  arianna::CompareResult r = arianna::run_compare(cfg);
  std::cout << "clusters:         " << r.clusters << "\n"
            << "nk calls:         " << r.nk_calls << "\n"
            << "kn calls:         " << r.kn_calls << "\n"
            << "exhaustive calls: " << r.exhaustive_calls << "\n";
  for (const auto& f : r.files) std::cout << "  " << f << "\n";
  return 0;
}

int cmd_parse_check(const std::string& input, const std::string& top) {
  arianna::Design d = load_one(input, top);
  arianna::validate(d);
  size_t gates = 0;
  for (const auto& [name, m] : d.modules) gates += m.gates.size();
  auto tree = d.instance_tree();
  std::cout << "ok: top=" << d.top << " modules=" << d.modules.size()
            << " instances=" << tree.nodes.size() << " gates=" << gates << "\n";
  return 0;
}

int cmd_simulate(const std::string& input, const std::string& top,
                 const std::string& module_name, const std::string& vectors,
                 int cycles) {
  arianna::Design d = load_one(input, top);
  const std::string target = module_name.empty() ? d.top : module_name;
  arianna::FlatModule fm = arianna::flatten(d, target);

  std::vector<const arianna::PortDecl*> ins, outs;
  for (const auto& p : fm.flat.ports)
    (p.dir == arianna::PortDir::Input ? ins : outs).push_back(&p);

  // stimulus: one cycle per line, one binary value per input port
  // (MSB first), whitespace separated
  std::vector<arianna::CycleValues> stim;
  if (!vectors.empty()) {
    std::istringstream is(read_file(vectors));
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::vector<std::string> fields;
      std::string f;
      while (ls >> f) fields.push_back(f);
      if (fields.empty()) continue;
      if (fields.size() != ins.size())
        throw arianna::ConfigError("stimulus line " + std::to_string(lineno) +
                                   ": expected " + std::to_string(ins.size()) +
                                   " values");
      arianna::CycleValues cv;
      for (size_t pi = 0; pi < ins.size(); ++pi) {
        if (static_cast<int>(fields[pi].size()) != ins[pi]->width)
          throw arianna::ConfigError("stimulus line " + std::to_string(lineno) +
                                     ": width mismatch on " + ins[pi]->name);
        arianna::BitVector bits(static_cast<size_t>(ins[pi]->width));
        for (int b = 0; b < ins[pi]->width; ++b) {
          char c = fields[pi][static_cast<size_t>(ins[pi]->width - 1 - b)];
          if (c != '0' && c != '1')
            throw arianna::ConfigError("stimulus line " + std::to_string(lineno) +
                                       ": binary digits only");
          bits[static_cast<size_t>(b)] = static_cast<uint8_t>(c - '0');
        }
        cv.ports.push_back(std::move(bits));
      }
      stim.push_back(std::move(cv));
    }
  } else {
    // all-zero stimulus for `cycles` cycles
    for (int c = 0; c < std::max(cycles, 1); ++c) {
      arianna::CycleValues cv;
      for (const auto* p : ins)
        cv.ports.push_back(arianna::BitVector(static_cast<size_t>(p->width), 0));
      stim.push_back(std::move(cv));
    }
  }

  auto res = arianna::simulate(fm.flat, stim);
  std::cout << "# cycle";
  for (const auto* p : outs) std::cout << " " << p->name;
  std::cout << "\n";
  for (size_t c = 0; c < res.size(); ++c) {
    std::cout << c;
    for (size_t pi = 0; pi < outs.size(); ++pi) {
      std::cout << " ";
      const auto& bits = res[c].ports[pi];
      for (size_t b = bits.size(); b-- > 0;) std::cout << int(bits[b]);
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eFPGA redaction flow: module filtering, clustering, bespoke "
               "fabric search, selection, and netlist rewriting"};
  app.require_subcommand(1);

  std::string config_path, out_dir, strategy, input, top, module_name, vectors;
  long seed = -1;
  int workers = -1, cycles = 1;

  auto* flow = app.add_subcommand("flow", "run the full redaction flow");
  flow->add_option("--config", config_path, "YAML configuration file")->required();
  flow->add_option("--out", out_dir, "output directory (overrides config)");
  flow->add_option("--strategy", strategy, "nk | kn | exhaustive")
      ->check(CLI::IsMember({"nk", "kn", "exhaustive"}));
  flow->add_option("--seed", seed, "random seed (overrides config)");
  flow->add_option("--workers", workers, "worker threads (0 = all cores)");

  auto* compare = app.add_subcommand("compare", "heuristics vs exhaustive vs fixed 4x4");
  compare->add_option("--config", config_path, "YAML configuration file")->required();
  compare->add_option("--out", out_dir, "output directory (overrides config)");
  compare->add_option("--workers", workers, "worker threads (0 = all cores)");

  auto* pc = app.add_subcommand("parse-check", "parse and validate a netlist");
  pc->add_option("input", input, "Verilog or JSON netlist")->required();
  pc->add_option("--top", top, "top module (default: inferred)");

  auto* sim = app.add_subcommand("simulate", "cycle-accurate simulation");
  sim->add_option("--input", input, "Verilog or JSON netlist")->required();
  sim->add_option("--top", top, "top module (default: inferred)");
  sim->add_option("--module", module_name, "module to simulate (default: top)");
  sim->add_option("--vectors", vectors,
                  "stimulus file: one cycle per line, binary per input port");
  sim->add_option("--cycles", cycles, "zero-stimulus cycles when no vectors given");

  CLI11_PARSE(app, argc, argv);

  try {
    if (flow->parsed()) return cmd_flow(config_path, out_dir, strategy, seed, workers);
    if (compare->parsed()) return cmd_compare(config_path, out_dir, workers);
    if (pc->parsed()) return cmd_parse_check(input, top);
    if (sim->parsed()) return cmd_simulate(input, top, module_name, vectors, cycles);
  } catch (const arianna::FlowError& e) {
    std::cerr << "error " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
