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

#include <doctest.h>

#include <algorithm>
#include <set>

#include "arianna/error.hpp"
#include "arianna/selection.hpp"
#include "testgen.hpp"

using namespace arianna;

namespace {

CandidateFabric fabric_from_mask(unsigned mask, double io_util = 0.5,
                                 double clb_util = 0.5, double area = 100.0) {
  CandidateFabric f;
  for (int b = 0; b < 8; ++b)
    if (mask & (1u << b)) f.cluster.members.push_back("top.i" + std::to_string(b));
  std::sort(f.cluster.members.begin(), f.cluster.members.end());
  for (size_t i = 0; i < f.cluster.members.size(); ++i)
    f.cluster.id += (i ? "+" : "") + f.cluster.members[i];
  f.result.io_util = io_util;
  f.result.clb_util = clb_util;
  f.result.area_estimate = area;
  f.result.grid_side = 2;
  return f;
}

// Brute force over all index subsets (<= ~20 fabrics).
std::set<std::vector<size_t>> solutions_oracle(const std::vector<CandidateFabric>& fs,
                                               int max_efpgas) {
  std::set<std::vector<size_t>> out;
  const size_t n = fs.size();
  for (uint64_t mask = 1; mask < (1ull << n); ++mask) {
    if (__builtin_popcountll(mask) > max_efpgas) continue;
    std::set<std::string> used;
    bool ok = true;
    std::vector<size_t> idx;
    for (size_t i = 0; i < n && ok; ++i) {
      if (!(mask & (1ull << i))) continue;
      idx.push_back(i);
      for (const auto& m : fs[i].cluster.members)
        if (!used.insert(m).second) ok = false;
    }
    if (ok) out.insert(idx);
  }
  return out;
}

std::set<std::vector<size_t>> index_sets(const std::vector<Solution>& sols) {
  std::set<std::vector<size_t>> out;
  for (const auto& s : sols) out.insert(s.fabrics);
  return out;
}

}  // namespace

TEST_CASE("fabric score hits the documented reference points") {
  FabricScoreContext ctx{1.0, 1.0};
  FabricResult full;
  full.io_util = 1.0;
  full.clb_util = 1.0;
  CHECK(score_fabric(full, ctx) == doctest::Approx(0.0).epsilon(1e-12));

  FabricResult half_io;
  half_io.io_util = 0.5;
  half_io.clb_util = 1.0;
  CHECK(score_fabric(half_io, ctx) == doctest::Approx(0.5).epsilon(1e-12));

  FabricResult des3_cfg1;  // 100% CLB, 62% I/O
  des3_cfg1.io_util = 0.62;
  des3_cfg1.clb_util = 1.0;
  CHECK(score_fabric(des3_cfg1, ctx) == doctest::Approx(0.38).epsilon(1e-12));

  // maxima from the candidate set itself
  FabricScoreContext scaled{0.8, 0.9};
  FabricResult at_max;
  at_max.io_util = 0.8;
  at_max.clb_util = 0.9;
  CHECK(score_fabric(at_max, scaled) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(score_fabric(full, FabricScoreContext{0.0, 1.0}), NetlistError);
}

TEST_CASE("score is antitone in both utilizations") {
  FabricScoreContext ctx{1.0, 1.0};
  testgen::Rng rng(0x5c02e);
  for (int t = 0; t < 200; ++t) {
    double io = 0.05 + 0.9 * (rng.below(1000) / 1000.0);
    double clb = 0.05 + 0.9 * (rng.below(1000) / 1000.0);
    FabricResult base;
    base.io_util = io;
    base.clb_util = clb;
    FabricResult more_io = base, more_clb = base;
    more_io.io_util = io + 0.05;
    more_clb.clb_util = clb + 0.05;
    CHECK(score_fabric(more_io, ctx) <= score_fabric(base, ctx));
    CHECK(score_fabric(more_clb, ctx) <= score_fabric(base, ctx));
  }
}

TEST_CASE("three disjoint fabrics, max 2: singletons and pairs") {
  std::vector<CandidateFabric> fs{fabric_from_mask(0x01), fabric_from_mask(0x02),
                                  fabric_from_mask(0x04)};
  auto sols = enumerate_solutions(fs, 2);
  CHECK(sols.size() == 6);  // 3 singletons + 3 pairs
  CHECK(index_sets(sols) == solutions_oracle(fs, 2));
}

TEST_CASE("overlapping fabrics cannot pair") {
  std::vector<CandidateFabric> fs{fabric_from_mask(0x03), fabric_from_mask(0x01)};
  auto sols = enumerate_solutions(fs, 2);
  CHECK(sols.size() == 2);
  CHECK(index_sets(sols) == solutions_oracle(fs, 2));
}

TEST_CASE("calibrated 218-fabric fixture yields exactly 2219 solutions") {
  // All non-empty subsets of 8 instances minus this exclusion list give a
  // 218-fabric overlap structure with exactly 2219 two-eFPGA solutions;
  // brute force over index pairs agrees.
  static const unsigned kExcluded[] = {
      7,  11, 13, 14, 19, 21, 22,  25,  26,  28,  35,  41,  42,
      49, 50, 52, 56, 67, 69, 70,  73,  74,  76,  81,  84,  97,
      98, 100, 104, 140, 148, 152, 164, 168, 176, 196, 224};
  std::set<unsigned> excluded(std::begin(kExcluded), std::end(kExcluded));
  std::vector<CandidateFabric> fs;
  for (unsigned mask = 1; mask < 256; ++mask)
    if (!excluded.count(mask)) fs.push_back(fabric_from_mask(mask));
  REQUIRE(fs.size() == 218);

  auto sols = enumerate_solutions(fs, 2);
  CHECK(sols.size() == 2219);

  // brute-force count over index pairs
  size_t expect = fs.size();
  for (size_t i = 0; i < fs.size(); ++i)
    for (size_t j = i + 1; j < fs.size(); ++j) {
      std::set<std::string> a(fs[i].cluster.members.begin(),
                              fs[i].cluster.members.end());
      bool disjoint = true;
      for (const auto& m : fs[j].cluster.members)
        if (a.count(m)) disjoint = false;
      if (disjoint) ++expect;
    }
  CHECK(sols.size() == expect);
}

TEST_CASE("enumeration equals brute force on 100 random overlap structures") {
  testgen::Rng rng(0xbb5);
  for (int trial = 0; trial < 100; ++trial) {
    const int nf = 3 + static_cast<int>(rng.below(10));  // up to 12 fabrics
    std::vector<CandidateFabric> fs;
    for (int i = 0; i < nf; ++i) {
      unsigned mask = 1 + static_cast<unsigned>(rng.below(255));
      fs.push_back(fabric_from_mask(mask));
    }
    // drop duplicate cluster ids (distinct candidates expected)
    std::sort(fs.begin(), fs.end(), [](const CandidateFabric& a, const CandidateFabric& b) {
      return a.cluster.id < b.cluster.id;
    });
    fs.erase(std::unique(fs.begin(), fs.end(),
                         [](const CandidateFabric& a, const CandidateFabric& b) {
                           return a.cluster.id == b.cluster.id;
                         }),
             fs.end());
    const int max_efpgas = 1 + static_cast<int>(rng.below(4));
    CAPTURE(trial);
    auto sols = enumerate_solutions(fs, max_efpgas);
    CHECK(index_sets(sols) == solutions_oracle(fs, max_efpgas));
    for (const auto& s : sols) {
      CHECK(s.fabrics.size() <= static_cast<size_t>(max_efpgas));
      std::set<std::string> used;
      size_t total = 0;
      for (size_t fi : s.fabrics) {
        used.insert(fs[fi].cluster.members.begin(), fs[fi].cluster.members.end());
        total += fs[fi].cluster.members.size();
      }
      CHECK(used.size() == total);  // pairwise instance-disjoint
    }
  }
}

TEST_CASE("ranking: dominance, instance-count tie-break, area tie-break") {
  std::vector<CandidateFabric> fs{
      fabric_from_mask(0x01, 1.0, 1.0, 50.0),   // T = 0
      fabric_from_mask(0x02, 0.6, 1.0, 50.0),   // T = 0.4
      fabric_from_mask(0x0c, 1.0, 1.0, 80.0),   // T = 0, two instances
      fabric_from_mask(0x30, 1.0, 1.0, 40.0),   // T = 0, two instances, cheaper
  };
  FabricScoreContext ctx = make_score_context(fs);
  CHECK(ctx.max_io_util == doctest::Approx(1.0));
  CHECK(ctx.max_clb_util == doctest::Approx(1.0));

  // single solution returns itself
  std::vector<Solution> one = enumerate_solutions({fs[0]}, 1);
  REQUIRE(one.size() == 1);
  std::vector<CandidateFabric> only{fs[0]};
  CHECK(rank_and_select(one, only, make_score_context(only)).fabrics ==
        std::vector<size_t>{0});

  // T = 0 singleton beats T = 0.4 singleton
  {
    std::vector<CandidateFabric> two{fs[0], fs[1]};
    auto sols = enumerate_solutions(two, 1);
    Solution best = rank_and_select(sols, two, make_score_context(two));
    REQUIRE(best.fabrics.size() == 1);
    CHECK(best.fabrics[0] == 0);
  }

  // equal mean T: the solution redacting more instances wins
  {
    std::vector<CandidateFabric> two{fs[0], fs[2]};
    auto sols = enumerate_solutions(two, 1);
    Solution best = rank_and_select(sols, two, make_score_context(two));
    REQUIRE(best.fabrics.size() == 1);
    CHECK(best.fabrics[0] == 1);  // two instances redacted
  }

  // equal mean T and count: smaller summed area wins
  {
    std::vector<CandidateFabric> two{fs[2], fs[3]};
    auto sols = enumerate_solutions(two, 1);
    Solution best = rank_and_select(sols, two, make_score_context(two));
    CHECK(best.fabrics[0] == 1);  // area 40 < 80
  }

  std::vector<Solution> empty;
  CHECK_THROWS_AS(rank_and_select(empty, fs, ctx), NetlistError);
}

TEST_CASE("ranking is invariant under a positive area rescale") {
  testgen::Rng rng(0xa2ea);
  std::vector<CandidateFabric> fs;
  for (int i = 0; i < 8; ++i) {
    double io = 0.2 + 0.1 * static_cast<double>(rng.below(8));
    double clb = 0.2 + 0.1 * static_cast<double>(rng.below(8));
    fs.push_back(fabric_from_mask(1u << i, io, clb, 50.0 + static_cast<double>(rng.below(100))));
  }
  FabricScoreContext ctx = make_score_context(fs);

  auto sols1 = enumerate_solutions(fs, 2);
  Solution best1 = rank_and_select(sols1, fs, ctx);

  std::vector<CandidateFabric> scaled = fs;
  for (auto& f : scaled) f.result.area_estimate *= 1000.0;
  auto sols2 = enumerate_solutions(scaled, 2);
  Solution best2 = rank_and_select(sols2, scaled, make_score_context(scaled));
  CHECK(best1.fabrics == best2.fabrics);
}

TEST_CASE("solution CSV lists ranked rows with ;-joined fabric fields") {
  std::vector<CandidateFabric> fs{fabric_from_mask(0x01, 1.0, 1.0, 10.0),
                                  fabric_from_mask(0x02, 0.5, 0.5, 20.0)};
  for (auto& f : fs) {
    f.params.n = 4;
    f.params.k = 5;
    f.result.bitstream_bits = 99;
  }
  auto sols = enumerate_solutions(fs, 2);
  rank_and_select(sols, fs, make_score_context(fs));
  std::string csv = solutions_csv(sols, fs);
  CHECK(csv.rfind("rank,clusters,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3);
  CHECK(csv.find("top.i0+top.i1;") == std::string::npos);  // ids joined per fabric
  CHECK(csv.find(";") != std::string::npos);               // the pair row
}
