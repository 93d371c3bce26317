// Copyright 2026 The spatnet Authors
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


#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "spatnet/analysis.h"
#include "spatnet/error.h"
#include "spatnet/propagation.h"
#include "spatnet/rng.h"
#include "spatnet/simulation.h"
#include "testing.h"

namespace spatnet {
namespace {

using testing::MakeLink;
using testing::O;
using testing::Obj;

ParameterVector V(std::int64_t v) { return ParameterVector{{"v", v}}; }

Network Chain(int n, std::int64_t head) {
  Network net;
  for (int i = 1; i <= n; ++i) net.AddObject(Obj(i, std::nullopt, V(i == 1 ? head : 0)));
  for (int i = 1; i < n; ++i) net.Connect(O(i), O(i + 1));
  return net;
}

std::int64_t Sum(const SimulationState& s, const std::string& param) {
  std::int64_t total = 0;
  for (const auto& [id, p] : s.objects) total += p.GetInt(param);
  return total;
}

TEST(RngTest, EngineIsMersenneTwister64) {
  Rng rng(5489);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.NextU64();
  EXPECT_EQ(x, 9981545732273789042ULL);
  EXPECT_EQ(rng.position(), 10000u);
}

TEST(RngTest, RestoreContinuesTheStream) {
  Rng a(42);
  for (int i = 0; i < 37; ++i) a.Uniform();
  Rng b = Rng::Restore(42, a.position());
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RngTest, UniformRangeAndSplit) {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.Uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  Rng s1 = rng.Split(1), s1b = rng.Split(1), s2 = rng.Split(2);
  const std::uint64_t first = s1.NextU64();
  EXPECT_EQ(first, s1b.NextU64());
  EXPECT_NE(first, s2.NextU64());
}

TEST(InteractionTest, IdentityLeavesVectorsUnchanged) {
  ParameterVector a{{"v", std::int64_t{3}}}, b{{"v", 2.5}}, e{{"q", 1.0}};
  InteractionResult r = ApplyInteraction(InteractionSet::Identity(), a, b, e);
  EXPECT_EQ(r.a, a);
  EXPECT_EQ(r.b, b);
  EXPECT_EQ(r.e, e);
}

TEST(InteractionTest, TransferTen) {
  InteractionSet t = InteractionSet::ConservativeTransfer("v", 10);
  InteractionResult r = ApplyInteraction(t, V(30), V(5), ParameterVector{{"q", 1.0}});
  EXPECT_EQ(r.a.GetInt("v"), 20);
  EXPECT_EQ(r.b.GetInt("v"), 15);
}

TEST(InteractionTest, EachDirectionUsesItsOwnLink) {
  InteractionSet t = InteractionSet::ConservativeTransfer("v", 10);
  InteractionResult ab = ApplyInteraction(t, V(30), V(5), ParameterVector{{"q", 1.0}});
  InteractionResult ba = ApplyInteraction(t, ab.b, ab.a, ParameterVector{{"q", 0.5}});
  EXPECT_EQ(ba.a.GetInt("v"), 10);
  EXPECT_EQ(ba.b.GetInt("v"), 25);
}

TEST(InteractionTest, FunctionsReadOriginalVectors) {
  InteractionSet s;
  s.f = [](const ParameterVector& a, const ParameterVector& b, const ParameterVector&) {
    ParameterVector out = b;
    out.Set("v", a.GetInt("v") + b.GetInt("v"));
    return out;
  };
  s.e = [](const ParameterVector& a, const ParameterVector& b, const ParameterVector&) {
    ParameterVector out = a;
    out.Set("v", b.GetInt("v"));
    return out;
  };
  InteractionResult r = ApplyInteraction(s, V(4), V(6), {});
  EXPECT_EQ(r.b.GetInt("v"), 10);
  EXPECT_EQ(r.a.GetInt("v"), 6);
}

TEST(InteractionTest, SchemaMismatch) {
  InteractionSet t = InteractionSet::ConservativeTransfer("v", 1);
  EXPECT_THROW(ApplyInteraction(t, V(1), ParameterVector{{"w", std::int64_t{1}}}, {}), Error);
  InteractionSet grow;
  grow.f = [](const ParameterVector&, const ParameterVector& b, const ParameterVector&) {
    ParameterVector out = b;
    out.Set("extra", 1.0);
    return out;
  };
  try {
    ApplyInteraction(grow, V(1), V(1), {});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
}

TEST(BifurcationTest, SplitOutflow) {
  const std::vector<double> three{0.5, 0.3, 0.2};
  EXPECT_EQ(SplitOutflow(0.0, three), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(SplitOutflow(7.5, std::vector<double>{1.0}), (std::vector<double>{7.5}));
  auto d = SplitOutflow(100.0, three);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_DOUBLE_EQ(d[0], 50.0);
  EXPECT_DOUBLE_EQ(d[1], 30.0);
  EXPECT_DOUBLE_EQ(d[2], 20.0);
  EXPECT_THROW(SplitOutflow(1.0, std::vector<double>{1.5}), Error);
}

TEST(BifurcationTest, SplitNeverExceedsSource) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> q(1 + trial % 6);
    double total = 0.0;
    for (double& x : q) total += (x = u(gen));
    for (double& x : q) x /= std::max(1.0, total);
    const double p = 1000.0 * u(gen);
    double sent = 0.0;
    for (double x : SplitOutflow(p, q)) sent += x;
    EXPECT_LE(sent, p * (1 + 1e-12));
  }
}

TEST(BifurcationTest, CapInflow) {
  const std::vector<double> half{0.5, 0.5};
  EXPECT_EQ(CapInflow(100, std::vector<double>{30, 40}, half), (std::vector<double>{30, 40}));
  EXPECT_EQ(CapInflow(100, std::vector<double>{80, 80}, half), (std::vector<double>{50, 50}));
  EXPECT_EQ(CapInflow(100, std::vector<double>{10, 200}, half), (std::vector<double>{10, 50}));
  EXPECT_THROW(CapInflow(100, std::vector<double>{1}, half), Error);
}

TEST(ProbabilisticTest, DegenerateInputs) {
  Rng rng(1);
  EXPECT_EQ(ProbabilisticPropagation(100, 1000, 100, 0, 0.0, rng), 0);
  EXPECT_EQ(ProbabilisticPropagation(100, 1000, 0, 0, 0.7, rng), 0);
  EXPECT_EQ(ProbabilisticPropagation(0, 1000, 50, 0, 1.0, rng), 0);
  EXPECT_EQ(ProbabilisticPropagation(100, 10, 50, 4, 1.0, rng), 6);
  EXPECT_EQ(ProbabilisticReceiving(50, 80, 10, 0, 0.5, rng), (ReceiveResult{80, 10}));
  EXPECT_EQ(ProbabilisticReceiving(50, 80, 10, 80, 1.0, rng), (ReceiveResult{40, 50}));
}

TEST(ProbabilisticTest, PropagationMean) {
  // Binomial(100, 0.3): mean 30, standard error of the mean over 10,000 runs
  // sqrt(21) / 100.
  Rng rng(2024);
  const int runs = 10000;
  double total = 0.0;
  for (int i = 0; i < runs; ++i) {
    total += static_cast<double>(
        ProbabilisticPropagation(100, std::numeric_limits<std::int64_t>::max(), 100, 0, 0.3, rng));
  }
  EXPECT_NEAR(total / runs, 30.0, 3.0 * std::sqrt(21.0) / 100.0);
}

TEST(ProbabilisticTest, ReceivingMeanAndConservation) {
  // Binomial(50, 0.4): mean 20, standard error sqrt(12) / 100.
  Rng rng(2025);
  const int runs = 10000;
  double total = 0.0;
  for (int i = 0; i < runs; ++i) {
    const ReceiveResult r = ProbabilisticReceiving(50, 1000, 0, 1000, 0.4, rng);
    EXPECT_EQ(r.t_a + r.t_b, 1000);
    total += static_cast<double>(r.t_b);
  }
  EXPECT_NEAR(total / runs, 20.0, 3.0 * std::sqrt(12.0) / 100.0);
}

TEST(ProbabilisticTest, ReceivingPreservesTotalAndCapacity) {
  std::mt19937_64 gen(43);
  std::uniform_int_distribution<int> n(0, 60);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Rng rng(44);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::int64_t c_b = n(gen), t_a = n(gen), t_b = n(gen) % (c_b + 1), vol = n(gen) % (t_a + 1);
    const ReceiveResult r = ProbabilisticReceiving(c_b, t_a, t_b, vol, u(gen), rng);
    EXPECT_EQ(r.t_a + r.t_b, t_a + t_b);
    EXPECT_LE(r.t_b, std::max(c_b, t_b));
    EXPECT_GE(r.t_b, t_b);
    EXPECT_LE(r.t_b - t_b, vol);
  }
}

TEST(PendingUpdatesTest, AccumulatesAndKeepsLastText) {
  ParameterVector base{{"n", std::int64_t{10}}, {"x", 1.0}, {"s", std::string("a")}};
  PendingUpdates p;
  EXPECT_TRUE(p.empty());
  ParameterVector w1 = base, w2 = base;
  w1.Set("n", std::int64_t{7});
  w1.Set("x", 1.5);
  w1.Set("s", std::string("b"));
  w2.Set("n", std::int64_t{14});
  w2.Set("x", 0.25);
  w2.Set("s", std::string("c"));
  p.Record(base, w1);
  p.Record(base, w2);
  ParameterVector out = p.Commit(base);
  EXPECT_EQ(out.GetInt("n"), 11);
  EXPECT_DOUBLE_EQ(out.GetReal("x"), 0.75);
  EXPECT_EQ(out.GetText("s"), "c");
  ParameterVector bad = base;
  bad.Set("n", 1.0);
  EXPECT_THROW(p.Record(base, bad), Error);
}

NetworkCoupling Flood(std::variant<StaticRelation, DynamicRelation> relation) {
  NetworkCoupling c;
  c.related = Network(TopologyKind::kPolygon);
  SpatialObject water = Obj(1, std::nullopt, {{"flood", std::int64_t{1}}});
  water.geometry = MakePolygon({{0, 0}, {10, 0}, {10, 10}, {0, 10}});
  c.related.AddObject(water);
  c.relation = std::move(relation);
  c.f = [](const ParameterVector& a, const ParameterVector& b) {
    ParameterVector out = b;
    if (a.GetInt("flood") >= 1) out.Set("capacity", std::int64_t{0});
    return out;
  };
  return c;
}

Network Roads(Point start) {
  Network d(TopologyKind::kPolyline);
  SpatialObject road = Obj(1, std::nullopt, {{"capacity", std::int64_t{40}}});
  road.geometry = MakePolyline({start, {start.x + 5, start.y}});
  d.AddObject(road);
  return d;
}

TEST(CouplingTest, FloodZeroesRoadCapacity) {
  NetworkCoupling c = Flood(StaticRelation{.objects = {{O(1), O(1)}}, .links = {}});
  Network d = Roads({2, 2});
  const ParameterVector water = c.related.object(O(1)).params;
  ApplyCoupling(c, c.related, d);
  EXPECT_EQ(d.object(O(1)).params.GetInt("capacity"), 0);
  EXPECT_EQ(c.related.object(O(1)).params, water);
}

TEST(CouplingTest, EmptyAndDisjointRelationsChangeNothing) {
  NetworkCoupling empty = Flood(StaticRelation{});
  Network d = Roads({2, 2});
  ApplyCoupling(empty, empty.related, d);
  EXPECT_EQ(d.object(O(1)).params.GetInt("capacity"), 40);

  NetworkCoupling dynamic = Flood(DynamicRelation{0.0});
  Network far = Roads({20, 20});
  EXPECT_TRUE(RelatedObjects(dynamic, dynamic.related, far).empty());
  ApplyCoupling(dynamic, dynamic.related, far);
  EXPECT_EQ(far.object(O(1)).params.GetInt("capacity"), 40);
  ApplyCoupling(dynamic, dynamic.related, d);
  EXPECT_EQ(d.object(O(1)).params.GetInt("capacity"), 0);
}

TEST(CouplingTest, DanglingReference) {
  NetworkCoupling c = Flood(StaticRelation{.objects = {{O(1), O(9)}}, .links = {}});
  Network d = Roads({2, 2});
  try {
    ApplyCoupling(c, c.related, d);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDanglingCouplingReference);
  }
}

TEST(CouplingTest, LinkFunctions) {
  Network n = Chain(2, 0), d = Chain(2, 0);
  NetworkCoupling c;
  c.relation = StaticRelation{.objects = {}, .links = {{LinkId(1), LinkId(1)}}};
  c.k = [](const ParameterVector& e, const ParameterVector& l) {
    ParameterVector out = l;
    out.Set(kFactorQ, e.GetReal(kFactorQ) / 2);
    return out;
  };
  ApplyCoupling(c, n, d);
  EXPECT_EQ(d.link(LinkId(1)).q, 0.5);
  EXPECT_EQ(n.link(LinkId(1)).q, 1.0);
}

TEST(SimulateFullTest, ZeroSteps) {
  SimulationRun run = SimulateFull(Chain(3, 5), InteractionSet::Identity(), {}, 0, 1);
  ASSERT_EQ(run.states.size(), 1u);
  EXPECT_EQ(run.states[0].step, 0u);
}

TEST(SimulateFullTest, IdentityIsAFixpoint) {
  SimulationRun run = SimulateFull(testing::WaterRegistry(), InteractionSet::Identity(), {}, 5, 1);
  ASSERT_EQ(run.states.size(), 6u);
  for (const auto& s : run.states) {
    EXPECT_EQ(s.objects, run.states[0].objects);
    EXPECT_EQ(s.links, run.states[0].links);
  }
}

TEST(SimulateFullTest, TransferAtMostTwoPerStep) {
  Network net;
  net.AddObject(Obj(1, std::nullopt, V(10)));
  net.AddObject(Obj(2, std::nullopt, V(0)));
  net.Connect(O(1), O(2));
  SimulationRun run = SimulateFull(net, InteractionSet::ConservativeTransfer("v", 2), {}, 5, 1);
  for (int step = 0; step <= 5; ++step) {
    EXPECT_EQ(run.states[step].objects.at(O(1)).GetInt("v"), 10 - 2 * step);
    EXPECT_EQ(run.states[step].objects.at(O(2)).GetInt("v"), 2 * step);
  }
}

TEST(SimulateFullTest, StepReadsStartSnapshot) {
  // 1 -> 2 -> 3 with everything at 1: within one step 2 both receives and
  // sends based on its start-of-step value.
  Network net = Chain(3, 4);
  SimulationRun run = SimulateFull(net, InteractionSet::ConservativeTransfer("v", 100), {}, 1, 1);
  EXPECT_EQ(run.states[1].objects.at(O(1)).GetInt("v"), 0);
  EXPECT_EQ(run.states[1].objects.at(O(2)).GetInt("v"), 4);
  EXPECT_EQ(run.states[1].objects.at(O(3)).GetInt("v"), 0);
}

Network RandomTransferNetwork(std::mt19937_64& gen, int n) {
  Network net = testing::RandomNetwork(gen, n, 3 * n);
  std::uniform_int_distribution<std::int64_t> v(0, 50);
  for (const auto& [id, o] : net.objects()) net.mutable_object(id).params = V(v(gen));
  for (const auto& [id, o] : net.objects()) {
    auto out = net.Outgoing(id);
    for (LinkId l : out) net.SetFactors(l, 1.0 / static_cast<double>(out.size()), 1.0);
  }
  return net;
}

TEST(SimulateFullTest, ConservesTransferredQuantity) {
  std::mt19937_64 gen(45);
  for (int trial = 0; trial < 40; ++trial) {
    Network net = RandomTransferNetwork(gen, 2 + trial % 10);
    for (bool probabilistic : {false, true}) {
      SimulationRun run = SimulateFull(
          net, InteractionSet::ConservativeTransfer("v", 7, probabilistic), {}, 25, trial);
      const std::int64_t total = Sum(run.states[0], "v");
      for (const auto& s : run.states) {
        EXPECT_EQ(Sum(s, "v"), total);
        for (const auto& [id, p] : s.objects) EXPECT_GE(p.GetInt("v"), 0);
      }
    }
  }
}

TEST(SimulateFullTest, Deterministic) {
  std::mt19937_64 gen(46);
  Network net = RandomTransferNetwork(gen, 8);
  auto iset = InteractionSet::ConservativeTransfer("v", 5, true);
  SimulationRun a = SimulateFull(net, iset, {}, 30, 99);
  SimulationRun b = SimulateFull(net, iset, {}, 30, 99);
  EXPECT_EQ(a.states, b.states);
  std::ostringstream ca, cb;
  WriteStatesCsv(ca, a.states);
  WriteStatesCsv(cb, b.states);
  EXPECT_EQ(ca.str(), cb.str());
  const Rng replay = Rng::Restore(a.states.back().rng_seed, a.states.back().rng_position);
  EXPECT_EQ(replay.position(), a.states.back().rng_position);
}

TEST(SimulateFullTest, CouplingsRunEachStep) {
  NetworkCoupling c = Flood(StaticRelation{.objects = {{O(1), O(1)}}, .links = {}});
  Network d = Roads({2, 2});
  SimulationRun run = SimulateFull(d, InteractionSet::Identity(), {c}, 1, 0);
  EXPECT_EQ(run.final_network.object(O(1)).params.GetInt("capacity"), 0);
}

TEST(SimulateFrontierTest, IsolatedStartGoesQuiet) {
  Network net = Chain(3, 5);
  net.AddObject(Obj(9, std::nullopt, V(5)));
  SimulationRun run = SimulateFrontier(net, InteractionSet::ConservativeTransfer("v", 1), {},
                                       {O(9)}, 4, 0);
  for (const auto& s : run.states) EXPECT_EQ(s.objects, run.states[0].objects);
  EXPECT_THROW(SimulateFrontier(net, InteractionSet::Identity(), {}, {O(42)}, 1, 0), Error);
  EXPECT_THROW(SimulateFrontier(net, InteractionSet::Identity(), {}, {}, 1, 0), Error);
}

int FirstChange(const SimulationRun& run, ObjectId id) {
  for (std::size_t s = 1; s < run.states.size(); ++s) {
    if (run.states[s].objects.at(id) != run.states[0].objects.at(id)) return static_cast<int>(s);
  }
  return -1;
}

TEST(SimulateFrontierTest, ChainWavefront) {
  SimulationRun run = SimulateFrontier(Chain(4, 1), InteractionSet::ConservativeTransfer("v", 1),
                                       {}, {O(1)}, 5, 0);
  EXPECT_EQ(FirstChange(run, O(2)), 1);
  EXPECT_EQ(FirstChange(run, O(3)), 2);
  EXPECT_EQ(FirstChange(run, O(4)), 3);
}

TEST(SimulateFrontierTest, CycleWithInteractionCap) {
  Network net;
  for (int i = 1; i <= 3; ++i) net.AddObject(Obj(i, std::nullopt, V(i == 1 ? 9 : 0)));
  net.Connect(O(1), O(2));
  net.Connect(O(2), O(3));
  net.Connect(O(3), O(1));
  InteractionSet iset = InteractionSet::ConservativeTransfer("v", 1);
  iset.max_interactions_per_object = 1;
  for (FrontierMode mode : {FrontierMode::kWavefront, FrontierMode::kCumulative}) {
    SimulationRun run = SimulateFrontier(net, iset, {}, {O(1)}, 20, 0, mode);
    for (const auto& [id, count] : run.interactions) EXPECT_LE(count, 1);
  }
  SimulationRun full = SimulateFull(net, iset, {}, 20, 0);
  for (const auto& [id, count] : full.interactions) EXPECT_LE(count, 1);
}

TEST(SimulateFrontierTest, ChangesStayWithinHopDistance) {
  std::mt19937_64 gen(47);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 11;
    Network net = RandomTransferNetwork(gen, n);
    std::set<ObjectId> start{O(1 + static_cast<int>(gen() % n))};
    std::map<ObjectId, int> hops;
    std::queue<ObjectId> frontier;
    for (ObjectId s : start) {
      hops[s] = 0;
      frontier.push(s);
    }
    while (!frontier.empty()) {
      ObjectId at = frontier.front();
      frontier.pop();
      for (LinkId l : net.Outgoing(at)) {
        ObjectId to = net.link(l).to;
        if (!hops.contains(to)) {
          hops[to] = hops[at] + 1;
          frontier.push(to);
        }
      }
    }
    SimulationRun run = SimulateFrontier(net, InteractionSet::ConservativeTransfer("v", 3), {},
                                         start, 12, 0, FrontierMode::kCumulative);
    for (std::size_t s = 1; s < run.states.size(); ++s) {
      for (const auto& [id, p] : run.states[s].objects) {
        if (p == run.states[s - 1].objects.at(id)) continue;
        ASSERT_TRUE(hops.contains(id));
        EXPECT_LE(hops[id], static_cast<int>(s));
      }
    }
  }
}

TEST(CsvTest, EscapingAndLayout) {
  EXPECT_EQ(CsvField("plain"), "plain");
  EXPECT_EQ(CsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(CsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
  Network net = Chain(2, 3);
  SimulationRun run = SimulateFull(net, InteractionSet::Identity(), {}, 0, 0);
  std::ostringstream out;
  WriteStatesCsv(out, run.states);
  EXPECT_EQ(out.str(),
            "step,element_kind,id,param,value\n"
            "0,object,1,v,3\n"
            "0,object,2,v,0\n"
            "0,link,1,q,1\n"
            "0,link,1,r,1\n");
}

}  // namespace
}  // namespace spatnet
