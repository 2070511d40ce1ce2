// Copyright 2026 The BrainForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <set>

#include "brainforge/cppn/cppn.hpp"
#include "brainforge/cppn/mutation.hpp"
#include "brainforge/error.hpp"
#include "brainforge/io/json_io.hpp"
#include "brainforge/random.hpp"
#include "doctest.h"

using namespace brainforge;
using cppn::ConnectionTag;
using cppn::Cppn;
using cppn::NodeFunction;
using cppn::NodeTag;

namespace {

Cppn gaussian_of_x1() {
  Cppn c = Cppn::empty();
  c.nodes.push_back({"g", NodeFunction::kGaussian, NodeTag::kEvolved});
  c.connections.push_back({"in0", "g", 1.0, ConnectionTag::kEvolved});
  c.connections.push_back({"g", "out0", 1.0, ConnectionTag::kEvolved});
  return c;
}

Cppn chain() {
  Cppn c = Cppn::empty();
  for (const char* id : {"c", "b", "a"}) c.nodes.push_back({id, NodeFunction::kLinear, NodeTag::kEvolved});
  c.connections.push_back({"a", "b", 1.0, ConnectionTag::kEvolved});
  c.connections.push_back({"b", "c", 1.0, ConnectionTag::kEvolved});
  return c;
}

}  // namespace

TEST_CASE("node functions") {
  CHECK(cppn::apply_function(NodeFunction::kLinear, -2.5) == -2.5);
  CHECK(cppn::apply_function(NodeFunction::kSigmoidSteep, 0.0) == 0.5);
  CHECK(cppn::apply_function(NodeFunction::kSigmoidSteep, 1.0) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-4.9))));
  CHECK(cppn::apply_function(NodeFunction::kSine, 0.5) == std::sin(0.5));
  CHECK(cppn::apply_function(NodeFunction::kGaussian, 0.0) == 1.0);
  CHECK(cppn::apply_function(NodeFunction::kAbs, -3.0) == 3.0);
  CHECK(cppn::apply_function(NodeFunction::kSquare, -3.0) == 9.0);
  CHECK(cppn::apply_function(NodeFunction::kInvExp, -5.0) == 1.0);
  CHECK(cppn::apply_function(NodeFunction::kInvExp, 1.0) == doctest::Approx(0.36787944117144233));
  for (auto f : cppn::kAllFunctions) {
    CHECK(cppn::parse_function(cppn::function_name(f)) == f);
    for (double z : {-1e6, -1.0, 0.0, 1.0, 1e6}) CHECK(std::isfinite(cppn::apply_function(f, z)));
  }
}

TEST_CASE("query: constant bias output") {
  Cppn c = Cppn::empty();
  c.connections.push_back({"in4", "out0", 0.3, ConnectionTag::kEvolved});
  CHECK(cppn::query(c, {0.1, -0.7, 0.9, 0.2}) == 0.3);
  CHECK(cppn::query(c, {-1, -1, 1, 1}) == 0.3);
}

TEST_CASE("query: gaussian of x1") {
  const Cppn c = gaussian_of_x1();
  CHECK(cppn::query(c, {0.0, 0.4, -0.2, 0.9}) == 1.0);
  CHECK(cppn::query(c, {1.0, 0.4, -0.2, 0.9}) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
}

TEST_CASE("batched queries match single queries bit for bit") {
  RandomStream rng(5);
  Cppn c = gaussian_of_x1();
  for (int i = 0; i < 200; ++i) c = cppn::mutate(c, rng, {});
  const cppn::CppnEvaluator eval(c);
  std::vector<double> x1(37), y1(37), x2(37), y2(37), out(37);
  for (std::size_t i = 0; i < 37; ++i) {
    x1[i] = 2 * rng.uniform() - 1;
    y1[i] = 2 * rng.uniform() - 1;
    x2[i] = 2 * rng.uniform() - 1;
    y2[i] = 2 * rng.uniform() - 1;
  }
  eval.query_batch(x1, y1, x2, y2, out);
  for (std::size_t i = 0; i < 37; ++i) CHECK(out[i] == eval.query({x1[i], y1[i], x2[i], y2[i]}));
}

TEST_CASE("topological order") {
  SUBCASE("inputs precede the output") {
    const auto order = cppn::topological_order(Cppn::empty());
    REQUIRE(order.size() == 6);
    CHECK(order.back() == "out0");
  }
  SUBCASE("chain a -> b -> c") {
    const auto order = cppn::topological_order(chain());
    std::vector<std::string> evolved;
    for (const auto& id : order) {
      if (!cppn::is_input_id(id) && id != "out0") evolved.push_back(id);
    }
    CHECK(evolved == std::vector<std::string>{"a", "b", "c"});
  }
  SUBCASE("a cycle is reported by name") {
    Cppn c = chain();
    c.connections.push_back({"b", "a", 1.0, ConnectionTag::kEvolved});
    try {
      cppn::topological_order(c);
      FAIL("expected a cycle error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kCycle);
      CHECK(e.detail() == "a,b");
    }
  }
}

TEST_CASE("check_cppn rejects broken interfaces") {
  Cppn c = Cppn::empty();
  c.connections.push_back({"out0", "in0", 1.0, ConnectionTag::kEvolved});
  CHECK_THROWS_AS(cppn::check_cppn(c), Error);
  Cppn d = Cppn::empty();
  d.nodes.erase(d.nodes.begin());
  CHECK_THROWS_AS(cppn::check_cppn(d), Error);
}

TEST_CASE("node ids compare naturally") {
  CHECK(cppn::node_id_less("n2", "n10"));
  CHECK_FALSE(cppn::node_id_less("n10", "n2"));
  Cppn c = Cppn::empty();
  c.nodes.push_back({"n9", NodeFunction::kLinear, NodeTag::kEvolved});
  CHECK(cppn::fresh_node_id(c) == "n10");
}

TEST_CASE("mutate with every probability zero is the identity") {
  RandomStream rng(1);
  const Cppn c = gaussian_of_x1();
  CHECK(cppn::mutate(c, rng, cppn::MutationConfig::none()) == c);
}

TEST_CASE("add_node adds one node and one connection") {
  cppn::MutationConfig cfg = cppn::MutationConfig::none();
  cfg.p_add_node = 1.0;
  RandomStream rng(2);
  const Cppn c = gaussian_of_x1();
  const Cppn m = cppn::mutate(c, rng, cfg);
  CHECK(m.nodes.size() == c.nodes.size() + 1);
  CHECK(m.connections.size() == c.connections.size() + 1);
}

TEST_CASE("mutate is reproducible for a fixed seed") {
  Cppn a = gaussian_of_x1();
  Cppn b = a;
  RandomStream ra(99), rb(99);
  for (int i = 0; i < 300; ++i) {
    a = cppn::mutate(a, ra, {});
    b = cppn::mutate(b, rb, {});
  }
  CHECK(io::dump(io::cppn_to_json(a)) == io::dump(io::cppn_to_json(b)));
}

TEST_CASE("sharpness weights are frozen unless enabled, orbit links always") {
  Cppn c = Cppn::empty();
  c.nodes.push_back({"d", NodeFunction::kInvExp, NodeTag::kSharpnessTarget});
  c.nodes.push_back({"s", NodeFunction::kLinear, NodeTag::kOrbitSum});
  c.connections.push_back({"in0", "d", 40.0, ConnectionTag::kSharpness});
  c.connections.push_back({"d", "s", 1.0, ConnectionTag::kOrbitLink});
  c.connections.push_back({"s", "out0", 1.0, ConnectionTag::kOrbitWeight});
  cppn::MutationConfig cfg = cppn::MutationConfig::none();
  cfg.p_perturb_genome = 1.0;
  cfg.p_perturb_each = 1.0;
  RandomStream rng(3);
  const Cppn m = cppn::mutate(c, rng, cfg);
  CHECK(m.find_connection("in0", "d")->weight == 40.0);
  CHECK(m.find_connection("d", "s")->weight == 1.0);
  CHECK(m.find_connection("s", "out0")->weight != 1.0);
  cfg.mutate_sharpness = true;
  const Cppn n = cppn::mutate(c, rng, cfg);
  CHECK(n.find_connection("in0", "d")->weight != 40.0);
  CHECK(n.find_connection("d", "s")->weight == 1.0);
}

TEST_CASE("property: add_node keeps the split path connected") {
  cppn::MutationConfig cfg = cppn::MutationConfig::none();
  cfg.p_add_node = 1.0;
  RandomStream rng(4);
  Cppn c = gaussian_of_x1();
  for (int i = 0; i < 50; ++i) {
    const Cppn before = c;
    c = cppn::mutate(c, rng, cfg);
    // Exactly one connection vanished; a two-hop path replaces it.
    for (const auto& old : before.connections) {
      if (c.find_connection(old.src, old.dst)) continue;
      bool bridged = false;
      for (const auto& n : c.nodes) {
        if (c.find_connection(old.src, n.id) && c.find_connection(n.id, old.dst)) bridged = true;
      }
      CHECK(bridged);
    }
  }
}

TEST_CASE("property: mutation chains stay valid") {
  RandomStream rng(6);
  Cppn c = gaussian_of_x1();
  for (int i = 0; i < 2000; ++i) {
    c = cppn::mutate(c, rng, {});
    REQUIRE_NOTHROW(cppn::check_cppn(c));
    for (const auto& k : c.connections) REQUIRE(std::isfinite(k.weight));
    for (auto id : cppn::kInputIds) REQUIRE(c.find_node(id)->tag == NodeTag::kIo);
    REQUIRE(c.find_node(cppn::kOutputId)->function == NodeFunction::kLinear);
  }
}

TEST_CASE("random stream") {
  SUBCASE("splitmix64 reference outputs") {
    // Reference values of SplitMix64 seeded with 0.
    RandomStream r(0);
    CHECK(r.next_u64() == 0xe220a8397b1dcdafULL);
    CHECK(r.next_u64() == 0x6e789e6aa1b965f4ULL);
    CHECK(r.next_u64() == 0x06c45d188009454fULL);
  }
  SUBCASE("substreams ignore how far the parent has advanced") {
    RandomStream a(7), b(7);
    for (int i = 0; i < 10; ++i) b.next_u64();
    auto sa = a.substream(3), sb = b.substream(3);
    CHECK(sa.next_u64() == sb.next_u64());
    CHECK(a.substream(3).next_u64() != a.substream(4).next_u64());
  }
  SUBCASE("uniform, index and normal moments") {
    RandomStream r(8);
    double sum = 0, sq = 0;
    std::set<std::size_t> seen;
    for (int i = 0; i < 100000; ++i) {
      const double u = r.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      const double z = r.normal();
      sum += z;
      sq += z * z;
      seen.insert(r.index(7));
    }
    CHECK(std::fabs(sum / 1e5) < 0.02);
    CHECK(std::fabs(sq / 1e5 - 1.0) < 0.02);
    CHECK(seen.size() == 7);
  }
}
