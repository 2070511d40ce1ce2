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

#include "brainforge/ann/activation.hpp"
#include "brainforge/ann/network.hpp"
#include "brainforge/error.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace brainforge;
using ann::Role;

namespace {

bool has_rule(const std::vector<ann::Violation>& v, std::string_view rule) {
  return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.rule == rule; });
}

}  // namespace

TEST_CASE("validate accepts a well-formed three-neuron network") {
  CHECK(ann::validate(testing::tiny_network(1.0)).empty());
}

TEST_CASE("validate names the separation rule") {
  auto net = testing::tiny_network(1.0);
  net.neurons[1].position = {net.neurons[0].position.x + 0.01, net.neurons[0].position.y};
  const auto v = ann::validate(net);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "min-separation");
}

TEST_CASE("validate names the weight range") {
  auto net = testing::tiny_network(5.0);
  const auto v = ann::validate(net);
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "weight-range");
  CHECK(v[0].element == "in->out");
}

TEST_CASE("validate reports structural problems") {
  auto net = testing::tiny_network(1.0);
  net.neurons.push_back({"bias2", Role::kBias, {0.9, 0.9}});
  net.connections.push_back({"in", "ghost", 1.0});
  net.connections.push_back({"out", "in", 1.0});
  net.connections.push_back({"in", "out", 2.0});
  net.neurons.push_back({"far", Role::kHidden, {1.5, 0.0}});
  net.output_order.push_back("out");
  const auto v = ann::validate(net);
  CHECK(has_rule(v, "single-bias"));
  CHECK(has_rule(v, "dangling-endpoint"));
  CHECK(has_rule(v, "target-role"));
  CHECK(has_rule(v, "unique-connection"));
  CHECK(has_rule(v, "position-range"));
  CHECK(has_rule(v, "order-duplicate"));
}

TEST_CASE("activate: zero weight gives zero output") {
  const std::vector<double> in = {0.7};
  CHECK(ann::activate(testing::tiny_network(0.0), in, 3) == std::vector<double>{0.0});
}

TEST_CASE("activate: one step of tanh") {
  const std::vector<double> in = {1.0};
  const auto out = ann::activate(testing::tiny_network(1.0), in, 1);
  CHECK(out[0] == doctest::Approx(0.7615941559557649).epsilon(1e-15));
}

TEST_CASE("activate: self-loop recurrence over two steps") {
  auto net = testing::tiny_network(1.0);
  net.connections.push_back({"out", "out", 0.5});
  const std::vector<double> in = {1.0};
  const auto out = ann::activate(net, in, 2);
  CHECK(out[0] == doctest::Approx(0.8811296283442258).epsilon(1e-15));
}

TEST_CASE("activate rejects an input length mismatch") {
  const std::vector<double> in = {1.0, 2.0};
  CHECK_THROWS_AS(ann::activate(testing::tiny_network(1.0), in, 1), Error);
}

TEST_CASE("bias reads one") {
  auto net = testing::tiny_network(0.0);
  net.connections.push_back({"bias", "out", 0.3});
  const std::vector<double> in = {0.0};
  CHECK(ann::activate(net, in, 1)[0] == std::tanh(0.3));
}

TEST_CASE("apply_edit examples") {
  const auto net = testing::tiny_network(1.0);
  SUBCASE("AddNeuron grows the neuron list") {
    const auto out = ann::apply_edit(net, ann::edit::AddNeuron{Role::kHidden, {0.0, 0.0}, {}});
    CHECK(out.neurons.size() == net.neurons.size() + 1);
    CHECK(out.neurons.back().id == "h1");
  }
  SUBCASE("SetWeight changes only that weight") {
    const auto out = ann::apply_edit(net, ann::edit::SetWeight{"in", "out", 1.25});
    CHECK(out.connections[0].weight == 1.25);
    auto expected = net;
    expected.connections[0].weight = 1.25;
    CHECK(out == expected);
  }
  SUBCASE("MoveNeuron next to another neuron is rejected") {
    const auto target = net.neurons[1].position;
    CHECK_THROWS_AS(ann::apply_edit(net, ann::edit::MoveNeuron{"out", {target.x + 0.01, target.y}}),
                    Error);
  }
  SUBCASE("interface neurons cannot be removed") {
    CHECK_THROWS_AS(ann::apply_edit(net, ann::edit::RemoveNeuron{"in"}), Error);
    CHECK_THROWS_AS(ann::apply_edit(net, ann::edit::RemoveNeuron{"out"}), Error);
  }
  SUBCASE("unknown ids and bad weights are rejected") {
    CHECK_THROWS_AS(ann::apply_edit(net, ann::edit::SetWeight{"in", "nope", 1.0}), Error);
    CHECK_THROWS_AS(ann::apply_edit(net, ann::edit::SetWeight{"in", "out", 3.5}), Error);
    CHECK_THROWS_AS(ann::apply_edit(net, ann::edit::AddConnection{"out", "in", 1.0}), Error);
  }
  SUBCASE("removing a hidden neuron drops its connections") {
    auto with_hidden = ann::apply_edit(net, ann::edit::AddNeuron{Role::kHidden, {0.0, 0.0}, {}});
    with_hidden = ann::apply_edit(with_hidden, ann::edit::AddConnection{"in", "h1", 0.5});
    with_hidden = ann::apply_edit(with_hidden, ann::edit::AddConnection{"h1", "out", 0.5});
    const auto out = ann::apply_edit(with_hidden, ann::edit::RemoveNeuron{"h1"});
    CHECK(out == net);
  }
}

TEST_CASE("property: apply_edit leaves its input alone and returns valid networks") {
  RandomStream rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = compiler::expand_annotations(testing::random_annotated_network(rng, 0.0)).phenotype;
    const auto copy = net;
    const auto edit = testing::random_valid_edit(net, rng);
    const auto out = ann::apply_edit(net, edit);
    CHECK(net == copy);
    CHECK(ann::validate(out).empty());
  }
}

TEST_CASE("property: outputs stay inside (-1, 1) and are deterministic") {
  RandomStream rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto net =
        compiler::expand_annotations(testing::random_annotated_network(rng, 0.0)).phenotype;
    std::vector<double> in(net.input_order.size());
    for (auto& v : in) v = rng.uniform();
    const int steps = 1 + static_cast<int>(rng.index(5));
    const auto a = ann::activate(net, in, steps);
    const auto b = ann::activate(net, in, steps);
    CHECK(a == b);
    for (double v : a) CHECK(std::fabs(v) < 1.0);
  }
}

TEST_CASE("property: outputs unreachable from inputs and bias stay at zero") {
  RandomStream rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto net = compiler::expand_annotations(testing::random_annotated_network(rng, 0.0)).phenotype;
    // Cut everything leaving an input or the bias: nothing can drive the rest.
    std::erase_if(net.connections, [&](const ann::Connection& c) {
      const auto* src = net.find_neuron(c.src);
      return src->role == Role::kInput || src->role == Role::kBias;
    });
    std::vector<double> in(net.input_order.size(), 1.0);
    for (double v : ann::activate(net, in, 4)) CHECK(v == 0.0);
  }
}

TEST_CASE("diff_networks finds missing, spurious and changed weights") {
  const auto a = testing::tiny_network(1.0);
  auto b = a;
  b.connections[0].weight = 1.5;
  b.connections.push_back({"bias", "out", 0.2});
  const auto d = ann::diff_networks(a, b);
  CHECK(d.max_weight_error == 0.5);
  CHECK(d.spurious.size() == 1);
  CHECK(d.missing.empty());
  CHECK_FALSE(d.matches(1e-3));
}
