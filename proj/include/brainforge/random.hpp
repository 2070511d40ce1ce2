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

#pragma once

#include <cstddef>
#include <cstdint>

namespace brainforge {

// SplitMix64 stream (Steele, Lea & Flood 2014): state advances by the golden
// gamma 0x9e3779b97f4a7c15 and each output is the standard splitmix finalizer
// of the state. Distributions are implemented here rather than taken from
// <random> because the standard leaves their algorithms unspecified, and
// evolution runs must replay identically across toolchains.
//
// substream(i) depends only on the stream's key and i, never on how many
// values were already drawn, so work fanned out by index replays identically
// in any evaluation order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();                      // [0, 1), 53-bit resolution
  double normal();                       // N(0, 1), Box-Muller
  std::size_t index(std::size_t bound);  // uniform over [0, bound); bound > 0
  bool bernoulli(double p);

  RandomStream substream(std::uint64_t index) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace brainforge
