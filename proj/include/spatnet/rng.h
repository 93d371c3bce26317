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

#ifndef SPATNET_RNG_H_
#define SPATNET_RNG_H_

#include <cstdint>
#include <random>

namespace spatnet {

// Seeded 64-bit generator used for every random draw in the library.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard, and uniforms are formed as (x >> 11) * 2^-53 rather than through
// std::uniform_real_distribution (whose algorithm is implementation
// defined). Together this gives the same stream on every platform. Changing
// either part breaks seeded test expectations.
//
// Split() derives an independent child stream by seeding a new engine with
// SplitMix64(seed ^ SplitMix64(stream)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  // Rebuilds the generator after `position` raw draws from `seed`.
  static Rng Restore(std::uint64_t seed, std::uint64_t position);

  std::uint64_t NextU64() {
    ++position_;
    return engine_();
  }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  Rng Split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }
  // Number of raw 64-bit draws taken so far.
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace spatnet

#endif  // SPATNET_RNG_H_
