/* Copyright 2026 The TestAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef TESTAUG_RNG_H_
#define TESTAUG_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace testaug {

// Seeded random source with platform-stable sampling.
//
// std::uniform_int_distribution and std::shuffle are implementation-defined,
// so every draw here goes through the raw mt19937_64 stream, which the
// standard fixes bit-for-bit. Output files that depend on sampling are
// therefore byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, bound). bound must be > 0.
  uint64_t Uniform(uint64_t bound);

  // Indices of k distinct elements of [0, n), in draw order.
  std::vector<size_t> SampleIndices(size_t n, size_t k);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[Uniform(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with a stream label so independent consumers draw from
// independent streams.
uint64_t DeriveSeed(uint64_t base, std::string_view label);
uint64_t DeriveSeed(uint64_t base, uint64_t index);

}  // namespace testaug

#endif  // TESTAUG_RNG_H_
