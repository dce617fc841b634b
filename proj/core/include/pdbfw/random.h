// Copyright 2026 The PDBFW Authors
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

#ifndef PDBFW_RANDOM_H_
#define PDBFW_RANDOM_H_

#include <cstdint>
#include <random>

#include "pdbfw/sparse_matrix.h"

namespace pdbfw {

// Seeded generator whose output is identical on every conforming platform.
//
// Raw bits come from std::mt19937_64, whose sequence the C++ standard fixes.
// The standard distributions are implementation-defined, so the transforms
// are spelled out here instead:
//   uniform()        (bits >> 11) * 2^-53, in [0, 1)
//   normal()         Box-Muller on u1 = 1 - uniform(), u2 = uniform(); the
//                    cosine branch is returned first, the sine branch cached
//   uniform_index(n) rejection sampling on the top of the 64-bit range
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double normal();
  Index uniform_index(Index n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pdbfw

#endif  // PDBFW_RANDOM_H_
