// Copyright 2026 The hqfilter Authors
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

#pragma once

#include <cstdint>
#include <random>

namespace hqf {

using Engine = std::mt19937_64;

enum class Stream : std::uint32_t {
    measurement = 1,  // homodyne innovation increments
    disturbance = 2,  // classical OU driving noise
};

/// Engine for one (master seed, trajectory, stream) triple. Streams never
/// share state, so trajectories can be generated in any order.
inline Engine make_engine(std::uint64_t master_seed, std::uint64_t trajectory, Stream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(trajectory), static_cast<std::uint32_t>(trajectory >> 32),
                      static_cast<std::uint32_t>(stream)};
    return Engine(seq);
}

}  // namespace hqf
