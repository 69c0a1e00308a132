// SPDX-License-Identifier: Apache-2.0
//
// riscade: correlated mixture-gamma channel synthesis and linear estimation
// for RIS-aided THz uplinks
// Copyright (C) 2026 the riscade authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>

namespace riscade
{

using RngStream = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t &state)
{
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stable seed derivation: (master, stream, index) -> 64-bit seed. Nearby
// indices give unrelated seeds, so per-trial streams are independent and the
// same triple always reproduces the same stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0)
{
    std::uint64_t s = master;
    std::uint64_t h = splitmix64(s);
    s ^= stream + 0x632be59bd9b4e019ULL;
    h ^= splitmix64(s);
    s ^= index + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    return h;
}

inline RngStream make_stream(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0)
{
    return RngStream(derive_seed(master, stream, index));
}

} // namespace riscade
