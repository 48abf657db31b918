// SPDX-License-Identifier: Apache-2.0
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
#include <string_view>

namespace fluidkey {

using Rng = std::mt19937_64;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

// Hands out independent generators keyed by (seed, purpose tag, index), so a
// parallel schedule draws the same numbers as a sequential one.
class RngStreams {
public:
    explicit RngStreams(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t child_seed(std::string_view tag, std::uint64_t index = 0) const
    {
        std::uint64_t h = detail::splitmix64(seed_);
        h = detail::splitmix64(h ^ detail::fnv1a(tag));
        return detail::splitmix64(h ^ detail::splitmix64(index + 0x632be59bd9b4e019ULL));
    }

    Rng stream(std::string_view tag, std::uint64_t index = 0) const
    {
        const std::uint64_t s = child_seed(tag, index);
        std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
        return Rng(seq);
    }

    RngStreams child(std::string_view tag, std::uint64_t index = 0) const
    {
        return RngStreams(child_seed(tag, index));
    }

private:
    std::uint64_t seed_;
};

} // namespace fluidkey
