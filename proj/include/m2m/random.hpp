// Copyright 2026 The m2mpower Authors
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

#ifndef M2M_RANDOM_HPP
#define M2M_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace m2m {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
	x += 0x9e3779b97f4a7c15ULL;
	x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
	x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
	return x ^ (x >> 31);
}

/// Counter-based seed for an independent stream, e.g. derive_seed(seed, {lambda_index, trial}).
/// Streams depend only on the base seed and the counters, never on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters) noexcept
{
	std::uint64_t h = mix64(base);
	for (std::uint64_t c : counters)
		h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
	return h;
}

/// Uniform on [0, 1) from the top 53 bits; identical across standard libraries.
inline double uniform01(Rng& rng) noexcept
{
	return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace m2m

#endif // M2M_RANDOM_HPP
