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

// Schedules 200 random devices three ways and compares the total power.

#include <algorithm>
#include <cstdio>

#include "m2m/m2m.hpp"

int main()
{
	m2m::Scenario s; // 1 MHz, 1 s slot, 1000-bit payloads, -3 dB at the cell edge
	s.lambda_rate = 200;

	std::vector<double> gains = m2m::gains_of(m2m::sample_devices(s, 200, 7));
	std::sort(gains.begin(), gains.end());

	const auto opt = m2m::fdma_schedule(gains, s, m2m::AllocationMode::optimal);
	const auto eq = m2m::fdma_schedule(gains, s, m2m::AllocationMode::equal);
	const double p_opt = m2m::allocation_cost(opt, gains, s).total_power;
	const double p_eq = m2m::allocation_cost(eq, gains, s).total_power;
	const double p_sic = m2m::sic_sum_power(gains, s).total_power;

	std::printf("optimal FDMA  %.4g W\n", p_opt);
	std::printf("equal FDMA    %.4g W (bound on ratio %.4g, realized %.4g)\n", p_eq,
		    m2m::energy_ratio_bound(gains, s), p_eq / p_opt);
	std::printf("SIC           %.4g W\n", p_sic);
	return 0;
}
