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

/**
 * \file m2m/csv.hpp
 *
 * \brief CSV rows for designs, schedules, sweeps and load searches.
 *
 * Reals are written in shortest round-trip form, so output bytes depend
 * only on the values.
 */

#ifndef M2M_CSV_HPP
#define M2M_CSV_HPP

#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "m2m/channel.hpp"
#include "m2m/coordinated.hpp"
#include "m2m/montecarlo.hpp"
#include "m2m/uncoordinated.hpp"

namespace m2m::csv {

inline std::string num(double v)
{
	char buf[64];
	const auto r = std::to_chars(buf, buf + sizeof buf, v);
	return std::string(buf, r.ptr);
}

inline std::string num(std::int64_t v) { return std::to_string(v); }
inline std::string num(std::uint64_t v) { return std::to_string(v); }

inline constexpr std::string_view design_header =
	"kind,lambda,n_bar,code_len_or_channels,target_sinr_db,p_coll,eps,delta,lambda_max";

/// One design row; lambda_max is left empty when no load search ran.
inline void write_design(std::ostream& os, const CdmaDesign& d, double lambda, std::optional<double> lambda_max = {})
{
	os << "cdma," << num(lambda) << ',' << num(d.n_bar) << ',' << d.code_len << ','
	   << num(linear_to_db(d.target_sinr)) << ',' << num(d.p_coll) << ',' << num(d.eps) << ',' << num(d.delta_out)
	   << ',' << (lambda_max ? num(*lambda_max) : std::string()) << '\n';
}

inline void write_design(std::ostream& os, const FdmaRaDesign& d, const Scenario& s, double lambda,
			 std::optional<double> lambda_max = {})
{
	os << "fdma," << num(lambda) << ',' << num(d.n_bar) << ',' << num(d.num_channels) << ','
	   << num(linear_to_db(fdma_ra_target_snr(d.num_channels, s))) << ',' << num(d.p_coll) << ',' << num(d.eps)
	   << ',' << num(d.delta_out) << ',' << (lambda_max ? num(*lambda_max) : std::string()) << '\n';
}

inline constexpr std::string_view schedule_header =
	"strategy,K,total_power_w,total_power_dbm,energy_per_bit_j,dropped_count";

inline void write_schedule(std::ostream& os, std::string_view strategy, std::size_t k, const ScheduleResult& r)
{
	os << strategy << ',' << k << ',' << num(r.total_power) << ',' << num(watts_to_dbm(r.total_power)) << ','
	   << num(r.energy_per_bit) << ',' << r.dropped.size() << '\n';
}

inline constexpr std::string_view sweep_header =
	"strategy,lambda,trials,seed,mean_power_w,p95_power_w,mean_eb_j,p95_eb_j,outage_frac";

inline void write_sweep(std::ostream& os, const SweepResult& r)
{
	os << to_string(r.strategy) << ',' << num(r.lambda) << ',' << r.trials << ',' << r.seed << ','
	   << num(r.mean_power_w) << ',' << num(r.p95_power_w) << ',' << num(r.mean_eb_j) << ',' << num(r.p95_eb_j)
	   << ',' << num(r.outage_frac) << '\n';
}

inline void write_sweep(std::ostream& os, std::span<const SweepResult> rows)
{
	os << sweep_header << '\n';
	for (const auto& r : rows)
		write_sweep(os, r);
}

inline constexpr std::string_view coordinated_load_header =
	"kind,lambda_max,lambda_slln,k_slln,delta1,eps1,trials,seed";

inline void write_coordinated_load(std::ostream& os, const CoordinatedMaxLoad& r, const LoadPolicy& p)
{
	os << to_string(r.kind) << ',' << num(r.lambda_max) << ',' << num(r.lambda_slln) << ',' << num(r.k_slln) << ','
	   << num(p.delta1) << ',' << num(p.eps1) << ',' << r.trials << ',' << r.seed << '\n';
}

inline constexpr std::string_view bounds_header = "K,tdma_power_ratio_bound,energy_ratio_bound,seed";

inline void write_bounds(std::ostream& os, std::size_t k, double power_bound, double energy_bound, std::uint64_t seed)
{
	os << k << ',' << num(power_bound) << ',' << num(energy_bound) << ',' << seed << '\n';
}

} // namespace m2m::csv

#endif // M2M_CSV_HPP
