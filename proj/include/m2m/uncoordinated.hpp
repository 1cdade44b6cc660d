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
 * \file m2m/uncoordinated.hpp
 *
 * \brief One-stage random access: devices send payload and identity in the
 * access slot without a grant.
 *
 * The system is dimensioned for the (1 - eps) percentile n_bar of Poisson
 * arrivals. CDMA devices pick one of 2^N_c - 1 spreading codes at random and
 * power-control to a common target SINR; FDMA devices pick one of N_f
 * orthogonal sub-bands. A device fails when the arrivals overflow n_bar, when
 * its code/channel collides, or when the power it needs exceeds p_max.
 */

#ifndef M2M_UNCOORDINATED_HPP
#define M2M_UNCOORDINATED_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "m2m/channel.hpp"
#include "m2m/error.hpp"
#include "m2m/poisson.hpp"

namespace m2m {

enum class AccessKind { cdma, fdma };

inline std::string_view to_string(AccessKind k) noexcept { return k == AccessKind::cdma ? "cdma" : "fdma"; }

struct CdmaDesign {
	std::int64_t n_bar = 1;
	int code_len = 1;
	std::int64_t num_codes = 1;
	double target_sinr = 0.0; // linear
	double eps = 0.0;
	double p_coll = 0.0;
	double delta_out = 0.0;
};

struct FdmaRaDesign {
	std::int64_t n_bar = 1;
	std::int64_t num_channels = 1;
	double p_coll = 0.0;
	double eps = 0.0;
	double delta_out = 0.0;
};

namespace detail {

inline void check_probability(double p, const char* what)
{
	if (!(p >= 0.0 && p <= 1.0))
		throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
}

// 1 / (1 - (1 - p_coll)^(1 / (n_bar - 1))): the resource count at which the
// per-device collision probability equals p_coll.
inline double resources_for_collision(std::int64_t n_bar, double p_coll)
{
	return 1.0 / -std::expm1(std::log1p(-p_coll) / static_cast<double>(n_bar - 1));
}

} // namespace detail

/// Probability that a given device shares its code (or channel) with one of the other n_bar - 1.
inline double collision_probability(std::int64_t m, std::int64_t n_bar)
{
	if (m < 1 || n_bar < 1)
		throw InvalidArgument("collision_probability needs m >= 1 and n_bar >= 1");
	if (n_bar == 1)
		return 0.0;
	if (m == 1)
		return 1.0;
	return -std::expm1(static_cast<double>(n_bar - 1) * std::log1p(-1.0 / static_cast<double>(m)));
}

/// Shortest spreading-code length whose 2^N_c - 1 codes keep the collision
/// probability within p_coll. p_coll = 1 is vacuous and gives 1.
inline int cdma_code_length(std::int64_t n_bar, double p_coll)
{
	if (n_bar < 1)
		throw InvalidArgument("n_bar must be positive");
	if (!(p_coll > 0.0 && p_coll <= 1.0))
		throw InvalidArgument("p_coll must lie in (0, 1]");
	if (n_bar == 1 || p_coll == 1.0)
		return 1;

	const double need = detail::resources_for_collision(n_bar, p_coll);
	int len = std::max(1, static_cast<int>(std::ceil(std::log2(1.0 + need))));
	const auto codes = [](int l) { return (std::int64_t{1} << l) - 1; };
	// absorb rounding in the closed form: settle on the minimal length
	while (len > 1 && collision_probability(codes(len - 1), n_bar) <= p_coll)
		--len;
	while (collision_probability(codes(len), n_bar) > p_coll) {
		if (len >= 62)
			throw Infeasible("cdma_code_length: code space exhausted");
		++len;
	}
	return len;
}

/// Low-collision approximation ceil(log2(1 + (n_bar - 1) / p_coll)).
inline int cdma_code_length_approx(std::int64_t n_bar, double p_coll)
{
	if (!(p_coll > 0.0 && p_coll < 1.0))
		throw InvalidArgument("p_coll must lie in (0, 1)");
	if (n_bar <= 1)
		return 1;
	return std::max(1, static_cast<int>(std::ceil(std::log2(1.0 + static_cast<double>(n_bar - 1) / p_coll))));
}

/// Target SINR 2^(L N_c / (W tau_s)) - 1 that lets a code of length N_c carry the payload in one slot.
inline double cdma_target_sinr(int code_len, const Scenario& s)
{
	return std::expm1(std::numbers::ln2 * s.spectral_load() * code_len);
}

/// Minimum number of orthogonal channels keeping the collision probability
/// within p_coll. p_coll = 1 is vacuous and gives 1.
inline std::int64_t fdma_channel_count(std::int64_t n_bar, double p_coll)
{
	if (n_bar < 1)
		throw InvalidArgument("n_bar must be positive");
	if (!(p_coll > 0.0 && p_coll <= 1.0))
		throw InvalidArgument("p_coll must lie in (0, 1]");
	if (n_bar == 1 || p_coll == 1.0)
		return 1;
	auto n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(detail::resources_for_collision(n_bar, p_coll))));
	while (n > 1 && collision_probability(n - 1, n_bar) <= p_coll)
		--n;
	while (collision_probability(n, n_bar) > p_coll)
		++n;
	return n;
}

/// Upper bound on the failure probability: eps + (1 - eps)(delta + p_coll (1 - delta)); exact for delta = 0.
inline double cdma_failure_probability(double eps, double p_coll, double delta)
{
	detail::check_probability(eps, "eps");
	detail::check_probability(p_coll, "p_coll");
	detail::check_probability(delta, "delta");
	return eps + (1.0 - eps) * (delta + p_coll * (1.0 - delta));
}

/// Collision budget left by a failure target once eps and delta are spent
/// (the failure bound solved for p_coll).
inline double collision_budget(double p_f, double eps, double delta)
{
	detail::check_probability(p_f, "p_f");
	detail::check_probability(eps, "eps");
	detail::check_probability(delta, "delta");
	if (p_f <= eps)
		throw Infeasible("P_f <= eps: no failure budget");
	if (delta >= 1.0)
		throw Infeasible("delta = 1: every device in outage");
	const double pc = (p_f - eps - (1.0 - eps) * delta) / ((1.0 - eps) * (1.0 - delta));
	if (!(pc > 0.0))
		throw Infeasible("P_f <= eps + (1 - eps) delta: no collision budget");
	return std::min(pc, std::nextafter(1.0, 0.0));
}

inline CdmaDesign design_cdma(const Scenario& s, double lambda, double eps, double p_coll, double delta)
{
	CdmaDesign d;
	d.n_bar = std::max<std::int64_t>(1, poisson_quantile(lambda * s.tau_slot, eps));
	d.code_len = cdma_code_length(d.n_bar, p_coll);
	d.num_codes = (std::int64_t{1} << d.code_len) - 1;
	d.target_sinr = cdma_target_sinr(d.code_len, s);
	d.eps = eps;
	d.p_coll = p_coll;
	d.delta_out = delta;
	return d;
}

inline FdmaRaDesign design_fdma_ra(const Scenario& s, double lambda, double eps, double p_coll, double delta)
{
	FdmaRaDesign d;
	d.n_bar = std::max<std::int64_t>(1, poisson_quantile(lambda * s.tau_slot, eps));
	d.num_channels = fdma_channel_count(d.n_bar, p_coll);
	d.p_coll = p_coll;
	d.eps = eps;
	d.delta_out = delta;
	return d;
}

struct TransmitPower {
	double required = 0.0;       ///< W, power that meets the target
	double energy_per_bit = 0.0; ///< J/bit at the required power
	bool in_outage = false;      ///< required > p_max

	/// Devices in outage transmit at p_max.
	double radiated(double p_max) const noexcept { return in_outage ? p_max : required; }
};

/**
 * Power that lands a CDMA device at the target SINR when the other
 * n_bar - 1 devices are received at the same SNR: the SINR of
 * N_c / ((n_bar - 1) + 1 / snr) equals the target at
 * snr = 1 / (N_c / target - (n_bar - 1)).
 */
inline TransmitPower cdma_transmit_power(double gain, const CdmaDesign& d, const Scenario& s)
{
	if (!(gain > 0.0))
		throw InvalidArgument("gain must be positive");
	const double headroom = d.code_len / d.target_sinr - static_cast<double>(d.n_bar - 1);
	if (!(headroom > 0.0))
		throw InterferenceLimited("N_c / target_sinr <= n_bar - 1: target SINR unreachable");
	TransmitPower tp;
	tp.required = s.p_max / (s.mu_ref * gain * headroom);
	tp.energy_per_bit = s.tau_slot / s.payload_bits * tp.required;
	tp.in_outage = tp.required > s.p_max;
	return tp;
}

/// Power to carry the payload over one of N_f equal sub-bands for a whole slot.
inline double fdma_ra_transmit_power(double gain, std::int64_t num_channels, const Scenario& s)
{
	if (!(gain > 0.0))
		throw InvalidArgument("gain must be positive");
	if (num_channels < 1)
		throw InvalidArgument("num_channels must be positive");
	const double nf = static_cast<double>(num_channels);
	return s.p_max * std::expm1(std::numbers::ln2 * s.spectral_load() * nf) / (s.mu_ref * gain * nf);
}

/// Per-channel SNR target of an FDMA random-access design.
inline double fdma_ra_target_snr(std::int64_t num_channels, const Scenario& s)
{
	return std::expm1(std::numbers::ln2 * s.spectral_load() * static_cast<double>(num_channels));
}

struct RaLoadOptions {
	double lambda_lo = 1.0;
	double lambda_hi = 1.0e6;
	int iterations = 40;
};

struct RaMaxLoad {
	AccessKind kind = AccessKind::cdma;
	double lambda_max = 0.0;
	double p_f = 0.0;
	double eps = 0.0;
	double delta = 0.0;
	double p_coll = 0.0;
	std::int64_t n_bar = 0;
	std::int64_t resources = 0; ///< N_c for CDMA, N_f for FDMA
	double target_sinr = 0.0;   ///< linear
};

/// Fraction of `gains` whose required power exceeds p_max under the design at `lambda`.
inline double ra_outage_fraction(AccessKind kind, const Scenario& s, std::span<const double> gains, double lambda,
				 double eps, double p_coll, double delta)
{
	std::size_t out = 0;
	if (kind == AccessKind::cdma) {
		const CdmaDesign d = design_cdma(s, lambda, eps, p_coll, delta);
		const double headroom = d.code_len / d.target_sinr - static_cast<double>(d.n_bar - 1);
		if (!(headroom > 0.0))
			return 1.0;
		for (double g : gains)
			out += cdma_transmit_power(g, d, s).in_outage ? 1 : 0;
	} else {
		const FdmaRaDesign d = design_fdma_ra(s, lambda, eps, p_coll, delta);
		for (double g : gains)
			out += fdma_ra_transmit_power(g, d.num_channels, s) > s.p_max ? 1 : 0;
	}
	return gains.empty() ? 0.0 : static_cast<double>(out) / static_cast<double>(gains.size());
}

/**
 * Largest arrival rate whose design meets the failure target p_f.
 *
 * The collision budget follows from (p_f, eps, delta); at each candidate
 * lambda the code length or channel count is sized for the (1 - eps)
 * percentile and the outage P[p_t > p_max] is estimated over `draws` device
 * gains sampled once with `seed`. Bisection over [lambda_lo, lambda_hi]
 * keeps the last feasible point, so ties go to the lower lambda.
 * Returns lambda_max = 0 when even lambda_lo is infeasible.
 */
inline RaMaxLoad ra_max_load(AccessKind kind, const Scenario& s, double p_f, double eps, double delta,
			     std::size_t draws, std::uint64_t seed, RaLoadOptions opts = {})
{
	s.validate();
	if (!(eps > 0.0 && eps < 1.0))
		throw InvalidArgument("eps must lie in (0, 1)");
	const double pc = collision_budget(p_f, eps, delta);
	if (draws == 0)
		throw InvalidArgument("ra_max_load needs at least one gain draw");

	const std::vector<double> gains = gains_of(sample_devices(s, draws, seed));
	const auto feasible = [&](double lambda) {
		return ra_outage_fraction(kind, s, gains, lambda, eps, pc, delta) <= delta;
	};

	RaMaxLoad r;
	r.kind = kind;
	r.p_f = p_f;
	r.eps = eps;
	r.delta = delta;
	r.p_coll = pc;

	double lo = opts.lambda_lo;
	double hi = opts.lambda_hi;
	if (!feasible(lo))
		return r;
	if (feasible(hi)) {
		lo = hi;
	} else {
		for (int it = 0; it < opts.iterations; ++it) {
			const double mid = 0.5 * (lo + hi);
			if (feasible(mid))
				lo = mid;
			else
				hi = mid;
		}
	}

	r.lambda_max = lo;
	if (kind == AccessKind::cdma) {
		const CdmaDesign d = design_cdma(s, lo, eps, pc, delta);
		r.n_bar = d.n_bar;
		r.resources = d.code_len;
		r.target_sinr = d.target_sinr;
	} else {
		const FdmaRaDesign d = design_fdma_ra(s, lo, eps, pc, delta);
		r.n_bar = d.n_bar;
		r.resources = d.num_channels;
		r.target_sinr = fdma_ra_target_snr(d.num_channels, s);
	}
	return r;
}

} // namespace m2m

#endif // M2M_UNCOORDINATED_HPP
