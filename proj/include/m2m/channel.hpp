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
 * \file m2m/channel.hpp
 *
 * \brief Single-cell uplink link budget.
 *
 * Devices sit uniformly (by area) in an annulus around the base station.
 * A device's composite gain g = shadow * fade * (r / r_outer)^(-gamma) is
 * normalized to 1 at the cell edge, so the received SNR of a device sending
 * with power p over the whole band is (p / p_max) * mu_ref * g. Narrowing
 * the band to w raises the SNR by w_total / w (less noise).
 *
 * All SNRs are linear. Decibels only appear at the CLI/config boundary.
 */

#ifndef M2M_CHANNEL_HPP
#define M2M_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "m2m/error.hpp"
#include "m2m/poisson.hpp"
#include "m2m/random.hpp"

namespace m2m {

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) noexcept { return 10.0 * std::log10(lin); }
inline double watts_to_dbm(double w) noexcept { return 10.0 * std::log10(w) + 30.0; }

enum class Fading { none, custom };

/// Multipliers drawn by a fading hook for one device.
struct FadingDraw {
	double shadow = 1.0;
	double fade = 1.0;
};

/// User-supplied fading/shadowing generator. Receives the device distance and
/// the sampling engine, so draws stay reproducible for a fixed seed.
using FadingHook = std::function<FadingDraw(double distance, Rng& rng)>;

struct Scenario {
	double p_max = 1.0;           // W
	double r_inner = 50.0;        // m
	double r_outer = 1000.0;      // m
	double gamma = 3.0;           // path-loss exponent
	double mu_ref = 0.5011872336272722; // linear, -3 dB
	double w_total = 1.0e6;       // Hz
	double tau_slot = 1.0;        // s
	double payload_bits = 1000.0; // bits
	double lambda_rate = 1000.0;  // arrivals/s
	Fading fading = Fading::none;
	FadingHook fading_hook;

	/// Throws ConfigError naming the first offending field.
	void validate() const
	{
		const auto positive = [](const char* key, double v) {
			if (!(v > 0.0) || !std::isfinite(v))
				throw ConfigError(key, "must be positive and finite");
		};
		positive("p_max", p_max);
		positive("r_inner", r_inner);
		positive("r_outer", r_outer);
		if (!(r_inner < r_outer))
			throw ConfigError("r_inner", "must be smaller than r_outer");
		if (!(gamma >= 2.0) || !std::isfinite(gamma))
			throw ConfigError("gamma", "path-loss exponent must be at least 2");
		positive("mu_ref", mu_ref);
		positive("w_total", w_total);
		positive("tau_slot", tau_slot);
		positive("payload_bits", payload_bits);
		positive("lambda_rate", lambda_rate);
		if (fading == Fading::custom && !fading_hook)
			throw ConfigError("fading", "custom fading requires a hook");
	}

	/// L / (W tau_s): bits per hertz-second the slot must carry per device.
	double spectral_load() const noexcept { return payload_bits / (w_total * tau_slot); }

	/// Required rate L / tau_s in bit/s.
	double required_rate() const noexcept { return payload_bits / tau_slot; }

	/// Mean arrivals per slot, lambda * tau_s.
	double mean_arrivals() const noexcept { return lambda_rate * tau_slot; }
};

struct Device {
	double distance = 0.0;
	double shadow_gain = 1.0;
	double fade_gain = 1.0;
	double gain = 0.0;
};

inline double path_gain(const Scenario& s, double distance) noexcept
{
	return std::pow(distance / s.r_outer, -s.gamma);
}

inline Device make_device(const Scenario& s, double distance, FadingDraw draw = {})
{
	return Device{distance, draw.shadow, draw.fade, draw.shadow * draw.fade * path_gain(s, distance)};
}

/// One area-uniform device on the annulus.
inline Device sample_device(const Scenario& s, Rng& rng)
{
	const double u = uniform01(rng);
	const double ri2 = s.r_inner * s.r_inner;
	const double d = std::sqrt(ri2 + u * (s.r_outer * s.r_outer - ri2));
	FadingDraw draw;
	if (s.fading == Fading::custom)
		draw = s.fading_hook(d, rng);
	return make_device(s, d, draw);
}

inline std::vector<Device> sample_devices(const Scenario& s, std::size_t count, std::uint64_t seed)
{
	Rng rng(seed);
	std::vector<Device> out;
	out.reserve(count);
	for (std::size_t i = 0; i < count; ++i)
		out.push_back(sample_device(s, rng));
	return out;
}

inline std::vector<double> gains_of(const std::vector<Device>& devices)
{
	std::vector<double> g;
	g.reserve(devices.size());
	for (const auto& d : devices)
		g.push_back(d.gain);
	return g;
}

/// Linear received SNR for transmit power p_t over a band of width `band`.
inline double received_snr(double p_t, double gain, const Scenario& s, double band)
{
	if (!(band > 0.0) || band > s.w_total)
		throw InvalidArgument("band must lie in (0, w_total]");
	if (p_t < 0.0)
		throw InvalidArgument("transmit power must be nonnegative");
	return (p_t / s.p_max) * s.mu_ref * (s.w_total / band) * gain;
}

/// Shortest full-band transmission time that carries the payload at p_max.
inline double tau_min(double gain, const Scenario& s)
{
	if (!(gain > 0.0))
		throw InvalidArgument("gain must be positive");
	return s.payload_bits * std::numbers::ln2 / (s.w_total * std::log1p(s.mu_ref * gain));
}

/**
 * Narrowest band that carries the payload within one slot at p_max.
 *
 * Root of f(w) = w log2(1 + mu W g / w) - L / tau_s, which increases in w
 * towards the ceiling mu W g log2(e). Returns nullopt when the ceiling does
 * not exceed L / tau_s: no bandwidth suffices and the device must be dropped.
 * The root is bracketed by halving/doubling and refined by Newton steps that
 * fall back to bisection whenever they leave the bracket. The returned w
 * satisfies f(w) >= 0 and |f(w)| <= 1e-12 L / tau_s.
 */
inline std::optional<double> w_min(double gain, const Scenario& s)
{
	if (!(gain > 0.0))
		throw InvalidArgument("gain must be positive");

	const double rate = s.required_rate();
	const double c = s.mu_ref * s.w_total * gain;
	if (c / std::numbers::ln2 <= rate)
		return std::nullopt;

	const auto f = [&](double w) { return w * std::log1p(c / w) / std::numbers::ln2 - rate; };
	const auto df = [&](double w) {
		const double y = c / w;
		return (std::log1p(y) - y / (1.0 + y)) / std::numbers::ln2;
	};

	double hi = s.w_total;
	double f_hi = f(hi);
	for (int i = 0; f_hi < 0.0; ++i) {
		if (i > 2000 || !std::isfinite(hi))
			throw NonConvergence("w_min: could not bracket root");
		hi *= 2.0;
		f_hi = f(hi);
	}
	double lo = hi;
	double f_lo = f_hi;
	while (f_lo >= 0.0) {
		lo *= 0.5;
		f_lo = f(lo);
	}
	hi = 2.0 * lo;
	f_hi = f(hi);
	// f(lo) < 0 <= f(hi)

	const double tol = 1e-12 * rate;
	double x = hi;
	double fx = f_hi;
	for (int it = 0; it < 200; ++it) {
		if (fx >= 0.0 && fx <= tol)
			return x;
		if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
			return hi;
		double next = x - fx / df(x);
		if (!(next > lo && next < hi))
			next = 0.5 * (lo + hi);
		x = next;
		fx = f(x);
		if (fx < 0.0)
			lo = x;
		else
			hi = x;
	}
	throw NonConvergence("w_min: iteration cap reached");
}

} // namespace m2m

#endif // M2M_CHANNEL_HPP
