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
 * \file m2m/config.hpp
 *
 * \brief Flat `key = value` scenario files.
 *
 * One assignment per line, `#` starts a comment, blank lines are ignored.
 * Keys mirror the Scenario and LoadPolicy fields; `mu_ref` is given in dB,
 * everything else in SI units. Unknown keys and malformed numbers raise
 * ConfigError carrying the key.
 *
 * \code
 * mu_ref = -3      # dB
 * w_total = 1e6    # Hz
 * \endcode
 */

#ifndef M2M_CONFIG_HPP
#define M2M_CONFIG_HPP

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "m2m/channel.hpp"
#include "m2m/coordinated.hpp"
#include "m2m/error.hpp"

namespace m2m {

struct RunConfig {
	Scenario scenario;
	// random-access budget
	double p_f = 0.05;
	double eps = 0.01;
	double delta = 0.0;
	// coordinated load policy
	double delta1 = 0.0;
	double eps1 = 0.01;
	double delta_total = 0.01;

	LoadPolicy policy() const { return LoadPolicy::make(delta1, eps1, delta_total); }

	/// Throws ConfigError naming the first offending key.
	void validate() const
	{
		scenario.validate();
		const auto prob = [](const char* key, double v) {
			if (!(v >= 0.0 && v <= 1.0))
				throw ConfigError(key, "must lie in [0, 1]");
		};
		prob("p_f", p_f);
		prob("eps", eps);
		prob("delta", delta);
		prob("delta1", delta1);
		prob("eps1", eps1);
		prob("delta_total", delta_total);
		if (!(delta1 < 1.0))
			throw ConfigError("delta1", "must be below 1");
		if (eps1 + delta1 * (1.0 - eps1) > delta_total * (1.0 + 1e-12))
			throw ConfigError("delta_total", "must be at least eps1 + delta1 (1 - eps1)");
	}
};

namespace detail {

inline std::string_view trim(std::string_view s) noexcept
{
	const auto b = s.find_first_not_of(" \t\r");
	if (b == std::string_view::npos)
		return {};
	const auto e = s.find_last_not_of(" \t\r");
	return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view key, std::string_view text)
{
	double v = 0.0;
	const char* first = text.data();
	const char* last = first + text.size();
	if (!text.empty() && *first == '+')
		++first;
	const auto [ptr, ec] = std::from_chars(first, last, v);
	if (ec != std::errc{} || ptr != last || !std::isfinite(v))
		throw ConfigError(std::string(key), "not a finite number: '" + std::string(text) + "'");
	return v;
}

} // namespace detail

/// Applies one `key = value` assignment.
inline void set_config_value(RunConfig& c, std::string_view key, std::string_view value)
{
	key = detail::trim(key);
	value = detail::trim(value);
	Scenario& s = c.scenario;
	if (key == "fading") {
		if (value != "none")
			throw ConfigError("fading", "only 'none' can be configured from a file");
		s.fading = Fading::none;
		return;
	}
	const double v = detail::parse_number(key, value);
	if (key == "p_max") s.p_max = v;
	else if (key == "r_inner") s.r_inner = v;
	else if (key == "r_outer") s.r_outer = v;
	else if (key == "gamma") s.gamma = v;
	else if (key == "mu_ref") s.mu_ref = db_to_linear(v);
	else if (key == "w_total") s.w_total = v;
	else if (key == "tau_slot") s.tau_slot = v;
	else if (key == "payload_bits") s.payload_bits = v;
	else if (key == "lambda_rate") s.lambda_rate = v;
	else if (key == "p_f") c.p_f = v;
	else if (key == "eps") c.eps = v;
	else if (key == "delta") c.delta = v;
	else if (key == "delta1") c.delta1 = v;
	else if (key == "eps1") c.eps1 = v;
	else if (key == "delta_total") c.delta_total = v;
	else throw ConfigError(std::string(key), "unknown key");
}

/// Applies an override of the form `key=value`.
inline void apply_override(RunConfig& c, std::string_view assignment)
{
	const auto eq = assignment.find('=');
	if (eq == std::string_view::npos)
		throw ConfigError(std::string(detail::trim(assignment)), "override must look like key=value");
	set_config_value(c, assignment.substr(0, eq), assignment.substr(eq + 1));
}

/// Reads assignments on top of `base` (defaults when omitted). Does not validate.
inline RunConfig parse_config(std::istream& in, RunConfig base = {})
{
	std::string line;
	int lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		std::string_view v(line);
		if (const auto hash = v.find('#'); hash != std::string_view::npos)
			v = v.substr(0, hash);
		v = detail::trim(v);
		if (v.empty())
			continue;
		const auto eq = v.find('=');
		if (eq == std::string_view::npos)
			throw ConfigError(std::string(v), "line " + std::to_string(lineno) + ": expected key = value");
		set_config_value(base, v.substr(0, eq), v.substr(eq + 1));
	}
	return base;
}

inline RunConfig parse_config_string(std::string_view text, RunConfig base = {})
{
	std::istringstream in{std::string(text)};
	return parse_config(in, base);
}

inline RunConfig load_config(const std::string& path, RunConfig base = {})
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError("config", "cannot open '" + path + "'");
	return parse_config(in, base);
}

} // namespace m2m

#endif // M2M_CONFIG_HPP
