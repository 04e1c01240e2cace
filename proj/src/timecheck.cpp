// SPDX-License-Identifier: Apache-2.0
/*
Copyright (C) 2026 The Anota Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.

*/

#include <anota/harness.hpp>

#include <random>

namespace anota {

timecheck_result timecheck(const program& prog, const std::string& fn, const std::string& fixed, uint64_t n,
                           uint64_t seed, const exec_config& base) {
	exec_config cfg = base;
	cfg.escalation = escalation_mode::collect;
	cfg.timing_targets.insert(fn);
	std::mt19937_64 rng(seed);
	std::uniform_int_distribution<int> byte(0, 255);
	timecheck_result out;
	out.fn = fn;
	auto sample = [&](int cls, const std::string& input) {
		exec_result r = execute(prog, input, cfg);
		if(r.status == exec_status::script_error || r.status == exec_status::timeout) {
			++out.script_errors;
		}
		uint64_t cost = 0;
		bool seen = false;
		for(const auto& s : r.timing) {
			if(s.fn == fn) {
				cost += s.cost;
				seen = true;
			}
		}
		if(seen) {
			out.state.record(cls, static_cast<double>(cost));
		}
	};
	std::string random(fixed.size(), '\0');
	// Classes alternate so both see the same sequence of executions.
	for(uint64_t i = 0; i < n; ++i) {
		sample(0, fixed);
		for(char& c : random) {
			c = static_cast<char>(byte(rng));
		}
		sample(1, random);
	}
	try {
		out.t = welch_t(out.state);
	} catch(const insufficient_samples&) {
		out.t = 0;
	}
	out.verdict = verdict(out.state);
	return out;
}

}  // namespace anota
