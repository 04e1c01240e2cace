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

#include <anota/timing.hpp>

#include <cmath>
#include <limits>

namespace anota {

void ttest_state::record(int cls, double cost) {
	auto c = static_cast<size_t>(cls != 0);
	++n[c];
	double delta = cost - mean[c];
	mean[c] += delta / static_cast<double>(n[c]);
	m2[c] += delta * (cost - mean[c]);
}

double ttest_state::variance(int cls) const {
	auto c = static_cast<size_t>(cls != 0);
	return n[c] < 2 ? 0.0 : m2[c] / static_cast<double>(n[c] - 1);
}

double welch_t(const ttest_state& s) {
	if(s.n[0] < 2 || s.n[1] < 2) {
		throw insufficient_samples("welch_t needs at least two samples per class");
	}
	double diff = s.mean[0] - s.mean[1];
	double se2 = s.variance(0) / static_cast<double>(s.n[0]) + s.variance(1) / static_cast<double>(s.n[1]);
	if(se2 == 0.0) {
		if(diff == 0.0) {
			return 0.0;
		}
		return std::copysign(std::numeric_limits<double>::infinity(), diff);
	}
	return diff / std::sqrt(se2);
}

const char* to_string(timing_verdict v) {
	switch(v) {
	case timing_verdict::constant_time: return "ConstantTime";
	case timing_verdict::timing_leak: return "TimingLeak";
	case timing_verdict::inconclusive: return "Inconclusive";
	}
	return "?";
}

timing_verdict verdict(const ttest_state& s, double threshold, uint64_t n_min) {
	double t = 0;
	try {
		t = welch_t(s);
	} catch(const insufficient_samples&) {
		return timing_verdict::inconclusive;
	}
	if(std::fabs(t) > threshold) {
		return timing_verdict::timing_leak;
	}
	if(s.n[0] >= n_min && s.n[1] >= n_min) {
		return timing_verdict::constant_time;
	}
	return timing_verdict::inconclusive;
}

}  // namespace anota
