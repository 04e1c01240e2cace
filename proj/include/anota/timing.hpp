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

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace anota {

constexpr double k_t_threshold = 4.5;
constexpr uint64_t k_min_samples = 1000;

class insufficient_samples : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Streaming two-class statistics (Welford).
struct ttest_state {
	std::array<uint64_t, 2> n{};
	std::array<double, 2> mean{};
	std::array<double, 2> m2{};

	void record(int cls, double cost);
	// Sample variance (n - 1 denominator); 0 below two samples.
	double variance(int cls) const;
};

// Welch t = (m0 - m1) / sqrt(s0^2/n0 + s1^2/n1). With both variances zero the
// result is 0 for equal means and an infinity signed like m0 - m1 otherwise.
// Throws insufficient_samples when either class has fewer than two samples.
double welch_t(const ttest_state& s);

enum class timing_verdict { constant_time, timing_leak, inconclusive };

const char* to_string(timing_verdict v);

timing_verdict verdict(const ttest_state& s, double threshold = k_t_threshold, uint64_t n_min = k_min_samples);

}  // namespace anota
