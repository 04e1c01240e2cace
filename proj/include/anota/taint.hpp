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

#include <anota/policy.hpp>
#include <anota/value.hpp>

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace anota {

// Maximum number of distinct taint labels in one execution (one mask bit each).
constexpr size_t k_max_taint_labels = 64;

struct taint_label {
	uint32_t policy_id = 0;
	std::string source;  // variable or callable name
	bool callable = false;
	std::set<std::string> sanitizers;
	std::set<std::string> sinks;
};

struct call_check {
	// Labels (as mask bits) that reached a sink of theirs through this call.
	taint_mask sink_hits = 0;
	// Labels the call sanitizes; they are stripped from the return value.
	taint_mask sanitized = 0;
};

// Data flow bookkeeping: label registry plus the per-call sink and sanitizer rules.
class taint_tracker {
public:
	// Registers (or finds) the label of a TAINT policy. Throws script_error
	// when the label space is exhausted.
	taint_mask label_for(uint32_t policy_id, const dataflow_spec& spec, bool callable);

	const std::vector<taint_label>& labels() const { return m_labels; }
	const taint_label& label(size_t bit) const { return m_labels.at(bit); }

	// Labels whose TAINT policy is still enabled. Cached per store generation.
	taint_mask active(const policy_store& store);

	// Active labels that tag every return value of the named callable.
	taint_mask callable_mask(const policy_store& store, std::string_view fn);

	// Sink names a call resolves to; log is sugar for write.
	static std::vector<std::string_view> sink_names(std::string_view fn);

	call_check check_call(const policy_store& store, std::string_view fn, const std::vector<value>& args);

	// Policy id of the lowest set bit in mask, 0 if none.
	uint32_t first_policy(taint_mask mask) const;

private:
	std::vector<taint_label> m_labels;
	taint_mask m_callable_bits = 0;
	taint_mask m_active = 0;
	uint64_t m_generation = ~uint64_t{0};
};

}  // namespace anota
