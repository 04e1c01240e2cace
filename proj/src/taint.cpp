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

#include <anota/error.hpp>
#include <anota/taint.hpp>

#include <bit>

namespace anota {

taint_mask taint_tracker::label_for(uint32_t policy_id, const dataflow_spec& spec, bool callable) {
	for(size_t i = 0; i < m_labels.size(); ++i) {
		if(m_labels[i].policy_id == policy_id) {
			return taint_mask{1} << i;
		}
	}
	if(m_labels.size() >= k_max_taint_labels) {
		throw script_error("too many taint labels (limit " + std::to_string(k_max_taint_labels) + ")");
	}
	taint_label l;
	l.policy_id = policy_id;
	l.source = spec.target;
	l.callable = callable;
	l.sanitizers.insert(spec.sanitizers.begin(), spec.sanitizers.end());
	l.sinks.insert(spec.sinks.begin(), spec.sinks.end());
	m_labels.push_back(std::move(l));
	taint_mask bit = taint_mask{1} << (m_labels.size() - 1);
	if(callable) {
		m_callable_bits |= bit;
	}
	m_generation = ~uint64_t{0};
	return bit;
}

taint_mask taint_tracker::active(const policy_store& store) {
	if(m_generation == store.generation()) {
		return m_active;
	}
	m_active = 0;
	for(size_t i = 0; i < m_labels.size(); ++i) {
		if(store.is_enabled(m_labels[i].policy_id)) {
			m_active |= taint_mask{1} << i;
		}
	}
	m_generation = store.generation();
	return m_active;
}

taint_mask taint_tracker::callable_mask(const policy_store& store, std::string_view fn) {
	taint_mask candidates = m_callable_bits & active(store);
	taint_mask out = 0;
	while(candidates) {
		int bit = std::countr_zero(candidates);
		candidates &= candidates - 1;
		if(m_labels[bit].source == fn) {
			out |= taint_mask{1} << bit;
		}
	}
	return out;
}

std::vector<std::string_view> taint_tracker::sink_names(std::string_view fn) {
	if(fn == "log") {
		return {"log", "write"};
	}
	return {fn};
}

call_check taint_tracker::check_call(const policy_store& store, std::string_view fn,
                                     const std::vector<value>& args) {
	call_check out;
	taint_mask live = active(store);
	if(!live) {
		return out;
	}
	taint_mask reaching = 0;
	for(const value& a : args) {
		reaching |= deep_taint(a);
	}
	reaching &= live;
	auto names = sink_names(fn);
	while(reaching) {
		int bit = std::countr_zero(reaching);
		reaching &= reaching - 1;
		const taint_label& l = m_labels[bit];
		bool sink = false;
		for(auto n : names) {
			if(l.sinks.count(std::string(n))) {
				sink = true;
			}
		}
		if(sink) {
			out.sink_hits |= taint_mask{1} << bit;
		} else if(l.sanitizers.count(std::string(fn))) {
			out.sanitized |= taint_mask{1} << bit;
		}
	}
	return out;
}

uint32_t taint_tracker::first_policy(taint_mask mask) const {
	if(!mask) {
		return 0;
	}
	size_t bit = static_cast<size_t>(std::countr_zero(mask));
	return bit < m_labels.size() ? m_labels[bit].policy_id : 0;
}

}  // namespace anota
