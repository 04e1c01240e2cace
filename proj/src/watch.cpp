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

#include <anota/watch.hpp>

#include <algorithm>

namespace anota {

const char* to_string(access_kind k) {
	switch(k) {
	case access_kind::read: return "read";
	case access_kind::write: return "write";
	case access_kind::execute: return "execute";
	}
	return "?";
}

void watch_list::add(watch_entry entry) {
	m_entries.push_back(std::move(entry));
}

bool watch_list::watches(const std::string& name) const {
	return std::any_of(m_entries.begin(), m_entries.end(), [&](const watch_entry& e) { return e.target == name; });
}

access_decision watch_list::on_access(const policy_store& store, const std::string& name, access_kind kind,
                                      uint64_t scope) const {
	auto bit = static_cast<uint8_t>(kind);
	uint8_t allowed = 0;
	uint32_t first_allow = 0;
	for(const auto& e : m_entries) {
		if(e.target != name || e.scope != scope || e.mode != policy_mode::block || !store.is_enabled(e.policy_id)) {
			continue;
		}
		if(e.perms & bit) {
			return {true, e.policy_id, std::string(to_string(kind)) + " of '" + name + "' is blocked"};
		}
	}
	for(const auto& e : m_entries) {
		if(e.target != name || e.scope != scope || e.mode != policy_mode::allow || !store.is_enabled(e.policy_id)) {
			continue;
		}
		if(!first_allow) {
			first_allow = e.policy_id;
		}
		allowed |= e.perms;
	}
	if(first_allow && !(allowed & bit)) {
		return {true, first_allow, std::string(to_string(kind)) + " of '" + name + "' is not allowed"};
	}
	return {};
}

bool execution_blocked(const std::optional<bool>& condition) {
	return !condition || *condition;
}

}  // namespace anota
