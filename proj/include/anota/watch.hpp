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

#include <optional>
#include <string>
#include <vector>

namespace anota {

enum class access_kind : uint8_t { read = perm_read, write = perm_write, execute = perm_exec };

const char* to_string(access_kind k);

// Scope 0 is the global frame; any other value is a frame id.
struct watch_entry {
	uint32_t policy_id = 0;
	std::string target;
	uint64_t scope = 0;
	policy_mode mode = policy_mode::allow;
	uint8_t perms = 0;
};

struct access_decision {
	bool violation = false;
	uint32_t policy_id = 0;
	std::string reason;
};

// Object access watch list. Entries of cleared policies are ignored.
class watch_list {
public:
	void add(watch_entry entry);
	bool empty() const { return m_entries.empty(); }
	const std::vector<watch_entry>& entries() const { return m_entries; }

	// Cheap pre-filter for the interpreter loop.
	bool watches(const std::string& name) const;

	access_decision on_access(const policy_store& store, const std::string& name, access_kind kind,
	                          uint64_t scope) const;

private:
	std::vector<watch_entry> m_entries;
};

// Flipped assertion: a truthy (or absent) condition is a violation.
bool execution_blocked(const std::optional<bool>& condition);

}  // namespace anota
