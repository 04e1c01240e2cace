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
#include <anota/syscall_event.hpp>
#include <anota/violation.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace anota {

// The argument dimensions an event exposes once its resource is resolved.
struct event_context {
	std::string name;
	std::optional<std::string> path;
	std::optional<std::string> scheme;
	std::optional<std::string> host;
	std::optional<std::string> port;

	const std::optional<std::string>& value(option_dim d) const;
};

event_context make_context(const syscall_event& ev, const std::optional<resource_desc>& resource);

struct syscall_decision {
	bool violation = false;
	uint32_t policy_id = 0;
	std::string reason;
};

// Deny-overrides: any matching enabled Block wins. Otherwise every Allow
// group (syscall, dimension) that is active for this event must contain a
// matching Allow.
syscall_decision decide(const policy_store& store, const event_context& ctx);

// Check-then-use and create-write-chmod patterns on sensitive files, per pid.
class toctou_detector {
public:
	struct finding {
		char pattern;  // 'A' or 'B'
		std::string path;
		uint32_t label;
	};

	std::optional<finding> observe(const syscall_event& ev, const fd_table& fds,
	                               const std::optional<resource_desc>& resource);

private:
	std::map<std::string, uint64_t> m_checked;
	std::set<std::string> m_used_after_check;
	std::map<int64_t, std::string> m_created;
	std::set<int64_t> m_created_written;
	std::set<std::string> m_chmod_after_write;
	std::map<std::string, uint32_t> m_sensitive_paths;
	std::set<std::pair<std::string, char>> m_reported;

	uint32_t sensitivity(const std::string& path, const fd_table& fds) const;
};

// Violation fields known to the monitor; callers add site, text, digest.
struct monitor_finding {
	violation_kind kind = violation_kind::syscall;
	uint32_t policy_id = 0;
	uint64_t seq = 0;
	std::string message;
	nlohmann::ordered_json event;
};

class syscall_monitor {
public:
	explicit syscall_monitor(const policy_store& store): m_store(store) {}

	// Feed one event. Policy decisions happen at enter; fd bookkeeping at exit.
	std::vector<monitor_finding> observe(const syscall_event& ev);

	fd_table& fds(int pid) { return m_pids[pid].fds; }
	const std::vector<std::string>& diagnostics() const { return m_diagnostics; }

private:
	struct pid_state {
		fd_table fds;
		toctou_detector toctou;
		std::map<uint64_t, syscall_event> pending_enter;
	};

	const policy_store& m_store;
	std::map<int, pid_state> m_pids;
	std::vector<std::string> m_diagnostics;
};

}  // namespace anota
