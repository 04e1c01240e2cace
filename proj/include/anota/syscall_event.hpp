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

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace anota {

// pid stamped on every event the VM itself emits
constexpr int k_vm_pid = 100;

enum class event_phase { enter, exit };
enum class arg_kind { path, fd, mode, len, scheme, host, port, argv };

const char* to_string(arg_kind k);
std::optional<arg_kind> arg_kind_from_string(std::string_view s);

struct event_arg {
	arg_kind kind = arg_kind::path;
	std::variant<int64_t, std::string> value;

	std::string text() const;
	std::optional<int64_t> number() const;

	bool operator==(const event_arg&) const = default;
};

struct syscall_event {
	uint64_t seq = 0;
	event_phase phase = event_phase::enter;
	std::string name;
	std::vector<event_arg> args;
	std::optional<int64_t> ret;
	int pid = k_vm_pid;
	double ts = 0;

	const event_arg* find(arg_kind k) const;

	bool operator==(const syscall_event&) const = default;
};

// JSONL trace line; field order is part of the format.
nlohmann::ordered_json to_json(const syscall_event& ev);
std::string to_trace_line(const syscall_event& ev);

// Throws std::invalid_argument on schema mismatch.
syscall_event event_from_json(const nlohmann::json& j);

// Lexical resolution of '.', '..' and repeated separators against cwd '/'.
std::string normalize_path(std::string_view path);

struct resource_desc {
	enum class kind { file, socket };

	kind type = kind::file;
	std::string path;
	std::string scheme;
	std::string host;
	std::string port;
	uint64_t opened_at = 0;
	bool closed = false;
	bool created = false;
	// once true, stays true; label is the TAINT policy that made it so
	bool carried_sensitive = false;
	uint32_t sensitive_label = 0;
};

class fd_table {
public:
	// Called at openat/connect exit.
	void open(int64_t fd, resource_desc desc);
	void close(int64_t fd);

	// Live (not closed) entry for fd, or nullptr.
	const resource_desc* lookup(int64_t fd) const;
	resource_desc* lookup(int64_t fd);

	void mark_sensitive(int64_t fd, uint32_t label);

	const std::map<int64_t, resource_desc>& entries() const { return m_entries; }

private:
	std::map<int64_t, resource_desc> m_entries;
};

bool is_fd_based(std::string_view syscall);

// The resource an event touches: path args directly, fd args through the
// table, network args from connect. nullopt when an fd is unknown/closed.
std::optional<resource_desc> resolve_resource(const fd_table& fds, const syscall_event& ev);

}  // namespace anota
