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

#include <anota/annotation.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace anota {

// Shell-style wildcard pattern. '*' matches any run of non-'/' characters,
// '?' one non-'/' character; a trailing '/' makes the pattern a directory
// prefix that matches any path strictly inside it.
class glob_pattern {
public:
	glob_pattern() = default;
	explicit glob_pattern(std::string raw);

	const std::string& raw() const { return m_raw; }
	bool matches(std::string_view path) const;

private:
	enum class token_kind : uint8_t { literal, any_one, any_run };
	struct token {
		token_kind kind;
		char c;
	};

	std::string m_raw;
	std::vector<token> m_tokens;
	bool m_dir_prefix = false;
};

bool match_glob(const glob_pattern& pattern, std::string_view path);

struct policy {
	uint32_t id = 0;
	policy_spec spec;
	std::string text;  // pretty-printed annotation that installed it
	bool enabled = true;
	source_site install_site;
	// compiled spec.option->patterns, same order
	std::vector<glob_pattern> option_globs;
};

// Fixed FILE / NETWORK class membership.
const std::map<std::string, std::set<std::string>>& syscall_class_table();

// Expands class names; an empty selector stays empty (meaning "all").
std::set<std::string> expand_syscalls(const std::set<std::string>& selector);

// True iff the selector (names and/or classes, empty = all) covers the syscall.
bool selector_covers(const std::set<std::string>& selector, std::string_view syscall);

class policy_store {
public:
	policy_store() = default;

	// Appends an enabled policy. spec.domain must not be clear.
	uint32_t install(policy_spec spec, std::string text = {});

	// Disables matching enabled policies; returns how many were disabled.
	size_t clear(const clear_selector& selector);

	const std::vector<policy>& policies() const { return m_policies; }
	const policy* find(uint32_t id) const;
	bool is_enabled(uint32_t id) const;

	// Bumped on every install/clear so monitors can cache derived views.
	uint64_t generation() const { return m_generation; }

	bool has_enabled(policy_domain domain) const;

private:
	std::vector<policy> m_policies;
	uint32_t m_next_id = 1;
	uint64_t m_generation = 0;
};

}  // namespace anota
