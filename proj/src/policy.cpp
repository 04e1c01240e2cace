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

#include <anota/policy.hpp>
#include <anota/error.hpp>

#include <algorithm>

namespace anota {

glob_pattern::glob_pattern(std::string raw): m_raw(std::move(raw)) {
	std::string_view body = m_raw;
	if(!body.empty() && body.back() == '/') {
		m_dir_prefix = true;
	}
	m_tokens.reserve(body.size());
	for(char c : body) {
		if(c == '*') {
			// consecutive stars are one star
			if(m_tokens.empty() || m_tokens.back().kind != token_kind::any_run) {
				m_tokens.push_back({token_kind::any_run, 0});
			}
		} else if(c == '?') {
			m_tokens.push_back({token_kind::any_one, 0});
		} else {
			m_tokens.push_back({token_kind::literal, c});
		}
	}
}

bool glob_pattern::matches(std::string_view path) const {
	// reach[j]: pattern prefix of length i matches path prefix of length j.
	const size_t n = path.size();
	std::vector<uint8_t> reach(n + 1, 0), next(n + 1, 0);
	reach[0] = 1;
	for(const token& t : m_tokens) {
		std::fill(next.begin(), next.end(), 0);
		switch(t.kind) {
		case token_kind::literal:
			for(size_t j = 0; j < n; ++j) {
				if(reach[j] && path[j] == t.c) {
					next[j + 1] = 1;
				}
			}
			break;
		case token_kind::any_one:
			for(size_t j = 0; j < n; ++j) {
				if(reach[j] && path[j] != '/') {
					next[j + 1] = 1;
				}
			}
			break;
		case token_kind::any_run:
			for(size_t j = 0; j <= n; ++j) {
				if(reach[j] || (j > 0 && next[j - 1] && path[j - 1] != '/')) {
					next[j] = 1;
				}
			}
			break;
		}
		reach.swap(next);
	}
	if(!m_dir_prefix) {
		return reach[n] != 0;
	}
	// strictly inside: the prefix must leave at least one more character
	for(size_t j = 0; j < n; ++j) {
		if(reach[j]) {
			return true;
		}
	}
	return false;
}

bool match_glob(const glob_pattern& pattern, std::string_view path) {
	return pattern.matches(path);
}

const std::map<std::string, std::set<std::string>>& syscall_class_table() {
	static const std::map<std::string, std::set<std::string>> table = {
	        {"FILE",
	         {"openat", "read", "write", "close", "stat", "access", "fchmod", "unlink", "mkdir", "rename"}},
	        {"NETWORK", {"connect", "send", "recv"}},
	};
	return table;
}

std::set<std::string> expand_syscalls(const std::set<std::string>& selector) {
	std::set<std::string> out;
	const auto& table = syscall_class_table();
	for(const auto& s : selector) {
		auto it = table.find(s);
		if(it != table.end()) {
			out.insert(it->second.begin(), it->second.end());
		} else {
			out.insert(s);
		}
	}
	return out;
}

bool selector_covers(const std::set<std::string>& selector, std::string_view syscall) {
	if(selector.empty()) {
		return true;
	}
	const auto& table = syscall_class_table();
	for(const auto& s : selector) {
		if(s == syscall) {
			return true;
		}
		auto it = table.find(s);
		if(it != table.end() && it->second.count(std::string(syscall))) {
			return true;
		}
	}
	return false;
}

uint32_t policy_store::install(policy_spec spec, std::string text) {
	if(spec.domain == policy_domain::clear) {
		throw lowering_error("CLEAR annotations are not installable policies");
	}
	policy p;
	p.id = m_next_id++;
	p.install_site = spec.site;
	p.spec = std::move(spec);
	if(p.spec.option) {
		for(const auto& raw : p.spec.option->patterns) {
			p.option_globs.emplace_back(raw);
		}
	}
	p.text = std::move(text);
	m_policies.push_back(std::move(p));
	++m_generation;
	return m_policies.back().id;
}

namespace {

bool intersects(const std::set<std::string>& policy_selector, const std::set<std::string>& clear_names) {
	// an empty selector on either side is universal
	if(policy_selector.empty() || clear_names.empty()) {
		return true;
	}
	std::set<std::string> a = expand_syscalls(policy_selector);
	std::set<std::string> b = expand_syscalls(clear_names);
	return std::any_of(a.begin(), a.end(), [&](const std::string& s) { return b.count(s) > 0; });
}

}  // namespace

size_t policy_store::clear(const clear_selector& selector) {
	size_t count = 0;
	for(auto& p : m_policies) {
		if(!p.enabled) {
			continue;
		}
		bool hit = false;
		switch(selector.type) {
		case clear_selector::kind::all: hit = true; break;
		case clear_selector::kind::syscalls:
			hit = p.spec.domain == policy_domain::syscall && intersects(p.spec.syscalls, selector.syscalls);
			break;
		case clear_selector::kind::structural: hit = selector.spec && p.spec.same_as(*selector.spec); break;
		}
		if(hit) {
			p.enabled = false;
			++count;
		}
	}
	if(count) {
		++m_generation;
	}
	return count;
}

const policy* policy_store::find(uint32_t id) const {
	if(id == 0 || id > m_policies.size()) {
		return nullptr;
	}
	return &m_policies[id - 1];
}

bool policy_store::is_enabled(uint32_t id) const {
	const policy* p = find(id);
	return p && p->enabled;
}

bool policy_store::has_enabled(policy_domain domain) const {
	return std::any_of(m_policies.begin(), m_policies.end(),
	                   [&](const policy& p) { return p.enabled && p.spec.domain == domain; });
}

}  // namespace anota
