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

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace anota {

// Where an annotation (or any checked operation) sits in a program.
struct source_site {
	int line = 0;
	int op = 0;

	bool operator==(const source_site&) const = default;
};

struct annotation_ast;

// One argument slot of an annotation call. Lists hold literals or bare names;
// holes keep the raw source of an argument that is not a plain literal
// (e.g. the condition of EXECUTION.BLOCK).
struct arg_value {
	enum class kind { string, integer, list, name, annotation, hole };

	kind type = kind::string;
	std::string text;  // string payload, identifier, or hole source
	int64_t number = 0;
	std::vector<arg_value> items;
	std::shared_ptr<const annotation_ast> nested;

	static arg_value make_string(std::string s);
	static arg_value make_integer(int64_t v);
	static arg_value make_name(std::string n);
	static arg_value make_hole(std::string src);
	static arg_value make_list(std::vector<arg_value> items);
	static arg_value make_annotation(annotation_ast ast);

	bool operator==(const arg_value& o) const;
};

struct annotation_ast {
	std::vector<std::string> head;
	std::vector<arg_value> args;
	std::vector<std::pair<std::string, arg_value>> kwargs;

	bool operator==(const annotation_ast& o) const = default;
};

// Reserved roots: SYSCALL, TAINT, WATCH, EXECUTION, CLEAR.
bool is_reserved_root(std::string_view segment);

// True iff the first dotted segment is a reserved root. Case-sensitive.
bool is_annotation_head(std::string_view dotted_name);

annotation_ast parse_annotation(std::string_view text);

// Canonical single-line rendering; parse(to_string(a)) == a.
std::string to_string(const annotation_ast& ast);
std::string to_string(const arg_value& v);

enum class policy_domain { syscall, data_flow, object_access, execution, timing_con, clear };
enum class policy_mode { none, allow, block };
enum class option_dim { path, scheme, host, port };

const char* to_string(policy_domain d);
const char* to_string(policy_mode m);
const char* to_string(option_dim d);
std::optional<option_dim> option_dim_from_name(std::string_view upper_name);

struct syscall_option {
	option_dim dim = option_dim::path;
	std::vector<std::string> patterns;

	bool operator==(const syscall_option&) const = default;
};

struct dataflow_spec {
	std::string target;
	std::vector<std::string> sanitizers;
	std::vector<std::string> sinks;

	bool operator==(const dataflow_spec&) const = default;
};

enum access_perm : uint8_t { perm_read = 1, perm_write = 2, perm_exec = 4 };

struct watch_spec {
	std::string target;
	uint8_t perms = 0;  // access_perm mask; 0 for WATCH.CON

	bool operator==(const watch_spec&) const = default;
};

struct policy_spec;

struct clear_selector {
	enum class kind { all, syscalls, structural };

	kind type = kind::all;
	// Syscall names (lower case) and class names (FILE, NETWORK); empty
	// with kind::syscalls means every syscall policy.
	std::set<std::string> syscalls;
	std::shared_ptr<const policy_spec> spec;

	bool operator==(const clear_selector& o) const;
};

struct policy_spec {
	policy_domain domain = policy_domain::syscall;
	policy_mode mode = policy_mode::none;
	// Lower-case syscall names and/or upper-case class names. Empty = all.
	std::set<std::string> syscalls;
	std::optional<syscall_option> option;
	std::optional<dataflow_spec> dataflow;
	std::optional<watch_spec> watch;
	std::optional<std::string> exec_condition;
	std::optional<clear_selector> clear;
	source_site site;

	// Structural equality; ignores site.
	bool same_as(const policy_spec& o) const;
};

policy_spec lower_to_policy(const annotation_ast& ast, source_site site = {});

}  // namespace anota
