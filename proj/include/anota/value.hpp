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
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace anota {

// One bit per taint label slot; see taint_tracker.
using taint_mask = uint64_t;

enum class value_kind : uint8_t { unit, integer, string, boolean, list, map, func, fd, unbound };

const char* to_string(value_kind k);

struct value;
using value_list = std::vector<value>;
using value_map = std::map<std::string, value>;

// Script value. Strings are immutable and shared; lists and maps are shared
// mutable objects (aliases see each other's mutations). Every value carries
// its own taint mask.
struct value {
	value_kind kind = value_kind::unit;
	taint_mask taint = 0;
	int64_t num = 0;  // integer, boolean, fd number, or function index
	std::shared_ptr<void> obj;

	static value unit() { return {}; }
	static value integer(int64_t v, taint_mask t = 0);
	static value boolean(bool v, taint_mask t = 0);
	static value string(std::string s, taint_mask t = 0);
	static value list(value_list items, taint_mask t = 0);
	static value map(value_map items, taint_mask t = 0);
	static value fd(int64_t n, taint_mask t = 0);
	// Negative indices name builtins: -(builtin_id + 1).
	static value func(int64_t index);

	bool is_bound() const { return kind != value_kind::unbound; }
	const std::string& str() const { return *static_cast<const std::string*>(obj.get()); }
	value_list& items() const { return *static_cast<value_list*>(obj.get()); }
	value_map& fields() const { return *static_cast<value_map*>(obj.get()); }

	bool truthy() const;
};

bool values_equal(const value& a, const value& b);

// Python-flavoured rendering used by str() and print().
std::string render(const value& v, bool quote_strings = false);

// Value taint plus the taint of everything reachable through containers.
taint_mask deep_taint(const value& v);

}  // namespace anota
