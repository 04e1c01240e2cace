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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace anota {

enum class opcode : uint8_t {
	push_const,       // a: constant index
	push_unit,
	load_var,         // a: name
	store_var,        // a: name
	load_index,       // [container, index] -> element
	store_index_var,  // a: name; [index, value] -> name[index] = value
	load_attr,        // a: name of the field
	binop,            // a: binary_op
	unop,             // a: unary_op
	make_list,        // a: element count
	make_map,         // a: pair count, stack holds key, value, key, value...
	jump,             // a: target
	jump_if_false,    // a: target; pops condition
	jump_if_false_keep,  // a: target; keeps condition when jumping (and)
	jump_if_true_keep,   // a: target; keeps condition when jumping (or)
	call,             // a: callee name, b: argc, c: annotation site or -1
	call_method,      // a: receiver name, b: argc, c: method
	ret,
	pop,
};

const char* to_string(opcode op);

enum class binary_op : uint8_t { add, sub, mul, div, mod, eq, ne, lt, gt, le, ge, in, not_in };
enum class unary_op : uint8_t { neg, logical_not };
enum class list_method : uint8_t { append, pop, remove };

struct instr {
	opcode op = opcode::push_unit;
	int32_t a = 0;
	int32_t b = 0;
	int32_t c = 0;

	bool operator==(const instr&) const = default;
};

struct constant {
	enum class kind : uint8_t { integer, string, boolean };
	kind type = kind::integer;
	int64_t num = 0;
	std::string text;

	bool operator==(const constant&) const = default;
};

struct function_info {
	std::string name;
	int32_t name_index = 0;
	std::vector<int32_t> params;  // name indices
	int32_t entry = 0;
	int line = 0;
};

// An annotation call site: its source text and the parse of that text.
struct annotation_site {
	std::string text;
	annotation_ast ast;
	int line = 0;
};

struct program {
	std::vector<constant> constants;
	std::vector<std::string> names;
	std::vector<function_info> functions;
	std::vector<annotation_site> annotations;
	std::vector<instr> code;
	std::vector<int> lines;  // source line per instruction
	int32_t main_end = 0;    // main code is [0, main_end); functions follow

	std::optional<int32_t> find_function(std::string_view name) const;
	std::optional<int32_t> find_name(std::string_view name) const;

	// Stable byte encoding, for determinism checks.
	std::string serialize() const;
	std::string disassemble() const;
};

// Thrown as syntax_error (with line) or undefined_name_error.
program compile(std::string_view source);

struct builtin_info {
	const char* name;
	int min_args;
	int max_args;
	// pseudo-syscall the builtin emits, or nullptr for pure builtins
	const char* syscall;
};

const std::vector<builtin_info>& builtin_table();
std::optional<int> find_builtin(std::string_view name);

}  // namespace anota
