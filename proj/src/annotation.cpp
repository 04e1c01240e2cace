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

#include <anota/annotation.hpp>
#include <anota/error.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace anota {

namespace {

constexpr std::string_view k_roots[] = {"SYSCALL", "TAINT", "WATCH", "EXECUTION", "CLEAR"};

bool is_ident_start(char c) {
	return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
	return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class annotation_reader {
public:
	explicit annotation_reader(std::string_view text): m_text(text) {}

	annotation_ast read_all() {
		annotation_ast ast = read_annotation();
		skip_ws();
		if(!at_end()) {
			fail("unexpected trailing input");
		}
		return ast;
	}

private:
	std::string_view m_text;
	size_t m_pos = 0;

	[[noreturn]] void fail(const std::string& what) const {
		throw syntax_error(what + " at offset " + std::to_string(m_pos));
	}

	bool at_end() const { return m_pos >= m_text.size(); }
	char peek() const { return at_end() ? '\0' : m_text[m_pos]; }

	void skip_ws() {
		while(!at_end() && std::isspace(static_cast<unsigned char>(m_text[m_pos]))) {
			++m_pos;
		}
	}

	void expect(char c) {
		skip_ws();
		if(peek() != c) {
			fail(std::string("expected '") + c + "'");
		}
		++m_pos;
	}

	std::string read_name() {
		skip_ws();
		if(!is_ident_start(peek())) {
			fail("expected identifier");
		}
		size_t start = m_pos;
		while(!at_end() && is_ident_char(m_text[m_pos])) {
			++m_pos;
		}
		return std::string(m_text.substr(start, m_pos - start));
	}

	// Position of the next non-blank character, without consuming.
	char peek_after_ws() const {
		size_t p = m_pos;
		while(p < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[p]))) {
			++p;
		}
		return p < m_text.size() ? m_text[p] : '\0';
	}

	annotation_ast read_annotation() {
		annotation_ast ast;
		std::string root = read_name();
		if(!is_reserved_root(root)) {
			throw unknown_head_error("unknown annotation root '" + root + "'");
		}
		ast.head.push_back(std::move(root));
		while(peek_after_ws() == '.') {
			skip_ws();
			++m_pos;
			ast.head.push_back(read_name());
		}
		expect('(');
		skip_ws();
		if(peek() == ')') {
			++m_pos;
			return ast;
		}
		while(true) {
			read_arg(ast);
			skip_ws();
			if(peek() == ',') {
				++m_pos;
				continue;
			}
			if(peek() == ')') {
				++m_pos;
				return ast;
			}
			fail("expected ',' or ')'");
		}
	}

	void read_arg(annotation_ast& ast) {
		skip_ws();
		size_t start = m_pos;
		std::optional<std::string> key;
		std::optional<arg_value> value;
		try {
			if(is_ident_start(peek())) {
				size_t name_start = m_pos;
				std::string name = read_name();
				char next = peek_after_ws();
				if(is_reserved_root(name) && (next == '.' || next == '(')) {
					m_pos = name_start;
					value = arg_value::make_annotation(read_annotation());
				} else if(next == '=' && !followed_by_eq()) {
					skip_ws();
					++m_pos;
					key = name;
					value = read_value(true);
				} else {
					value = arg_value::make_name(std::move(name));
				}
			} else {
				value = read_value(false);
			}
		} catch(const unknown_head_error&) {
			throw;
		} catch(const duplicate_kwarg_error&) {
			throw;
		} catch(const syntax_error&) {
			// an unbalanced literal is an error even inside a hole
			if(unbalanced_from(start)) {
				throw;
			}
			value.reset();
		}
		char next = peek_after_ws();
		if(!value || (next != ',' && next != ')')) {
			m_pos = start;
			key.reset();
			value = arg_value::make_hole(read_hole());
		}
		if(key) {
			for(const auto& [k, _] : ast.kwargs) {
				if(k == *key) {
					throw duplicate_kwarg_error("duplicate keyword argument '" + *key + "'");
				}
			}
			ast.kwargs.emplace_back(std::move(*key), std::move(*value));
		} else {
			if(!ast.kwargs.empty()) {
				fail("positional argument after keyword argument");
			}
			ast.args.push_back(std::move(*value));
		}
	}

	bool followed_by_eq() const {
		size_t p = m_pos;
		while(p < m_text.size() && std::isspace(static_cast<unsigned char>(m_text[p]))) {
			++p;
		}
		return p + 1 < m_text.size() && m_text[p + 1] == '=';
	}

	bool unbalanced_from(size_t start) const {
		char quote = 0;
		int depth = 0;
		for(size_t p = start; p < m_text.size(); ++p) {
			char c = m_text[p];
			if(quote) {
				if(c == '\\') {
					++p;
				} else if(c == quote) {
					quote = 0;
				}
				continue;
			}
			if(c == '\'' || c == '"') {
				quote = c;
			} else if(c == '(' || c == '[' || c == '{') {
				++depth;
			} else if(c == ')' || c == ']' || c == '}') {
				--depth;
			}
		}
		return quote != 0 || depth > 0;
	}

	// Raw text up to the next top-level ',' or ')'.
	std::string read_hole() {
		size_t start = m_pos;
		char quote = 0;
		int depth = 0;
		while(!at_end()) {
			char c = m_text[m_pos];
			if(quote) {
				if(c == '\\') {
					++m_pos;
				} else if(c == quote) {
					quote = 0;
				}
			} else if(c == '\'' || c == '"') {
				quote = c;
			} else if(c == '(' || c == '[' || c == '{') {
				++depth;
			} else if(c == ')' || c == ']' || c == '}') {
				if(depth == 0) {
					break;
				}
				--depth;
			} else if(c == ',' && depth == 0) {
				break;
			}
			++m_pos;
		}
		if(quote) {
			fail("unterminated string literal");
		}
		if(at_end()) {
			fail("unbalanced parentheses");
		}
		std::string_view raw = m_text.substr(start, m_pos - start);
		while(!raw.empty() && std::isspace(static_cast<unsigned char>(raw.back()))) {
			raw.remove_suffix(1);
		}
		if(raw.empty()) {
			fail("empty argument");
		}
		return std::string(raw);
	}

	arg_value read_value(bool allow_name) {
		skip_ws();
		char c = peek();
		if(c == '\'' || c == '"') {
			return arg_value::make_string(read_string());
		}
		if(c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
			return arg_value::make_integer(read_integer());
		}
		if(c == '[') {
			++m_pos;
			std::vector<arg_value> items;
			skip_ws();
			if(peek() == ']') {
				++m_pos;
				return arg_value::make_list(std::move(items));
			}
			while(true) {
				items.push_back(read_value(true));
				skip_ws();
				if(peek() == ',') {
					++m_pos;
					continue;
				}
				if(peek() == ']') {
					++m_pos;
					break;
				}
				fail("expected ',' or ']'");
			}
			return arg_value::make_list(std::move(items));
		}
		if(allow_name && is_ident_start(c)) {
			return arg_value::make_name(read_name());
		}
		fail("expected literal");
	}

	std::string read_string() {
		char quote = m_text[m_pos++];
		std::string out;
		while(true) {
			if(at_end()) {
				fail("unterminated string literal");
			}
			char c = m_text[m_pos++];
			if(c == quote) {
				return out;
			}
			if(c != '\\') {
				out.push_back(c);
				continue;
			}
			if(at_end()) {
				fail("unterminated string literal");
			}
			char e = m_text[m_pos++];
			switch(e) {
			case 'n': out.push_back('\n'); break;
			case 't': out.push_back('\t'); break;
			case 'r': out.push_back('\r'); break;
			case '0': out.push_back('\0'); break;
			case '\\': out.push_back('\\'); break;
			case '\'': out.push_back('\''); break;
			case '"': out.push_back('"'); break;
			case 'x': {
				if(m_pos + 2 > m_text.size()) {
					fail("bad \\x escape");
				}
				unsigned v = 0;
				auto r = std::from_chars(m_text.data() + m_pos, m_text.data() + m_pos + 2, v, 16);
				if(r.ec != std::errc() || r.ptr != m_text.data() + m_pos + 2) {
					fail("bad \\x escape");
				}
				out.push_back(static_cast<char>(v));
				m_pos += 2;
				break;
			}
			default: fail(std::string("unknown escape '\\") + e + "'");
			}
		}
	}

	int64_t read_integer() {
		size_t start = m_pos;
		if(peek() == '-') {
			++m_pos;
		}
		while(!at_end() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
			++m_pos;
		}
		int64_t v = 0;
		auto r = std::from_chars(m_text.data() + start, m_text.data() + m_pos, v);
		if(r.ec != std::errc() || r.ptr != m_text.data() + m_pos) {
			fail("bad integer literal");
		}
		return v;
	}
};

std::string quote(const std::string& s) {
	std::string out = "'";
	for(char c : s) {
		switch(c) {
		case '\\': out += "\\\\"; break;
		case '\'': out += "\\'"; break;
		case '\n': out += "\\n"; break;
		case '\t': out += "\\t"; break;
		case '\r': out += "\\r"; break;
		default:
			if(static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
				char buf[8];
				std::snprintf(buf, sizeof(buf), "\\x%02x", static_cast<unsigned char>(c));
				out += buf;
			} else {
				out.push_back(c);
			}
		}
	}
	out.push_back('\'');
	return out;
}

std::string upper(std::string s) {
	std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
	return s;
}

std::string lower(std::string s) {
	std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
	return s;
}

bool is_upper_ident(std::string_view s) {
	if(s.empty() || !is_ident_start(s[0])) {
		return false;
	}
	return std::all_of(s.begin(), s.end(), [](char c) {
		return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
		       c == '_';
	});
}

bool is_class_name(std::string_view s) {
	return s == "FILE" || s == "NETWORK";
}

// Scalar payload of a literal slot as a string; names are rejected because
// syscall policies need concrete values (the VM binds names before lowering).
std::string scalar_text(const arg_value& v, const char* what) {
	switch(v.type) {
	case arg_value::kind::string: return v.text;
	case arg_value::kind::integer: return std::to_string(v.number);
	case arg_value::kind::name:
		throw lowering_error(std::string("unbound name '") + v.text + "' used as " + what);
	default: throw lowering_error(std::string("expected a literal for ") + what);
	}
}

void append_values(const arg_value& v, std::vector<std::string>& out, const char* what) {
	if(v.type == arg_value::kind::list) {
		for(const auto& item : v.items) {
			out.push_back(scalar_text(item, what));
		}
	} else {
		out.push_back(scalar_text(v, what));
	}
}

// Function names in sanitization/sink lists may be bare names or strings.
std::vector<std::string> function_list(const arg_value& v) {
	std::vector<std::string> out;
	auto one = [&](const arg_value& item) {
		if(item.type == arg_value::kind::name || item.type == arg_value::kind::string) {
			out.push_back(item.text);
		} else {
			throw lowering_error("function lists take names or strings");
		}
	};
	if(v.type == arg_value::kind::list) {
		for(const auto& item : v.items) {
			one(item);
		}
	} else {
		one(v);
	}
	return out;
}

std::string target_name(const arg_value& v) {
	if(v.type == arg_value::kind::name || v.type == arg_value::kind::string) {
		if(v.text.empty()) {
			throw lowering_error("empty target name");
		}
		return v.text;
	}
	throw lowering_error("target must be a name");
}

bool is_file_syscall(const std::string& name) {
	static const std::set<std::string> names = {"openat", "read", "write", "close", "stat", "access",
	                                            "fchmod", "unlink", "mkdir", "rename", "execve",
	                                            "execv", "execveat", "open"};
	return name == "FILE" || names.count(name) > 0;
}

bool is_network_syscall(const std::string& name) {
	return name == "NETWORK" || name == "connect" || name == "send" || name == "recv";
}

policy_spec lower_syscall(const annotation_ast& ast, source_site site) {
	policy_spec spec;
	spec.domain = policy_domain::syscall;
	spec.site = site;
	std::optional<std::string> action;
	std::optional<option_dim> segment_option;
	for(size_t i = 1; i < ast.head.size(); ++i) {
		const std::string& seg = ast.head[i];
		if(seg == "ALLOW" || seg == "BLOCK" || seg == "CLEAR") {
			if(action) {
				throw lowering_error("conflicting head segments " + *action + " and " + seg);
			}
			action = seg;
		} else if(auto dim = option_dim_from_name(seg)) {
			if(segment_option) {
				throw lowering_error("more than one option segment in head");
			}
			segment_option = dim;
		} else if(is_class_name(seg)) {
			spec.syscalls.insert(seg);
		} else if(is_upper_ident(seg)) {
			spec.syscalls.insert(lower(seg));
		} else {
			throw lowering_error("unknown head segment '" + seg + "'");
		}
	}
	if(!action) {
		throw lowering_error("SYSCALL annotation needs ALLOW, BLOCK or CLEAR");
	}
	if(*action == "CLEAR") {
		if(segment_option || !ast.args.empty() || !ast.kwargs.empty()) {
			throw lowering_error("SYSCALL ... CLEAR takes no arguments or options");
		}
		policy_spec clear;
		clear.domain = policy_domain::clear;
		clear.site = site;
		clear_selector sel;
		sel.type = clear_selector::kind::syscalls;
		sel.syscalls = std::move(spec.syscalls);
		clear.clear = std::move(sel);
		return clear;
	}
	spec.mode = *action == "ALLOW" ? policy_mode::allow : policy_mode::block;

	if(segment_option) {
		if(!ast.kwargs.empty()) {
			throw lowering_error("option segment and keyword options cannot be combined");
		}
		syscall_option opt{*segment_option, {}};
		for(const auto& a : ast.args) {
			append_values(a, opt.patterns, "option value");
		}
		if(opt.patterns.empty()) {
			throw lowering_error("option segment needs at least one value");
		}
		spec.option = std::move(opt);
		return spec;
	}
	if(ast.kwargs.size() > 1) {
		throw lowering_error("at most one option keyword per SYSCALL annotation");
	}
	if(!ast.kwargs.empty()) {
		const auto& [key, value] = ast.kwargs.front();
		auto dim = option_dim_from_name(upper(key));
		if(!dim) {
			throw lowering_error("unknown option '" + key + "'");
		}
		syscall_option opt{*dim, {}};
		append_values(value, opt.patterns, "option value");
		if(!ast.args.empty()) {
			if(!spec.syscalls.empty()) {
				throw lowering_error("positional values and keyword option both given");
			}
			for(const auto& a : ast.args) {
				spec.syscalls.insert(lower(scalar_text(a, "syscall name")));
			}
		}
		spec.option = std::move(opt);
		return spec;
	}
	if(spec.syscalls.empty()) {
		// SYSCALL.BLOCK('execv', ...): positional values are syscall names.
		for(const auto& a : ast.args) {
			std::vector<std::string> names;
			append_values(a, names, "syscall name");
			for(auto& n : names) {
				spec.syscalls.insert(is_class_name(n) ? n : lower(n));
			}
		}
		return spec;
	}
	if(ast.args.empty()) {
		return spec;
	}
	// SYSCALL.FILE.ALLOW(dir): positional values constrain the selector's
	// natural dimension.
	bool all_file = std::all_of(spec.syscalls.begin(), spec.syscalls.end(), is_file_syscall);
	bool all_net = std::all_of(spec.syscalls.begin(), spec.syscalls.end(), is_network_syscall);
	if(!all_file && !all_net) {
		throw lowering_error("cannot infer option for positional values; name it explicitly");
	}
	syscall_option opt{all_file ? option_dim::path : option_dim::host, {}};
	for(const auto& a : ast.args) {
		append_values(a, opt.patterns, "option value");
	}
	spec.option = std::move(opt);
	return spec;
}

policy_spec lower_taint(const annotation_ast& ast, source_site site) {
	if(ast.head.size() != 1) {
		throw lowering_error("TAINT takes no head segments");
	}
	if(ast.args.empty() || ast.args.size() > 3) {
		throw lowering_error("TAINT(target[, sanitization][, sink])");
	}
	policy_spec spec;
	spec.domain = policy_domain::data_flow;
	spec.site = site;
	dataflow_spec df;
	df.target = target_name(ast.args[0]);
	bool have_sinks = false;
	if(ast.args.size() > 1) {
		df.sanitizers = function_list(ast.args[1]);
	}
	if(ast.args.size() > 2) {
		df.sinks = function_list(ast.args[2]);
		have_sinks = true;
	}
	for(const auto& [key, value] : ast.kwargs) {
		std::string k = lower(key);
		if(k == "sanitization" || k == "sanitizer" || k == "sanitizers") {
			if(ast.args.size() > 1) {
				throw lowering_error("sanitization given twice");
			}
			df.sanitizers = function_list(value);
		} else if(k == "sink" || k == "sinks") {
			if(have_sinks) {
				throw lowering_error("sink given twice");
			}
			df.sinks = function_list(value);
			have_sinks = true;
		} else {
			throw lowering_error("unknown TAINT option '" + key + "'");
		}
	}
	if(df.sinks.empty()) {
		df.sinks = {"write"};
	}
	spec.dataflow = std::move(df);
	return spec;
}

uint8_t parse_perms(const arg_value& v) {
	if(v.type != arg_value::kind::string || v.text.empty()) {
		throw lowering_error("WATCH permissions must be a non-empty string of r/w/x");
	}
	uint8_t mask = 0;
	for(char c : v.text) {
		switch(c) {
		case 'r': mask |= perm_read; break;
		case 'w': mask |= perm_write; break;
		case 'x': mask |= perm_exec; break;
		default: throw lowering_error(std::string("unknown permission '") + c + "'");
		}
	}
	return mask;
}

policy_spec lower_watch(const annotation_ast& ast, source_site site) {
	if(ast.head.size() != 2) {
		throw lowering_error("WATCH needs exactly one of ALLOW, BLOCK, CON");
	}
	if(!ast.kwargs.empty()) {
		throw lowering_error("WATCH takes no keyword arguments");
	}
	const std::string& action = ast.head[1];
	policy_spec spec;
	spec.site = site;
	if(action == "CON") {
		if(ast.args.size() != 1) {
			throw lowering_error("WATCH.CON(target)");
		}
		spec.domain = policy_domain::timing_con;
		spec.watch = watch_spec{target_name(ast.args[0]), 0};
		return spec;
	}
	if(action != "ALLOW" && action != "BLOCK") {
		throw lowering_error("unknown WATCH action '" + action + "'");
	}
	if(ast.args.size() != 2) {
		throw lowering_error("WATCH." + action + "(target, permissions)");
	}
	spec.domain = policy_domain::object_access;
	spec.mode = action == "ALLOW" ? policy_mode::allow : policy_mode::block;
	spec.watch = watch_spec{target_name(ast.args[0]), parse_perms(ast.args[1])};
	return spec;
}

policy_spec lower_execution(const annotation_ast& ast, source_site site) {
	if(ast.head.size() != 2 || ast.head[1] != "BLOCK") {
		throw lowering_error("only EXECUTION.BLOCK is defined");
	}
	if(!ast.kwargs.empty() || ast.args.size() > 1) {
		throw lowering_error("EXECUTION.BLOCK takes at most one condition");
	}
	policy_spec spec;
	spec.domain = policy_domain::execution;
	spec.site = site;
	if(!ast.args.empty()) {
		spec.exec_condition = to_string(ast.args[0]);
	}
	return spec;
}

policy_spec lower_clear(const annotation_ast& ast, source_site site) {
	if(ast.head.size() != 1) {
		throw lowering_error("CLEAR takes no head segments");
	}
	if(!ast.kwargs.empty() || ast.args.size() > 1) {
		throw lowering_error("CLEAR takes at most one selector");
	}
	policy_spec spec;
	spec.domain = policy_domain::clear;
	spec.site = site;
	clear_selector sel;
	if(ast.args.empty()) {
		sel.type = clear_selector::kind::all;
	} else {
		const arg_value& a = ast.args[0];
		if(a.type == arg_value::kind::annotation) {
			policy_spec nested = lower_to_policy(*a.nested, site);
			if(nested.domain == policy_domain::clear) {
				throw lowering_error("CLEAR of a CLEAR is meaningless");
			}
			sel.type = clear_selector::kind::structural;
			sel.spec = std::make_shared<const policy_spec>(std::move(nested));
		} else if((a.type == arg_value::kind::name || a.type == arg_value::kind::string) &&
		          is_class_name(a.text)) {
			sel.type = clear_selector::kind::syscalls;
			sel.syscalls = {a.text};
		} else {
			throw lowering_error("CLEAR selector must be an annotation or a class name");
		}
	}
	spec.clear = std::move(sel);
	return spec;
}

}  // namespace

arg_value arg_value::make_string(std::string s) {
	arg_value v;
	v.type = kind::string;
	v.text = std::move(s);
	return v;
}

arg_value arg_value::make_integer(int64_t n) {
	arg_value v;
	v.type = kind::integer;
	v.number = n;
	return v;
}

arg_value arg_value::make_name(std::string n) {
	arg_value v;
	v.type = kind::name;
	v.text = std::move(n);
	return v;
}

arg_value arg_value::make_hole(std::string src) {
	arg_value v;
	v.type = kind::hole;
	v.text = std::move(src);
	return v;
}

arg_value arg_value::make_list(std::vector<arg_value> items) {
	arg_value v;
	v.type = kind::list;
	v.items = std::move(items);
	return v;
}

arg_value arg_value::make_annotation(annotation_ast ast) {
	arg_value v;
	v.type = kind::annotation;
	v.nested = std::make_shared<const annotation_ast>(std::move(ast));
	return v;
}

bool arg_value::operator==(const arg_value& o) const {
	if(type != o.type || text != o.text || number != o.number || items != o.items) {
		return false;
	}
	if(nested && o.nested) {
		return *nested == *o.nested;
	}
	return !nested && !o.nested;
}

bool is_reserved_root(std::string_view segment) {
	return std::find(std::begin(k_roots), std::end(k_roots), segment) != std::end(k_roots);
}

bool is_annotation_head(std::string_view dotted_name) {
	auto dot = dotted_name.find('.');
	return is_reserved_root(dotted_name.substr(0, dot));
}

annotation_ast parse_annotation(std::string_view text) {
	return annotation_reader(text).read_all();
}

std::string to_string(const arg_value& v) {
	switch(v.type) {
	case arg_value::kind::string: return quote(v.text);
	case arg_value::kind::integer: return std::to_string(v.number);
	case arg_value::kind::name:
	case arg_value::kind::hole: return v.text;
	case arg_value::kind::annotation: return to_string(*v.nested);
	case arg_value::kind::list: {
		std::string out = "[";
		for(size_t i = 0; i < v.items.size(); ++i) {
			if(i) {
				out += ", ";
			}
			out += to_string(v.items[i]);
		}
		return out + "]";
	}
	}
	return {};
}

std::string to_string(const annotation_ast& ast) {
	std::string out;
	for(size_t i = 0; i < ast.head.size(); ++i) {
		if(i) {
			out.push_back('.');
		}
		out += ast.head[i];
	}
	out.push_back('(');
	bool first = true;
	for(const auto& a : ast.args) {
		if(!first) {
			out += ", ";
		}
		first = false;
		out += to_string(a);
	}
	for(const auto& [k, v] : ast.kwargs) {
		if(!first) {
			out += ", ";
		}
		first = false;
		out += k + "=" + to_string(v);
	}
	out.push_back(')');
	return out;
}

const char* to_string(policy_domain d) {
	switch(d) {
	case policy_domain::syscall: return "Syscall";
	case policy_domain::data_flow: return "DataFlow";
	case policy_domain::object_access: return "ObjectAccess";
	case policy_domain::execution: return "Execution";
	case policy_domain::timing_con: return "TimingCon";
	case policy_domain::clear: return "Clear";
	}
	return "?";
}

const char* to_string(policy_mode m) {
	switch(m) {
	case policy_mode::none: return "None";
	case policy_mode::allow: return "Allow";
	case policy_mode::block: return "Block";
	}
	return "?";
}

const char* to_string(option_dim d) {
	switch(d) {
	case option_dim::path: return "PATH";
	case option_dim::scheme: return "SCHEME";
	case option_dim::host: return "HOST";
	case option_dim::port: return "PORT";
	}
	return "?";
}

std::optional<option_dim> option_dim_from_name(std::string_view n) {
	if(n == "PATH") {
		return option_dim::path;
	}
	if(n == "SCHEME") {
		return option_dim::scheme;
	}
	if(n == "HOST") {
		return option_dim::host;
	}
	if(n == "PORT") {
		return option_dim::port;
	}
	return std::nullopt;
}

bool clear_selector::operator==(const clear_selector& o) const {
	if(type != o.type || syscalls != o.syscalls) {
		return false;
	}
	if(spec && o.spec) {
		return spec->same_as(*o.spec);
	}
	return !spec && !o.spec;
}

bool policy_spec::same_as(const policy_spec& o) const {
	return domain == o.domain && mode == o.mode && syscalls == o.syscalls && option == o.option &&
	       dataflow == o.dataflow && watch == o.watch && exec_condition == o.exec_condition &&
	       clear == o.clear;
}

policy_spec lower_to_policy(const annotation_ast& ast, source_site site) {
	if(ast.head.empty() || !is_reserved_root(ast.head[0])) {
		throw lowering_error("not an annotation");
	}
	const std::string& root = ast.head[0];
	if(root == "SYSCALL") {
		return lower_syscall(ast, site);
	}
	if(root == "TAINT") {
		return lower_taint(ast, site);
	}
	if(root == "WATCH") {
		return lower_watch(ast, site);
	}
	if(root == "EXECUTION") {
		return lower_execution(ast, site);
	}
	return lower_clear(ast, site);
}

}  // namespace anota
