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

#include <anota/error.hpp>
#include <anota/program.hpp>

#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace anota {

namespace {

enum class tok { name, integer, string, op, newline, indent, dedent, eof };

struct token {
	tok type = tok::eof;
	std::string text;
	int64_t num = 0;
	int line = 0;
	size_t begin = 0;
	size_t end = 0;
};

bool is_keyword(const std::string& s) {
	static const char* kw[] = {"def", "if", "elif", "else", "while", "return", "pass",
	                           "True", "False", "None", "and", "or", "not", "in"};
	for(const char* k : kw) {
		if(s == k) {
			return true;
		}
	}
	return false;
}

class lexer {
public:
	explicit lexer(std::string_view src): m_src(src) {}

	std::vector<token> run() {
		m_indents.push_back(0);
		bool at_line_start = true;
		while(m_pos < m_src.size()) {
			if(at_line_start && m_depth == 0) {
				if(!handle_indent()) {
					continue;
				}
				at_line_start = false;
			}
			char c = m_src[m_pos];
			if(c == '\n') {
				++m_pos;
				if(m_depth == 0) {
					push(tok::newline, "\n", m_pos - 1, m_pos);
					at_line_start = true;
				}
				++m_line;
				continue;
			}
			if(c == ' ' || c == '\t' || c == '\r') {
				++m_pos;
				continue;
			}
			if(c == '#') {
				while(m_pos < m_src.size() && m_src[m_pos] != '\n') {
					++m_pos;
				}
				continue;
			}
			if(c == '\\' && m_pos + 1 < m_src.size() && m_src[m_pos + 1] == '\n') {
				m_pos += 2;
				++m_line;
				continue;
			}
			if(std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
				size_t start = m_pos;
				while(m_pos < m_src.size() &&
				      (std::isalnum(static_cast<unsigned char>(m_src[m_pos])) || m_src[m_pos] == '_')) {
					++m_pos;
				}
				push(tok::name, std::string(m_src.substr(start, m_pos - start)), start, m_pos);
				continue;
			}
			if(std::isdigit(static_cast<unsigned char>(c))) {
				size_t start = m_pos;
				while(m_pos < m_src.size() && std::isdigit(static_cast<unsigned char>(m_src[m_pos]))) {
					++m_pos;
				}
				token t;
				t.type = tok::integer;
				auto r = std::from_chars(m_src.data() + start, m_src.data() + m_pos, t.num);
				if(r.ec != std::errc()) {
					throw syntax_error("integer literal out of range", m_line);
				}
				t.text = std::string(m_src.substr(start, m_pos - start));
				t.line = m_line;
				t.begin = start;
				t.end = m_pos;
				m_tokens.push_back(std::move(t));
				continue;
			}
			if(c == '\'' || c == '"') {
				lex_string();
				continue;
			}
			lex_op();
		}
		if(!m_tokens.empty() && m_tokens.back().type != tok::newline && m_tokens.back().type != tok::dedent) {
			push(tok::newline, "\n", m_pos, m_pos);
		}
		while(m_indents.size() > 1) {
			m_indents.pop_back();
			push(tok::dedent, "", m_pos, m_pos);
		}
		push(tok::eof, "", m_pos, m_pos);
		return std::move(m_tokens);
	}

private:
	std::string_view m_src;
	size_t m_pos = 0;
	int m_line = 1;
	int m_depth = 0;
	std::vector<int> m_indents;
	std::vector<token> m_tokens;

	void push(tok type, std::string text, size_t begin, size_t end) {
		token t;
		t.type = type;
		t.text = std::move(text);
		t.line = m_line;
		t.begin = begin;
		t.end = end;
		m_tokens.push_back(std::move(t));
	}

	// Returns false when the line is blank or a comment (already consumed).
	bool handle_indent() {
		int width = 0;
		size_t p = m_pos;
		while(p < m_src.size() && (m_src[p] == ' ' || m_src[p] == '\t')) {
			width += m_src[p] == '\t' ? 8 - (width % 8) : 1;
			++p;
		}
		if(p >= m_src.size()) {
			m_pos = p;
			return false;
		}
		if(m_src[p] == '\n' || m_src[p] == '#' || m_src[p] == '\r') {
			while(p < m_src.size() && m_src[p] != '\n') {
				++p;
			}
			if(p < m_src.size()) {
				++p;
				++m_line;
			}
			m_pos = p;
			return false;
		}
		m_pos = p;
		if(width > m_indents.back()) {
			m_indents.push_back(width);
			push(tok::indent, "", p, p);
		} else {
			while(width < m_indents.back()) {
				m_indents.pop_back();
				push(tok::dedent, "", p, p);
			}
			if(width != m_indents.back()) {
				throw syntax_error("inconsistent indentation", m_line);
			}
		}
		return true;
	}

	void lex_string() {
		size_t start = m_pos;
		char quote = m_src[m_pos++];
		std::string out;
		while(true) {
			if(m_pos >= m_src.size() || m_src[m_pos] == '\n') {
				throw syntax_error("unterminated string literal", m_line);
			}
			char c = m_src[m_pos++];
			if(c == quote) {
				break;
			}
			if(c != '\\') {
				out.push_back(c);
				continue;
			}
			if(m_pos >= m_src.size()) {
				throw syntax_error("unterminated string literal", m_line);
			}
			char e = m_src[m_pos++];
			switch(e) {
			case 'n': out.push_back('\n'); break;
			case 't': out.push_back('\t'); break;
			case 'r': out.push_back('\r'); break;
			case '0': out.push_back('\0'); break;
			case '\\': out.push_back('\\'); break;
			case '\'': out.push_back('\''); break;
			case '"': out.push_back('"'); break;
			case 'x': {
				unsigned v = 0;
				if(m_pos + 2 > m_src.size()) {
					throw syntax_error("bad \\x escape", m_line);
				}
				auto r = std::from_chars(m_src.data() + m_pos, m_src.data() + m_pos + 2, v, 16);
				if(r.ec != std::errc() || r.ptr != m_src.data() + m_pos + 2) {
					throw syntax_error("bad \\x escape", m_line);
				}
				out.push_back(static_cast<char>(v));
				m_pos += 2;
				break;
			}
			default: throw syntax_error(std::string("unknown escape '\\") + e + "'", m_line);
			}
		}
		token t;
		t.type = tok::string;
		t.text = std::move(out);
		t.line = m_line;
		t.begin = start;
		t.end = m_pos;
		m_tokens.push_back(std::move(t));
	}

	void lex_op() {
		static const char* two[] = {"==", "!=", "<=", ">=", "+=", "-=", "*="};
		size_t start = m_pos;
		for(const char* op : two) {
			if(m_src.substr(m_pos, 2) == op) {
				m_pos += 2;
				push(tok::op, op, start, m_pos);
				return;
			}
		}
		char c = m_src[m_pos];
		static const std::string singles = "()[]{},:.+-*/%<>=";
		if(singles.find(c) == std::string::npos) {
			throw syntax_error(std::string("unexpected character '") + c + "'", m_line);
		}
		if(c == '(' || c == '[' || c == '{') {
			++m_depth;
		} else if(c == ')' || c == ']' || c == '}') {
			if(m_depth == 0) {
				throw syntax_error(std::string("unbalanced '") + c + "'", m_line);
			}
			--m_depth;
		}
		++m_pos;
		push(tok::op, std::string(1, c), start, m_pos);
	}
};

struct code_buffer {
	std::vector<instr> code;
	std::vector<int> lines;
};

bool is_jump(opcode op) {
	return op == opcode::jump || op == opcode::jump_if_false || op == opcode::jump_if_false_keep ||
	       op == opcode::jump_if_true_keep;
}

std::optional<list_method> method_from_name(const std::string& s) {
	if(s == "append") {
		return list_method::append;
	}
	if(s == "pop") {
		return list_method::pop;
	}
	if(s == "remove") {
		return list_method::remove;
	}
	return std::nullopt;
}

class compiler {
public:
	compiler(std::string_view src, std::vector<token> tokens): m_src(src), m_toks(std::move(tokens)) {}

	program run() {
		code_buffer main;
		m_cur = &main;
		while(!check(tok::eof)) {
			if(accept_type(tok::newline)) {
				continue;
			}
			statement();
		}
		link(main);
		return std::move(m_prog);
	}

private:
	std::string_view m_src;
	std::vector<token> m_toks;
	size_t m_pos = 0;
	program m_prog;
	code_buffer* m_cur = nullptr;
	bool m_in_function = false;
	std::vector<std::pair<code_buffer, size_t>> m_functions;  // body, index into m_prog.functions
	std::vector<std::pair<std::string, int>> m_called;

	const token& peek(size_t ahead = 0) const {
		size_t i = std::min(m_pos + ahead, m_toks.size() - 1);
		return m_toks[i];
	}
	const token& next() { return m_toks[std::min(m_pos++, m_toks.size() - 1)]; }
	bool check(tok t) const { return peek().type == t; }
	bool check_op(const char* op, size_t ahead = 0) const {
		return peek(ahead).type == tok::op && peek(ahead).text == op;
	}
	bool check_kw(const char* kw, size_t ahead = 0) const {
		return peek(ahead).type == tok::name && peek(ahead).text == kw;
	}
	bool accept_type(tok t) {
		if(check(t)) {
			++m_pos;
			return true;
		}
		return false;
	}
	bool accept_op(const char* op) {
		if(check_op(op)) {
			++m_pos;
			return true;
		}
		return false;
	}
	bool accept_kw(const char* kw) {
		if(check_kw(kw)) {
			++m_pos;
			return true;
		}
		return false;
	}
	[[noreturn]] void fail(const std::string& msg) const { throw syntax_error(msg, peek().line); }
	void expect_op(const char* op) {
		if(!accept_op(op)) {
			fail(std::string("expected '") + op + "'");
		}
	}
	std::string expect_name() {
		if(!check(tok::name) || is_keyword(peek().text)) {
			fail("expected identifier");
		}
		return next().text;
	}
	void expect_end_of_statement() {
		if(accept_type(tok::newline) || check(tok::eof) || check(tok::dedent)) {
			return;
		}
		fail("expected end of statement");
	}

	int32_t intern(const std::string& name) {
		for(size_t i = 0; i < m_prog.names.size(); ++i) {
			if(m_prog.names[i] == name) {
				return static_cast<int32_t>(i);
			}
		}
		m_prog.names.push_back(name);
		return static_cast<int32_t>(m_prog.names.size() - 1);
	}

	int32_t add_constant(constant c) {
		for(size_t i = 0; i < m_prog.constants.size(); ++i) {
			if(m_prog.constants[i] == c) {
				return static_cast<int32_t>(i);
			}
		}
		m_prog.constants.push_back(std::move(c));
		return static_cast<int32_t>(m_prog.constants.size() - 1);
	}

	int32_t emit(opcode op, int32_t a = 0, int32_t b = 0, int32_t c = 0, int line = -1) {
		m_cur->code.push_back({op, a, b, c});
		m_cur->lines.push_back(line >= 0 ? line : peek().line);
		return static_cast<int32_t>(m_cur->code.size() - 1);
	}
	int32_t here() const { return static_cast<int32_t>(m_cur->code.size()); }
	void patch(int32_t at, int32_t target) { m_cur->code[at].a = target; }

	void statement() {
		if(check_kw("def")) {
			function_def();
			return;
		}
		if(check_kw("if")) {
			if_statement();
			return;
		}
		if(check_kw("while")) {
			while_statement();
			return;
		}
		simple_statement();
		expect_end_of_statement();
	}

	void block() {
		expect_op(":");
		if(accept_type(tok::newline)) {
			if(!accept_type(tok::indent)) {
				fail("expected an indented block");
			}
			while(!accept_type(tok::dedent)) {
				if(check(tok::eof)) {
					return;
				}
				if(accept_type(tok::newline)) {
					continue;
				}
				statement();
			}
			return;
		}
		simple_statement();
		expect_end_of_statement();
	}

	void function_def() {
		int line = peek().line;
		next();
		if(m_in_function) {
			fail("nested function definitions are not supported");
		}
		std::string name = expect_name();
		if(m_prog.find_function(name)) {
			throw syntax_error("function '" + name + "' defined twice", line);
		}
		if(find_builtin(name) || is_annotation_head(name)) {
			throw syntax_error("'" + name + "' is reserved", line);
		}
		function_info fi;
		fi.name = name;
		fi.name_index = intern(name);
		fi.line = line;
		expect_op("(");
		if(!check_op(")")) {
			do {
				fi.params.push_back(intern(expect_name()));
			} while(accept_op(","));
		}
		expect_op(")");
		m_prog.functions.push_back(fi);
		size_t index = m_prog.functions.size() - 1;

		code_buffer body;
		code_buffer* saved = m_cur;
		m_cur = &body;
		m_in_function = true;
		block();
		emit(opcode::push_unit, 0, 0, 0, peek().line);
		emit(opcode::ret, 0, 0, 0, peek().line);
		m_in_function = false;
		m_cur = saved;
		m_functions.emplace_back(std::move(body), index);
	}

	void if_statement() {
		next();
		expression();
		int32_t jf = emit(opcode::jump_if_false);
		block();
		std::vector<int32_t> ends;
		while(check_kw("elif") || check_kw("else")) {
			ends.push_back(emit(opcode::jump));
			patch(jf, here());
			if(accept_kw("elif")) {
				expression();
				jf = emit(opcode::jump_if_false);
				block();
			} else {
				next();
				block();
				jf = -1;
				break;
			}
		}
		if(jf >= 0) {
			patch(jf, here());
		}
		for(int32_t e : ends) {
			patch(e, here());
		}
	}

	void while_statement() {
		next();
		int32_t top = here();
		expression();
		int32_t jf = emit(opcode::jump_if_false);
		block();
		emit(opcode::jump, top);
		patch(jf, here());
	}

	// NAME '[' ... ']' '=' : returns true if the statement is an index store.
	bool looks_like_index_store() const {
		if(!check(tok::name) || !check_op("[", 1)) {
			return false;
		}
		int depth = 0;
		for(size_t i = m_pos + 1; i < m_toks.size(); ++i) {
			const token& t = m_toks[i];
			if(t.type == tok::newline || t.type == tok::eof) {
				return false;
			}
			if(t.type != tok::op) {
				continue;
			}
			if(t.text == "[") {
				++depth;
			} else if(t.text == "]") {
				if(--depth == 0) {
					return i + 1 < m_toks.size() && m_toks[i + 1].type == tok::op && m_toks[i + 1].text == "=";
				}
			}
		}
		return false;
	}

	void simple_statement() {
		int line = peek().line;
		if(accept_kw("return")) {
			if(!m_in_function) {
				throw syntax_error("'return' outside function", line);
			}
			if(check(tok::newline) || check(tok::eof) || check(tok::dedent)) {
				emit(opcode::push_unit, 0, 0, 0, line);
			} else {
				expression();
			}
			emit(opcode::ret, 0, 0, 0, line);
			return;
		}
		if(accept_kw("pass")) {
			return;
		}
		if(check(tok::name) && !is_keyword(peek().text) && !is_annotation_head(peek().text)) {
			if(check_op("=", 1)) {
				std::string name = next().text;
				next();
				expression();
				emit(opcode::store_var, intern(name), 0, 0, line);
				return;
			}
			for(auto [op, bin] : {std::pair{"+=", binary_op::add}, std::pair{"-=", binary_op::sub},
			                      std::pair{"*=", binary_op::mul}}) {
				if(check_op(op, 1)) {
					std::string name = next().text;
					next();
					int32_t n = intern(name);
					emit(opcode::load_var, n, 0, 0, line);
					expression();
					emit(opcode::binop, static_cast<int32_t>(bin), 0, 0, line);
					emit(opcode::store_var, n, 0, 0, line);
					return;
				}
			}
			if(looks_like_index_store()) {
				std::string name = next().text;
				expect_op("[");
				expression();
				expect_op("]");
				expect_op("=");
				expression();
				emit(opcode::store_index_var, intern(name), 0, 0, line);
				return;
			}
		}
		expression();
		emit(opcode::pop, 0, 0, 0, line);
	}

	void expression() { or_expr(); }

	void or_expr() {
		and_expr();
		while(check_kw("or")) {
			int line = next().line;
			int32_t j = emit(opcode::jump_if_true_keep, 0, 0, 0, line);
			and_expr();
			patch(j, here());
		}
	}

	void and_expr() {
		not_expr();
		while(check_kw("and")) {
			int line = next().line;
			int32_t j = emit(opcode::jump_if_false_keep, 0, 0, 0, line);
			not_expr();
			patch(j, here());
		}
	}

	void not_expr() {
		if(check_kw("not")) {
			int line = next().line;
			not_expr();
			emit(opcode::unop, static_cast<int32_t>(unary_op::logical_not), 0, 0, line);
			return;
		}
		comparison();
	}

	void comparison() {
		additive();
		static const std::pair<const char*, binary_op> ops[] = {
		        {"==", binary_op::eq}, {"!=", binary_op::ne}, {"<=", binary_op::le},
		        {">=", binary_op::ge}, {"<", binary_op::lt},  {">", binary_op::gt},
		};
		int line = peek().line;
		for(const auto& [text, op] : ops) {
			if(accept_op(text)) {
				additive();
				emit(opcode::binop, static_cast<int32_t>(op), 0, 0, line);
				return;
			}
		}
		if(accept_kw("in")) {
			additive();
			emit(opcode::binop, static_cast<int32_t>(binary_op::in), 0, 0, line);
			return;
		}
		if(check_kw("not") && check_kw("in", 1)) {
			next();
			next();
			additive();
			emit(opcode::binop, static_cast<int32_t>(binary_op::not_in), 0, 0, line);
		}
	}

	void additive() {
		multiplicative();
		while(check_op("+") || check_op("-")) {
			int line = peek().line;
			binary_op op = next().text == "+" ? binary_op::add : binary_op::sub;
			multiplicative();
			emit(opcode::binop, static_cast<int32_t>(op), 0, 0, line);
		}
	}

	void multiplicative() {
		unary();
		while(check_op("*") || check_op("/") || check_op("%")) {
			int line = peek().line;
			const std::string& t = next().text;
			binary_op op = t == "*" ? binary_op::mul : t == "/" ? binary_op::div : binary_op::mod;
			unary();
			emit(opcode::binop, static_cast<int32_t>(op), 0, 0, line);
		}
	}

	void unary() {
		if(check_op("-")) {
			int line = next().line;
			unary();
			emit(opcode::unop, static_cast<int32_t>(unary_op::neg), 0, 0, line);
			return;
		}
		postfix();
	}

	int call_args(const char* close) {
		int argc = 0;
		if(!check_op(close)) {
			do {
				expression();
				++argc;
			} while(accept_op(","));
		}
		expect_op(close);
		return argc;
	}

	void postfix() {
		atom();
		while(true) {
			int line = peek().line;
			if(accept_op("[")) {
				expression();
				expect_op("]");
				emit(opcode::load_index, 0, 0, 0, line);
			} else if(accept_op(".")) {
				std::string field = expect_name();
				if(check_op("(")) {
					fail("method calls are only supported directly on variables");
				}
				emit(opcode::load_attr, intern(field), 0, 0, line);
			} else if(check_op("(")) {
				fail("only named functions can be called");
			} else {
				return;
			}
		}
	}

	void atom() {
		const token& t = peek();
		int line = t.line;
		switch(t.type) {
		case tok::integer: {
			int64_t v = next().num;
			emit(opcode::push_const, add_constant({constant::kind::integer, v, {}}), 0, 0, line);
			return;
		}
		case tok::string: {
			std::string s = next().text;
			emit(opcode::push_const, add_constant({constant::kind::string, 0, std::move(s)}), 0, 0, line);
			return;
		}
		case tok::op:
			if(accept_op("(")) {
				expression();
				expect_op(")");
				return;
			}
			if(accept_op("[")) {
				int n = call_args("]");
				emit(opcode::make_list, n, 0, 0, line);
				return;
			}
			if(accept_op("{")) {
				int n = 0;
				if(!check_op("}")) {
					do {
						expression();
						expect_op(":");
						expression();
						++n;
					} while(accept_op(","));
				}
				expect_op("}");
				emit(opcode::make_map, n, 0, 0, line);
				return;
			}
			fail("unexpected '" + t.text + "'");
		case tok::name: break;
		default: fail("expected an expression");
		}
		if(accept_kw("True") || accept_kw("False")) {
			bool v = m_toks[m_pos - 1].text == "True";
			emit(opcode::push_const, add_constant({constant::kind::boolean, v ? 1 : 0, {}}), 0, 0, line);
			return;
		}
		if(accept_kw("None")) {
			emit(opcode::push_unit, 0, 0, 0, line);
			return;
		}
		if(is_keyword(t.text)) {
			fail("unexpected keyword '" + t.text + "'");
		}
		if(is_reserved_root(t.text)) {
			annotation_call();
			return;
		}
		std::string name = next().text;
		if(accept_op("(")) {
			int argc = call_args(")");
			m_called.emplace_back(name, line);
			emit(opcode::call, intern(name), argc, -1, line);
			return;
		}
		if(check_op(".") && peek(1).type == tok::name && check_op("(", 2)) {
			auto method = method_from_name(peek(1).text);
			if(!method) {
				fail("unknown method '" + peek(1).text + "'");
			}
			next();
			next();
			next();
			int argc = call_args(")");
			emit(opcode::call_method, intern(name), argc, static_cast<int32_t>(*method), line);
			return;
		}
		emit(opcode::load_var, intern(name), 0, 0, line);
	}

	void annotation_call() {
		const token& first = peek();
		int line = first.line;
		size_t begin = first.begin;
		std::string head = next().text;
		while(accept_op(".")) {
			head += "." + expect_name();
		}
		if(!check_op("(")) {
			fail("annotation '" + head + "' must be called");
		}
		bool evaluate_args = head.rfind("EXECUTION", 0) == 0;
		int argc = 0;
		size_t end = 0;
		if(evaluate_args) {
			next();
			argc = call_args(")");
			end = m_toks[m_pos - 1].end;
		} else {
			int depth = 0;
			do {
				const token& t = next();
				if(t.type == tok::eof) {
					fail("unbalanced parentheses in annotation");
				}
				if(t.type == tok::op && (t.text == "(" || t.text == "[" || t.text == "{")) {
					++depth;
				} else if(t.type == tok::op && (t.text == ")" || t.text == "]" || t.text == "}")) {
					--depth;
				}
				end = t.end;
			} while(depth > 0);
		}
		annotation_site site;
		site.text = std::string(m_src.substr(begin, end - begin));
		site.line = line;
		try {
			site.ast = parse_annotation(site.text);
		} catch(const syntax_error& e) {
			throw syntax_error(std::string("bad annotation: ") + e.what(), line);
		}
		if(evaluate_args && static_cast<size_t>(argc) != site.ast.args.size() + site.ast.kwargs.size()) {
			throw syntax_error("EXECUTION arguments do not match its annotation", line);
		}
		m_prog.annotations.push_back(std::move(site));
		emit(opcode::call, intern(head), argc, static_cast<int32_t>(m_prog.annotations.size() - 1), line);
	}

	void link(code_buffer& main) {
		m_prog.main_end = static_cast<int32_t>(main.code.size());
		m_prog.code = std::move(main.code);
		m_prog.lines = std::move(main.lines);
		for(auto& [body, index] : m_functions) {
			int32_t base = static_cast<int32_t>(m_prog.code.size());
			m_prog.functions[index].entry = base;
			for(instr& in : body.code) {
				if(is_jump(in.op)) {
					in.a += base;
				}
				m_prog.code.push_back(in);
			}
			m_prog.lines.insert(m_prog.lines.end(), body.lines.begin(), body.lines.end());
		}
		for(const auto& [name, line] : m_called) {
			if(!find_builtin(name) && !m_prog.find_function(name)) {
				throw undefined_name_error("undefined function '" + name + "'", line);
			}
		}
	}
};

}  // namespace

const char* to_string(opcode op) {
	switch(op) {
	case opcode::push_const: return "PUSH_CONST";
	case opcode::push_unit: return "PUSH_UNIT";
	case opcode::load_var: return "LOAD_VAR";
	case opcode::store_var: return "STORE_VAR";
	case opcode::load_index: return "LOAD_INDEX";
	case opcode::store_index_var: return "STORE_INDEX";
	case opcode::load_attr: return "LOAD_ATTR";
	case opcode::binop: return "BINOP";
	case opcode::unop: return "UNOP";
	case opcode::make_list: return "MAKE_LIST";
	case opcode::make_map: return "MAKE_MAP";
	case opcode::jump: return "JUMP";
	case opcode::jump_if_false: return "JUMP_IF_FALSE";
	case opcode::jump_if_false_keep: return "JUMP_IF_FALSE_OR_POP";
	case opcode::jump_if_true_keep: return "JUMP_IF_TRUE_OR_POP";
	case opcode::call: return "CALL";
	case opcode::call_method: return "CALL_METHOD";
	case opcode::ret: return "RETURN";
	case opcode::pop: return "POP";
	}
	return "?";
}

std::optional<int32_t> program::find_function(std::string_view name) const {
	for(size_t i = 0; i < functions.size(); ++i) {
		if(functions[i].name == name) {
			return static_cast<int32_t>(i);
		}
	}
	return std::nullopt;
}

std::optional<int32_t> program::find_name(std::string_view name) const {
	for(size_t i = 0; i < names.size(); ++i) {
		if(names[i] == name) {
			return static_cast<int32_t>(i);
		}
	}
	return std::nullopt;
}

std::string program::serialize() const {
	std::ostringstream out;
	out << "consts " << constants.size() << '\n';
	for(const auto& c : constants) {
		out << static_cast<int>(c.type) << ' ' << c.num << ' ' << c.text.size() << ':' << c.text << '\n';
	}
	out << "names " << names.size() << '\n';
	for(const auto& n : names) {
		out << n << '\n';
	}
	out << "functions " << functions.size() << '\n';
	for(const auto& f : functions) {
		out << f.name << ' ' << f.entry << ' ' << f.params.size();
		for(auto p : f.params) {
			out << ' ' << p;
		}
		out << '\n';
	}
	out << "annotations " << annotations.size() << '\n';
	for(const auto& a : annotations) {
		out << a.line << ' ' << a.text << '\n';
	}
	out << "code " << code.size() << ' ' << main_end << '\n';
	for(size_t i = 0; i < code.size(); ++i) {
		const instr& in = code[i];
		out << static_cast<int>(in.op) << ' ' << in.a << ' ' << in.b << ' ' << in.c << ' ' << lines[i] << '\n';
	}
	return out.str();
}

std::string program::disassemble() const {
	std::ostringstream out;
	for(size_t i = 0; i < code.size(); ++i) {
		if(static_cast<int32_t>(i) == main_end) {
			out << "-- functions --\n";
		}
		const instr& in = code[i];
		out << i << "\t" << to_string(in.op);
		switch(in.op) {
		case opcode::push_const: {
			const constant& c = constants[in.a];
			out << ' ' << (c.type == constant::kind::string ? "'" + c.text + "'" : std::to_string(c.num));
			break;
		}
		case opcode::load_var:
		case opcode::store_var:
		case opcode::store_index_var:
		case opcode::load_attr: out << ' ' << names[in.a]; break;
		case opcode::call: out << ' ' << names[in.a] << ' ' << in.b; break;
		case opcode::call_method: out << ' ' << names[in.a] << ' ' << in.c << ' ' << in.b; break;
		case opcode::push_unit:
		case opcode::load_index:
		case opcode::ret:
		case opcode::pop: break;
		default: out << ' ' << in.a;
		}
		out << '\n';
	}
	return out.str();
}

program compile(std::string_view source) {
	std::vector<token> tokens = lexer(source).run();
	return compiler(source, std::move(tokens)).run();
}

const std::vector<builtin_info>& builtin_table() {
	static const std::vector<builtin_info> table = {
	        {"open", 1, 2, "openat"},     {"read", 1, 2, "read"},     {"write", 2, 2, "write"},
	        {"close", 1, 1, "close"},     {"connect", 1, 1, "connect"}, {"send", 2, 2, "send"},
	        {"recv", 1, 2, "recv"},       {"exec", 1, 2, "execve"},   {"stat", 1, 1, "stat"},
	        {"access", 1, 1, "access"},   {"chmod", 2, 2, "fchmod"},  {"unlink", 1, 1, "unlink"},
	        {"mkdir", 1, 2, "mkdir"},     {"urlparse", 1, 1, nullptr}, {"hash", 1, 1, nullptr},
	        {"print", 0, 8, nullptr},     {"log", 1, 1, nullptr},     {"input", 0, 0, nullptr},
	        {"len", 1, 1, nullptr},       {"str", 1, 1, nullptr},     {"int", 1, 1, nullptr},
	        {"path_join", 1, 8, nullptr},
	};
	return table;
}

std::optional<int> find_builtin(std::string_view name) {
	const auto& table = builtin_table();
	for(size_t i = 0; i < table.size(); ++i) {
		if(name == table[i].name) {
			return static_cast<int>(i);
		}
	}
	return std::nullopt;
}

}  // namespace anota
