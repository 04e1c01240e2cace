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

#include <anota/digest.hpp>
#include <anota/error.hpp>
#include <anota/syscall_monitor.hpp>
#include <anota/taint.hpp>
#include <anota/timing.hpp>
#include <anota/vm.hpp>
#include <anota/watch.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <unordered_set>

namespace anota {

const char* to_string(escalation_mode m) {
	switch(m) {
	case escalation_mode::trap: return "trap";
	case escalation_mode::exit: return "exit";
	case escalation_mode::collect: return "collect";
	}
	return "?";
}

const char* to_string(exec_status s) {
	switch(s) {
	case exec_status::clean: return "Clean";
	case exec_status::violation: return "Violation";
	case exec_status::script_error: return "ScriptError";
	case exec_status::timeout: return "Timeout";
	}
	return "?";
}

std::optional<escalation_mode> escalation_from_string(std::string_view s) {
	if(s == "trap") {
		return escalation_mode::trap;
	}
	if(s == "exit") {
		return escalation_mode::exit;
	}
	if(s == "collect") {
		return escalation_mode::collect;
	}
	return std::nullopt;
}

namespace {

// Unwinds the interpreter after an escalated violation.
struct halt {};
struct cost_exceeded {};

constexpr int64_t k_enoent = -2;
constexpr int64_t k_ebadf = -9;
constexpr int64_t k_eexist = -17;
constexpr int64_t k_eisdir = -21;

value unbound() {
	value v;
	v.kind = value_kind::unbound;
	return v;
}

struct vfile {
	std::string data;
	taint_mask taint = 0;
};

struct open_file {
	bool socket = false;
	std::string path;
	std::string host;
	size_t pos = 0;
};

struct frame {
	int32_t func = -1;
	uint64_t id = 0;
	std::vector<value> locals;
	int32_t return_pc = 0;
	size_t stack_base = 0;
	bool timed = false;
	uint64_t timing_start = 0;
	taint_mask return_label = 0;
	taint_mask sanitized = 0;
};

struct parsed_url {
	std::string scheme;
	std::string host;
	std::optional<int64_t> port;
	std::string path;
};

std::string lower(std::string s) {
	for(char& c : s) {
		c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	}
	return s;
}

std::optional<parsed_url> split_url(std::string_view url) {
	parsed_url out;
	size_t sep = url.find("://");
	std::string_view rest = url;
	if(sep != std::string_view::npos) {
		std::string_view scheme = url.substr(0, sep);
		bool valid = !scheme.empty() && std::isalpha(static_cast<unsigned char>(scheme[0]));
		for(char c : scheme) {
			valid = valid && (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.');
		}
		if(!valid) {
			return std::nullopt;
		}
		out.scheme = lower(std::string(scheme));
		rest = url.substr(sep + 3);
	} else {
		return std::nullopt;
	}
	size_t end = rest.find_first_of("/?#");
	std::string_view netloc = rest.substr(0, end);
	out.path = end == std::string_view::npos ? "" : std::string(rest.substr(end));
	if(size_t at = netloc.rfind('@'); at != std::string_view::npos) {
		netloc = netloc.substr(at + 1);
	}
	size_t colon = netloc.rfind(':');
	if(colon != std::string_view::npos) {
		std::string_view p = netloc.substr(colon + 1);
		int64_t port = 0;
		auto r = std::from_chars(p.data(), p.data() + p.size(), port);
		if(!p.empty() && r.ec == std::errc() && r.ptr == p.data() + p.size()) {
			out.port = port;
		}
		netloc = netloc.substr(0, colon);
	}
	out.host = lower(std::string(netloc));
	return out;
}

int64_t default_port(const std::string& scheme) {
	if(scheme == "http") {
		return 80;
	}
	if(scheme == "https") {
		return 443;
	}
	if(scheme == "ftp") {
		return 21;
	}
	return 0;
}

std::string fnv1a_hex(std::string_view s) {
	uint64_t h = 1469598103934665603ULL;
	for(unsigned char c : s) {
		h ^= c;
		h *= 1099511628211ULL;
	}
	static const char* hex = "0123456789abcdef";
	std::string out(16, '0');
	for(int i = 15; i >= 0; --i) {
		out[static_cast<size_t>(i)] = hex[h & 0xf];
		h >>= 4;
	}
	return out;
}

int64_t floor_div(int64_t a, int64_t b) {
	int64_t q = a / b;
	if((a % b != 0) && ((a < 0) != (b < 0))) {
		--q;
	}
	return q;
}

int64_t floor_mod(int64_t a, int64_t b) {
	int64_t r = a % b;
	if(r != 0 && ((r < 0) != (b < 0))) {
		r += b;
	}
	return r;
}

bool is_numeric(const value& v) {
	return v.kind == value_kind::integer || v.kind == value_kind::boolean;
}

class machine {
public:
	machine(const program& p, std::string_view input, const exec_config& cfg):
	        m_prog(p), m_input(input), m_cfg(cfg), m_sysmon(m_store) {
		m_globals.assign(p.names.size(), unbound());
		for(const auto& c : p.constants) {
			switch(c.type) {
			case constant::kind::integer: m_consts.push_back(value::integer(c.num)); break;
			case constant::kind::boolean: m_consts.push_back(value::boolean(c.num != 0)); break;
			case constant::kind::string: m_consts.push_back(value::string(c.text)); break;
			}
		}
		for(const auto& [path, content] : cfg.vfs) {
			add_file(normalize_path(path), content);
		}
		m_timing_targets.insert(cfg.timing_targets.begin(), cfg.timing_targets.end());
	}

	exec_result run() {
		exec_result r;
		r.input_digest = digest();
		frame main;
		m_frames.push_back(std::move(main));
		try {
			if(m_cfg.monitors && m_cfg.bench == bench_mode::taint_all) {
				install_taint_all();
			}
			open_log();
			loop();
			r.status = exec_status::clean;
		} catch(const halt&) {
			r.status = exec_status::violation;
		} catch(const cost_exceeded&) {
			r.status = exec_status::timeout;
			r.error = "cost limit of " + std::to_string(m_cfg.cost_limit) + " instructions exceeded";
			r.error_line = line();
		} catch(const script_error& e) {
			r.status = exec_status::script_error;
			r.error = e.what();
			r.error_line = e.line() ? e.line() : line();
		}
		if(!m_violations.empty()) {
			r.status = exec_status::violation;
		}
		r.violations = std::move(m_violations);
		r.coverage.reserve(m_edges.size());
		for(uint64_t e : m_edges) {
			r.coverage.emplace_back(static_cast<int32_t>(e >> 32), static_cast<int32_t>(e & 0xffffffffu));
		}
		std::sort(r.coverage.begin(), r.coverage.end());
		r.cost = m_cost;
		r.output = std::move(m_output);
		r.trace = std::move(m_trace);
		r.timing = std::move(m_samples);
		r.diagnostics = m_sysmon.diagnostics();
		r.policies = m_store.policies();
		return r;
	}

private:
	const program& m_prog;
	std::string m_input;
	const exec_config& m_cfg;
	policy_store m_store;
	syscall_monitor m_sysmon;
	taint_tracker m_taint;
	watch_list m_watch;
	std::vector<value> m_consts;
	std::vector<value> m_globals;
	std::vector<frame> m_frames;
	std::vector<value> m_stack;
	int32_t m_pc = 0;
	uint64_t m_cost = 0;
	uint64_t m_next_frame = 1;
	uint64_t m_seq = 0;
	uint64_t m_tick = 0;
	std::unordered_set<uint64_t> m_edges;
	std::vector<violation> m_violations;
	std::string m_output;
	std::vector<syscall_event> m_trace;
	size_t m_trace_bytes = 0;
	std::vector<timing_sample> m_samples;
	std::map<std::string, vfile> m_files;
	std::set<std::string> m_dirs{"/"};
	std::map<int64_t, open_file> m_fds;
	int64_t m_next_fd = k_log_fd + 1;
	std::map<int32_t, std::vector<uint32_t>> m_site_policies;
	std::set<std::string> m_timing_targets;
	std::map<std::string, uint32_t> m_con_targets;
	std::string m_digest;
	taint_mask m_bench_label = 0;

	// Benchmark mode: one live label stamped on every stored value, with a
	// sink no script calls, so propagation and call checks do full work.
	void install_taint_all() {
		policy_spec spec;
		spec.domain = policy_domain::data_flow;
		spec.dataflow = dataflow_spec{"*", {}, {"<bench-sink>"}};
		uint32_t id = m_store.install(spec, "TAINT(*)");
		m_bench_label = m_taint.label_for(id, *spec.dataflow, false);
	}

	const std::string& digest() {
		if(m_digest.empty()) {
			m_digest = sha256_hex(m_input);
		}
		return m_digest;
	}

	int line() const {
		if(m_pc >= 0 && static_cast<size_t>(m_pc) < m_prog.lines.size()) {
			return m_prog.lines[static_cast<size_t>(m_pc)];
		}
		return m_prog.lines.empty() ? 0 : m_prog.lines.back();
	}

	[[noreturn]] void fail(const std::string& msg) const { throw script_error(msg, line()); }

	void edge(int32_t from, int32_t to) {
		m_edges.insert((static_cast<uint64_t>(static_cast<uint32_t>(from)) << 32) | static_cast<uint32_t>(to));
	}

	value pop() {
		value v = std::move(m_stack.back());
		m_stack.pop_back();
		return v;
	}

	void add_file(const std::string& path, std::string content, taint_mask t = 0) {
		m_files[path] = vfile{std::move(content), t};
		std::string dir = path;
		while(true) {
			size_t slash = dir.rfind('/');
			if(slash == std::string::npos || slash == 0) {
				break;
			}
			dir.resize(slash);
			m_dirs.insert(dir);
		}
	}

	bool exists(const std::string& path) const { return m_files.count(path) || m_dirs.count(path); }

	// --- violations -------------------------------------------------------

	void report(violation_kind kind, uint32_t policy_id, std::string message, nlohmann::ordered_json event) {
		violation v;
		v.policy_id = policy_id;
		if(const policy* p = m_store.find(policy_id)) {
			v.policy_text = p->text;
		}
		v.kind = kind;
		v.site = {line(), m_pc};
		v.event = std::move(event);
		v.message = std::move(message);
		v.input_digest = digest();
		m_violations.push_back(std::move(v));
		if(m_cfg.escalation != escalation_mode::collect) {
			throw halt{};
		}
	}

	// --- name resolution --------------------------------------------------

	bool in_function() const { return m_frames.size() > 1; }

	// Binding slot for a name, or nullptr; scope receives 0 or the frame id.
	value* binding(int32_t name, uint64_t& scope) {
		if(in_function()) {
			frame& f = m_frames.back();
			if(f.locals[static_cast<size_t>(name)].is_bound()) {
				scope = f.id;
				return &f.locals[static_cast<size_t>(name)];
			}
		}
		if(m_globals[static_cast<size_t>(name)].is_bound()) {
			scope = 0;
			return &m_globals[static_cast<size_t>(name)];
		}
		return nullptr;
	}

	value* binding(const std::string& name, uint64_t& scope) {
		auto idx = m_prog.find_name(name);
		return idx ? binding(*idx, scope) : nullptr;
	}

	void check_access(const std::string& name, access_kind kind, uint64_t scope) {
		if(!m_cfg.monitors || m_watch.empty() || !m_watch.watches(name)) {
			return;
		}
		access_decision d = m_watch.on_access(m_store, name, kind, scope);
		if(d.violation) {
			nlohmann::ordered_json ev;
			ev["target"] = name;
			ev["access"] = to_string(kind);
			ev["scope"] = scope == 0 ? std::string("global") : "frame " + std::to_string(scope);
			report(violation_kind::object_access, d.policy_id, d.reason, std::move(ev));
		}
	}

	value load(int32_t name) {
		uint64_t scope = 0;
		if(value* v = binding(name, scope)) {
			check_access(m_prog.names[static_cast<size_t>(name)], access_kind::read, scope);
			return *v;
		}
		const std::string& n = m_prog.names[static_cast<size_t>(name)];
		if(auto f = m_prog.find_function(n)) {
			check_access(n, access_kind::read, 0);
			return value::func(*f);
		}
		if(auto b = find_builtin(n)) {
			return value::func(-(static_cast<int64_t>(*b) + 1));
		}
		fail("name '" + n + "' is not defined");
	}

	value& store_slot(int32_t name, uint64_t& scope) {
		if(in_function()) {
			scope = m_frames.back().id;
			return m_frames.back().locals[static_cast<size_t>(name)];
		}
		scope = 0;
		return m_globals[static_cast<size_t>(name)];
	}

	// Existing container binding for an in-place mutation.
	value& mutable_binding(int32_t name, uint64_t& scope) {
		value* v = binding(name, scope);
		if(!v) {
			fail("name '" + m_prog.names[static_cast<size_t>(name)] + "' is not defined");
		}
		return *v;
	}

	// --- syscalls -----------------------------------------------------------

	void record(const syscall_event& ev) {
		if(m_cfg.bench == bench_mode::syscall_log_all) {
			m_trace_bytes += to_trace_line(ev).size();
			m_trace.push_back(ev);
		} else if(m_cfg.record_trace) {
			m_trace.push_back(ev);
		}
	}

	void handle_findings(std::vector<monitor_finding> findings) {
		for(auto& f : findings) {
			report(f.kind, f.policy_id, std::move(f.message), std::move(f.event));
		}
	}

	template<class Effect>
	int64_t syscall(const char* name, std::vector<event_arg> args, Effect&& effect) {
		if(!m_cfg.monitors) {
			return effect();
		}
		syscall_event ev;
		ev.seq = ++m_seq;
		ev.phase = event_phase::enter;
		ev.name = name;
		ev.args = std::move(args);
		ev.pid = k_vm_pid;
		ev.ts = static_cast<double>(++m_tick);
		record(ev);
		handle_findings(m_sysmon.observe(ev));
		int64_t ret = effect();
		syscall_event ex;
		ex.seq = ev.seq;
		ex.phase = event_phase::exit;
		ex.name = name;
		ex.ret = ret;
		ex.pid = k_vm_pid;
		ex.ts = static_cast<double>(++m_tick);
		record(ex);
		handle_findings(m_sysmon.observe(ex));
		return ret;
	}

	static event_arg arg(arg_kind k, std::string s) { return event_arg{k, std::move(s)}; }
	static event_arg arg(arg_kind k, int64_t n) { return event_arg{k, n}; }

	void open_log() {
		if(!m_files.count(k_log_path)) {
			add_file(k_log_path, "");
		}
		syscall("openat", {arg(arg_kind::path, std::string(k_log_path)), arg(arg_kind::mode, std::string("a"))},
		        [&]() -> int64_t {
			        m_fds[k_log_fd] = open_file{false, k_log_path, {}, 0};
			        return k_log_fd;
		        });
	}

	// --- builtins -------------------------------------------------------------

	const std::string& want_str(const value& v, const char* fn) const {
		if(v.kind != value_kind::string) {
			fail(std::string(fn) + "() expects a string, got " + to_string(v.kind));
		}
		return v.str();
	}

	int64_t want_int(const value& v, const char* fn) const {
		if(!is_numeric(v)) {
			fail(std::string(fn) + "() expects an integer, got " + to_string(v.kind));
		}
		return v.num;
	}

	int64_t want_fd(const value& v, const char* fn) const {
		if(v.kind != value_kind::fd && !is_numeric(v)) {
			fail(std::string(fn) + "() expects a file descriptor, got " + to_string(v.kind));
		}
		return v.num;
	}

	taint_mask live_taint(const value& v) {
		return m_cfg.monitors ? deep_taint(v) & m_taint.active(m_store) : 0;
	}

	value call_builtin(int id, std::vector<value>& args) {
		const builtin_info& info = builtin_table()[static_cast<size_t>(id)];
		int argc = static_cast<int>(args.size());
		if(argc < info.min_args || argc > info.max_args) {
			fail(std::string(info.name) + "() takes " + std::to_string(info.min_args) +
			     (info.max_args != info.min_args ? "-" + std::to_string(info.max_args) : std::string()) +
			     " arguments, got " + std::to_string(argc));
		}
		std::string_view name = info.name;
		taint_mask in_taint = 0;
		for(const auto& a : args) {
			in_taint |= deep_taint(a);
		}

		if(name == "open") {
			const std::string& path = want_str(args[0], "open");
			std::string mode = argc > 1 ? want_str(args[1], "open") : "r";
			std::string norm = normalize_path(path);
			int64_t ret = syscall("openat", {arg(arg_kind::path, path), arg(arg_kind::mode, mode)}, [&]() -> int64_t {
				if(m_dirs.count(norm)) {
					return k_eisdir;
				}
				bool have = m_files.count(norm) > 0;
				if(mode.find('x') != std::string::npos && have) {
					return k_eexist;
				}
				if(mode.find_first_of("wax") != std::string::npos) {
					if(!have || mode.find('w') != std::string::npos) {
						add_file(norm, "");
					}
				} else if(!have) {
					return k_enoent;
				}
				int64_t fd = m_next_fd++;
				m_fds[fd] = open_file{false, norm, {}, 0};
				return fd;
			});
			return ret >= 0 ? value::fd(ret) : value::integer(ret);
		}
		if(name == "read" || name == "recv") {
			int64_t fd = want_fd(args[0], info.name);
			int64_t want = argc > 1 ? want_int(args[1], info.name) : 65536;
			std::string data;
			taint_mask t = 0;
			int64_t ret = syscall(info.syscall, {arg(arg_kind::fd, fd), arg(arg_kind::len, want)}, [&]() -> int64_t {
				auto it = m_fds.find(fd);
				if(it == m_fds.end()) {
					return k_ebadf;
				}
				open_file& f = it->second;
				if(f.socket) {
					data = "<html>" + f.host + "</html>";
				} else {
					const vfile& file = m_files[f.path];
					size_t n = want < 0 ? std::string::npos : static_cast<size_t>(want);
					if(f.pos < file.data.size()) {
						data = file.data.substr(f.pos, n);
					}
					f.pos += data.size();
					t = file.taint;
				}
				if(want >= 0 && data.size() > static_cast<size_t>(want)) {
					data.resize(static_cast<size_t>(want));
				}
				return static_cast<int64_t>(data.size());
			});
			return ret >= 0 ? value::string(std::move(data), t) : value::integer(ret);
		}
		if(name == "write" || name == "send") {
			int64_t fd = want_fd(args[0], info.name);
			std::string data = args[1].kind == value_kind::string ? args[1].str() : render(args[1]);
			return value::integer(write_fd(info.syscall, fd, data, deep_taint(args[1])));
		}
		if(name == "close") {
			int64_t fd = want_fd(args[0], "close");
			return value::integer(syscall("close", {arg(arg_kind::fd, fd)}, [&]() -> int64_t {
				return m_fds.erase(fd) ? 0 : k_ebadf;
			}));
		}
		if(name == "connect") {
			std::string url = want_str(args[0], "connect");
			size_t start = 0;
			while(start < url.size() && std::isspace(static_cast<unsigned char>(url[start]))) {
				++start;
			}
			auto parsed = split_url(std::string_view(url).substr(start));
			if(!parsed) {
				fail("connect() cannot resolve '" + url + "'");
			}
			int64_t port = parsed->port.value_or(default_port(parsed->scheme));
			int64_t ret = syscall("connect",
			                      {arg(arg_kind::scheme, parsed->scheme), arg(arg_kind::host, parsed->host),
			                       arg(arg_kind::port, port)},
			                      [&]() -> int64_t {
				                      int64_t fd = m_next_fd++;
				                      m_fds[fd] = open_file{true, {}, parsed->host, 0};
				                      return fd;
			                      });
			return value::fd(ret);
		}
		if(name == "exec") {
			const std::string& path = want_str(args[0], "exec");
			std::string argv;
			if(argc > 1) {
				if(args[1].kind == value_kind::list) {
					for(const auto& a : args[1].items()) {
						if(!argv.empty()) {
							argv.push_back(' ');
						}
						argv += render(a);
					}
				} else {
					argv = render(args[1]);
				}
			}
			return value::integer(syscall("execve", {arg(arg_kind::path, path), arg(arg_kind::argv, argv)},
			                              [&]() -> int64_t { return exists(normalize_path(path)) ? 0 : k_enoent; }));
		}
		if(name == "stat" || name == "access") {
			const std::string& path = want_str(args[0], info.name);
			std::string norm = normalize_path(path);
			return value::integer(syscall(info.syscall, {arg(arg_kind::path, path)},
			                              [&]() -> int64_t { return exists(norm) ? 0 : k_enoent; }));
		}
		if(name == "chmod") {
			const std::string& path = want_str(args[0], "chmod");
			int64_t mode = want_int(args[1], "chmod");
			std::string norm = normalize_path(path);
			return value::integer(syscall("fchmod", {arg(arg_kind::path, path), arg(arg_kind::mode, mode)},
			                              [&]() -> int64_t { return exists(norm) ? 0 : k_enoent; }));
		}
		if(name == "unlink") {
			const std::string& path = want_str(args[0], "unlink");
			std::string norm = normalize_path(path);
			return value::integer(syscall("unlink", {arg(arg_kind::path, path)},
			                              [&]() -> int64_t { return m_files.erase(norm) ? 0 : k_enoent; }));
		}
		if(name == "mkdir") {
			const std::string& path = want_str(args[0], "mkdir");
			int64_t mode = argc > 1 ? want_int(args[1], "mkdir") : 511;
			std::string norm = normalize_path(path);
			return value::integer(syscall("mkdir", {arg(arg_kind::path, path), arg(arg_kind::mode, mode)},
			                              [&]() -> int64_t {
				                              if(exists(norm)) {
					                              return k_eexist;
				                              }
				                              m_dirs.insert(norm);
				                              return 0;
			                              }));
		}
		if(name == "urlparse") {
			const std::string& url = want_str(args[0], "urlparse");
			value_map fields;
			auto parsed = url.empty() || std::isspace(static_cast<unsigned char>(url[0])) ? std::nullopt
			                                                                             : split_url(url);
			if(parsed) {
				fields["scheme"] = value::string(parsed->scheme, in_taint);
				fields["hostname"] = value::string(parsed->host, in_taint);
				fields["port"] = parsed->port ? value::integer(*parsed->port, in_taint) : value::unit();
				fields["path"] = value::string(parsed->path, in_taint);
			} else {
				// Mirrors urlsplit on input with leading whitespace: nothing is recognized.
				fields["scheme"] = value::string("", in_taint);
				fields["hostname"] = value::string("", in_taint);
				fields["port"] = value::unit();
				fields["path"] = value::string(url, in_taint);
			}
			return value::map(std::move(fields), in_taint);
		}
		if(name == "hash") {
			const value& v = args[0];
			return value::string(fnv1a_hex(v.kind == value_kind::string ? v.str() : render(v)), in_taint);
		}
		if(name == "print") {
			for(int i = 0; i < argc; ++i) {
				if(i) {
					m_output.push_back(' ');
				}
				m_output += render(args[static_cast<size_t>(i)]);
			}
			m_output.push_back('\n');
			return value::unit();
		}
		if(name == "log") {
			std::string msg = args[0].kind == value_kind::string ? args[0].str() : render(args[0]);
			msg.push_back('\n');
			write_fd("write", k_log_fd, msg, in_taint);
			return value::unit();
		}
		if(name == "input") {
			return value::string(m_input);
		}
		if(name == "len") {
			const value& v = args[0];
			switch(v.kind) {
			case value_kind::string: return value::integer(static_cast<int64_t>(v.str().size()), v.taint);
			case value_kind::list: return value::integer(static_cast<int64_t>(v.items().size()), v.taint);
			case value_kind::map: return value::integer(static_cast<int64_t>(v.fields().size()), v.taint);
			default: fail(std::string("len() of ") + to_string(v.kind));
			}
		}
		if(name == "str") {
			return value::string(render(args[0]), in_taint);
		}
		if(name == "int") {
			const value& v = args[0];
			if(is_numeric(v)) {
				return value::integer(v.num, v.taint);
			}
			const std::string& s = want_str(v, "int");
			size_t b = s.find_first_not_of(" \t\n");
			size_t e = s.find_last_not_of(" \t\n");
			int64_t out = 0;
			if(b == std::string::npos) {
				fail("int() of an empty string");
			}
			const char* first = s.data() + b;
			const char* last = s.data() + e + 1;
			if(*first == '+') {
				++first;
			}
			auto r = std::from_chars(first, last, out);
			if(r.ec != std::errc() || r.ptr != last) {
				fail("int() cannot parse '" + s + "'");
			}
			return value::integer(out, v.taint);
		}
		if(name == "path_join") {
			std::string out;
			for(const auto& a : args) {
				const std::string& part = want_str(a, "path_join");
				if(!part.empty() && part[0] == '/') {
					out = part;
				} else if(out.empty() || out.back() == '/') {
					out += part;
				} else {
					out += "/" + part;
				}
			}
			return value::string(std::move(out), in_taint);
		}
		fail("builtin '" + std::string(name) + "' is not implemented");
	}

	int64_t write_fd(const char* sys, int64_t fd, const std::string& data, taint_mask data_taint) {
		if(m_cfg.monitors) {
			taint_mask live = data_taint & m_taint.active(m_store);
			if(live) {
				m_sysmon.fds(k_vm_pid).mark_sensitive(fd, m_taint.first_policy(live));
			}
		}
		return syscall(sys, {arg(arg_kind::fd, fd), arg(arg_kind::len, static_cast<int64_t>(data.size()))},
		               [&]() -> int64_t {
			               auto it = m_fds.find(fd);
			               if(it == m_fds.end()) {
				               return k_ebadf;
			               }
			               if(!it->second.socket) {
				               vfile& f = m_files[it->second.path];
				               f.data += data;
				               f.taint |= data_taint;
			               }
			               return static_cast<int64_t>(data.size());
		               });
	}

	// --- annotations ----------------------------------------------------------

	void bind_names(arg_value& a) {
		switch(a.type) {
		case arg_value::kind::name: {
			uint64_t scope = 0;
			value* v = binding(a.text, scope);
			if(!v) {
				return;
			}
			if(v->kind == value_kind::string) {
				a = arg_value::make_string(v->str());
			} else if(is_numeric(*v)) {
				a = arg_value::make_integer(v->num);
			} else if(v->kind == value_kind::list) {
				std::vector<arg_value> items;
				for(const auto& item : v->items()) {
					if(item.kind == value_kind::string) {
						items.push_back(arg_value::make_string(item.str()));
					} else if(is_numeric(item)) {
						items.push_back(arg_value::make_integer(item.num));
					} else {
						return;
					}
				}
				a = arg_value::make_list(std::move(items));
			}
			return;
		}
		case arg_value::kind::list:
			for(auto& item : a.items) {
				bind_names(item);
			}
			return;
		case arg_value::kind::annotation:
			if(a.nested && !a.nested->head.empty() && a.nested->head[0] == "SYSCALL") {
				annotation_ast copy = *a.nested;
				bind_syscall_names(copy);
				a.nested = std::make_shared<const annotation_ast>(std::move(copy));
			} else if(a.nested && !a.nested->head.empty() && a.nested->head[0] == "CLEAR") {
				annotation_ast copy = *a.nested;
				for(auto& x : copy.args) {
					if(x.type == arg_value::kind::annotation) {
						bind_names(x);
					}
				}
				a.nested = std::make_shared<const annotation_ast>(std::move(copy));
			}
			return;
		default: return;
		}
	}

	void bind_syscall_names(annotation_ast& ast) {
		for(auto& a : ast.args) {
			bind_names(a);
		}
		for(auto& [_, a] : ast.kwargs) {
			bind_names(a);
		}
	}

	// Installs spec unless this site already owns an enabled, identical policy.
	uint32_t install_once(int32_t site, const policy_spec& spec, const std::string& text) {
		auto& ids = m_site_policies[site];
		for(uint32_t id : ids) {
			const policy* p = m_store.find(id);
			if(p && p->enabled && p->spec.same_as(spec)) {
				return id;
			}
		}
		uint32_t id = m_store.install(spec, text);
		ids.push_back(id);
		return id;
	}

	uint64_t watch_scope(const std::string& target) {
		if(auto idx = m_prog.find_name(target)) {
			if(in_function() && m_frames.back().locals[static_cast<size_t>(*idx)].is_bound()) {
				return m_frames.back().id;
			}
			if(m_globals[static_cast<size_t>(*idx)].is_bound()) {
				return 0;
			}
		}
		if(m_prog.find_function(target)) {
			return 0;
		}
		return m_frames.back().id;
	}

	void annotation(int32_t site_index, const std::vector<value>& args) {
		if(!m_cfg.monitors) {
			return;
		}
		const annotation_site& site = m_prog.annotations[static_cast<size_t>(site_index)];
		annotation_ast ast = site.ast;
		if(ast.head[0] == "SYSCALL") {
			bind_syscall_names(ast);
		} else if(ast.head[0] == "CLEAR") {
			for(auto& a : ast.args) {
				bind_names(a);
			}
		}
		policy_spec spec;
		try {
			spec = lower_to_policy(ast, {site.line, m_pc});
		} catch(const lowering_error& e) {
			throw script_error(e.what(), site.line);
		}
		if(spec.domain == policy_domain::clear) {
			m_store.clear(*spec.clear);
			return;
		}
		std::string text = to_string(ast);
		switch(spec.domain) {
		case policy_domain::syscall: install_once(site_index, spec, text); return;
		case policy_domain::data_flow: {
			uint32_t id = install_once(site_index, spec, text);
			const std::string& target = spec.dataflow->target;
			uint64_t scope = 0;
			if(value* v = binding(target, scope)) {
				v->taint |= m_taint.label_for(id, *spec.dataflow, false);
			} else if(m_prog.find_function(target) || find_builtin(target)) {
				m_taint.label_for(id, *spec.dataflow, true);
			} else {
				throw script_error("TAINT target '" + target + "' is not bound", site.line);
			}
			return;
		}
		case policy_domain::object_access: {
			uint32_t id = install_once(site_index, spec, text);
			uint64_t scope = watch_scope(spec.watch->target);
			for(const auto& e : m_watch.entries()) {
				if(e.policy_id == id && e.scope == scope) {
					return;
				}
			}
			m_watch.add({id, spec.watch->target, scope, spec.mode, spec.watch->perms});
			return;
		}
		case policy_domain::timing_con: {
			uint32_t id = install_once(site_index, spec, text);
			m_con_targets[spec.watch->target] = id;
			return;
		}
		case policy_domain::execution: {
			uint32_t id = install_once(site_index, spec, text);
			std::optional<bool> cond;
			if(!args.empty()) {
				cond = args[0].truthy();
			}
			if(execution_blocked(cond)) {
				nlohmann::ordered_json ev;
				ev["condition"] = spec.exec_condition ? nlohmann::ordered_json(*spec.exec_condition)
				                                      : nlohmann::ordered_json(nullptr);
				if(!args.empty()) {
					ev["value"] = render(args[0], true);
				}
				report(violation_kind::execution, id,
				       spec.exec_condition ? "blocked execution: condition \"" + *spec.exec_condition + "\" holds"
				                           : "blocked code reached",
				       std::move(ev));
			}
			return;
		}
		default: return;
		}
	}

	bool timing_target(const std::string& fn, const std::vector<value>& args) {
		if(m_timing_targets.count(fn)) {
			return true;
		}
		if(!m_cfg.monitors) {
			return false;
		}
		auto it = m_con_targets.find(fn);
		if(it != m_con_targets.end() && m_store.is_enabled(it->second)) {
			return true;
		}
		if(m_cfg.auto_target) {
			taint_mask live = m_taint.active(m_store);
			for(const auto& a : args) {
				if(deep_taint(a) & live) {
					return true;
				}
			}
		}
		return false;
	}

	// --- calls ------------------------------------------------------------------

	void call(const instr& in) {
		size_t argc = static_cast<size_t>(in.b);
		std::vector<value> args(std::make_move_iterator(m_stack.end() - static_cast<ptrdiff_t>(argc)),
		                        std::make_move_iterator(m_stack.end()));
		m_stack.resize(m_stack.size() - argc);
		if(in.c >= 0) {
			annotation(in.c, args);
			m_stack.push_back(value::unit());
			++m_pc;
			return;
		}
		const std::string& name = m_prog.names[static_cast<size_t>(in.a)];
		taint_mask sanitized = 0;
		taint_mask return_label = 0;
		if(m_cfg.monitors) {
			check_access(name, access_kind::execute, 0);
			if(!m_taint.labels().empty()) {
				call_check c = m_taint.check_call(m_store, name, args);
				if(c.sink_hits) {
					report_sinks(name, c.sink_hits);
				}
				sanitized = c.sanitized;
				return_label = m_taint.callable_mask(m_store, name);
			}
		}
		bool timed = (!m_timing_targets.empty() || !m_con_targets.empty() || m_cfg.auto_target) &&
		             timing_target(name, args);
		if(auto f = m_prog.find_function(name)) {
			const function_info& fi = m_prog.functions[static_cast<size_t>(*f)];
			if(fi.params.size() != argc) {
				fail(name + "() takes " + std::to_string(fi.params.size()) + " arguments, got " +
				     std::to_string(argc));
			}
			frame fr;
			fr.func = *f;
			fr.id = m_next_frame++;
			fr.locals.assign(m_prog.names.size(), unbound());
			for(size_t i = 0; i < argc; ++i) {
				fr.locals[static_cast<size_t>(fi.params[i])] = std::move(args[i]);
			}
			fr.return_pc = m_pc + 1;
			fr.stack_base = m_stack.size();
			fr.timed = timed;
			fr.timing_start = m_cost;
			fr.return_label = return_label;
			fr.sanitized = sanitized;
			if(m_frames.size() > 1000) {
				fail("maximum recursion depth exceeded");
			}
			m_frames.push_back(std::move(fr));
			edge(m_pc, fi.entry);
			m_pc = fi.entry;
			return;
		}
		auto b = find_builtin(name);
		if(!b) {
			fail("undefined function '" + name + "'");
		}
		uint64_t start = m_cost;
		value result = call_builtin(*b, args);
		result.taint = (result.taint & ~sanitized) | return_label;
		if(timed) {
			m_samples.push_back({name, m_cost - start + 1});
		}
		m_stack.push_back(std::move(result));
		++m_pc;
	}

	void report_sinks(const std::string& fn, taint_mask hits) {
		auto sinks = taint_tracker::sink_names(fn);
		while(hits) {
			int bit = std::countr_zero(hits);
			hits &= hits - 1;
			const taint_label& l = m_taint.label(static_cast<size_t>(bit));
			std::string sink(fn);
			for(auto s : sinks) {
				if(l.sinks.count(std::string(s))) {
					sink = std::string(s);
				}
			}
			nlohmann::ordered_json ev;
			ev["function"] = fn;
			ev["sink"] = sink;
			ev["source"] = l.source;
			report(violation_kind::dataflow_sink, l.policy_id,
			       "tainted value from '" + l.source + "' reaches sink '" + sink + "'", std::move(ev));
		}
	}

	void do_return() {
		value v = pop();
		frame& f = m_frames.back();
		v.taint = (v.taint & ~f.sanitized) | f.return_label;
		if(f.timed) {
			m_samples.push_back({m_prog.functions[static_cast<size_t>(f.func)].name, m_cost - f.timing_start});
		}
		m_stack.resize(f.stack_base);
		int32_t back = f.return_pc;
		edge(m_pc, back);
		m_frames.pop_back();
		m_stack.push_back(std::move(v));
		m_pc = back;
	}

	void call_method(const instr& in) {
		size_t argc = static_cast<size_t>(in.b);
		std::vector<value> args(std::make_move_iterator(m_stack.end() - static_cast<ptrdiff_t>(argc)),
		                        std::make_move_iterator(m_stack.end()));
		m_stack.resize(m_stack.size() - argc);
		uint64_t scope = 0;
		value& recv = mutable_binding(in.a, scope);
		const std::string& name = m_prog.names[static_cast<size_t>(in.a)];
		check_access(name, access_kind::write, scope);
		if(recv.kind != value_kind::list) {
			fail("'" + name + "' is not a list");
		}
		auto& items = recv.items();
		switch(static_cast<list_method>(in.c)) {
		case list_method::append:
			if(argc != 1) {
				fail("append() takes 1 argument");
			}
			recv.taint |= args[0].taint;
			items.push_back(std::move(args[0]));
			m_stack.push_back(value::unit());
			break;
		case list_method::pop: {
			if(argc > 1) {
				fail("pop() takes at most 1 argument");
			}
			if(items.empty()) {
				fail("pop from empty list");
			}
			int64_t idx = argc ? want_int(args[0], "pop") : -1;
			int64_t n = static_cast<int64_t>(items.size());
			if(idx < 0) {
				idx += n;
			}
			if(idx < 0 || idx >= n) {
				fail("pop index out of range");
			}
			value out = std::move(items[static_cast<size_t>(idx)]);
			items.erase(items.begin() + idx);
			out.taint |= recv.taint;
			m_stack.push_back(std::move(out));
			break;
		}
		case list_method::remove: {
			if(argc != 1) {
				fail("remove() takes 1 argument");
			}
			auto it = std::find_if(items.begin(), items.end(),
			                       [&](const value& x) { return values_equal(x, args[0]); });
			if(it == items.end()) {
				fail("list.remove(x): x not in list");
			}
			items.erase(it);
			m_stack.push_back(value::unit());
			break;
		}
		}
		++m_pc;
	}

	// --- data operations ---------------------------------------------------------

	value index(const value& c, const value& i) {
		taint_mask t = c.taint | i.taint;
		if(c.kind == value_kind::map) {
			if(i.kind != value_kind::string) {
				fail("map keys are strings");
			}
			auto it = c.fields().find(i.str());
			if(it == c.fields().end()) {
				fail("key '" + i.str() + "' not found");
			}
			value out = it->second;
			out.taint |= t;
			return out;
		}
		int64_t n = 0;
		if(c.kind == value_kind::list) {
			n = static_cast<int64_t>(c.items().size());
		} else if(c.kind == value_kind::string) {
			n = static_cast<int64_t>(c.str().size());
		} else {
			fail(std::string("cannot index ") + to_string(c.kind));
		}
		if(!is_numeric(i)) {
			fail("index must be an integer");
		}
		int64_t k = i.num < 0 ? i.num + n : i.num;
		if(k < 0 || k >= n) {
			fail("index out of range");
		}
		if(c.kind == value_kind::string) {
			return value::string(std::string(1, c.str()[static_cast<size_t>(k)]), t);
		}
		value out = c.items()[static_cast<size_t>(k)];
		out.taint |= t;
		return out;
	}

	void store_index(int32_t name) {
		value v = pop();
		value i = pop();
		uint64_t scope = 0;
		value& c = mutable_binding(name, scope);
		check_access(m_prog.names[static_cast<size_t>(name)], access_kind::write, scope);
		if(c.kind == value_kind::map) {
			if(i.kind != value_kind::string) {
				fail("map keys are strings");
			}
			c.taint |= v.taint | i.taint;
			c.fields()[i.str()] = std::move(v);
			return;
		}
		if(c.kind != value_kind::list) {
			fail(std::string("cannot assign into ") + to_string(c.kind));
		}
		if(!is_numeric(i)) {
			fail("index must be an integer");
		}
		int64_t n = static_cast<int64_t>(c.items().size());
		int64_t k = i.num < 0 ? i.num + n : i.num;
		if(k < 0 || k >= n) {
			fail("index out of range");
		}
		c.taint |= v.taint | i.taint;
		c.items()[static_cast<size_t>(k)] = std::move(v);
	}

	value binop(binary_op op, const value& a, const value& b) {
		taint_mask t = a.taint | b.taint;
		switch(op) {
		case binary_op::add:
			if(is_numeric(a) && is_numeric(b)) {
				return value::integer(a.num + b.num, t);
			}
			if(a.kind == value_kind::string && b.kind == value_kind::string) {
				return value::string(a.str() + b.str(), t);
			}
			if(a.kind == value_kind::list && b.kind == value_kind::list) {
				value_list out = a.items();
				out.insert(out.end(), b.items().begin(), b.items().end());
				return value::list(std::move(out), t);
			}
			break;
		case binary_op::sub:
			if(is_numeric(a) && is_numeric(b)) {
				return value::integer(a.num - b.num, t);
			}
			break;
		case binary_op::mul:
			if(is_numeric(a) && is_numeric(b)) {
				return value::integer(a.num * b.num, t);
			}
			if(a.kind == value_kind::string && is_numeric(b)) {
				std::string out;
				for(int64_t k = 0; k < b.num && out.size() < (1u << 24); ++k) {
					out += a.str();
				}
				return value::string(std::move(out), t);
			}
			break;
		case binary_op::div:
		case binary_op::mod:
			if(is_numeric(a) && is_numeric(b)) {
				if(b.num == 0) {
					fail("division by zero");
				}
				return value::integer(op == binary_op::div ? floor_div(a.num, b.num) : floor_mod(a.num, b.num), t);
			}
			break;
		case binary_op::eq: return value::boolean(values_equal(a, b), t);
		case binary_op::ne: return value::boolean(!values_equal(a, b), t);
		case binary_op::lt:
		case binary_op::gt:
		case binary_op::le:
		case binary_op::ge: {
			int c = 0;
			if(is_numeric(a) && is_numeric(b)) {
				c = a.num < b.num ? -1 : a.num > b.num ? 1 : 0;
			} else if(a.kind == value_kind::string && b.kind == value_kind::string) {
				int r = a.str().compare(b.str());
				c = r < 0 ? -1 : r > 0 ? 1 : 0;
			} else {
				break;
			}
			bool out = op == binary_op::lt ? c < 0 : op == binary_op::gt ? c > 0 : op == binary_op::le ? c <= 0 : c >= 0;
			return value::boolean(out, t);
		}
		case binary_op::in:
		case binary_op::not_in: {
			bool found = false;
			if(b.kind == value_kind::list) {
				found = std::any_of(b.items().begin(), b.items().end(),
				                    [&](const value& x) { return values_equal(x, a); });
			} else if(b.kind == value_kind::string && a.kind == value_kind::string) {
				found = b.str().find(a.str()) != std::string::npos;
			} else if(b.kind == value_kind::map && a.kind == value_kind::string) {
				found = b.fields().count(a.str()) > 0;
			} else if(b.kind == value_kind::unit) {
				found = false;
			} else {
				break;
			}
			return value::boolean(op == binary_op::in ? found : !found, t);
		}
		}
		fail(std::string("unsupported operand types ") + to_string(a.kind) + " and " + to_string(b.kind));
	}

	void loop() {
		const auto& code = m_prog.code;
		const int32_t main_end = m_prog.main_end;
		while(true) {
			if(m_pc == main_end && m_frames.size() == 1) {
				return;
			}
			if(m_cost >= m_cfg.cost_limit) {
				throw cost_exceeded{};
			}
			++m_cost;
			const instr& in = code[static_cast<size_t>(m_pc)];
			switch(in.op) {
			case opcode::push_const: m_stack.push_back(m_consts[static_cast<size_t>(in.a)]); break;
			case opcode::push_unit: m_stack.push_back(value::unit()); break;
			case opcode::load_var: m_stack.push_back(load(in.a)); break;
			case opcode::store_var: {
				value v = pop();
				if(m_bench_label) {
					v.taint |= m_bench_label;
				}
				uint64_t scope = 0;
				value& slot = store_slot(in.a, scope);
				check_access(m_prog.names[static_cast<size_t>(in.a)], access_kind::write, scope);
				slot = std::move(v);
				break;
			}
			case opcode::load_index: {
				value i = pop();
				value c = pop();
				m_stack.push_back(index(c, i));
				break;
			}
			case opcode::store_index_var: store_index(in.a); break;
			case opcode::load_attr: {
				value o = pop();
				const std::string& field = m_prog.names[static_cast<size_t>(in.a)];
				if(o.kind != value_kind::map) {
					fail("'" + std::string(to_string(o.kind)) + "' has no attribute '" + field + "'");
				}
				auto it = o.fields().find(field);
				if(it == o.fields().end()) {
					fail("no attribute '" + field + "'");
				}
				value out = it->second;
				out.taint |= o.taint;
				m_stack.push_back(std::move(out));
				break;
			}
			case opcode::binop: {
				value b = pop();
				value a = pop();
				m_stack.push_back(binop(static_cast<binary_op>(in.a), a, b));
				break;
			}
			case opcode::unop: {
				value a = pop();
				if(static_cast<unary_op>(in.a) == unary_op::neg) {
					if(!is_numeric(a)) {
						fail(std::string("bad operand for unary -: ") + to_string(a.kind));
					}
					m_stack.push_back(value::integer(-a.num, a.taint));
				} else {
					m_stack.push_back(value::boolean(!a.truthy(), a.taint));
				}
				break;
			}
			case opcode::make_list: {
				size_t n = static_cast<size_t>(in.a);
				value_list items(std::make_move_iterator(m_stack.end() - static_cast<ptrdiff_t>(n)),
				                 std::make_move_iterator(m_stack.end()));
				m_stack.resize(m_stack.size() - n);
				taint_mask t = 0;
				for(const auto& x : items) {
					t |= x.taint;
				}
				m_stack.push_back(value::list(std::move(items), t));
				break;
			}
			case opcode::make_map: {
				size_t n = static_cast<size_t>(in.a);
				size_t base = m_stack.size() - 2 * n;
				value_map fields;
				taint_mask t = 0;
				for(size_t k = 0; k < n; ++k) {
					value& key = m_stack[base + 2 * k];
					value& val = m_stack[base + 2 * k + 1];
					t |= key.taint | val.taint;
					fields[key.kind == value_kind::string ? key.str() : render(key)] = std::move(val);
				}
				m_stack.resize(base);
				m_stack.push_back(value::map(std::move(fields), t));
				break;
			}
			case opcode::jump:
				edge(m_pc, in.a);
				m_pc = in.a;
				continue;
			case opcode::jump_if_false: {
				bool taken = !pop().truthy();
				int32_t to = taken ? in.a : m_pc + 1;
				edge(m_pc, to);
				m_pc = to;
				continue;
			}
			case opcode::jump_if_false_keep:
			case opcode::jump_if_true_keep: {
				bool truth = m_stack.back().truthy();
				bool taken = in.op == opcode::jump_if_false_keep ? !truth : truth;
				if(!taken) {
					m_stack.pop_back();
				}
				int32_t to = taken ? in.a : m_pc + 1;
				edge(m_pc, to);
				m_pc = to;
				continue;
			}
			case opcode::call: call(in); continue;
			case opcode::call_method: call_method(in); continue;
			case opcode::ret: do_return(); continue;
			case opcode::pop: m_stack.pop_back(); break;
			}
			++m_pc;
		}
	}
};

}  // namespace

exec_result execute(const program& prog, std::string_view input, const exec_config& config) {
	return machine(prog, input, config).run();
}

}  // namespace anota
