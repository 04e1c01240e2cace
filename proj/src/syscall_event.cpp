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

#include <anota/syscall_event.hpp>
#include <anota/violation.hpp>

#include <cmath>
#include <stdexcept>

namespace anota {

namespace {

constexpr std::pair<arg_kind, const char*> k_arg_names[] = {
        {arg_kind::path, "path"}, {arg_kind::fd, "fd"},     {arg_kind::mode, "mode"},
        {arg_kind::len, "len"},   {arg_kind::scheme, "scheme"}, {arg_kind::host, "host"},
        {arg_kind::port, "port"}, {arg_kind::argv, "argv"},
};

}  // namespace

const char* to_string(arg_kind k) {
	for(const auto& [kind, name] : k_arg_names) {
		if(kind == k) {
			return name;
		}
	}
	return "?";
}

std::optional<arg_kind> arg_kind_from_string(std::string_view s) {
	for(const auto& [kind, name] : k_arg_names) {
		if(s == name) {
			return kind;
		}
	}
	return std::nullopt;
}

std::string event_arg::text() const {
	if(const auto* s = std::get_if<std::string>(&value)) {
		return *s;
	}
	return std::to_string(std::get<int64_t>(value));
}

std::optional<int64_t> event_arg::number() const {
	if(const auto* n = std::get_if<int64_t>(&value)) {
		return *n;
	}
	const std::string& s = std::get<std::string>(value);
	try {
		size_t used = 0;
		int64_t v = std::stoll(s, &used);
		if(used == s.size()) {
			return v;
		}
	} catch(const std::exception&) {
	}
	return std::nullopt;
}

const event_arg* syscall_event::find(arg_kind k) const {
	for(const auto& a : args) {
		if(a.kind == k) {
			return &a;
		}
	}
	return nullptr;
}

nlohmann::ordered_json to_json(const syscall_event& ev) {
	nlohmann::ordered_json j;
	j["seq"] = ev.seq;
	j["phase"] = ev.phase == event_phase::enter ? "enter" : "exit";
	j["name"] = ev.name;
	auto args = nlohmann::ordered_json::array();
	for(const auto& a : ev.args) {
		nlohmann::ordered_json pair = nlohmann::ordered_json::array();
		pair.push_back(to_string(a.kind));
		if(const auto* n = std::get_if<int64_t>(&a.value)) {
			pair.push_back(*n);
		} else {
			pair.push_back(std::get<std::string>(a.value));
		}
		args.push_back(std::move(pair));
	}
	j["args"] = std::move(args);
	if(ev.ret) {
		j["ret"] = *ev.ret;
	} else {
		j["ret"] = nullptr;
	}
	j["pid"] = ev.pid;
	double whole = 0;
	if(std::modf(ev.ts, &whole) == 0.0 && std::fabs(ev.ts) < 9e15) {
		j["ts"] = static_cast<int64_t>(ev.ts);
	} else {
		j["ts"] = ev.ts;
	}
	return j;
}

std::string to_trace_line(const syscall_event& ev) {
	return to_json(ev).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

syscall_event event_from_json(const nlohmann::json& j) {
	auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
	if(!j.is_object()) {
		fail("event is not an object");
	}
	static const char* required[] = {"seq", "phase", "name", "args", "ret", "pid", "ts"};
	for(const char* k : required) {
		if(!j.contains(k)) {
			fail(std::string("missing field '") + k + "'");
		}
	}
	if(j.size() != std::size(required)) {
		fail("unexpected extra fields");
	}
	syscall_event ev;
	if(!j["seq"].is_number_integer() || j["seq"].get<int64_t>() < 0) {
		fail("seq must be a non-negative integer");
	}
	ev.seq = j["seq"].get<uint64_t>();
	const auto& phase = j["phase"];
	if(phase == "enter") {
		ev.phase = event_phase::enter;
	} else if(phase == "exit") {
		ev.phase = event_phase::exit;
	} else {
		fail("phase must be \"enter\" or \"exit\"");
	}
	if(!j["name"].is_string() || j["name"].get<std::string>().empty()) {
		fail("name must be a non-empty string");
	}
	ev.name = j["name"].get<std::string>();
	if(!j["args"].is_array()) {
		fail("args must be an array");
	}
	for(const auto& pair : j["args"]) {
		if(!pair.is_array() || pair.size() != 2 || !pair[0].is_string()) {
			fail("each arg must be [kind, value]");
		}
		auto kind = arg_kind_from_string(pair[0].get<std::string>());
		if(!kind) {
			fail("unknown arg kind '" + pair[0].get<std::string>() + "'");
		}
		event_arg a;
		a.kind = *kind;
		if(pair[1].is_number_integer()) {
			a.value = pair[1].get<int64_t>();
		} else if(pair[1].is_string()) {
			a.value = pair[1].get<std::string>();
		} else {
			fail("arg value must be an integer or string");
		}
		ev.args.push_back(std::move(a));
	}
	if(j["ret"].is_null()) {
		ev.ret.reset();
	} else if(j["ret"].is_number_integer()) {
		ev.ret = j["ret"].get<int64_t>();
	} else {
		fail("ret must be an integer or null");
	}
	if(!j["pid"].is_number_integer()) {
		fail("pid must be an integer");
	}
	ev.pid = j["pid"].get<int>();
	if(!j["ts"].is_number()) {
		fail("ts must be a number");
	}
	ev.ts = j["ts"].get<double>();
	return ev;
}

std::string normalize_path(std::string_view path) {
	std::vector<std::string_view> parts;
	size_t i = 0;
	while(i <= path.size()) {
		size_t j = path.find('/', i);
		if(j == std::string_view::npos) {
			j = path.size();
		}
		std::string_view seg = path.substr(i, j - i);
		if(seg.empty() || seg == ".") {
			// skip
		} else if(seg == "..") {
			if(!parts.empty()) {
				parts.pop_back();
			}
		} else {
			parts.push_back(seg);
		}
		i = j + 1;
	}
	if(parts.empty()) {
		return "/";
	}
	std::string out;
	for(auto seg : parts) {
		out.push_back('/');
		out.append(seg);
	}
	return out;
}

void fd_table::open(int64_t fd, resource_desc desc) {
	m_entries[fd] = std::move(desc);
}

void fd_table::close(int64_t fd) {
	auto it = m_entries.find(fd);
	if(it != m_entries.end()) {
		it->second.closed = true;
	}
}

const resource_desc* fd_table::lookup(int64_t fd) const {
	auto it = m_entries.find(fd);
	if(it == m_entries.end() || it->second.closed) {
		return nullptr;
	}
	return &it->second;
}

resource_desc* fd_table::lookup(int64_t fd) {
	auto it = m_entries.find(fd);
	if(it == m_entries.end() || it->second.closed) {
		return nullptr;
	}
	return &it->second;
}

void fd_table::mark_sensitive(int64_t fd, uint32_t label) {
	if(resource_desc* d = lookup(fd)) {
		if(!d->carried_sensitive) {
			d->carried_sensitive = true;
			d->sensitive_label = label;
		}
	}
}

bool is_fd_based(std::string_view s) {
	return s == "read" || s == "write" || s == "send" || s == "recv" || s == "close" || s == "fchmod";
}

std::optional<resource_desc> resolve_resource(const fd_table& fds, const syscall_event& ev) {
	if(const event_arg* p = ev.find(arg_kind::path)) {
		resource_desc d;
		d.type = resource_desc::kind::file;
		d.path = normalize_path(p->text());
		return d;
	}
	if(ev.find(arg_kind::scheme) || ev.find(arg_kind::host)) {
		resource_desc d;
		d.type = resource_desc::kind::socket;
		if(const event_arg* a = ev.find(arg_kind::scheme)) {
			d.scheme = a->text();
		}
		if(const event_arg* a = ev.find(arg_kind::host)) {
			d.host = a->text();
		}
		if(const event_arg* a = ev.find(arg_kind::port)) {
			d.port = a->text();
		}
		return d;
	}
	if(const event_arg* f = ev.find(arg_kind::fd)) {
		auto fd = f->number();
		if(!fd) {
			return std::nullopt;
		}
		if(const resource_desc* d = fds.lookup(*fd)) {
			return *d;
		}
	}
	return std::nullopt;
}

const char* to_string(violation_kind k) {
	switch(k) {
	case violation_kind::syscall: return "Syscall";
	case violation_kind::dataflow_sink: return "DataFlowSink";
	case violation_kind::object_access: return "ObjectAccess";
	case violation_kind::execution: return "Execution";
	case violation_kind::toctou: return "Toctou";
	case violation_kind::timing_leak: return "TimingLeak";
	}
	return "?";
}

nlohmann::ordered_json to_json(const violation& v) {
	nlohmann::ordered_json j;
	j["schema_version"] = k_report_schema_version;
	j["policy_id"] = v.policy_id;
	j["policy_text"] = v.policy_text;
	j["kind"] = to_string(v.kind);
	j["site"] = {{"line", v.site.line}, {"op", v.site.op}};
	j["event"] = v.event.is_null() ? nlohmann::ordered_json::object() : v.event;
	j["message"] = v.message;
	j["input_digest"] = v.input_digest;
	return j;
}

std::string to_report_line(const violation& v) {
	return to_json(v).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace anota
