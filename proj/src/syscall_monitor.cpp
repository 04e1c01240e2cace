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

#include <anota/syscall_monitor.hpp>

#include <algorithm>

namespace anota {

namespace {

bool is_check_call(const std::string& name) {
	return name == "access" || name == "stat" || name == "lstat" || name == "faccessat" ||
	       name == "newfstatat";
}

bool is_use_call(const std::string& name) {
	return name == "openat" || name == "read" || name == "write";
}

bool mode_creates(const syscall_event& ev) {
	const event_arg* m = ev.find(arg_kind::mode);
	if(!m) {
		return false;
	}
	std::string mode = m->text();
	return mode.find_first_of("wax") != std::string::npos;
}

bool any_glob_matches(const policy& p, const std::string& value) {
	return std::any_of(p.option_globs.begin(), p.option_globs.end(),
	                   [&](const glob_pattern& g) { return g.matches(value); });
}

}  // namespace

const std::optional<std::string>& event_context::value(option_dim d) const {
	switch(d) {
	case option_dim::path: return path;
	case option_dim::scheme: return scheme;
	case option_dim::host: return host;
	case option_dim::port: return port;
	}
	return path;
}

event_context make_context(const syscall_event& ev, const std::optional<resource_desc>& resource) {
	event_context ctx;
	ctx.name = ev.name;
	if(!resource) {
		return ctx;
	}
	if(resource->type == resource_desc::kind::file) {
		ctx.path = resource->path;
	} else {
		ctx.scheme = resource->scheme;
		ctx.host = resource->host;
		ctx.port = resource->port;
	}
	return ctx;
}

syscall_decision decide(const policy_store& store, const event_context& ctx) {
	const auto& policies = store.policies();
	for(const policy& p : policies) {
		if(!p.enabled || p.spec.domain != policy_domain::syscall || p.spec.mode != policy_mode::block) {
			continue;
		}
		if(!selector_covers(p.spec.syscalls, ctx.name)) {
			continue;
		}
		if(!p.spec.option) {
			return {true, p.id, "syscall '" + ctx.name + "' is blocked"};
		}
		const auto& v = ctx.value(p.spec.option->dim);
		if(v && any_glob_matches(p, *v)) {
			return {true, p.id,
			        "syscall '" + ctx.name + "' " + to_string(p.spec.option->dim) + " '" + *v +
			                "' is blocked"};
		}
	}

	struct allow_group {
		std::optional<option_dim> dim;  // nullopt: the syscall name itself
		uint32_t first_id;
		bool matched;
	};
	std::vector<allow_group> groups;
	auto group_for = [&](std::optional<option_dim> dim, uint32_t id) -> allow_group& {
		for(auto& g : groups) {
			if(g.dim == dim) {
				return g;
			}
		}
		groups.push_back({dim, id, false});
		return groups.back();
	};
	for(const policy& p : policies) {
		if(!p.enabled || p.spec.domain != policy_domain::syscall || p.spec.mode != policy_mode::allow) {
			continue;
		}
		if(!p.spec.option) {
			// an allowlist of syscall names applies to every syscall
			allow_group& g = group_for(std::nullopt, p.id);
			g.matched = g.matched || selector_covers(p.spec.syscalls, ctx.name);
			continue;
		}
		if(!selector_covers(p.spec.syscalls, ctx.name)) {
			continue;
		}
		const auto& v = ctx.value(p.spec.option->dim);
		if(!v) {
			continue;
		}
		allow_group& g = group_for(p.spec.option->dim, p.id);
		g.matched = g.matched || any_glob_matches(p, *v);
	}
	for(const auto& g : groups) {
		if(g.matched) {
			continue;
		}
		if(!g.dim) {
			return {true, g.first_id, "syscall '" + ctx.name + "' is not in the allowlist"};
		}
		return {true, g.first_id,
		        "syscall '" + ctx.name + "' " + to_string(*g.dim) + " '" + *ctx.value(*g.dim) +
		                "' is outside the allowlist"};
	}
	return {};
}

uint32_t toctou_detector::sensitivity(const std::string& path, const fd_table& fds) const {
	auto it = m_sensitive_paths.find(path);
	if(it != m_sensitive_paths.end()) {
		return it->second;
	}
	for(const auto& [fd, desc] : fds.entries()) {
		if(desc.type == resource_desc::kind::file && desc.path == path && desc.carried_sensitive) {
			return desc.sensitive_label;
		}
	}
	return 0;
}

std::optional<toctou_detector::finding> toctou_detector::observe(
        const syscall_event& ev, const fd_table& fds, const std::optional<resource_desc>& resource) {
	if(ev.phase == event_phase::exit) {
		if(ev.name == "openat" && ev.ret && *ev.ret >= 0) {
			const resource_desc* d = fds.lookup(*ev.ret);
			if(d && d->created) {
				m_created[*ev.ret] = d->path;
				m_created_written.erase(*ev.ret);
			}
		}
		return std::nullopt;
	}
	if(!resource || resource->type != resource_desc::kind::file) {
		return std::nullopt;
	}
	const std::string& path = resource->path;
	if(is_check_call(ev.name)) {
		m_checked[path] = ev.seq;
		return std::nullopt;
	}
	if(is_use_call(ev.name) && m_checked.count(path)) {
		m_used_after_check.insert(path);
	}
	if(const event_arg* f = ev.find(arg_kind::fd)) {
		if(auto fd = f->number()) {
			if(ev.name == "write" && m_created.count(*fd)) {
				m_created_written.insert(*fd);
			}
			if(ev.name == "read" || ev.name == "write") {
				const resource_desc* d = fds.lookup(*fd);
				if(d && d->carried_sensitive) {
					m_sensitive_paths.emplace(path, d->sensitive_label);
				}
			}
		}
	}
	if(ev.name == "fchmod") {
		for(const auto& [fd, created_path] : m_created) {
			if(created_path == path && m_created_written.count(fd)) {
				m_chmod_after_write.insert(path);
			}
		}
	}
	uint32_t label = sensitivity(path, fds);
	if(!label) {
		return std::nullopt;
	}
	if(m_used_after_check.count(path) && m_reported.insert({path, 'A'}).second) {
		return finding{'A', path, label};
	}
	if(m_chmod_after_write.count(path) && m_reported.insert({path, 'B'}).second) {
		return finding{'B', path, label};
	}
	return std::nullopt;
}

std::vector<monitor_finding> syscall_monitor::observe(const syscall_event& ev) {
	std::vector<monitor_finding> out;
	pid_state& st = m_pids[ev.pid];
	if(ev.phase == event_phase::enter) {
		auto resource = resolve_resource(st.fds, ev);
		if(!resource && is_fd_based(ev.name)) {
			const event_arg* f = ev.find(arg_kind::fd);
			m_diagnostics.push_back("unknown fd " + (f ? f->text() : std::string("?")) + " for " + ev.name +
			                        " at seq " + std::to_string(ev.seq) + " (pid " +
			                        std::to_string(ev.pid) + ")");
		}
		event_context ctx = make_context(ev, resource);
		syscall_decision d = decide(m_store, ctx);
		if(d.violation) {
			out.push_back({violation_kind::syscall, d.policy_id, ev.seq, d.reason, to_json(ev)});
		}
		if(auto t = st.toctou.observe(ev, st.fds, resource)) {
			std::string msg = t->pattern == 'A'
			                          ? "check-then-use on sensitive file '" + t->path + "'"
			                          : "permissions changed after writing sensitive file '" + t->path + "'";
			nlohmann::ordered_json detail = to_json(ev);
			detail["pattern"] = std::string(1, t->pattern);
			out.push_back({violation_kind::toctou, t->label, ev.seq, msg, std::move(detail)});
		}
		st.pending_enter[ev.seq] = ev;
		return out;
	}

	const syscall_event* enter = nullptr;
	auto it = st.pending_enter.find(ev.seq);
	if(it != st.pending_enter.end()) {
		enter = &it->second;
	}
	const syscall_event& args_src = enter ? *enter : ev;
	if(ev.ret && *ev.ret >= 0) {
		if(ev.name == "openat") {
			if(const event_arg* p = args_src.find(arg_kind::path)) {
				resource_desc d;
				d.type = resource_desc::kind::file;
				d.path = normalize_path(p->text());
				d.opened_at = ev.seq;
				d.created = mode_creates(args_src);
				st.fds.open(*ev.ret, std::move(d));
			}
		} else if(ev.name == "connect") {
			if(auto r = resolve_resource(st.fds, args_src)) {
				r->opened_at = ev.seq;
				st.fds.open(*ev.ret, std::move(*r));
			}
		}
	}
	if(ev.name == "close") {
		if(const event_arg* f = args_src.find(arg_kind::fd)) {
			if(auto fd = f->number()) {
				st.fds.close(*fd);
			}
		}
	}
	st.toctou.observe(ev, st.fds, std::nullopt);
	if(it != st.pending_enter.end()) {
		st.pending_enter.erase(it);
	}
	return out;
}

}  // namespace anota
