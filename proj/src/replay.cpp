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
#include <anota/harness.hpp>
#include <anota/syscall_monitor.hpp>

#include <nlohmann/json.hpp>

namespace anota {

std::vector<std::string> parse_policy_file(std::istream& in) {
	std::vector<std::string> out;
	std::string line;
	size_t number = 0;
	while(std::getline(in, line)) {
		++number;
		size_t b = line.find_first_not_of(" \t\r");
		if(b == std::string::npos || line[b] == '#') {
			continue;
		}
		size_t e = line.find_last_not_of(" \t\r");
		std::string text = line.substr(b, e - b + 1);
		annotation_ast ast;
		try {
			ast = parse_annotation(text);
		} catch(const syntax_error& err) {
			throw usage_error("policy line " + std::to_string(number) + ": " + err.what());
		}
		if(ast.head[0] != "SYSCALL") {
			throw usage_error("policy line " + std::to_string(number) + ": only SYSCALL annotations can be replayed");
		}
		out.push_back(std::move(text));
	}
	return out;
}

replay_result replay(std::istream& trace, const std::vector<std::string>& policies) {
	policy_store store;
	int index = 0;
	for(const auto& text : policies) {
		++index;
		annotation_ast ast = parse_annotation(text);
		policy_spec spec;
		try {
			spec = lower_to_policy(ast, {index, -1});
		} catch(const lowering_error& e) {
			throw usage_error("policy " + std::to_string(index) + ": " + e.what());
		}
		if(spec.domain == policy_domain::clear) {
			store.clear(*spec.clear);
		} else {
			store.install(spec, to_string(ast));
		}
	}
	syscall_monitor monitor(store);
	replay_result out;
	std::string line;
	size_t number = 0;
	while(std::getline(trace, line)) {
		++number;
		if(line.find_first_not_of(" \t\r") == std::string::npos) {
			continue;
		}
		syscall_event ev;
		try {
			ev = event_from_json(nlohmann::json::parse(line));
		} catch(const nlohmann::json::exception& e) {
			throw trace_error(e.what(), number);
		} catch(const std::invalid_argument& e) {
			throw trace_error(e.what(), number);
		}
		++out.events;
		for(auto& f : monitor.observe(ev)) {
			violation v;
			v.policy_id = f.policy_id;
			if(const policy* p = store.find(f.policy_id)) {
				v.policy_text = p->text;
			}
			v.kind = f.kind;
			v.site = {static_cast<int>(number), -1};
			v.event = std::move(f.event);
			v.message = std::move(f.message);
			out.violations.push_back(std::move(v));
		}
	}
	out.diagnostics = monitor.diagnostics();
	return out;
}

}  // namespace anota
