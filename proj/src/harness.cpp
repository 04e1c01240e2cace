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

#include <nlohmann/json.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace anota {

void escalate(const violation& v, escalation_mode mode) {
	if(mode == escalation_mode::collect) {
		return;
	}
	std::cerr << to_report_line(v) << std::endl;
	if(mode == escalation_mode::exit) {
		std::exit(k_exit_violation);
	}
	std::signal(SIGSEGV, SIG_DFL);
	std::raise(SIGSEGV);
	std::abort();
}

std::map<std::string, std::string> default_vfs() {
	return {
	        {"/etc/passwd", "root:x:0:0:root:/root:/bin/sh\nuser:x:1000:1000::/home/user:/bin/sh\n"},
	        {"/etc/hostname", "sandbox\n"},
	        {"/static/index.html", "<html><body>hello</body></html>\n"},
	        {"/static/app.js", "console.log('hi');\n"},
	        {"/home/user/notes.txt", "remember the milk\n"},
	        {"/bin/ls", "\x7f" "ELF"},
	        {"/bin/cat", "\x7f" "ELF"},
	};
}

std::map<std::string, std::string> load_vfs_manifest(const std::filesystem::path& path) {
	std::ifstream in(path);
	if(!in) {
		throw usage_error("cannot open manifest " + path.string());
	}
	nlohmann::json j;
	try {
		j = nlohmann::json::parse(in);
	} catch(const nlohmann::json::parse_error& e) {
		throw usage_error("manifest " + path.string() + ": " + e.what());
	}
	if(!j.is_object()) {
		throw usage_error("manifest must be a JSON object of path -> content");
	}
	std::map<std::string, std::string> out;
	for(const auto& [k, v] : j.items()) {
		if(k.empty() || k[0] != '/' || !v.is_string()) {
			throw usage_error("manifest entry '" + k + "' needs an absolute path and string content");
		}
		out[k] = v.get<std::string>();
	}
	return out;
}

}  // namespace anota
