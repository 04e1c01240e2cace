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

#include <anota/policy.hpp>
#include <anota/program.hpp>
#include <anota/syscall_event.hpp>
#include <anota/violation.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace anota {

enum class escalation_mode { trap, exit, collect };
enum class exec_status { clean, violation, script_error, timeout };
// Overhead modes used by the benchmark suite.
enum class bench_mode { none, taint_all, syscall_log_all };

const char* to_string(escalation_mode m);
const char* to_string(exec_status s);
std::optional<escalation_mode> escalation_from_string(std::string_view s);

constexpr uint64_t k_default_cost_limit = 10'000'000;

struct exec_config {
	// trap and exit stop at the first violation; the caller escalates.
	escalation_mode escalation = escalation_mode::collect;
	uint64_t cost_limit = k_default_cost_limit;
	// false: no hooks at all, annotations evaluate to Unit and do nothing
	bool monitors = true;
	bench_mode bench = bench_mode::none;
	// Initial virtual filesystem: normalized path -> content.
	std::map<std::string, std::string> vfs;
	bool record_trace = false;
	// Functions profiled in addition to WATCH.CON targets.
	std::set<std::string> timing_targets;
	// Profile any call that receives a Data Flow labelled argument.
	bool auto_target = false;
};

struct timing_sample {
	std::string fn;
	uint64_t cost = 0;
};

struct exec_result {
	exec_status status = exec_status::clean;
	std::vector<violation> violations;
	// Sorted, unique (from, to) instruction edges.
	std::vector<std::pair<int32_t, int32_t>> coverage;
	uint64_t cost = 0;
	std::string output;  // everything print() produced
	std::string error;   // script error or timeout text
	int error_line = 0;
	std::vector<syscall_event> trace;
	std::vector<timing_sample> timing;
	std::vector<std::string> diagnostics;
	std::vector<policy> policies;  // final policy store contents
	std::string input_digest;
};

// Fixed path of the log file behind log(); opened as fd 3 at start.
constexpr const char* k_log_path = "/app.log";
constexpr int64_t k_log_fd = 3;

exec_result execute(const program& prog, std::string_view input, const exec_config& config = {});

}  // namespace anota
