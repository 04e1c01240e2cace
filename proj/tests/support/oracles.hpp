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
#include <anota/syscall_event.hpp>
#include <anota/timing.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace anota::oracle {

// Location of the bundled scenario scripts and the built CLI.
std::filesystem::path scenario_dir();
std::filesystem::path scenario(const std::string& name);
std::filesystem::path cli_path();
std::string read_file(const std::filesystem::path& p);

struct cli_outcome {
	int exit_code = -1;
	std::string out;
	std::string err;
	double seconds = 0;
};

// Runs the CLI with the given arguments; stdin is fed from `input`.
cli_outcome run_cli(const std::vector<std::string>& args, const std::string& input = {});

// Glob translated to an anchored ECMAScript regex.
std::string glob_to_regex(const std::string& glob);
bool regex_glob_match(const std::string& glob, const std::string& path);

struct glob_case {
	std::string pattern;
	std::string path;
};
glob_case random_glob_case(std::mt19937_64& rng);

struct glob_report {
	size_t pairs = 0;
	size_t disagreements = 0;
	std::optional<glob_case> first_disagreement;
};
glob_report run_glob_oracle(size_t pairs, uint64_t seed);

// Hand-written description of one syscall policy, independent of lowering.
struct ref_policy {
	std::string text;
	bool block = false;
	std::set<std::string> calls;  // literal syscall names, classes already expanded
	std::string dim;               // "" for a name-only policy, else path/scheme/host/port
	std::vector<std::string> patterns;
};

const std::vector<ref_policy>& syscall_pool();

struct ref_decision {
	bool violation = false;
	uint32_t policy_id = 0;
};

// Reference evaluator over a whole trace; one decision per enter event.
std::vector<ref_decision> reference_decisions(const std::vector<ref_policy>& store,
                                              const std::vector<syscall_event>& trace);

std::vector<syscall_event> random_syscall_trace(std::mt19937_64& rng, size_t events);

struct syscall_report {
	size_t stores = 0;
	size_t traces = 0;
	size_t decisions = 0;
	size_t mismatches = 0;
	std::string first_mismatch;
};
syscall_report run_syscall_oracle(size_t max_store_size, size_t traces_per_store, size_t events_per_trace,
                                  uint64_t seed);

struct taint_case {
	std::string source;
	std::vector<std::string> vars;       // checked variables in order
	std::vector<bool> expect_tainted;    // oracle verdict per checked variable
	std::vector<int> check_lines;        // source line of each check
	size_t instructions = 0;             // instruction count before the checks
	int sanitizers = 0;
};
taint_case random_taint_case(std::mt19937_64& rng);

struct taint_report {
	size_t programs = 0;
	size_t false_negatives = 0;
	size_t false_positives = 0;
	size_t max_instructions = 0;
	std::string first_false_negative;
};
taint_report run_taint_oracle(size_t programs, uint64_t seed);

// Two-pass batch Welch t, independent of the streaming implementation.
double batch_welch_t(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace anota::oracle
