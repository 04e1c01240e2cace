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

#include <anota/program.hpp>
#include <anota/timing.hpp>
#include <anota/violation.hpp>
#include <anota/vm.hpp>

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace anota {

// Process-level escalation. trap raises SIGSEGV; exit prints the report to
// stderr and exits with k_exit_violation. collect returns.
void escalate(const violation& v, escalation_mode mode);

constexpr int k_exit_clean = 0;
constexpr int k_exit_script_error = 1;
constexpr int k_exit_usage = 2;
constexpr int k_exit_violation = 77;

// Small hermetic filesystem used when no manifest is given.
std::map<std::string, std::string> default_vfs();

// Manifest: a JSON object mapping absolute paths to file contents.
std::map<std::string, std::string> load_vfs_manifest(const std::filesystem::path& path);

// --- fuzzing ------------------------------------------------------------------

struct fuzz_config {
	std::vector<std::string> seeds;
	std::vector<std::string> dictionary;
	uint64_t max_iterations = 100'000;
	double max_seconds = 60.0;
	uint64_t rng_seed = 1;
	unsigned workers = 1;
	size_t max_input_len = 4096;
	// Stop after the first finding.
	bool stop_on_finding = false;
	std::optional<std::filesystem::path> findings_dir;
	exec_config exec;
};

struct fuzz_finding {
	violation report;
	std::string input;
	uint64_t execution = 0;  // 1-based index of the execution that found it
};

struct fuzz_summary {
	std::vector<fuzz_finding> findings;  // deduplicated by (policy id, site)
	uint64_t executions = 0;
	size_t edges = 0;
	size_t corpus_size = 0;
	double seconds = 0;
	double execs_per_second = 0;
};

// Byte-level mutator with a fixed RNG; exposed for tests.
class mutator {
public:
	mutator(uint64_t seed, std::vector<std::string> dictionary, size_t max_len);
	std::string mutate(const std::string& input, const std::string& splice_with);
	uint64_t below(uint64_t n);

private:
	std::string mutate_once(std::string s, const std::string& other);

	std::mt19937_64 m_rng;
	std::vector<std::string> m_dict;
	size_t m_max_len;
};

// Throws usage_error when there are no seeds.
fuzz_summary fuzz(const program& prog, const fuzz_config& config);

// --- replay -----------------------------------------------------------------------

struct replay_result {
	std::vector<violation> violations;
	std::vector<std::string> diagnostics;
	size_t events = 0;
};

class trace_error : public std::runtime_error {
public:
	trace_error(const std::string& msg, size_t line):
	        std::runtime_error("trace line " + std::to_string(line) + ": " + msg), m_line(line) {}
	size_t line() const { return m_line; }

private:
	size_t m_line;
};

// One SYSCALL annotation per line; '#' comments and blank lines skipped.
// Throws usage_error for anything else.
std::vector<std::string> parse_policy_file(std::istream& in);

// Throws trace_error for a malformed line.
replay_result replay(std::istream& trace, const std::vector<std::string>& policies);

// --- timing -------------------------------------------------------------------------

struct timecheck_result {
	std::string fn;
	ttest_state state;
	double t = 0;
	timing_verdict verdict = timing_verdict::inconclusive;
	uint64_t script_errors = 0;
};

// Runs the script n times per class: class 0 with the fixed input, class 1
// with seeded random bytes of the same length. One sample per execution:
// the summed cost of every profiled call to fn.
timecheck_result timecheck(const program& prog, const std::string& fn, const std::string& fixed, uint64_t n,
                           uint64_t seed, const exec_config& base = {});

// --- benchmarks -----------------------------------------------------------------------

struct bench_program {
	std::string name;
	std::string source;
	std::string input;
};

const std::vector<bench_program>& bench_suite();

struct bench_row {
	std::string name;
	uint64_t cost = 0;
	double disabled = 0;  // seconds, best of reps
	double zero_annotations = 0;
	double taint_all = 0;
	double syscall_log_all = 0;
};

std::vector<bench_row> run_bench(unsigned reps);
double geometric_mean(const std::vector<double>& xs);

}  // namespace anota
