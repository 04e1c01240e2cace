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

#include "support/oracles.hpp"

#include <anota/digest.hpp>
#include <anota/error.hpp>
#include <anota/harness.hpp>
#include <anota/program.hpp>

#include <gtest/gtest.h>

#include <unistd.h>

#include <csignal>
#include <fstream>
#include <regex>
#include <sstream>

#ifndef ANOTA_GOLDEN_DIR
#define ANOTA_GOLDEN_DIR "tests/golden"
#endif

namespace anota {
namespace {

std::string canonical(std::string report) {
	static const std::regex digest("\"input_digest\":\"[0-9a-f]{64}\"");
	return std::regex_replace(report, digest, "\"input_digest\":\"<digest>\"");
}

std::string golden(const std::string& name) {
	return oracle::read_file(std::filesystem::path(ANOTA_GOLDEN_DIR) / name);
}

std::string reports_of(const std::string& script, const std::string& input) {
	exec_config cfg;
	cfg.vfs = default_vfs();
	exec_result r = execute(compile(oracle::read_file(oracle::scenario(script))), input, cfg);
	std::string out;
	for(const auto& v : r.violations) {
		out += canonical(to_report_line(v)) + "\n";
	}
	return out;
}

TEST(Report, FieldOrder) {
	violation v;
	v.policy_id = 4;
	v.policy_text = "SYSCALL.BLOCK('stat')";
	v.site = {3, 17};
	v.event = {{"k", 1}};
	v.message = "m";
	v.input_digest = sha256_hex("");
	EXPECT_EQ(to_report_line(v),
	          "{\"schema_version\":1,\"policy_id\":4,\"policy_text\":\"SYSCALL.BLOCK('stat')\",\"kind\":"
	          "\"Syscall\",\"site\":{\"line\":3,\"op\":17},\"event\":{\"k\":1},\"message\":\"m\",\"input_digest\":"
	          "\"e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855\"}");
}

struct golden_case {
	const char* script;
	const char* input;
	const char* file;
};

void PrintTo(const golden_case& c, std::ostream* os) {
	*os << c.script;
}

class GoldenReports : public ::testing::TestWithParam<golden_case> {};

TEST_P(GoldenReports, MatchByteForByte) {
	const golden_case& c = GetParam();
	EXPECT_EQ(reports_of(c.script, c.input), golden(c.file));
}

INSTANTIATE_TEST_SUITE_P(
        Scenarios, GoldenReports,
        ::testing::Values(golden_case{"safe_url_opener.anota", "   https://youtube.com", "url_opener.jsonl"},
                          golden_case{"credential_log.anota", "42", "credential_log.jsonl"},
                          golden_case{"static_files.anota", "../../etc/passwd", "static_files.jsonl"},
                          golden_case{"user_admin.anota", "guest", "user_admin.jsonl"},
                          golden_case{"privileged_section.anota", "guest", "privileged_section.jsonl"}),
        [](const ::testing::TestParamInfo<golden_case>& info) {
	        std::string name = info.param.file;
	        return name.substr(0, name.find('.'));
        });

TEST(Escalation, TrapRaisesSegfault) {
	violation v;
	v.policy_id = 1;
	EXPECT_EXIT(escalate(v, escalation_mode::trap), ::testing::KilledBySignal(SIGSEGV), "\"policy_id\":1");
}

TEST(Escalation, ExitUsesViolationCode) {
	violation v;
	v.policy_id = 2;
	EXPECT_EXIT(escalate(v, escalation_mode::exit), ::testing::ExitedWithCode(k_exit_violation), "\"policy_id\":2");
}

const char* k_read_trace =
        R"({"seq":1,"phase":"enter","name":"openat","args":[["path","/etc/passwd"],["mode","r"]],"ret":null,"pid":100,"ts":1}
{"seq":1,"phase":"exit","name":"openat","args":[],"ret":3,"pid":100,"ts":2}
{"seq":2,"phase":"enter","name":"read","args":[["fd",3],["len",10]],"ret":null,"pid":100,"ts":3}
{"seq":2,"phase":"exit","name":"read","args":[],"ret":10,"pid":100,"ts":4}
)";

TEST(Replay, BlockedRead) {
	std::istringstream trace(k_read_trace);
	replay_result r = replay(trace, {"SYSCALL.READ.BLOCK(PATH='/etc/')"});
	ASSERT_EQ(r.violations.size(), 1u);
	EXPECT_EQ(r.violations[0].event["seq"], 2);
	EXPECT_EQ(r.events, 4u);
}

TEST(Replay, EmptyPolicies) {
	std::istringstream trace(k_read_trace);
	EXPECT_TRUE(replay(trace, {}).violations.empty());
}

TEST(Replay, TwoPidGolden) {
	// Both pids use fd 3 for different files; only pid 101's read is on /etc.
	std::istringstream trace(
	        R"({"seq":1,"phase":"enter","name":"openat","args":[["path","/tmp/a"],["mode","r"]],"ret":null,"pid":100,"ts":1}
{"seq":2,"phase":"enter","name":"openat","args":[["path","/etc/shadow"],["mode","r"]],"ret":null,"pid":101,"ts":2}
{"seq":1,"phase":"exit","name":"openat","args":[],"ret":3,"pid":100,"ts":3}
{"seq":2,"phase":"exit","name":"openat","args":[],"ret":3,"pid":101,"ts":4}
{"seq":3,"phase":"enter","name":"read","args":[["fd",3],["len",8]],"ret":null,"pid":100,"ts":5}
{"seq":4,"phase":"enter","name":"read","args":[["fd",3],["len",8]],"ret":null,"pid":101,"ts":6}
{"seq":3,"phase":"exit","name":"read","args":[],"ret":8,"pid":100,"ts":7}
{"seq":4,"phase":"exit","name":"read","args":[],"ret":8,"pid":101,"ts":8}
)");
	replay_result r = replay(trace, {"SYSCALL.READ.BLOCK(PATH='/etc/')"});
	ASSERT_EQ(r.violations.size(), 1u);
	EXPECT_EQ(r.violations[0].event["seq"], 4);
	EXPECT_EQ(r.violations[0].event["pid"], 101);
	EXPECT_EQ(r.violations[0].site.line, 6);
	EXPECT_EQ(r.violations[0].site.op, -1);
}

TEST(Replay, MalformedLines) {
	for(std::string bad : {
	            "{not json}\n",
	            R"({"seq":1,"phase":"middle","name":"read","args":[],"ret":null,"pid":100,"ts":1})"
	            "\n",
	            R"({"seq":1,"phase":"enter","name":"read","args":[],"ret":null,"pid":100})"
	            "\n",
	            R"({"seq":1,"phase":"enter","name":"read","args":[["colour",1]],"ret":null,"pid":100,"ts":1})"
	            "\n",
	            R"({"seq":1,"phase":"enter","name":"read","args":[],"ret":null,"pid":100,"ts":1,"extra":0})"
	            "\n",
	    }) {
		std::istringstream trace(std::string(k_read_trace) + bad);
		try {
			replay(trace, {});
			ADD_FAILURE() << bad;
		} catch(const trace_error& e) {
			EXPECT_EQ(e.line(), 5u) << bad;
		}
	}
}

TEST(Replay, PolicyFile) {
	std::istringstream ok("# comment\n\nSYSCALL.READ.BLOCK(PATH='/etc/')\n  SYSCALL.BLOCK('execve')\n");
	EXPECT_EQ(parse_policy_file(ok).size(), 2u);
	std::istringstream bad("TAINT(pwd)\n");
	EXPECT_THROW(parse_policy_file(bad), usage_error);
	std::istringstream garbage("SYSCALL.READ.BLOCK(\n");
	EXPECT_THROW(parse_policy_file(garbage), usage_error);
}

TEST(Replay, LiveEquivalence) {
	exec_config cfg;
	cfg.vfs = default_vfs();
	cfg.record_trace = true;
	program prog = compile(R"(SYSCALL.READ.BLOCK(PATH='/etc/')
SYSCALL.NETWORK.BLOCK.HOST('youtube.com')
fd = open("/etc/passwd", "r")
x = read(fd)
close(fd)
s = connect("https://youtube.com")
send(s, "hi")
)");
	exec_result live = execute(prog, "", cfg);
	ASSERT_EQ(live.violations.size(), 3u);
	std::ostringstream lines;
	for(const auto& ev : live.trace) {
		lines << to_trace_line(ev) << "\n";
	}
	std::vector<std::string> policies;
	for(const auto& p : live.policies) {
		policies.push_back(p.text);
	}
	std::istringstream trace(lines.str());
	replay_result replayed = replay(trace, policies);
	ASSERT_EQ(replayed.violations.size(), live.violations.size());
	for(size_t i = 0; i < live.violations.size(); ++i) {
		EXPECT_EQ(replayed.violations[i].policy_id, live.violations[i].policy_id);
		EXPECT_EQ(replayed.violations[i].event["seq"], live.violations[i].event["seq"]);
	}
}

fuzz_config url_campaign(uint64_t seed, uint64_t budget) {
	fuzz_config cfg;
	cfg.seeds = {"https://example.com"};
	cfg.dictionary = {"   ", "youtube.com"};
	cfg.max_iterations = budget;
	cfg.rng_seed = seed;
	cfg.exec.vfs = default_vfs();
	return cfg;
}

TEST(Fuzz, FixedSeedIsReproducible) {
	program prog = compile(oracle::read_file(oracle::scenario("safe_url_opener.anota")));
	fuzz_summary a = fuzz(prog, url_campaign(5, 20'000));
	fuzz_summary b = fuzz(prog, url_campaign(5, 20'000));
	EXPECT_EQ(a.executions, b.executions);
	EXPECT_EQ(a.edges, b.edges);
	ASSERT_EQ(a.findings.size(), b.findings.size());
	for(size_t i = 0; i < a.findings.size(); ++i) {
		EXPECT_EQ(a.findings[i].input, b.findings[i].input);
		EXPECT_EQ(a.findings[i].execution, b.findings[i].execution);
	}
}

TEST(Fuzz, FindsWhitespaceBypass) {
	program prog = compile(oracle::read_file(oracle::scenario("safe_url_opener.anota")));
	fuzz_config cfg = url_campaign(1, 100'000);
	cfg.stop_on_finding = true;
	fuzz_summary s = fuzz(prog, cfg);
	ASSERT_EQ(s.findings.size(), 1u);
	EXPECT_EQ(s.findings[0].report.kind, violation_kind::syscall);
	EXPECT_EQ(s.findings[0].report.input_digest, sha256_hex(s.findings[0].input));
}

TEST(Fuzz, NoAnnotationsNoFindings) {
	program prog = compile(R"(u = input()
if len(u) > 3:
    if u[0] == "h":
        print(urlparse(u).hostname)
)");
	fuzz_config cfg = url_campaign(3, 5'000);
	fuzz_summary s = fuzz(prog, cfg);
	EXPECT_TRUE(s.findings.empty());
	EXPECT_EQ(s.executions, 5'000u);
}

TEST(Fuzz, DeduplicatesAndWritesArtifacts) {
	auto dir = std::filesystem::temp_directory_path() / ("anota-findings-" + std::to_string(::getpid()));
	std::filesystem::remove_all(dir);
	program prog = compile("SYSCALL.BLOCK('stat')\nstat(input())\n");
	fuzz_config cfg = url_campaign(2, 500);
	cfg.findings_dir = dir;
	fuzz_summary s = fuzz(prog, cfg);
	ASSERT_EQ(s.findings.size(), 1u);
	EXPECT_TRUE(std::filesystem::exists(dir / sha256_hex(s.findings[0].input)));
	std::filesystem::remove_all(dir);
}

TEST(Fuzz, EmptySeedsAreRejected) {
	program prog = compile("x = 1\n");
	fuzz_config cfg;
	EXPECT_THROW(fuzz(prog, cfg), usage_error);
}

TEST(Fuzz, WorkersShareBudget) {
	program prog = compile(oracle::read_file(oracle::scenario("safe_url_opener.anota")));
	fuzz_config cfg = url_campaign(9, 4'000);
	cfg.workers = 4;
	fuzz_summary s = fuzz(prog, cfg);
	EXPECT_EQ(s.executions, 4'000u);
}

TEST(Mutator, StaysWithinLength) {
	mutator m(1, {"   ", "youtube.com"}, 32);
	std::string s = "https://example.com";
	for(int i = 0; i < 2000; ++i) {
		s = m.mutate(s, "https://other.org");
		EXPECT_LE(s.size(), 32u);
	}
}

TEST(Bench, SuiteIsLargeEnough) {
	ASSERT_GE(bench_suite().size(), 5u);
	for(const auto& b : bench_suite()) {
		exec_result r = execute(compile(b.source), b.input);
		EXPECT_EQ(r.status, exec_status::clean) << b.name << ": " << r.error;
		EXPECT_GE(r.cost, 1'000'000u) << b.name;
	}
	EXPECT_NEAR(geometric_mean({1, 4}), 2.0, 1e-12);
}

TEST(Vfs, ManifestLoading) {
	auto path = std::filesystem::temp_directory_path() / ("anota-vfs-" + std::to_string(::getpid()) + ".json");
	{
		std::ofstream out(path);
		out << R"({"/data/a.txt": "alpha"})";
	}
	auto vfs = load_vfs_manifest(path);
	EXPECT_EQ(vfs.at("/data/a.txt"), "alpha");
	{
		std::ofstream out(path);
		out << "[1, 2]";
	}
	EXPECT_THROW(load_vfs_manifest(path), usage_error);
	std::filesystem::remove(path);
	EXPECT_THROW(load_vfs_manifest(path), usage_error);
}

TEST(Cli, ExitCodes) {
	auto url = oracle::scenario("safe_url_opener.anota").string();
	EXPECT_EQ(oracle::run_cli({"run", url, "-"}, "   https://youtube.com").exit_code, k_exit_violation);
	EXPECT_EQ(oracle::run_cli({"run", url, "-"}, "https://example.com").exit_code, k_exit_clean);
	EXPECT_EQ(oracle::run_cli({"run", "/no/such/script.anota"}).exit_code, k_exit_usage);
	EXPECT_EQ(oracle::run_cli({"bogus-verb"}).exit_code, k_exit_usage);
	auto broken = std::filesystem::temp_directory_path() / ("anota-broken-" + std::to_string(::getpid()));
	{
		std::ofstream out(broken);
		out << "x = (1\n";
	}
	EXPECT_EQ(oracle::run_cli({"run", broken.string()}).exit_code, k_exit_script_error);
	std::filesystem::remove(broken);
	oracle::cli_outcome trap = oracle::run_cli({"--escalation", "trap", "run", url, "-"}, "   https://youtube.com");
	EXPECT_EQ(trap.exit_code, 128 + SIGSEGV);
}

TEST(Cli, ReplayVerb) {
	auto dir = std::filesystem::temp_directory_path();
	auto trace = dir / ("anota-trace-" + std::to_string(::getpid()) + ".jsonl");
	auto policy = dir / ("anota-policy-" + std::to_string(::getpid()) + ".txt");
	{
		std::ofstream t(trace);
		t << k_read_trace;
		std::ofstream p(policy);
		p << "SYSCALL.READ.BLOCK(PATH='/etc/')\n";
	}
	oracle::cli_outcome r = oracle::run_cli({"replay", trace.string(), policy.string()});
	EXPECT_EQ(r.exit_code, k_exit_violation);
	EXPECT_NE(r.out.find("\"kind\":\"Syscall\""), std::string::npos);
	{
		std::ofstream t(trace, std::ios::app);
		t << "garbage\n";
	}
	EXPECT_EQ(oracle::run_cli({"replay", trace.string(), policy.string()}).exit_code, k_exit_script_error);
	{
		std::ofstream p(policy);
		p << "TAINT(x)\n";
	}
	EXPECT_EQ(oracle::run_cli({"replay", trace.string(), policy.string()}).exit_code, k_exit_usage);
	std::filesystem::remove(trace);
	std::filesystem::remove(policy);
}

}  // namespace
}  // namespace anota
