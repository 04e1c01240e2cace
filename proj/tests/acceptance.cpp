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

// Acceptance check: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "support/oracles.hpp"

#include <anota/annotation.hpp>
#include <anota/harness.hpp>
#include <anota/program.hpp>
#include <anota/vm.hpp>

#include <nlohmann/json.hpp>

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

using namespace anota;
namespace fs = std::filesystem;

struct outcome {
	bool pass = false;
	std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
	return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int digits = 3) {
	std::ostringstream ss;
	ss << std::fixed << std::setprecision(digits) << x;
	return ss.str();
}

// First report line on stderr, parsed.
std::optional<nlohmann::json> first_report(const std::string& err) {
	std::istringstream in(err);
	std::string line;
	while(std::getline(in, line)) {
		if(line.rfind("{\"schema_version\"", 0) == 0) {
			return nlohmann::json::parse(line);
		}
	}
	return std::nullopt;
}

std::string script(const std::string& name) {
	return oracle::scenario(name).string();
}

outcome motivating_example() {
	struct expect {
		std::string input;
		int code;
	};
	const std::vector<expect> cases = {{"   https://youtube.com", 77}, {"https://youtube.com", 0}, {"https://example.com", 0}};
	outcome o{true, ""};
	for(const auto& c : cases) {
		auto r = oracle::run_cli({"run", script("safe_url_opener.anota"), "-"}, c.input);
		bool ok = r.exit_code == c.code && r.seconds < 1.0;
		if(c.code == 77) {
			auto rep = first_report(r.err);
			ok = ok && rep && (*rep)["kind"] == "Syscall";
		}
		o.pass = o.pass && ok;
		o.detail += "'" + c.input + "'->" + std::to_string(r.exit_code) + " (" + fmt(r.seconds) + "s) ";
	}
	return o;
}

outcome data_flow() {
	auto leak = oracle::run_cli({"run", script("credential_log.anota"), "-"}, "42");
	auto hashed = oracle::run_cli({"run", script("credential_log_hashed.anota"), "-"}, "42");
	auto rep = first_report(leak.err);
	bool ok = leak.exit_code == 77 && rep && (*rep)["kind"] == "DataFlowSink" && (*rep)["event"]["sink"] == "write" &&
	          hashed.exit_code == 0;
	return {ok, "leak->" + std::to_string(leak.exit_code) + " sink=" +
	                    (rep ? (*rep)["event"]["sink"].dump() : std::string("none")) +
	                    ", hashed->" + std::to_string(hashed.exit_code)};
}

outcome path_traversal() {
	auto bad = oracle::run_cli({"run", script("static_files.anota"), "-"}, "../../etc/passwd");
	auto good = oracle::run_cli({"run", script("static_files.anota"), "-"}, "index.html");
	return {bad.exit_code == 77 && good.exit_code == 0,
	        "'../../etc/passwd'->" + std::to_string(bad.exit_code) + ", 'index.html'->" +
	                std::to_string(good.exit_code)};
}

outcome access_control() {
	auto guest = oracle::run_cli({"run", script("user_admin.anota"), "-"}, "guest");
	auto admin = oracle::run_cli({"run", script("user_admin.anota"), "-"}, "admin");
	auto rep = first_report(guest.err);
	bool ok = guest.exit_code == 77 && rep && (*rep)["kind"] == "ObjectAccess" && admin.exit_code == 0;
	std::string detail = "write by guest->" + std::to_string(guest.exit_code) + ", admin->" +
	                     std::to_string(admin.exit_code) + "; EXECUTION.BLOCK:";
	program prog = compile(oracle::read_file(oracle::scenario("privileged_section.anota")));
	for(std::string role : {"guest", "admin", "", "ADMIN", "admin "}) {
		exec_result r = execute(prog, role);
		bool fired = !r.violations.empty() && r.violations[0].kind == violation_kind::execution;
		bool truthy = role != "admin";
		ok = ok && fired == truthy && r.violations.size() == (truthy ? 1u : 0u);
		detail += " '" + role + "'=" + (fired ? "block" : "pass");
	}
	return {ok, detail};
}

outcome table_suite() {
	const std::vector<std::string> examples = {
	        "SYSCALL.BLOCK('execv', 'execveat', 'execve')",
	        "SYSCALL.READ.BLOCK (PATH='/etc/')",
	        "SYSCALL.EXECVE.ALLOW (PATH='/bin/ls')",
	        "TAINT(pwd, sanitization= [hash], Sink=[print])",
	        "WATCH.ALLOW(admin_data,'r')",
	        "WATCH.BLOCK(admin_api,'x')",
	        "WATCH.CON(passwd_cmp)",
	        "EXECUTION.BLOCK (user.type!='admin')",
	        "CLEAR(SYSCALL.EXECVE. ALLOW(PATH='ls'))",
	        "SYSCALL.NETWORK.CLEAR()",
	};
	std::vector<policy_spec> specs;
	size_t stable = 0;
	try {
		for(const auto& e : examples) {
			annotation_ast ast = parse_annotation(e);
			annotation_ast again = parse_annotation(to_string(ast));
			stable += ast == again && to_string(ast) == to_string(again);
			specs.push_back(lower_to_policy(ast));
		}
	} catch(const std::exception& e) {
		return {false, e.what()};
	}
	size_t distinct_pairs = 0;
	for(size_t i = 0; i < specs.size(); ++i) {
		for(size_t j = i + 1; j < specs.size(); ++j) {
			distinct_pairs += !specs[i].same_as(specs[j]);
		}
	}
	bool ok = specs.size() == 10 && distinct_pairs == 45 && stable == 10;
	return {ok, std::to_string(specs.size()) + " lowered, " + std::to_string(distinct_pairs) +
	                    "/45 pairs distinct, " + std::to_string(stable) + "/10 round trips stable"};
}

outcome glob_oracle() {
	auto t0 = std::chrono::steady_clock::now();
	auto r = oracle::run_glob_oracle(10'000, 2024);
	double s = seconds_since(t0);
	return {r.pairs == 10'000 && r.disagreements == 0 && s < 5.0,
	        std::to_string(r.pairs) + " pairs, " + std::to_string(r.disagreements) + " disagreements, " + fmt(s) +
	                "s"};
}

outcome taint_soundness() {
	auto t0 = std::chrono::steady_clock::now();
	auto r = oracle::run_taint_oracle(1000, 77);
	double s = seconds_since(t0);
	return {r.programs == 1000 && r.false_negatives == 0 && r.max_instructions <= 40 && s < 30.0,
	        std::to_string(r.programs) + " programs (max " + std::to_string(r.max_instructions) +
	                " instructions), " + std::to_string(r.false_negatives) + " false negatives, " +
	                std::to_string(r.false_positives) + " false positives, " + fmt(s) + "s"};
}

outcome syscall_oracle() {
	auto t0 = std::chrono::steady_clock::now();
	auto r = oracle::run_syscall_oracle(5, 200, 20, 99);
	double s = seconds_since(t0);
	return {r.stores == 1586 && r.traces == 1586 * 200 && r.mismatches == 0,
	        std::to_string(r.stores) + " stores x 200 traces, " + std::to_string(r.decisions) + " decisions, " +
	                std::to_string(r.mismatches) + " mismatches, " + fmt(s) + "s" +
	                (r.first_mismatch.empty() ? "" : "; " + r.first_mismatch)};
}

// Number of reports of the given pattern, or -1 when the script itself fails.
int toctou_reports(const std::string& source, char pattern) {
	exec_result r = execute(compile(source), "hunter2");
	if(r.status == exec_status::script_error || r.status == exec_status::timeout) {
		return -1;
	}
	int n = 0;
	for(const auto& v : r.violations) {
		n += v.kind == violation_kind::toctou && v.event.value("pattern", "") == std::string(1, pattern);
	}
	return n;
}

outcome toctou() {
	const std::string pattern_a = R"(secret = input()
TAINT(secret, Sink=[print])
access("/s")
fd = open("/s", "w")
write(fd, DATA)
)";
	auto with = [](std::string s, const std::string& data) {
		s.replace(s.find("DATA"), 4, data);
		return s;
	};
	const std::string pattern_b = R"(secret = input()
TAINT(secret, Sink=[print])
fd = open("/t", "w")
write(fd, DATA)
chmod("/t", 420)
)";
	int a = toctou_reports(with(pattern_a, "secret"), 'A');
	int a_clean = toctou_reports(with(pattern_a, "\"public\""), 'A');
	int b = toctou_reports(with(pattern_b, "secret"), 'B');
	int b_clean = toctou_reports(with(pattern_b, "\"public\""), 'B');
	return {a == 1 && a_clean == 0 && b == 1 && b_clean == 0,
	        "A tainted=" + std::to_string(a) + " clean=" + std::to_string(a_clean) + ", B tainted=" +
	                std::to_string(b) + " clean=" + std::to_string(b_clean)};
}

outcome timing() {
	program leaky = compile(oracle::read_file(oracle::scenario("compare_early_exit.anota")));
	program flat = compile(oracle::read_file(oracle::scenario("compare_constant.anota")));
	const std::string fixed = "s3cr3t-passw0rd!";
	timecheck_result a = timecheck(leaky, "passwd_cmp", fixed, 2000, 1);
	timecheck_result a2 = timecheck(leaky, "passwd_cmp", fixed, 2000, 1);
	timecheck_result b = timecheck(flat, "passwd_cmp", fixed, 2000, 1);
	timecheck_result b2 = timecheck(flat, "passwd_cmp", fixed, 2000, 1);
	bool reproducible = std::memcmp(&a.t, &a2.t, sizeof(double)) == 0 && std::memcmp(&b.t, &b2.t, sizeof(double)) == 0;
	bool ok = std::fabs(a.t) >= 4.5 && a.verdict == timing_verdict::timing_leak && b.t == 0.0 &&
	          b.verdict == timing_verdict::constant_time && reproducible && a.state.n[0] == 2000 &&
	          a.state.n[1] == 2000;
	return {ok, "early-exit t=" + fmt(a.t, 2) + " " + to_string(a.verdict) + ", constant t=" + fmt(b.t, 2) + " " +
	                    to_string(b.verdict) + ", bit-reproducible=" + (reproducible ? "yes" : "no")};
}

outcome fuzzing() {
	program prog = compile(oracle::read_file(oracle::scenario("safe_url_opener.anota")));
	int found = 0;
	std::string detail;
	bool slow = false;
	for(uint64_t seed = 1; seed <= 10; ++seed) {
		fuzz_config cfg;
		cfg.seeds = {"https://example.com"};
		cfg.dictionary = {"   ", "youtube.com"};
		cfg.max_iterations = 100'000;
		cfg.max_seconds = 60;
		cfg.rng_seed = seed;
		cfg.stop_on_finding = true;
		cfg.exec.vfs = default_vfs();
		fuzz_summary s = fuzz(prog, cfg);
		bool hit = !s.findings.empty() && s.findings[0].report.kind == violation_kind::syscall;
		found += hit;
		slow = slow || s.seconds >= 60;
		detail += (hit ? std::to_string(s.findings[0].execution) : std::string("miss")) + " ";
	}
	return {found >= 9 && !slow, std::to_string(found) + "/10 campaigns found it; executions to finding: " + detail};
}

outcome bench() {
	auto rows = run_bench(5);
	std::vector<double> zero, taint, log;
	std::string detail;
	for(const auto& r : rows) {
		zero.push_back(r.zero_annotations / r.disabled);
		taint.push_back(r.taint_all / r.disabled);
		log.push_back(r.syscall_log_all / r.disabled);
		detail += r.name + " " + fmt(zero.back(), 2) + "/" + fmt(taint.back(), 2) + "/" + fmt(log.back(), 2) + "; ";
	}
	double gz = geometric_mean(zero), gt = geometric_mean(taint), gl = geometric_mean(log);
	detail += "geomean zero=" + fmt(gz) + " taint-all=" + fmt(gt) + " log-all=" + fmt(gl);
	return {gz <= 1.25 && gt <= 2.0 && gl <= 2.0, detail};
}

outcome replay_equivalence() {
	fs::path dir = fs::temp_directory_path() / ("anota-accept-" + std::to_string(::getpid()));
	fs::create_directories(dir);
	fs::path trace = dir / "trace.jsonl";
	fs::path policy = dir / "policy.txt";
	auto live = oracle::run_cli({"--emit-trace", trace.string(), "run", script("safe_url_opener.anota"), "-"},
	                            "   https://youtube.com");
	auto live_report = first_report(live.err);
	{
		// Same syscall policies as the script installs, in the same order.
		std::ofstream out(policy);
		program prog = compile(oracle::read_file(oracle::scenario("safe_url_opener.anota")));
		for(const auto& a : prog.annotations) {
			policy_spec s = lower_to_policy(a.ast);
			if(s.domain == policy_domain::syscall) {
				out << a.text << "\n";
			}
		}
	}
	auto replayed = oracle::run_cli({"replay", trace.string(), policy.string()});
	auto replay_report = first_report(replayed.out);
	fs::remove_all(dir);
	if(!live_report || !replay_report) {
		return {false, "missing report (live exit " + std::to_string(live.exit_code) + ", replay exit " +
		                       std::to_string(replayed.exit_code) + ")"};
	}
	bool ok = live.exit_code == 77 && replayed.exit_code == 77 &&
	          (*live_report)["policy_id"] == (*replay_report)["policy_id"] &&
	          (*live_report)["event"]["seq"] == (*replay_report)["event"]["seq"];
	return {ok, "live policy " + (*live_report)["policy_id"].dump() + " seq " + (*live_report)["event"]["seq"].dump() +
	                    ", replay policy " + (*replay_report)["policy_id"].dump() + " seq " +
	                    (*replay_report)["event"]["seq"].dump()};
}

}  // namespace

int main() {
	const std::vector<std::pair<std::string, std::function<outcome()>>> criteria = {
	        {"motivating example", motivating_example},
	        {"data flow", data_flow},
	        {"path traversal", path_traversal},
	        {"access control", access_control},
	        {"annotation table", table_suite},
	        {"glob oracle", glob_oracle},
	        {"taint soundness", taint_soundness},
	        {"syscall decision oracle", syscall_oracle},
	        {"toctou", toctou},
	        {"timing", timing},
	        {"fuzzer", fuzzing},
	        {"bench overhead", bench},
	        {"replay equivalence", replay_equivalence},
	};
	int failed = 0;
	for(size_t i = 0; i < criteria.size(); ++i) {
		outcome o;
		try {
			o = criteria[i].second();
		} catch(const std::exception& e) {
			o = {false, std::string("exception: ") + e.what()};
		}
		failed += !o.pass;
		std::cout << (o.pass ? "PASS" : "FAIL") << " " << std::setw(2) << i + 1 << " " << criteria[i].first << ": "
		          << o.detail << std::endl;
	}
	std::cout << (failed ? "FAILED " + std::to_string(failed) + " of " : "PASSED all ") << criteria.size()
	          << " criteria" << std::endl;
	return failed ? 1 : 0;
}
