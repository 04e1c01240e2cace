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
#include <anota/vm.hpp>

#include <gtest/gtest.h>

namespace anota {
namespace {

exec_result run(const std::string& source, const std::string& input = {}, exec_config cfg = {}) {
	if(cfg.vfs.empty()) {
		cfg.vfs = default_vfs();
	}
	return execute(compile(source), input, cfg);
}

std::vector<std::string> corpus() {
	std::vector<std::string> out;
	for(const auto& entry : std::filesystem::directory_iterator(oracle::scenario_dir())) {
		out.push_back(oracle::read_file(entry.path()));
	}
	for(const auto& b : bench_suite()) {
		out.push_back(b.source);
	}
	std::mt19937_64 rng(8);
	while(out.size() < 50) {
		out.push_back(oracle::random_taint_case(rng).source);
	}
	return out;
}

TEST(Compiler, SmallestProgram) {
	program p = compile("x = 1");
	ASSERT_EQ(p.main_end, 2);
	EXPECT_EQ(p.code[0].op, opcode::push_const);
	EXPECT_EQ(p.constants[static_cast<size_t>(p.code[0].a)].num, 1);
	EXPECT_EQ(p.code[1].op, opcode::store_var);
	EXPECT_EQ(p.names[static_cast<size_t>(p.code[1].a)], "x");
}

TEST(Compiler, AnnotatedUrlOpenerCallSites) {
	program p = compile(oracle::read_file(oracle::scenario("url_opener_annotated.anota")));
	size_t calls = 0;
	size_t annotated = 0;
	for(const auto& in : p.code) {
		if(in.op == opcode::call) {
			++calls;
			annotated += in.c >= 0;
		}
	}
	EXPECT_EQ(calls, 7u);
	EXPECT_EQ(annotated, 3u);
	EXPECT_EQ(p.annotations.size(), 3u);
}

TEST(Compiler, DeterministicOverCorpus) {
	auto scripts = corpus();
	ASSERT_GE(scripts.size(), 50u);
	for(const auto& s : scripts) {
		EXPECT_EQ(sha256_hex(compile(s).serialize()), sha256_hex(compile(s).serialize()));
	}
}

TEST(Compiler, Errors) {
	try {
		compile("x = 1\ny = (2\n");
		FAIL();
	} catch(const syntax_error& e) {
		EXPECT_GE(e.line(), 2);
	}
	EXPECT_THROW(compile("SYSCALL.READ.BLOCK(PATH='/a', PATH='/b')\n"), syntax_error);
	EXPECT_THROW(compile("FOO(1)\nprint(undefined_thing)\n"), undefined_name_error);
	EXPECT_THROW(compile("return 1\n"), syntax_error);
	EXPECT_THROW(compile("if x\n    y = 1\n"), syntax_error);
}

TEST(Vm, EmptyProgram) {
	exec_result r = run("");
	EXPECT_EQ(r.status, exec_status::clean);
	EXPECT_EQ(r.cost, 0u);
}

TEST(Vm, CostCountsInstructions) {
	exec_result r = run("x = 1\ny = x + 2\n");
	EXPECT_EQ(r.cost, 6u);
	exec_result loop = run("i = 0\nwhile i < 3:\n    i += 1\n");
	// 2 setup, 4 per loop test, 5 per iteration (load, const, add, store, jump)
	EXPECT_EQ(loop.cost, 2u + 4u * 4u + 5u * 3u);
}

TEST(Vm, CostLimit) {
	exec_config cfg;
	cfg.cost_limit = 1000;
	exec_result r = run("while True:\n    pass\n", "", cfg);
	EXPECT_EQ(r.status, exec_status::timeout);
	EXPECT_LE(r.cost, 1001u);
}

TEST(Vm, Language) {
	exec_result r = run(R"(def fib(n):
    if n < 2:
        return n
    return fib(n - 1) + fib(n - 2)

items = [1, 2, 3]
items.append(4)
m = {"a": 1}
m["b"] = 2
s = "ab" + str(10 / 3) + str(-7 % 3)
print(fib(15), len(items), items[3], m["b"], s, 2 in items, "z" not in m, not True)
)");
	ASSERT_EQ(r.status, exec_status::clean) << r.error;
	EXPECT_EQ(r.output, "610 4 4 2 ab32 True True False\n");
}

TEST(Vm, ScriptErrors) {
	exec_result r = run("x = [1]\ny = x[5]\n");
	EXPECT_EQ(r.status, exec_status::script_error);
	EXPECT_EQ(r.error_line, 2);
	EXPECT_EQ(run("x = 1 / 0\n").status, exec_status::script_error);
	EXPECT_EQ(run("x = int(\"abc\")\n").status, exec_status::script_error);
}

TEST(Vm, UrlparseAndConnectDisagreeOnWhitespace) {
	exec_config cfg;
	cfg.record_trace = true;
	exec_result r = run(R"(u = input()
p = urlparse(u)
print(p.scheme, p.hostname)
fd = connect(u)
)",
	                    "   https://youtube.com", cfg);
	EXPECT_EQ(r.output, " \n");
	bool saw = false;
	for(const auto& ev : r.trace) {
		if(ev.name == "connect" && ev.phase == event_phase::enter) {
			EXPECT_EQ(ev.find(arg_kind::scheme)->text(), "https");
			EXPECT_EQ(ev.find(arg_kind::host)->text(), "youtube.com");
			EXPECT_EQ(ev.find(arg_kind::port)->text(), "443");
			saw = true;
		}
	}
	EXPECT_TRUE(saw);
}

TEST(Vm, VirtualFileSystem) {
	exec_config cfg;
	cfg.record_trace = true;
	exec_result r = run(R"(fd = open("/etc/passwd", "r")
print(read(fd, 4))
close(fd)
print(open("/missing", "r"))
w = open("/tmp/new.txt", "w")
write(w, "hello")
close(w)
print(read(open("/tmp/new.txt")))
)",
	                    "", cfg);
	ASSERT_EQ(r.status, exec_status::clean) << r.error;
	EXPECT_EQ(r.output.substr(0, 5), "root\n");
	EXPECT_NE(r.output.find("-2\n"), std::string::npos);
	EXPECT_NE(r.output.find("hello"), std::string::npos);
	// The log file is pre-opened before the script runs.
	ASSERT_GE(r.trace.size(), 2u);
	EXPECT_EQ(r.trace[0].name, "openat");
	EXPECT_EQ(r.trace[0].find(arg_kind::path)->text(), k_log_path);
	EXPECT_EQ(*r.trace[1].ret, k_log_fd);
	for(const auto& ev : r.trace) {
		EXPECT_EQ(ev.pid, k_vm_pid);
	}
}

TEST(Vm, Hermetic) {
	for(const auto& s : corpus()) {
		exec_result a = run(s, "https://example.com");
		exec_result b = run(s, "https://example.com");
		EXPECT_EQ(a.status, b.status);
		EXPECT_EQ(a.cost, b.cost);
		EXPECT_EQ(a.coverage, b.coverage);
		EXPECT_EQ(a.output, b.output);
		EXPECT_EQ(a.violations.size(), b.violations.size());
	}
}

TEST(Vm, MonitorTransparency) {
	for(const auto& b : bench_suite()) {
		exec_config off;
		off.monitors = false;
		exec_result x = run(b.source, b.input);
		exec_result y = run(b.source, b.input, off);
		EXPECT_EQ(x.status, y.status) << b.name;
		EXPECT_EQ(x.output, y.output) << b.name;
		EXPECT_EQ(x.cost, y.cost) << b.name;
	}
}

TEST(Vm, AnnotationsAreValueTransparent) {
	exec_result r = run(R"(x = SYSCALL.READ.BLOCK(PATH='/etc/')
print(x)
)");
	EXPECT_EQ(r.output, "None\n");
}

TEST(Vm, PolicyInstalledFromVariable) {
	exec_result r = run(oracle::read_file(oracle::scenario("static_files.anota")), "index.html");
	ASSERT_EQ(r.policies.size(), 1u);
	ASSERT_TRUE(r.policies[0].spec.option);
	EXPECT_EQ(r.policies[0].spec.option->patterns, std::vector<std::string>{"/static/"});
}

TEST(Vm, AnnotationInstalledOncePerSite) {
	exec_result r = run(R"(i = 0
while i < 5:
    SYSCALL.READ.BLOCK(PATH='/etc/')
    i += 1
)");
	EXPECT_EQ(r.policies.size(), 1u);
}

TEST(Vm, CollectModeKeepsEveryViolation) {
	exec_result r = run(R"(SYSCALL.BLOCK('stat')
stat("/a")
stat("/b")
stat("/c")
print("done")
)");
	EXPECT_EQ(r.status, exec_status::violation);
	EXPECT_EQ(r.violations.size(), 3u);
	EXPECT_EQ(r.output, "done\n");
}

TEST(Vm, TrapModeStopsAtFirstViolation) {
	exec_config cfg;
	cfg.escalation = escalation_mode::trap;
	exec_result r = run("SYSCALL.BLOCK('stat')\nstat(\"/a\")\nstat(\"/b\")\nprint(\"done\")\n", "", cfg);
	EXPECT_EQ(r.violations.size(), 1u);
	EXPECT_EQ(r.output, "");
}

TEST(Vm, ReportCarriesInputDigest) {
	exec_result r = run("SYSCALL.BLOCK('stat')\nstat(input())\n", "abc");
	ASSERT_EQ(r.violations.size(), 1u);
	EXPECT_EQ(r.violations[0].input_digest, sha256_hex("abc"));
	EXPECT_EQ(r.violations[0].site.line, 2);
}

TEST(Vm, MotivatingExample) {
	const std::string src = oracle::read_file(oracle::scenario("safe_url_opener.anota"));
	exec_result bypass = run(src, "   https://youtube.com");
	// Collect mode also reports the recv on the same socket.
	ASSERT_EQ(bypass.violations.size(), 2u);
	EXPECT_EQ(bypass.violations[0].kind, violation_kind::syscall);
	EXPECT_EQ(bypass.violations[0].event["name"], "connect");
	EXPECT_NE(bypass.violations[0].policy_text.find("HOST"), std::string::npos);
	EXPECT_EQ(run(src, "https://youtube.com").status, exec_status::clean);
	EXPECT_EQ(run(src, "https://example.com").status, exec_status::clean);
	EXPECT_EQ(run(src, "file:///etc/passwd").status, exec_status::clean);
}

TEST(Vm, CoverageIsSortedAndNonEmpty) {
	exec_result r = run("def f(x):\n    return x\nif f(1) == 1:\n    print(2)\n");
	EXPECT_FALSE(r.coverage.empty());
	EXPECT_TRUE(std::is_sorted(r.coverage.begin(), r.coverage.end()));
}

}  // namespace
}  // namespace anota
