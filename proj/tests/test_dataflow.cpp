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

#include <anota/error.hpp>
#include <anota/program.hpp>
#include <anota/taint.hpp>
#include <anota/vm.hpp>
#include <anota/watch.hpp>

#include <gtest/gtest.h>

namespace anota {
namespace {

exec_result run(const std::string& source, const std::string& input = {}) {
	exec_config cfg;
	cfg.escalation = escalation_mode::collect;
	return execute(compile(source), input, cfg);
}

size_t count_kind(const exec_result& r, violation_kind k) {
	size_t n = 0;
	for(const auto& v : r.violations) {
		n += v.kind == k;
	}
	return n;
}

TEST(Taint, VariableSourceReachesDefaultSink) {
	exec_result r = run(R"(cred = "secret"
TAINT(cred)
log("c=" + cred)
)");
	ASSERT_EQ(count_kind(r, violation_kind::dataflow_sink), 1u);
	const violation& v = r.violations[0];
	EXPECT_EQ(v.event["sink"], "write");
	EXPECT_EQ(v.site.line, 3);
}

TEST(Taint, CallableSourceTaintsReturnValues) {
	exec_result r = run(R"(def get_credential(id):
    return "secret-" + str(id)

TAINT(get_credential, Sink=[print])
x = get_credential(1)
print(x)
)");
	EXPECT_EQ(count_kind(r, violation_kind::dataflow_sink), 1u);
}

TEST(Taint, SanitizerClearsReturnValueOnly) {
	exec_result r = run(R"(pwd = input()
TAINT(pwd, sanitization=[hash], Sink=[print])
h = hash(pwd)
print(h)
print(pwd)
)",
	                    "hunter2");
	ASSERT_EQ(count_kind(r, violation_kind::dataflow_sink), 1u);
	EXPECT_EQ(r.violations[0].site.line, 5);
}

TEST(Taint, SanitizationIsLabelScoped) {
	exec_result r = run(R"(a = "one"
b = "two"
TAINT(a, sanitization=[hash], Sink=[print])
TAINT(b, Sink=[print])
c = hash(a + b)
print(c)
)");
	ASSERT_EQ(count_kind(r, violation_kind::dataflow_sink), 1u);
	EXPECT_EQ(r.violations[0].policy_id, 2u);
}

TEST(Taint, ContainersAndIndexingPropagate) {
	exec_result r = run(R"(pwd = "p"
TAINT(pwd, Sink=[print])
items = ["a", pwd]
first = items[0]
print(first)
m = {"k": "v"}
m["k"] = pwd
print(m)
)");
	EXPECT_EQ(count_kind(r, violation_kind::dataflow_sink), 2u);
}

TEST(Taint, ComparisonResultIsTainted) {
	exec_result r = run(R"(pwd = "p"
TAINT(pwd, Sink=[print])
print(pwd == "q")
)");
	EXPECT_EQ(count_kind(r, violation_kind::dataflow_sink), 1u);
}

TEST(Taint, ImplicitFlowIsNotTracked) {
	exec_result r = run(R"(pwd = "p"
TAINT(pwd, Sink=[print])
x = "clean"
if pwd == "p":
    x = "branch"
print(x)
)");
	EXPECT_EQ(count_kind(r, violation_kind::dataflow_sink), 0u);
}

TEST(Taint, ClearMakesLabelsInert) {
	exec_result r = run(R"(pwd = "p"
TAINT(pwd, Sink=[print])
copy = pwd
CLEAR(TAINT(pwd, Sink=[print]))
print(copy)
)");
	EXPECT_EQ(count_kind(r, violation_kind::dataflow_sink), 0u);
}

TEST(Taint, DoesNotAlterScriptValues) {
	const std::string body = R"(pwd = input()
x = [pwd, "a"]
y = hash(pwd + "salt")
print(x, y, len(pwd), pwd == "abc")
)";
	const std::string tainted = "pwd = input()\nTAINT(pwd, Sink=[len])\n" + body.substr(body.find('\n') + 1);
	exec_result plain = run(body, "abc");
	exec_result with = run(tainted, "abc");
	EXPECT_EQ(plain.output, with.output);
	EXPECT_EQ(plain.status, exec_status::clean);
}

TEST(Taint, UnresolvedTargetIsScriptError) {
	exec_result r = run("TAINT(nowhere)\n");
	EXPECT_EQ(r.status, exec_status::script_error);
	EXPECT_EQ(r.error_line, 1);
}

TEST(Taint, LabelLimit) {
	std::string src;
	for(int i = 0; i < 65; ++i) {
		src += "v" + std::to_string(i) + " = 1\nTAINT(v" + std::to_string(i) + ")\n";
	}
	exec_result r = run(src);
	EXPECT_EQ(r.status, exec_status::script_error);
}

TEST(Taint, SinkSugar) {
	auto sinks = taint_tracker::sink_names("log");
	EXPECT_NE(std::find(sinks.begin(), sinks.end(), "write"), sinks.end());
	EXPECT_EQ(taint_tracker::sink_names("print").size(), 1u);
}

TEST(Taint, NoFalseNegativesOnGeneratedPrograms) {
	oracle::taint_report r = oracle::run_taint_oracle(300, 21);
	EXPECT_EQ(r.programs, 300u);
	EXPECT_LE(r.max_instructions, 40u);
	EXPECT_EQ(r.false_negatives, 0u) << r.first_false_negative;
	EXPECT_EQ(r.false_positives, 0u);
}

TEST(Watch, AllowListsPermittedAccess) {
	exec_result r = run(R"(admin_data = ["root"]
WATCH.ALLOW(admin_data, 'r')
n = len(admin_data)
admin_data.append("eve")
admin_data = []
)");
	ASSERT_EQ(count_kind(r, violation_kind::object_access), 2u);
	EXPECT_EQ(r.violations[0].site.line, 4);
	EXPECT_EQ(r.violations[1].site.line, 5);
}

TEST(Watch, BlockedExecute) {
	exec_result r = run(R"(def admin_api():
    return 1

WATCH.BLOCK(admin_api, 'x')
x = admin_api
admin_api()
)");
	ASSERT_EQ(count_kind(r, violation_kind::object_access), 1u);
	EXPECT_EQ(r.violations[0].site.line, 6);
}

TEST(Watch, UnwatchedAccessPasses) {
	exec_result r = run(R"(a = 1
WATCH.ALLOW(a, 'r')
b = 2
b = a + 1
)");
	EXPECT_TRUE(r.violations.empty());
}

TEST(Watch, ScopesAreIsolated) {
	exec_result r = run(R"(def f():
    secret = 1
    WATCH.BLOCK(secret, 'w')
    return 0

def g():
    secret = 5
    return secret

f()
g()
secret = 3
)");
	EXPECT_TRUE(r.violations.empty());
}

TEST(Watch, OnAccessDecision) {
	policy_store store;
	uint32_t id = store.install(lower_to_policy(parse_annotation("WATCH.ALLOW(x, 'r')")));
	watch_list w;
	w.add({id, "x", 0, policy_mode::allow, perm_read});
	EXPECT_FALSE(w.on_access(store, "x", access_kind::read, 0).violation);
	EXPECT_TRUE(w.on_access(store, "x", access_kind::write, 0).violation);
	EXPECT_FALSE(w.on_access(store, "x", access_kind::write, 5).violation);
	EXPECT_FALSE(w.on_access(store, "y", access_kind::write, 0).violation);
}

TEST(Execution, BlockFiresExactlyWhenConditionHolds) {
	const std::string src = R"(user = {"type": input()}
EXECUTION.BLOCK(user.type != 'admin')
print("ok")
)";
	for(std::string role : {"guest", "admin", "", "Admin"}) {
		exec_result r = run(src, role);
		EXPECT_EQ(count_kind(r, violation_kind::execution), role == "admin" ? 0u : 1u) << role;
	}
}

TEST(Execution, BareBlockFiresWhenReached) {
	exec_result r = run(R"(x = input()
if x == "go":
    EXECUTION.BLOCK()
)",
	                    "go");
	EXPECT_EQ(count_kind(r, violation_kind::execution), 1u);
	EXPECT_TRUE(run("x = input()\nif x == \"go\":\n    EXECUTION.BLOCK()\n", "stay").violations.empty());
}

TEST(Execution, TruthTable) {
	EXPECT_TRUE(execution_blocked(std::nullopt));
	EXPECT_TRUE(execution_blocked(true));
	EXPECT_FALSE(execution_blocked(false));
}

}  // namespace
}  // namespace anota
