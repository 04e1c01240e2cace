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

#include <anota/harness.hpp>

#include <chrono>
#include <cmath>

namespace anota {

const std::vector<bench_program>& bench_suite() {
	static const std::vector<bench_program> suite = {
	        {"collatz", R"(total = 0
n = 1
while n < 3000:
    x = n
    while x != 1:
        if x % 2 == 0:
            x = x / 2
        else:
            x = 3 * x + 1
        total += 1
    n += 1
print(total)
)",
	         ""},
	        {"hash_chain", R"(def step(prev, i):
    return hash(str(i) + "-" + prev)

h = input()
i = 0
while i < 60000:
    h = step(h, i)
    i += 1
print(h)
)",
	         "seed"},
	        {"bubble_sort", R"(items = []
i = 0
x = 7
while i < 400:
    x = (x * 1103 + 12345) % 10007
    items.append(x)
    i += 1
n = len(items)
i = 0
while i < n:
    j = 0
    while j < n - i - 1:
        if items[j] > items[j + 1]:
            t = items[j]
            items[j] = items[j + 1]
            items[j + 1] = t
        j += 1
    i += 1
print(items[0], items[n - 1])
)",
	         ""},
	        {"word_count", R"(words = ["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta"]
counts = {}
i = 0
seed = 3
while i < 60000:
    seed = (seed * 75 + 74) % 65537
    w = words[seed % 8]
    if w in counts:
        counts[w] = counts[w] + 1
    else:
        counts[w] = 1
    i += 1
print(counts)
)",
	         ""},
	        {"file_io", R"(def checksum(s):
    total = 0
    i = 0
    while i < len(s):
        total = (total * 31 + i) % 1000003
        i += 1
    return total

fd = open("/tmp/bench.dat", "w")
i = 0
acc = 0
while i < 1200:
    line = "record " + str(i) + " " + str(acc)
    write(fd, line)
    acc = (acc + checksum(line + line + line + line)) % 1000003
    i += 1
close(fd)
fd = open("/tmp/bench.dat", "r")
data = read(fd, 4096)
close(fd)
print(acc, len(data))
)",
	         ""},
	};
	return suite;
}

double geometric_mean(const std::vector<double>& xs) {
	if(xs.empty()) {
		return 0;
	}
	double s = 0;
	for(double x : xs) {
		s += std::log(x);
	}
	return std::exp(s / static_cast<double>(xs.size()));
}

namespace {

double best_time(const program& prog, const std::string& input, const exec_config& cfg, unsigned reps,
                 uint64_t* cost) {
	double best = 1e300;
	for(unsigned i = 0; i < std::max(1u, reps); ++i) {
		auto t0 = std::chrono::steady_clock::now();
		exec_result r = execute(prog, input, cfg);
		double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
		best = std::min(best, dt);
		if(cost) {
			*cost = r.cost;
		}
	}
	return best;
}

}  // namespace

std::vector<bench_row> run_bench(unsigned reps) {
	std::vector<bench_row> rows;
	for(const auto& b : bench_suite()) {
		program prog = compile(b.source);
		bench_row row;
		row.name = b.name;
		exec_config off;
		off.monitors = false;
		exec_config on;
		exec_config taint_all;
		taint_all.bench = bench_mode::taint_all;
		exec_config log_all;
		log_all.bench = bench_mode::syscall_log_all;
		// Interleave modes per repetition so drift affects all of them alike.
		row.disabled = row.zero_annotations = row.taint_all = row.syscall_log_all = 1e300;
		for(unsigned i = 0; i < std::max(1u, reps); ++i) {
			row.disabled = std::min(row.disabled, best_time(prog, b.input, off, 1, &row.cost));
			row.zero_annotations = std::min(row.zero_annotations, best_time(prog, b.input, on, 1, nullptr));
			row.taint_all = std::min(row.taint_all, best_time(prog, b.input, taint_all, 1, nullptr));
			row.syscall_log_all = std::min(row.syscall_log_all, best_time(prog, b.input, log_all, 1, nullptr));
		}
		rows.push_back(row);
	}
	return rows;
}

}  // namespace anota
