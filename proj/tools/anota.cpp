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

// Command line front end: run, fuzz, replay, timecheck, bench.

#include <anota/error.hpp>
#include <anota/harness.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace anota;

struct global_options {
	std::string escalation = "exit";
	uint64_t cost_limit = k_default_cost_limit;
	std::string emit_trace;
	std::string vfs;
};

std::string read_file(const std::string& path) {
	std::ifstream in(path, std::ios::binary);
	if(!in) {
		throw usage_error("cannot open " + path);
	}
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

exec_config make_config(const global_options& g) {
	exec_config cfg;
	auto mode = escalation_from_string(g.escalation);
	if(!mode) {
		throw usage_error("unknown escalation mode '" + g.escalation + "'");
	}
	cfg.escalation = *mode;
	cfg.cost_limit = g.cost_limit;
	cfg.vfs = g.vfs.empty() ? default_vfs() : load_vfs_manifest(g.vfs);
	cfg.record_trace = !g.emit_trace.empty();
	return cfg;
}

// Compile errors are script errors (exit 1); unreadable files are usage errors.
std::optional<program> load_program(const std::string& path) {
	std::string src = read_file(path);
	try {
		return compile(src);
	} catch(const syntax_error& e) {
		std::cerr << path << ": " << e.what() << '\n';
		return std::nullopt;
	}
}

void write_trace(const std::string& path, const std::vector<syscall_event>& trace) {
	std::ofstream out(path, std::ios::binary);
	if(!out) {
		throw usage_error("cannot write trace " + path);
	}
	for(const auto& ev : trace) {
		out << to_trace_line(ev) << '\n';
	}
}

std::string unescape_entry(const std::string& raw) {
	std::string s = raw;
	if(s.size() >= 2 && s.front() == '"' && s.back() == '"') {
		s = s.substr(1, s.size() - 2);
	}
	std::string out;
	for(size_t i = 0; i < s.size(); ++i) {
		if(s[i] != '\\' || i + 1 >= s.size()) {
			out.push_back(s[i]);
			continue;
		}
		char e = s[++i];
		if(e == 'x' && i + 2 < s.size()) {
			out.push_back(static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16)));
			i += 2;
		} else if(e == 'n') {
			out.push_back('\n');
		} else if(e == 't') {
			out.push_back('\t');
		} else {
			out.push_back(e);
		}
	}
	return out;
}

std::string hex_decode(const std::string& hex) {
	if(hex.size() % 2) {
		throw usage_error("--fixed needs an even number of hex digits");
	}
	std::string out;
	for(size_t i = 0; i < hex.size(); i += 2) {
		size_t used = 0;
		int v = 0;
		try {
			v = std::stoi(hex.substr(i, 2), &used, 16);
		} catch(const std::exception&) {
			used = 0;
		}
		if(used != 2) {
			throw usage_error("--fixed is not hex");
		}
		out.push_back(static_cast<char>(v));
	}
	return out;
}

int cmd_run(const global_options& g, const std::string& script, const std::string& input_path,
            const std::optional<std::string>& input_text) {
	exec_config cfg = make_config(g);
	auto prog = load_program(script);
	if(!prog) {
		return k_exit_script_error;
	}
	std::string input;
	if(input_text) {
		input = *input_text;
	} else if(input_path == "-") {
		std::ostringstream ss;
		ss << std::cin.rdbuf();
		input = ss.str();
	} else if(!input_path.empty()) {
		input = read_file(input_path);
	}
	escalation_mode mode = cfg.escalation;
	exec_result r = execute(*prog, input, cfg);
	std::cout << r.output << std::flush;
	if(cfg.record_trace) {
		write_trace(g.emit_trace, r.trace);
	}
	if(r.status == exec_status::script_error || r.status == exec_status::timeout) {
		std::cerr << script << ": " << r.error << '\n';
	}
	if(!r.violations.empty()) {
		if(mode == escalation_mode::collect) {
			for(const auto& v : r.violations) {
				std::cerr << to_report_line(v) << '\n';
			}
			return k_exit_violation;
		}
		escalate(r.violations.front(), mode);
	}
	if(r.status == exec_status::script_error || r.status == exec_status::timeout) {
		return k_exit_script_error;
	}
	return k_exit_clean;
}

int cmd_fuzz(const global_options& g, const std::string& script, fuzz_config fc, const std::string& corpus_dir,
             const std::string& dict_path, const std::vector<std::string>& dict_entries) {
	fc.exec = make_config(g);
	auto prog = load_program(script);
	if(!prog) {
		return k_exit_script_error;
	}
	if(!corpus_dir.empty()) {
		if(!std::filesystem::is_directory(corpus_dir)) {
			throw usage_error("corpus directory " + corpus_dir + " does not exist");
		}
		std::vector<std::filesystem::path> files;
		for(const auto& e : std::filesystem::directory_iterator(corpus_dir)) {
			if(e.is_regular_file()) {
				files.push_back(e.path());
			}
		}
		std::sort(files.begin(), files.end());
		for(const auto& f : files) {
			fc.seeds.push_back(read_file(f.string()));
		}
	}
	if(!dict_path.empty()) {
		std::istringstream in(read_file(dict_path));
		std::string line;
		while(std::getline(in, line)) {
			if(line.empty() || line[0] == '#') {
				continue;
			}
			fc.dictionary.push_back(unescape_entry(line));
		}
	}
	for(const auto& e : dict_entries) {
		fc.dictionary.push_back(unescape_entry(e));
	}
	fuzz_summary s = fuzz(*prog, fc);
	nlohmann::ordered_json j;
	j["executions"] = s.executions;
	j["edges"] = s.edges;
	j["corpus"] = s.corpus_size;
	j["seconds"] = s.seconds;
	j["execs_per_second"] = s.execs_per_second;
	j["findings"] = nlohmann::ordered_json::array();
	for(const auto& f : s.findings) {
		nlohmann::ordered_json item;
		item["execution"] = f.execution;
		item["input"] = f.input;
		item["report"] = to_json(f.report);
		j["findings"].push_back(std::move(item));
	}
	std::cout << j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
	return s.findings.empty() ? k_exit_clean : k_exit_violation;
}

int cmd_replay(const std::string& trace_path, const std::string& policy_path) {
	std::ifstream policy(policy_path);
	if(!policy) {
		throw usage_error("cannot open " + policy_path);
	}
	std::vector<std::string> policies = parse_policy_file(policy);
	std::ifstream trace(trace_path);
	if(!trace) {
		throw usage_error("cannot open " + trace_path);
	}
	replay_result r;
	try {
		r = replay(trace, policies);
	} catch(const trace_error& e) {
		std::cerr << trace_path << ": " << e.what() << '\n';
		return k_exit_script_error;
	}
	for(const auto& d : r.diagnostics) {
		std::cerr << "note: " << d << '\n';
	}
	for(const auto& v : r.violations) {
		std::cout << to_report_line(v) << '\n';
	}
	return r.violations.empty() ? k_exit_clean : k_exit_violation;
}

int cmd_timecheck(const global_options& g, const std::string& script, const std::string& fn,
                  const std::string& fixed_hex, uint64_t n, uint64_t seed) {
	exec_config cfg = make_config(g);
	auto prog = load_program(script);
	if(!prog) {
		return k_exit_script_error;
	}
	std::string fixed = hex_decode(fixed_hex);
	timecheck_result r = timecheck(*prog, fn, fixed, n, seed, cfg);
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.6f", r.t);
	std::cout << "fn=" << fn << " t=" << buf << " verdict=" << to_string(r.verdict) << '\n';
	if(r.verdict != timing_verdict::timing_leak) {
		return k_exit_clean;
	}
	violation v;
	v.kind = violation_kind::timing_leak;
	exec_result probe = execute(*prog, fixed, cfg);
	for(const auto& p : probe.policies) {
		if(p.spec.domain == policy_domain::timing_con && p.spec.watch && p.spec.watch->target == fn) {
			v.policy_id = p.id;
			v.policy_text = p.text;
			v.site = p.spec.site;
			break;
		}
	}
	v.event = {{"fn", fn},       {"t", std::isfinite(r.t) ? nlohmann::ordered_json(r.t) : nlohmann::ordered_json(buf)},
	           {"n0", r.state.n[0]}, {"n1", r.state.n[1]},
	           {"mean0", r.state.mean[0]}, {"mean1", r.state.mean[1]}};
	v.message = "execution cost of '" + fn + "' depends on its input";
	v.input_digest = probe.input_digest;
	std::cerr << to_report_line(v) << '\n';
	return k_exit_violation;
}

int cmd_bench(unsigned reps) {
	auto rows = run_bench(reps);
	std::vector<double> zero, taint, logall;
	std::printf("%-12s %10s %10s %10s %10s %10s\n", "benchmark", "instrs", "disabled", "zero-ann", "taint-all",
	            "log-all");
	for(const auto& r : rows) {
		double z = r.zero_annotations / r.disabled;
		double t = r.taint_all / r.disabled;
		double l = r.syscall_log_all / r.disabled;
		zero.push_back(z);
		taint.push_back(t);
		logall.push_back(l);
		std::printf("%-12s %10llu %10.3f %10.3f %10.3f %10.3f\n", r.name.c_str(),
		            static_cast<unsigned long long>(r.cost), 1.0, z, t, l);
	}
	std::printf("%-12s %10s %10.3f %10.3f %10.3f %10.3f\n", "geomean", "", 1.0, geometric_mean(zero),
	            geometric_mean(taint), geometric_mean(logall));
	return k_exit_clean;
}

}  // namespace

int main(int argc, char** argv) {
	CLI::App app{"anota: annotation-driven policy sanitizer for AnotaScript"};
	app.require_subcommand(1);
	global_options g;
	app.add_option("--escalation", g.escalation, "trap, exit or collect")
	        ->check(CLI::IsMember({"trap", "exit", "collect"}));
	app.add_option("--cost-limit", g.cost_limit, "instruction budget per execution");
	app.add_option("--emit-trace", g.emit_trace, "write the syscall trace as JSONL");
	app.add_option("--vfs", g.vfs, "JSON manifest of virtual files (path -> content)");

	std::string script, input_path, trace_path, policy_path, corpus_dir, dict_path, fn, fixed;
	std::optional<std::string> input_text;
	std::vector<std::string> dict_entries;
	std::string findings_dir;
	fuzz_config fc;
	uint64_t n = 2000;
	uint64_t seed = 1;
	unsigned reps = 3;

	auto* run = app.add_subcommand("run", "execute a script once");
	run->fallthrough();
	run->add_option("script", script)->required();
	run->add_option("input", input_path, "file holding the script input, - for stdin");
	run->add_option("--arg", input_text, "input given inline");

	auto* fz = app.add_subcommand("fuzz", "coverage-guided fuzzing");
	fz->fallthrough();
	fz->add_option("script", script)->required();
	fz->add_option("--corpus", corpus_dir, "directory of seed inputs");
	fz->add_option("--seed-input", fc.seeds, "seed input given inline");
	fz->add_option("--dict", dict_path, "dictionary file, one entry per line");
	fz->add_option("--dict-entry", dict_entries, "dictionary entry given inline");
	fz->add_option("--iterations", fc.max_iterations);
	fz->add_option("--seconds", fc.max_seconds);
	fz->add_option("--rng-seed", fc.rng_seed);
	fz->add_option("--workers", fc.workers);
	fz->add_option("--findings", findings_dir, "directory for finding inputs");
	fz->add_flag("--stop-on-finding", fc.stop_on_finding);

	auto* rp = app.add_subcommand("replay", "check a JSONL syscall trace against a policy file");
	rp->fallthrough();
	rp->add_option("trace", trace_path)->required();
	rp->add_option("policy", policy_path)->required();

	auto* tc = app.add_subcommand("timecheck", "fixed-vs-random constant-time test");
	tc->fallthrough();
	tc->add_option("script", script)->required();
	tc->add_option("--fn", fn)->required();
	tc->add_option("--fixed", fixed, "fixed input as hex")->required();
	tc->add_option("-n,--n", n, "executions per class");
	tc->add_option("--seed", seed);

	auto* bn = app.add_subcommand("bench", "monitor overhead suite");
	bn->fallthrough();
	bn->add_option("--reps", reps);

	try {
		app.parse(argc, argv);
	} catch(const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch(const CLI::ParseError& e) {
		app.exit(e);
		return k_exit_usage;
	}

	try {
		if(*run) {
			return cmd_run(g, script, input_path, input_text);
		}
		if(*fz) {
			if(!findings_dir.empty()) {
				fc.findings_dir = findings_dir;
			}
			return cmd_fuzz(g, script, fc, corpus_dir, dict_path, dict_entries);
		}
		if(*rp) {
			return cmd_replay(trace_path, policy_path);
		}
		if(*tc) {
			return cmd_timecheck(g, script, fn, fixed, n, seed);
		}
		if(*bn) {
			return cmd_bench(reps);
		}
	} catch(const usage_error& e) {
		std::cerr << "error: " << e.what() << '\n';
		return k_exit_usage;
	} catch(const std::exception& e) {
		std::cerr << "error: " << e.what() << '\n';
		return k_exit_script_error;
	}
	return k_exit_usage;
}
