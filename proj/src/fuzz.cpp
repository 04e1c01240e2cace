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

#include <anota/digest.hpp>
#include <anota/error.hpp>
#include <anota/harness.hpp>

#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>
#include <unordered_set>

namespace anota {

mutator::mutator(uint64_t seed, std::vector<std::string> dictionary, size_t max_len):
        m_rng(seed), m_dict(std::move(dictionary)), m_max_len(max_len) {}

uint64_t mutator::below(uint64_t n) {
	return n == 0 ? 0 : std::uniform_int_distribution<uint64_t>(0, n - 1)(m_rng);
}

std::string mutator::mutate_once(std::string s, const std::string& other) {
	enum { flip, insert_byte, erase_byte, dict_insert, dict_overwrite, splice, random_byte, count };
	int op = static_cast<int>(below(count));
	if(m_dict.empty() && (op == dict_insert || op == dict_overwrite)) {
		op = insert_byte;
	}
	switch(op) {
	case flip:
		if(!s.empty()) {
			s[below(s.size())] ^= static_cast<char>(1u << below(8));
		}
		break;
	case insert_byte: s.insert(s.begin() + static_cast<ptrdiff_t>(below(s.size() + 1)), static_cast<char>(below(256))); break;
	case erase_byte:
		if(!s.empty()) {
			s.erase(below(s.size()), 1 + below(std::min<size_t>(4, s.size())));
		}
		break;
	case dict_insert: {
		const std::string& w = m_dict[below(m_dict.size())];
		s.insert(below(s.size() + 1), w);
		break;
	}
	case dict_overwrite: {
		const std::string& w = m_dict[below(m_dict.size())];
		size_t pos = s.size() > w.size() ? below(s.size() - w.size() + 1) : 0;
		s.replace(pos, std::min(w.size(), s.size() - pos), w);
		break;
	}
	case splice:
		if(!other.empty()) {
			size_t cut = below(s.size() + 1);
			size_t from = below(other.size() + 1);
			s = s.substr(0, cut) + other.substr(from);
		}
		break;
	case random_byte:
		if(!s.empty()) {
			s[below(s.size())] = static_cast<char>(below(256));
		}
		break;
	}
	return s;
}

std::string mutator::mutate(const std::string& input, const std::string& splice_with) {
	std::string s = input;
	// Geometric stacking: one mutation half the time, more with falling odds.
	do {
		s = mutate_once(std::move(s), splice_with);
	} while(below(2) == 1 && s.size() < m_max_len);
	if(s.size() > m_max_len) {
		s.resize(m_max_len);
	}
	return s;
}

namespace {

uint64_t edge_key(const std::pair<int32_t, int32_t>& e) {
	return (static_cast<uint64_t>(static_cast<uint32_t>(e.first)) << 32) | static_cast<uint32_t>(e.second);
}

class campaign {
public:
	campaign(const program& prog, const fuzz_config& cfg): m_prog(prog), m_cfg(cfg) {
		m_exec = cfg.exec;
		// Stop each execution at its first violation, in process.
		m_exec.escalation = escalation_mode::trap;
		m_exec.record_trace = false;
	}

	fuzz_summary run() {
		auto start = std::chrono::steady_clock::now();
		m_deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
		                             std::chrono::duration<double>(m_cfg.max_seconds));
		for(const auto& seed : m_cfg.seeds) {
			evaluate(seed);
		}
		if(m_corpus.empty()) {
			m_corpus.push_back(m_cfg.seeds.front());
		}
		unsigned workers = std::max(1u, m_cfg.workers);
		if(workers == 1) {
			work(0);
		} else {
			std::vector<std::thread> threads;
			for(unsigned w = 0; w < workers; ++w) {
				threads.emplace_back([this, w] { work(w); });
			}
			for(auto& t : threads) {
				t.join();
			}
		}
		fuzz_summary s;
		s.findings = std::move(m_findings);
		s.executions = m_executions;
		s.edges = m_edges.size();
		s.corpus_size = m_corpus.size();
		s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		s.execs_per_second = s.seconds > 0 ? static_cast<double>(s.executions) / s.seconds : 0;
		return s;
	}

private:
	const program& m_prog;
	const fuzz_config& m_cfg;
	exec_config m_exec;
	std::chrono::steady_clock::time_point m_deadline;
	std::mutex m_mutex;
	std::vector<std::string> m_corpus;
	std::unordered_set<uint64_t> m_edges;
	std::set<std::tuple<uint32_t, int, int>> m_seen;
	std::vector<fuzz_finding> m_findings;
	uint64_t m_executions = 0;
	bool m_stop = false;

	// Runs one input and merges its outcome; false once the budget is spent.
	bool evaluate(const std::string& input) {
		{
			std::lock_guard lock(m_mutex);
			if(m_stop || m_executions >= m_cfg.max_iterations) {
				return false;
			}
		}
		exec_result r = execute(m_prog, input, m_exec);
		std::lock_guard lock(m_mutex);
		if(m_stop || m_executions >= m_cfg.max_iterations) {
			return false;
		}
		uint64_t index = ++m_executions;
		bool fresh = false;
		for(const auto& e : r.coverage) {
			fresh = m_edges.insert(edge_key(e)).second || fresh;
		}
		if(fresh) {
			m_corpus.push_back(input);
		}
		for(const auto& v : r.violations) {
			if(!m_seen.insert({v.policy_id, v.site.line, v.site.op}).second) {
				continue;
			}
			m_findings.push_back({v, input, index});
			write_artifact(input);
			if(m_cfg.stop_on_finding) {
				m_stop = true;
			}
		}
		return true;
	}

	void write_artifact(const std::string& input) {
		if(!m_cfg.findings_dir) {
			return;
		}
		std::filesystem::create_directories(*m_cfg.findings_dir);
		std::ofstream out(*m_cfg.findings_dir / sha256_hex(input), std::ios::binary);
		out << input;
	}

	void work(unsigned worker) {
		mutator mut(m_cfg.rng_seed + worker * 0x9e3779b97f4a7c15ULL, m_cfg.dictionary, m_cfg.max_input_len);
		while(std::chrono::steady_clock::now() < m_deadline) {
			std::string base;
			std::string other;
			{
				std::lock_guard lock(m_mutex);
				base = m_corpus[mut.below(m_corpus.size())];
				other = m_corpus[mut.below(m_corpus.size())];
			}
			if(!evaluate(mut.mutate(base, other))) {
				return;
			}
		}
	}
};

}  // namespace

fuzz_summary fuzz(const program& prog, const fuzz_config& config) {
	if(config.seeds.empty()) {
		throw usage_error("fuzzing needs at least one seed input");
	}
	return campaign(prog, config).run();
}

}  // namespace anota
