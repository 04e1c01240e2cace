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

#include <anota/annotation.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>

namespace anota {

enum class violation_kind { syscall, dataflow_sink, object_access, execution, toctou, timing_leak };

const char* to_string(violation_kind k);

struct violation {
	uint32_t policy_id = 0;
	std::string policy_text;
	violation_kind kind = violation_kind::syscall;
	source_site site;
	nlohmann::ordered_json event;  // syscall event, access descriptor, or t statistic
	std::string message;
	std::string input_digest;  // hex SHA-256 of the triggering input
};

constexpr int k_report_schema_version = 1;

// Single-line report with a fixed field order.
nlohmann::ordered_json to_json(const violation& v);
std::string to_report_line(const violation& v);

}  // namespace anota
