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

#include <stdexcept>
#include <string>

namespace anota {

class anota_error : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

// Malformed annotation or script text. line is 0 when unknown.
class syntax_error : public anota_error {
public:
	syntax_error(const std::string& msg, int line = 0):
	        anota_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
	        m_line(line) {}
	int line() const { return m_line; }

private:
	int m_line;
};

class unknown_head_error : public syntax_error {
public:
	using syntax_error::syntax_error;
};

class duplicate_kwarg_error : public syntax_error {
public:
	using syntax_error::syntax_error;
};

// Annotation is syntactically fine but its head/arguments make no policy.
class lowering_error : public anota_error {
public:
	using anota_error::anota_error;
};

class undefined_name_error : public syntax_error {
public:
	using syntax_error::syntax_error;
};

// Runtime failure of the script itself (type errors, missing names). Never a violation.
class script_error : public anota_error {
public:
	script_error(const std::string& msg, int line = 0):
	        anota_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
	        m_line(line) {}
	int line() const { return m_line; }

private:
	int m_line;
};

class usage_error : public anota_error {
public:
	using anota_error::anota_error;
};

}  // namespace anota
