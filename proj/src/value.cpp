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

#include <anota/value.hpp>

namespace anota {

const char* to_string(value_kind k) {
	switch(k) {
	case value_kind::unit: return "Unit";
	case value_kind::integer: return "Int";
	case value_kind::string: return "Str";
	case value_kind::boolean: return "Bool";
	case value_kind::list: return "List";
	case value_kind::map: return "Map";
	case value_kind::func: return "Func";
	case value_kind::fd: return "Fd";
	case value_kind::unbound: return "Unbound";
	}
	return "?";
}

value value::integer(int64_t v, taint_mask t) {
	value out;
	out.kind = value_kind::integer;
	out.num = v;
	out.taint = t;
	return out;
}

value value::boolean(bool v, taint_mask t) {
	value out;
	out.kind = value_kind::boolean;
	out.num = v ? 1 : 0;
	out.taint = t;
	return out;
}

value value::string(std::string s, taint_mask t) {
	value out;
	out.kind = value_kind::string;
	out.obj = std::make_shared<std::string>(std::move(s));
	out.taint = t;
	return out;
}

value value::list(value_list items, taint_mask t) {
	value out;
	out.kind = value_kind::list;
	out.obj = std::make_shared<value_list>(std::move(items));
	out.taint = t;
	return out;
}

value value::map(value_map items, taint_mask t) {
	value out;
	out.kind = value_kind::map;
	out.obj = std::make_shared<value_map>(std::move(items));
	out.taint = t;
	return out;
}

value value::fd(int64_t n, taint_mask t) {
	value out;
	out.kind = value_kind::fd;
	out.num = n;
	out.taint = t;
	return out;
}

value value::func(int64_t index) {
	value out;
	out.kind = value_kind::func;
	out.num = index;
	return out;
}

bool value::truthy() const {
	switch(kind) {
	case value_kind::integer:
	case value_kind::boolean: return num != 0;
	case value_kind::string: return !str().empty();
	case value_kind::list: return !items().empty();
	case value_kind::map: return !fields().empty();
	case value_kind::func:
	case value_kind::fd: return true;
	case value_kind::unit:
	case value_kind::unbound: return false;
	}
	return false;
}

bool values_equal(const value& a, const value& b) {
	auto numeric = [](const value& v) { return v.kind == value_kind::integer || v.kind == value_kind::boolean; };
	if(numeric(a) && numeric(b)) {
		return a.num == b.num;
	}
	if(a.kind != b.kind) {
		return false;
	}
	switch(a.kind) {
	case value_kind::unit:
	case value_kind::unbound: return true;
	case value_kind::string: return a.str() == b.str();
	case value_kind::func:
	case value_kind::fd: return a.num == b.num;
	case value_kind::list: {
		const auto& x = a.items();
		const auto& y = b.items();
		if(x.size() != y.size()) {
			return false;
		}
		for(size_t i = 0; i < x.size(); ++i) {
			if(!values_equal(x[i], y[i])) {
				return false;
			}
		}
		return true;
	}
	case value_kind::map: {
		const auto& x = a.fields();
		const auto& y = b.fields();
		if(x.size() != y.size()) {
			return false;
		}
		for(auto i = x.begin(), j = y.begin(); i != x.end(); ++i, ++j) {
			if(i->first != j->first || !values_equal(i->second, j->second)) {
				return false;
			}
		}
		return true;
	}
	default: return false;
	}
}

namespace {

void render_into(const value& v, bool quote, std::string& out, int depth) {
	if(depth > 32) {
		out += "...";
		return;
	}
	switch(v.kind) {
	case value_kind::unit: out += "None"; break;
	case value_kind::unbound: out += "<unbound>"; break;
	case value_kind::integer: out += std::to_string(v.num); break;
	case value_kind::boolean: out += v.num ? "True" : "False"; break;
	case value_kind::string:
		if(quote) {
			out.push_back('\'');
			out += v.str();
			out.push_back('\'');
		} else {
			out += v.str();
		}
		break;
	case value_kind::fd: out += "<fd " + std::to_string(v.num) + ">"; break;
	case value_kind::func: out += "<function>"; break;
	case value_kind::list: {
		out.push_back('[');
		bool first = true;
		for(const auto& item : v.items()) {
			if(!first) {
				out += ", ";
			}
			first = false;
			render_into(item, true, out, depth + 1);
		}
		out.push_back(']');
		break;
	}
	case value_kind::map: {
		out.push_back('{');
		bool first = true;
		for(const auto& [k, item] : v.fields()) {
			if(!first) {
				out += ", ";
			}
			first = false;
			out += "'" + k + "': ";
			render_into(item, true, out, depth + 1);
		}
		out.push_back('}');
		break;
	}
	}
}

taint_mask deep_taint_rec(const value& v, int depth) {
	taint_mask t = v.taint;
	if(depth > 32) {
		return t;
	}
	if(v.kind == value_kind::list) {
		for(const auto& item : v.items()) {
			t |= deep_taint_rec(item, depth + 1);
		}
	} else if(v.kind == value_kind::map) {
		for(const auto& [_, item] : v.fields()) {
			t |= deep_taint_rec(item, depth + 1);
		}
	}
	return t;
}

}  // namespace

std::string render(const value& v, bool quote_strings) {
	std::string out;
	render_into(v, quote_strings, out, 0);
	return out;
}

taint_mask deep_taint(const value& v) {
	if(v.kind != value_kind::list && v.kind != value_kind::map) {
		return v.taint;
	}
	return deep_taint_rec(v, 0);
}

}  // namespace anota
