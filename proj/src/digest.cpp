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

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace anota {

std::string sha256_hex(std::string_view data) {
	std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
	unsigned int len = 0;
	if(EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
		throw std::runtime_error("SHA-256 digest failed");
	}
	static const char* hex = "0123456789abcdef";
	std::string out;
	out.reserve(len * 2);
	for(unsigned int i = 0; i < len; ++i) {
		out.push_back(hex[md[i] >> 4]);
		out.push_back(hex[md[i] & 0xf]);
	}
	return out;
}

}  // namespace anota
