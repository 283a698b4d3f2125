// Copyright 2026 The RoP Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rop/llm/fingerprint.h"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

#include "rop/core/errors.h"

namespace rop::llm {

std::string canonical_serialization(const ChatRequest& req) {
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  return to_json(req).dump(-1, ' ', false,
                           nlohmann::json::error_handler_t::strict);
}

std::string fingerprint(const ChatRequest& req) {
  const std::string canon = canonical_serialization(req);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(canon.data(), canon.size(), digest.data(), &len,
                 EVP_sha256(), nullptr) != 1) {
    throw BackendError("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace rop::llm
