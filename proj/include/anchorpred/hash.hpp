// Copyright 2026 The Anchorpred Authors.
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

#ifndef ANCHORPRED_HASH_HPP_
#define ANCHORPRED_HASH_HPP_

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "anchorpred/error.hpp"

namespace anchorpred {

using Digest = std::array<unsigned char, 32>;

inline Digest sha256(std::string_view data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw Error("sha256 failed");
  }
  return out;
}

// Lowercase hex of the first `bytes` bytes of SHA-256(data).
inline std::string hex_digest(std::string_view data, std::size_t bytes = 16) {
  static constexpr char kHex[] = "0123456789abcdef";
  const Digest d = sha256(data);
  std::string out;
  out.reserve(bytes * 2);
  for (std::size_t i = 0; i < bytes && i < d.size(); ++i) {
    out.push_back(kHex[d[i] >> 4]);
    out.push_back(kHex[d[i] & 0xf]);
  }
  return out;
}

// First eight digest bytes read big-endian.
inline std::uint64_t hash_u64(std::string_view data) {
  const Digest d = sha256(data);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | d[i];
  return v;
}

}  // namespace anchorpred

#endif  // ANCHORPRED_HASH_HPP_
