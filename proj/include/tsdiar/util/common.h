// tsdiar/util/common.h

// Copyright 2026  tsdiar contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TSDIAR_UTIL_COMMON_H_
#define TSDIAR_UTIL_COMMON_H_

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tsdiar {

// Comparison slack for times held in double-precision seconds.
inline constexpr double kTimeEps = 1e-9;

// Malformed or inconsistent input data (CLI exit code 2).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: divergence, non-convergence, NaN (CLI exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void Require(bool cond, const std::string &msg) {
  if (!cond) throw DataError(msg);
}

inline void RequireNumeric(bool cond, const std::string &msg) {
  if (!cond) throw NumericError(msg);
}

// FNV-1a, used to fingerprint serialized model payloads.
inline std::uint64_t Fnv1a64(const void *data, std::size_t n,
                             std::uint64_t seed = 1469598103934665603ull) {
  const auto *p = static_cast<const unsigned char *>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string ToHex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

}  // namespace tsdiar

#endif  // TSDIAR_UTIL_COMMON_H_
