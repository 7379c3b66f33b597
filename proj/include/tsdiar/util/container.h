// tsdiar/util/container.h

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

#ifndef TSDIAR_UTIL_CONTAINER_H_
#define TSDIAR_UTIL_CONTAINER_H_

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace tsdiar {

// Versioned binary model container: magic, format version, JSON header
// (kind, config, tensor directory, payload fingerprint), then a single
// little-endian float64 payload holding all tensors back to back in
// directory order (row-major).
struct ModelContainer {
  std::string kind;
  nlohmann::ordered_json config;
  // Directory order is the serialization order.
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;

  const Eigen::MatrixXd &Tensor(const std::string &name) const;
  void Add(const std::string &name, const Eigen::MatrixXd &m) {
    tensors.emplace_back(name, m);
  }
};

void WriteModelContainer(const std::string &path, const ModelContainer &mc);
ModelContainer ReadModelContainer(const std::string &path);

}  // namespace tsdiar

#endif  // TSDIAR_UTIL_CONTAINER_H_
