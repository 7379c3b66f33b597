// tsdiar/core/uem.h

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

#ifndef TSDIAR_CORE_UEM_H_
#define TSDIAR_CORE_UEM_H_

#include <map>
#include <string>
#include <vector>

namespace tsdiar {

struct TimeInterval {
  double onset = 0.0;
  double offset = 0.0;  // exclusive end

  double Duration() const { return offset - onset; }
};

// Scored regions per file. A file with no entry is scored in full; an empty
// mask therefore means "score everything".
struct UemMask {
  std::map<std::string, std::vector<TimeInterval>> regions;

  bool HasFile(const std::string &file_id) const {
    return regions.count(file_id) > 0;
  }

  // True if time t of file_id falls inside a scored region.
  bool Contains(const std::string &file_id, double t) const {
    auto it = regions.find(file_id);
    if (it == regions.end()) return true;
    for (const auto &r : it->second)
      if (t >= r.onset && t < r.offset) return true;
    return false;
  }

  // Sorts and merges overlapping regions per file; run after construction.
  void Canonicalize();
};

}  // namespace tsdiar

#endif  // TSDIAR_CORE_UEM_H_
