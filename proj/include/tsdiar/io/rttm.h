// tsdiar/io/rttm.h

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

#ifndef TSDIAR_IO_RTTM_H_
#define TSDIAR_IO_RTTM_H_

#include <map>
#include <string>

#include "tsdiar/core/segmentation.h"
#include "tsdiar/core/uem.h"

namespace tsdiar {

// RTTM: `SPEAKER <file> <chan> <tbeg> <tdur> <NA> <NA> <spk> <NA> [<NA>]`.
// Non-SPEAKER record types are skipped. Throws DataError with the line
// number on malformed lines.
std::map<std::string, Segmentation> ParseRttm(const std::string &text);

// Lines sorted by (file_id, onset, speaker); times with fixed 2-decimal
// precision; channel written as 1.
std::string WriteRttm(const std::map<std::string, Segmentation> &segs);

// UEM: `<file> <chan> <onset> <offset>` with offset > onset. Empty text
// yields a mask that scores everything.
UemMask ParseUem(const std::string &text);

// File helpers around the text codecs above.
std::map<std::string, Segmentation> ReadRttmFile(const std::string &path);
void WriteRttmFile(const std::string &path,
                   const std::map<std::string, Segmentation> &segs);
UemMask ReadUemFile(const std::string &path);

}  // namespace tsdiar

#endif  // TSDIAR_IO_RTTM_H_
