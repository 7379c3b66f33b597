// tsdiar/io/rttm.cc

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

#include "tsdiar/io/rttm.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tsdiar {

namespace {

std::vector<std::string> SplitWhitespace(const std::string &line) {
  std::vector<std::string> fields;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) fields.push_back(tok);
  return fields;
}

double ParseTime(const std::string &tok, int line_no, const char *what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    throw DataError("RTTM/UEM line " + std::to_string(line_no) +
                    ": non-numeric " + what + " '" + tok + "'");
  }
}

std::string ReadTextFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), "cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

std::map<std::string, Segmentation> ParseRttm(const std::string &text) {
  std::map<std::string, Segmentation> out;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (fields[0] != "SPEAKER") {
      if (fields[0][0] != ';')  // ;; comment lines are silent
        std::cerr << "ParseRttm: skipping non-SPEAKER record at line "
                  << line_no << "\n";
      continue;
    }
    if (fields.size() < 9)
      throw DataError("RTTM line " + std::to_string(line_no) +
                      ": expected at least 9 fields, got " +
                      std::to_string(fields.size()));
    const std::string &file_id = fields[1];
    double tbeg = ParseTime(fields[3], line_no, "onset");
    double tdur = ParseTime(fields[4], line_no, "duration");
    if (tdur <= 0.0)
      throw DataError("RTTM line " + std::to_string(line_no) +
                      ": non-positive duration");
    auto it = out.find(file_id);
    if (it == out.end()) it = out.emplace(file_id, Segmentation(file_id)).first;
    it->second.segments.emplace_back(fields[7], tbeg, tdur);
  }
  return out;
}

std::string WriteRttm(const std::map<std::string, Segmentation> &segs) {
  std::string out;
  char buf[256];
  for (const auto &[file_id, seg] : segs) {
    std::vector<Segment> sorted = seg.segments;
    std::sort(sorted.begin(), sorted.end(),
              [](const Segment &a, const Segment &b) {
                if (a.onset != b.onset) return a.onset < b.onset;
                return a.speaker < b.speaker;
              });
    for (const auto &s : sorted) {
      std::snprintf(buf, sizeof(buf),
                    "SPEAKER %s 1 %.2f %.2f <NA> <NA> %s <NA> <NA>\n",
                    file_id.c_str(), s.onset, s.duration, s.speaker.c_str());
      out += buf;
    }
  }
  return out;
}

UemMask ParseUem(const std::string &text) {
  UemMask mask;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto fields = SplitWhitespace(line);
    if (fields.empty() || fields[0][0] == ';') continue;
    if (fields.size() != 4)
      throw DataError("UEM line " + std::to_string(line_no) +
                      ": expected 4 fields");
    double onset = ParseTime(fields[2], line_no, "onset");
    double offset = ParseTime(fields[3], line_no, "offset");
    if (offset <= onset)
      throw DataError("UEM line " + std::to_string(line_no) +
                      ": offset must exceed onset");
    mask.regions[fields[0]].push_back({onset, offset});
  }
  mask.Canonicalize();
  return mask;
}

std::map<std::string, Segmentation> ReadRttmFile(const std::string &path) {
  return ParseRttm(ReadTextFile(path));
}

void WriteRttmFile(const std::string &path,
                   const std::map<std::string, Segmentation> &segs) {
  std::ofstream out(path, std::ios::binary);
  Require(out.good(), "cannot write file '" + path + "'");
  out << WriteRttm(segs);
}

UemMask ReadUemFile(const std::string &path) {
  return ParseUem(ReadTextFile(path));
}

}  // namespace tsdiar
