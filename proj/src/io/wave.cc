// tsdiar/io/wave.cc

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

#include "tsdiar/io/wave.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "tsdiar/util/common.h"

namespace tsdiar {

namespace {

void PutU32(std::string *s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void PutU16(std::string *s, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) s->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
std::uint32_t GetU32(const unsigned char *p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t GetU16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::int16_t ToPcm16(double x) {
  double v = std::lrint(x * 32767.0);
  if (v > 32767.0) v = 32767.0;
  if (v < -32768.0) v = -32768.0;
  return static_cast<std::int16_t>(v);
}

}  // namespace

MultiWaveform ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), "ReadWav: cannot open '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  Require(data.size() >= 44, "ReadWav: file too short: " + path);
  const auto *p = reinterpret_cast<const unsigned char *>(data.data());
  Require(std::memcmp(p, "RIFF", 4) == 0 && std::memcmp(p + 8, "WAVE", 4) == 0,
          "ReadWav: not a RIFF/WAVE file: " + path);

  int num_channels = 0, sample_rate = 0, bits = 0;
  std::size_t data_pos = 0, data_len = 0;
  std::size_t off = 12;
  while (off + 8 <= data.size()) {
    std::uint32_t chunk_len = GetU32(p + off + 4);
    if (std::memcmp(p + off, "fmt ", 4) == 0) {
      Require(chunk_len >= 16, "ReadWav: short fmt chunk");
      std::uint16_t fmt = GetU16(p + off + 8);
      Require(fmt == 1, "ReadWav: only PCM supported");
      num_channels = GetU16(p + off + 10);
      sample_rate = static_cast<int>(GetU32(p + off + 12));
      bits = GetU16(p + off + 22);
    } else if (std::memcmp(p + off, "data", 4) == 0) {
      data_pos = off + 8;
      data_len = chunk_len;
    }
    off += 8 + chunk_len + (chunk_len & 1);
  }
  Require(num_channels > 0 && sample_rate > 0, "ReadWav: missing fmt chunk");
  Require(bits == 16, "ReadWav: only 16-bit PCM supported");
  Require(data_pos > 0 && data_pos + data_len <= data.size(),
          "ReadWav: missing or truncated data chunk");

  std::size_t num_frames = data_len / (2 * num_channels);
  MultiWaveform wave;
  wave.sample_rate_hz = sample_rate;
  wave.channels.assign(num_channels, Eigen::VectorXd(num_frames));
  const auto *d = reinterpret_cast<const unsigned char *>(data.data() + data_pos);
  for (std::size_t i = 0; i < num_frames; ++i) {
    for (int c = 0; c < num_channels; ++c) {
      std::int16_t v = static_cast<std::int16_t>(GetU16(d));
      d += 2;
      wave.channels[c](static_cast<Eigen::Index>(i)) = v / 32768.0;
    }
  }
  return wave;
}

void WriteWav(const std::string &path, const MultiWaveform &wave) {
  int channels = wave.NumChannels();
  Require(channels >= 1, "WriteWav: need at least one channel");
  Eigen::Index n = wave.channels[0].size();
  for (const auto &ch : wave.channels)
    Require(ch.size() == n, "WriteWav: channel length mismatch");

  std::string body;
  body.reserve(44 + static_cast<std::size_t>(n) * channels * 2);
  std::uint32_t data_bytes = static_cast<std::uint32_t>(n) * channels * 2;
  body += "RIFF";
  PutU32(&body, 36 + data_bytes);
  body += "WAVEfmt ";
  PutU32(&body, 16);
  PutU16(&body, 1);  // PCM
  PutU16(&body, static_cast<std::uint16_t>(channels));
  PutU32(&body, static_cast<std::uint32_t>(wave.sample_rate_hz));
  PutU32(&body, static_cast<std::uint32_t>(wave.sample_rate_hz) * channels * 2);
  PutU16(&body, static_cast<std::uint16_t>(channels * 2));
  PutU16(&body, 16);
  body += "data";
  PutU32(&body, data_bytes);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int c = 0; c < channels; ++c)
      PutU16(&body, static_cast<std::uint16_t>(ToPcm16(wave.channels[c](i))));

  std::ofstream out(path, std::ios::binary);
  Require(out.good(), "WriteWav: cannot write '" + path + "'");
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

}  // namespace tsdiar
