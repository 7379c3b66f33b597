// tsdiar/util/container.cc

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

#include "tsdiar/util/container.h"

#include <bit>
#include <cstdint>
#include <fstream>

#include "tsdiar/util/common.h"

namespace tsdiar {

static_assert(std::endian::native == std::endian::little,
              "model container I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'T', 'S', 'D', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

void PutU64(std::ofstream &out, std::uint64_t v) {
  out.write(reinterpret_cast<const char *>(&v), 8);
}

std::uint64_t GetU64(std::ifstream &in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char *>(&v), 8);
  return v;
}

}  // namespace

const Eigen::MatrixXd &ModelContainer::Tensor(const std::string &name) const {
  for (const auto &[n, m] : tensors)
    if (n == name) return m;
  throw DataError("ModelContainer: missing tensor '" + name + "' in kind '" +
                  kind + "'");
}

void WriteModelContainer(const std::string &path, const ModelContainer &mc) {
  std::vector<double> payload;
  nlohmann::ordered_json dir = nlohmann::ordered_json::array();
  for (const auto &[name, m] : mc.tensors) {
    dir.push_back({{"name", name},
                   {"rows", m.rows()},
                   {"cols", m.cols()},
                   {"offset", payload.size()}});
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) payload.push_back(m(i, j));
  }
  std::uint64_t fp = Fnv1a64(payload.data(), payload.size() * sizeof(double));

  nlohmann::ordered_json header;
  header["kind"] = mc.kind;
  header["format_version"] = kFormatVersion;
  header["config"] = mc.config;
  header["tensors"] = dir;
  header["fingerprint"] = ToHex(fp);
  std::string hs = header.dump();

  std::ofstream out(path, std::ios::binary);
  Require(out.good(), "WriteModelContainer: cannot write '" + path + "'");
  out.write(kMagic, 4);
  std::uint32_t ver = kFormatVersion;
  out.write(reinterpret_cast<const char *>(&ver), 4);
  PutU64(out, hs.size());
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  PutU64(out, payload.size());
  out.write(reinterpret_cast<const char *>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
  Require(out.good(), "WriteModelContainer: write failed for '" + path + "'");
}

ModelContainer ReadModelContainer(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), "ReadModelContainer: cannot open '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  Require(in.good() && std::equal(magic, magic + 4, kMagic),
          "ReadModelContainer: bad magic in '" + path + "'");
  std::uint32_t ver = 0;
  in.read(reinterpret_cast<char *>(&ver), 4);
  Require(ver == kFormatVersion,
          "ReadModelContainer: unsupported format version in '" + path + "'");
  std::uint64_t hs_len = GetU64(in);
  std::string hs(hs_len, '\0');
  in.read(hs.data(), static_cast<std::streamsize>(hs_len));
  nlohmann::ordered_json header = nlohmann::ordered_json::parse(hs);
  std::uint64_t n = GetU64(in);
  std::vector<double> payload(n);
  in.read(reinterpret_cast<char *>(payload.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  Require(in.good(), "ReadModelContainer: truncated payload in '" + path + "'");

  std::uint64_t fp = Fnv1a64(payload.data(), payload.size() * sizeof(double));
  Require(header.at("fingerprint").get<std::string>() == ToHex(fp),
          "ReadModelContainer: fingerprint mismatch in '" + path + "'");

  ModelContainer mc;
  mc.kind = header.at("kind").get<std::string>();
  mc.config = header.at("config");
  for (const auto &t : header.at("tensors")) {
    Eigen::Index rows = t.at("rows").get<Eigen::Index>();
    Eigen::Index cols = t.at("cols").get<Eigen::Index>();
    std::size_t offset = t.at("offset").get<std::size_t>();
    Require(offset + static_cast<std::size_t>(rows * cols) <= payload.size(),
            "ReadModelContainer: tensor exceeds payload in '" + path + "'");
    Eigen::MatrixXd m(rows, cols);
    std::size_t k = offset;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = payload[k++];
    mc.tensors.emplace_back(t.at("name").get<std::string>(), std::move(m));
  }
  return mc;
}

}  // namespace tsdiar
