// Copyright 2026 The nfba Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nfba/finenet/weights_io.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include <boost/crc.hpp>
#include <fmt/format.h>

namespace nfba::finenet {
namespace {

constexpr char kMagic[4] = {'N', 'F', 'A', '1'};

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw std::runtime_error("weights: truncated file");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t crc64(std::span<const std::uint8_t> bytes) {
  boost::crc_optimal<64, 0x42F0E1EBA9EA3693ULL, ~0ULL, ~0ULL, true, true> crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::vector<std::uint8_t> serialize_weights(const FineNet& net) {
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.params().size()));
  for (const Param& p : net.params()) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(p.name.size()));
    out.insert(out.end(), p.name.begin(), p.name.end());
    put<std::uint8_t>(out, static_cast<std::uint8_t>(p.value.rank()));
    for (std::size_t d : p.value.shape) put<std::uint32_t>(out, static_cast<std::uint32_t>(d));
    for (double v : p.value.data) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  put<std::uint64_t>(out, crc64(out));
  return out;
}

void deserialize_weights(FineNet& net, std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kMagic) + 4 + 8 ||
      !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw std::runtime_error("weights: bad magic");
  }
  const auto body = bytes.first(bytes.size() - 8);
  Reader tail(bytes.last(8));
  if (tail.get<std::uint64_t>() != crc64(body)) throw std::runtime_error("weights: CRC mismatch");

  Reader in(body);
  in.get_string(sizeof(kMagic));
  const auto count = in.get<std::uint32_t>();
  if (count != net.params().size()) {
    throw std::runtime_error(fmt::format("weights: {} tensors in file, network has {}", count,
                                         net.params().size()));
  }
  std::vector<Tensor> loaded;
  loaded.reserve(count);
  for (Param& p : net.params()) {
    const std::string name = in.get_string(in.get<std::uint16_t>());
    if (name != p.name) {
      throw std::runtime_error(fmt::format("weights: expected tensor {}, found {}", p.name, name));
    }
    const auto rank = in.get<std::uint8_t>();
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = in.get<std::uint32_t>();
    if (shape != p.value.shape) {
      throw std::runtime_error(fmt::format("weights: shape mismatch for {}", name));
    }
    Tensor t(shape);
    for (double& v : t.data) v = std::bit_cast<double>(in.get<std::uint64_t>());
    loaded.push_back(std::move(t));
  }
  if (in.pos() != body.size()) throw std::runtime_error("weights: trailing bytes");
  for (std::size_t k = 0; k < loaded.size(); ++k) net.params()[k].value = std::move(loaded[k]);
}

void save_weights(const FineNet& net, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = serialize_weights(net);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("weights: cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("weights: write failed for " + path.string());
}

void load_weights(FineNet& net, const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("weights: cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  deserialize_weights(net, bytes);
}

}  // namespace nfba::finenet
