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

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nfba/finenet/network.hpp"

namespace nfba::finenet {

/// CRC-64/XZ (ECMA-182 polynomial, reflected, all-ones init and xor-out).
std::uint64_t crc64(std::span<const std::uint8_t> bytes);

/// Little-endian image of every parameter and buffer: "NFA1", u32 tensor
/// count, per tensor u16 name length, name, u8 rank, u32 dims and float64
/// payload, then a u64 CRC of all preceding bytes.
std::vector<std::uint8_t> serialize_weights(const FineNet& net);

/// Loads an image produced by serialize_weights into a network of matching
/// architecture. Throws std::runtime_error on a bad magic, CRC, name or shape.
void deserialize_weights(FineNet& net, std::span<const std::uint8_t> bytes);

void save_weights(const FineNet& net, const std::filesystem::path& path);
void load_weights(FineNet& net, const std::filesystem::path& path);

}  // namespace nfba::finenet
