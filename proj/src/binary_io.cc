// Copyright 2026 The Adaptive IR Authors.
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

#include "adaptive_ir/binary_io.h"

#include <bit>

#include "adaptive_ir/error.h"

namespace adaptive_ir {

void BinaryWriter::PutU32(uint32_t v) {
  for (int i = 0; i < 4; ++i) PutU8(static_cast<uint8_t>(v >> (8 * i)));
}

void BinaryWriter::PutU64(uint64_t v) {
  for (int i = 0; i < 8; ++i) PutU8(static_cast<uint8_t>(v >> (8 * i)));
}

void BinaryWriter::PutF64(double v) { PutU64(std::bit_cast<uint64_t>(v)); }

void BinaryWriter::PutString(std::string_view s) {
  PutU32(static_cast<uint32_t>(s.size()));
  PutBytes(s);
}

std::string_view BinaryReader::GetBytes(size_t n) {
  if (n > data_.size() - pos_) {
    throw FormatError("truncated input at byte " + std::to_string(pos_));
  }
  std::string_view out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

uint8_t BinaryReader::GetU8() { return static_cast<uint8_t>(GetBytes(1)[0]); }

uint32_t BinaryReader::GetU32() {
  std::string_view b = GetBytes(4);
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<uint8_t>(b[i]);
  return v;
}

uint64_t BinaryReader::GetU64() {
  std::string_view b = GetBytes(8);
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<uint8_t>(b[i]);
  return v;
}

double BinaryReader::GetF64() { return std::bit_cast<double>(GetU64()); }

std::string BinaryReader::GetString() {
  uint32_t n = GetU32();
  return std::string(GetBytes(n));
}

}  // namespace adaptive_ir
