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

#ifndef ADAPTIVE_IR_BINARY_IO_H_
#define ADAPTIVE_IR_BINARY_IO_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace adaptive_ir {

// Little-endian fixed-width encoder.
class BinaryWriter {
 public:
  void PutU8(uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
  void PutU32(uint32_t v);
  void PutU64(uint64_t v);
  void PutF64(double v);
  void PutString(std::string_view s);
  void PutBytes(std::string_view s) { buffer_.append(s); }

  const std::string &buffer() const { return buffer_; }

 private:
  std::string buffer_;
};

// Bounds-checked decoder over a byte buffer. Running past the end raises
// FormatError.
class BinaryReader {
 public:
  explicit BinaryReader(std::string_view data) : data_(data) {}

  uint8_t GetU8();
  uint32_t GetU32();
  uint64_t GetU64();
  double GetF64();
  std::string GetString();
  std::string_view GetBytes(size_t n);

  bool AtEnd() const { return pos_ == data_.size(); }

 private:
  std::string_view data_;
  size_t pos_ = 0;
};

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_BINARY_IO_H_
