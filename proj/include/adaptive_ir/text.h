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

#ifndef ADAPTIVE_IR_TEXT_H_
#define ADAPTIVE_IR_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace adaptive_ir {

// Lowercases ASCII letters, collapses every run of whitespace into a single
// space and strips leading and trailing whitespace. Bytes >= 0x80 are kept
// untouched so UTF-8 sequences survive.
std::string NormalizeText(std::string_view text);

// Splits text into lowercased maximal runs of alphanumeric bytes. ASCII
// letters and digits are alphanumeric; so is every byte >= 0x80, which keeps
// multi-byte UTF-8 words in one token.
std::vector<std::string> Tokenize(std::string_view text);

// 64-bit FNV-1a. Seedless and platform independent; feature hashing and
// per-query random streams are both defined in terms of it.
constexpr uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    hash ^= static_cast<uint8_t>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// SplitMix64 output function. Bijective avalanche mixer used to derive
// independent seeds.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace adaptive_ir

#endif  // ADAPTIVE_IR_TEXT_H_
