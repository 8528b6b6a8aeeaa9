// Copyright 2026 The stegtok Authors.
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

#ifndef STEGTOK_BITS_H_
#define STEGTOK_BITS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stegtok {

// An exact-length bit sequence, MSB-first within the message. No padding is
// ever stored.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<bool> bits) : bits_(std::move(bits)) {}

  // "0110..." literal; throws Error(kInvalidArgument) on other characters.
  static BitString FromBinary(std::string_view text);
  // Takes the first `bit_count` bits of the hex string (MSB of the first
  // nibble first). bit_count must not exceed 4 * hex.size().
  static BitString FromHex(std::string_view hex, std::size_t bit_count);
  static BitString FromHex(std::string_view hex) {
    return FromHex(hex, hex.size() * 4);
  }
  // The `bit_count` most significant bits of `word`.
  static BitString FromWord(std::uint64_t word, std::size_t bit_count);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  void push_back(bool bit) { bits_.push_back(bit); }
  void Append(const BitString &other);

  // Bits [pos, pos + count) as an unsigned integer, MSB first. Positions past
  // the end read as zero, which is how the final chunk gets right-padded.
  std::uint64_t ReadPadded(std::size_t pos, int count) const;
  // Appends the low `count` bits of `value`, MSB first.
  void AppendWord(std::uint64_t value, int count);

  std::string ToBinary() const;
  // Lower-case hex; a trailing partial nibble is zero-padded on the right.
  std::string ToHex() const;

  friend bool operator==(const BitString &, const BitString &) = default;

 private:
  std::vector<bool> bits_;
};

}  // namespace stegtok

#endif  // STEGTOK_BITS_H_
