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

#include "stegtok/bits.h"

#include "stegtok/error.h"

namespace stegtok {

BitString BitString::FromBinary(std::string_view text) {
  BitString out;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw Error(Errc::kInvalidArgument, "not a binary digit");
    }
    out.push_back(c == '1');
  }
  return out;
}

BitString BitString::FromHex(std::string_view hex, std::size_t bit_count) {
  if (bit_count > hex.size() * 4) {
    throw Error(Errc::kInvalidArgument, "bit count exceeds hex length");
  }
  BitString out;
  for (char c : hex) {
    int nibble;
    if (c >= '0' && c <= '9') {
      nibble = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nibble = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      nibble = c - 'A' + 10;
    } else {
      throw Error(Errc::kInvalidArgument, "not a hex digit");
    }
    out.AppendWord(static_cast<std::uint64_t>(nibble), 4);
  }
  out.bits_.resize(bit_count);
  return out;
}

BitString BitString::FromWord(std::uint64_t word, std::size_t bit_count) {
  if (bit_count > 64) throw Error(Errc::kInvalidArgument, "more than 64 bits");
  BitString out;
  if (bit_count > 0) out.AppendWord(word >> (64 - bit_count), bit_count);
  return out;
}

void BitString::Append(const BitString &other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::uint64_t BitString::ReadPadded(std::size_t pos, int count) const {
  std::uint64_t value = 0;
  for (int i = 0; i < count; ++i) {
    std::size_t at = pos + static_cast<std::size_t>(i);
    value = (value << 1) | (at < bits_.size() && bits_[at] ? 1u : 0u);
  }
  return value;
}

void BitString::AppendWord(std::uint64_t value, int count) {
  for (int i = count - 1; i >= 0; --i) bits_.push_back((value >> i) & 1u);
}

std::string BitString::ToBinary() const {
  std::string out;
  out.reserve(bits_.size());
  for (bool b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

std::string BitString::ToHex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t pos = 0; pos < bits_.size(); pos += 4) {
    out.push_back(kDigits[ReadPadded(pos, 4)]);
  }
  return out;
}

}  // namespace stegtok
