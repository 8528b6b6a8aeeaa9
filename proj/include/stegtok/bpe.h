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

#ifndef STEGTOK_BPE_H_
#define STEGTOK_BPE_H_

#include <cstddef>
#include <string_view>

#include "stegtok/vocab.h"

namespace stegtok {

// Byte-level BPE over the whole corpus as a single byte sequence (no
// pre-tokenization). Starts from the 256 byte tokens and repeatedly merges
// the most frequent adjacent pair until `target_size` tokens exist or no
// pair occurs at least twice. Pair frequencies count overlapping
// occurrences; replacement is left to right and non-overlapping.
//
// Ties go to the lexicographically smallest merged byte string, then to the
// smaller (left id, right id). New tokens take the next id.
//
// Throws Error(kEmptyCorpus) and Error(kInvalidArgument) for
// target_size < 256.
Vocabulary TrainBpe(std::string_view corpus, std::size_t target_size);

}  // namespace stegtok

#endif  // STEGTOK_BPE_H_
