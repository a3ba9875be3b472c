// Copyright 2026 The TMTC Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Tokenized sentences and corpus ingestion: parallel text files and the M2
// annotation format.

#ifndef TMTC_TEXTCORE_H_
#define TMTC_TEXTCORE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace tmtc {

// An ordered sequence of non-empty, whitespace-free tokens.
class Sentence {
 public:
  Sentence() = default;
  // Throws std::invalid_argument if any token is empty or contains
  // whitespace.
  explicit Sentence(std::vector<std::string> tokens);

  // Splits on runs of whitespace. Never throws.
  static Sentence FromText(std::string_view text);

  // Tokens joined with single spaces.
  std::string ToText() const;

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens_[i]; }

  friend bool operator==(const Sentence&, const Sentence&) = default;

 private:
  std::vector<std::string> tokens_;
};

bool IsValidToken(std::string_view token);

struct ParallelInstance {
  std::uint64_t id = 0;
  Sentence source;
  Sentence reference;

  friend bool operator==(const ParallelInstance&,
                         const ParallelInstance&) = default;
};

// One "A" line of an M2 block. [start, end) is a token span of the source;
// start == end is an insertion and an empty correction with end > start is
// a deletion.
struct M2Annotation {
  int start = 0;
  int end = 0;
  std::string error_type;
  std::vector<std::string> correction;
  int annotator = 0;

  friend bool operator==(const M2Annotation&, const M2Annotation&) = default;
};

struct M2Entry {
  Sentence source;
  // Sorted by (annotator, start, end); file order is kept among ties.
  std::vector<M2Annotation> annotations;

  // Annotations of one annotator, in start order.
  std::vector<M2Annotation> ForAnnotator(int annotator) const;

  friend bool operator==(const M2Entry&, const M2Entry&) = default;
};

struct M2Document {
  std::vector<M2Entry> entries;

  friend bool operator==(const M2Document&, const M2Document&) = default;
};

// Reads a pair of line-aligned, pre-tokenized files. Instance i pairs line
// i of each file. Throws DataError on unreadable files, a line-count
// mismatch or invalid UTF-8.
std::vector<ParallelInstance> ReadParallel(
    const std::filesystem::path& source_path,
    const std::filesystem::path& reference_path);

// Reads one sentence per line. `what` names the stream in error messages.
std::vector<Sentence> ReadSentences(std::istream& in, std::string_view what);
std::vector<Sentence> ReadSentences(const std::filesystem::path& path);

void WriteSentences(const std::vector<Sentence>& sentences,
                    const std::filesystem::path& path);

// Parses M2 text. "noop" annotations are dropped and "-NONE-" corrections
// map to empty token lists. Throws DataError with the 1-based line number
// on malformed input.
M2Document ParseM2(std::istream& in);
M2Document ParseM2(const std::filesystem::path& path);

// Renders a document back to M2 text (one block per entry, blank-line
// separated).
std::string RenderM2(const M2Document& doc);

// Builds (source, reference) pairs from one annotator's corrections. Entries
// without annotations from that annotator keep the source as reference.
// Throws DataError naming the entry index on overlapping annotations.
std::vector<ParallelInstance> M2ToParallel(const M2Document& doc,
                                           int annotator);

// True iff `bytes` is well-formed UTF-8.
bool IsValidUtf8(std::string_view bytes);

}  // namespace tmtc

#endif  // TMTC_TEXTCORE_H_
