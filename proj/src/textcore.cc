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

#include "tmtc/textcore.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "tmtc/error.h"

namespace tmtc {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> SplitOn(std::string_view text,
                                      std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(text.substr(pos));
      return out;
    }
    out.push_back(text.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

bool ParseInt(std::string_view s, int& value) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

[[noreturn]] void M2Fail(std::size_t line_no, const std::string& msg) {
  throw DataError("M2 line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace

Sentence::Sentence(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!IsValidToken(tokens_[i])) {
      throw std::invalid_argument("invalid token at position " +
                                  std::to_string(i) + ": '" + tokens_[i] +
                                  "'");
    }
  }
}

Sentence Sentence::FromText(std::string_view text) {
  Sentence s;
  s.tokens_ = SplitWhitespace(text);
  return s;
}

std::string Sentence::ToText() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens_[i];
  }
  return out;
}

bool IsValidToken(std::string_view token) {
  return !token.empty() && std::none_of(token.begin(), token.end(), IsSpace);
}

bool IsValidUtf8(std::string_view bytes) {
  std::size_t i = 0;
  const std::size_t n = bytes.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(bytes[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
        (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += len;
  }
  return true;
}

std::vector<Sentence> ReadSentences(std::istream& in, std::string_view what) {
  std::vector<Sentence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!IsValidUtf8(line)) {
      throw DataError(std::string(what) + ": invalid UTF-8 on line " +
                      std::to_string(line_no));
    }
    out.push_back(Sentence::FromText(line));
  }
  return out;
}

std::vector<Sentence> ReadSentences(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  return ReadSentences(in, path.string());
}

void WriteSentences(const std::vector<Sentence>& sentences,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const Sentence& s : sentences) out << s.ToText() << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

std::vector<ParallelInstance> ReadParallel(
    const std::filesystem::path& source_path,
    const std::filesystem::path& reference_path) {
  std::vector<Sentence> sources = ReadSentences(source_path);
  std::vector<Sentence> references = ReadSentences(reference_path);
  if (sources.size() != references.size()) {
    throw DataError("line count mismatch: " + source_path.string() + " has " +
                    std::to_string(sources.size()) + " lines, " +
                    reference_path.string() + " has " +
                    std::to_string(references.size()));
  }
  std::vector<ParallelInstance> out;
  out.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    out.push_back({i, std::move(sources[i]), std::move(references[i])});
  }
  return out;
}

std::vector<M2Annotation> M2Entry::ForAnnotator(int annotator) const {
  std::vector<M2Annotation> out;
  for (const M2Annotation& a : annotations) {
    if (a.annotator == annotator) out.push_back(a);
  }
  return out;
}

M2Document ParseM2(std::istream& in) {
  M2Document doc;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!IsValidUtf8(line)) M2Fail(line_no, "invalid UTF-8");
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    if (line[0] == 'S' && (line.size() == 1 || line[1] == ' ')) {
      doc.entries.push_back(
          {Sentence::FromText(std::string_view(line).substr(1)), {}});
      continue;
    }
    if (line[0] != 'A' || line.size() < 2 || line[1] != ' ') {
      M2Fail(line_no, "expected an S or A line");
    }
    if (doc.entries.empty()) M2Fail(line_no, "A line before any S line");

    const auto fields = SplitOn(std::string_view(line).substr(2), "|||");
    if (fields.size() != 6) {
      M2Fail(line_no, "expected 6 '|||'-separated fields, found " +
                          std::to_string(fields.size()));
    }
    const auto span = SplitWhitespace(fields[0]);
    M2Annotation ann;
    if (span.size() != 2 || !ParseInt(span[0], ann.start) ||
        !ParseInt(span[1], ann.end)) {
      M2Fail(line_no, "malformed span '" + std::string(fields[0]) + "'");
    }
    if (!ParseInt(fields[5], ann.annotator)) {
      M2Fail(line_no, "malformed annotator id '" + std::string(fields[5]) +
                          "'");
    }
    ann.error_type = std::string(fields[1]);
    if (ann.error_type == "noop") continue;

    M2Entry& entry = doc.entries.back();
    const int n = static_cast<int>(entry.source.size());
    if (ann.start < 0 || ann.end < ann.start || ann.end > n) {
      M2Fail(line_no, "span [" + std::to_string(ann.start) + "," +
                          std::to_string(ann.end) + ") out of bounds for " +
                          std::to_string(n) + "-token sentence");
    }
    if (fields[2] != "-NONE-") ann.correction = SplitWhitespace(fields[2]);
    entry.annotations.push_back(std::move(ann));
  }
  for (M2Entry& entry : doc.entries) {
    std::stable_sort(entry.annotations.begin(), entry.annotations.end(),
                     [](const M2Annotation& a, const M2Annotation& b) {
                       return std::tie(a.annotator, a.start, a.end) <
                              std::tie(b.annotator, b.start, b.end);
                     });
  }
  return doc;
}

M2Document ParseM2(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  try {
    return ParseM2(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string RenderM2(const M2Document& doc) {
  std::ostringstream out;
  for (std::size_t e = 0; e < doc.entries.size(); ++e) {
    const M2Entry& entry = doc.entries[e];
    if (e > 0) out << '\n';
    out << 'S';
    if (!entry.source.empty()) out << ' ' << entry.source.ToText();
    out << '\n';
    for (const M2Annotation& a : entry.annotations) {
      out << "A " << a.start << ' ' << a.end << "|||" << a.error_type << "|||"
          << Sentence(a.correction).ToText() << "|||REQUIRED|||-NONE-|||"
          << a.annotator << '\n';
    }
  }
  return out.str();
}

std::vector<ParallelInstance> M2ToParallel(const M2Document& doc,
                                           int annotator) {
  std::vector<ParallelInstance> out;
  out.reserve(doc.entries.size());
  for (std::size_t e = 0; e < doc.entries.size(); ++e) {
    const M2Entry& entry = doc.entries[e];
    std::vector<M2Annotation> anns = entry.ForAnnotator(annotator);
    for (std::size_t k = 1; k < anns.size(); ++k) {
      if (anns[k].start < anns[k - 1].end) {
        throw DataError("entry " + std::to_string(e) +
                        ": overlapping annotations for annotator " +
                        std::to_string(annotator));
      }
    }
    std::vector<std::string> tokens = entry.source.tokens();
    for (auto it = anns.rbegin(); it != anns.rend(); ++it) {
      auto first = tokens.begin() + it->start;
      first = tokens.erase(first, tokens.begin() + it->end);
      tokens.insert(first, it->correction.begin(), it->correction.end());
    }
    out.push_back({e, entry.source, Sentence(std::move(tokens))});
  }
  return out;
}

}  // namespace tmtc
