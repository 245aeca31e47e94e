#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace una {

using TermId = std::uint32_t;

/// Splits on Unicode whitespace, strips leading/trailing Unicode punctuation
/// from every piece and applies simple lowercase mapping. Empty pieces are
/// dropped. Invalid UTF-8 sequences are read as U+FFFD.
std::vector<std::string> tokenize(std::string_view text);

/// Throws Error(kDecode) naming the byte offset and line if `text` is not
/// well-formed UTF-8. `base_offset` is added to the reported offset.
void validate_utf8(std::string_view text, std::size_t line_number, std::size_t base_offset = 0);

struct SourceLine {
  std::size_t number = 0;  // 1-based
  std::string text;        // without the line terminator
};

/// Reads every line of a UTF-8 text stream. LF terminators, optional trailing
/// newline, a trailing CR on a line is dropped.
std::vector<SourceLine> read_lines(std::istream& in);

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Returns the id of `term`, inserting it at the end if it is new.
  TermId add(std::string_view term);

  std::optional<TermId> find(std::string_view term) const;
  const std::string& term(TermId id) const;

  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> terms_;
  std::unordered_map<std::string, TermId, StringHash, std::equal_to<>> ids_;
};

struct Document {
  std::size_t id = 0;
  std::string raw;
  std::vector<std::string> tokens;
  std::size_t line = 0;  // source line, provenance only

  friend bool operator==(const Document& a, const Document& b) {
    return a.id == b.id && a.raw == b.raw && a.tokens == b.tokens;
  }
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocabulary;
  std::size_t skipped_lines = 0;

  std::size_t size() const noexcept { return documents.size(); }

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.documents == b.documents && a.vocabulary == b.vocabulary;
  }
};

Document make_document(std::size_t id, std::string raw, std::size_t line = 0);

/// Ids follow first occurrence across the documents in order.
Vocabulary build_vocabulary(const std::vector<Document>& documents);

/// One document per line with at least one token. Lines without tokens are
/// skipped and counted in Corpus::skipped_lines.
Corpus load_corpus(std::istream& in);
Corpus load_corpus_file(const std::string& path);

void write_corpus(const Corpus& corpus, std::ostream& out);

}  // namespace una
