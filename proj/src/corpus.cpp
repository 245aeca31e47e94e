#include "una/corpus.hpp"

#include <fstream>
#include <sstream>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "una/error.hpp"

namespace una {

namespace {

struct CodePoint {
  UChar32 value;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

void append_utf8(std::string& out, UChar32 c) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t n = 0;
  U8_APPEND_UNSAFE(buf, n, c);
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
}

void flush_piece(const std::vector<CodePoint>& cps, std::size_t begin, std::size_t end,
                 std::vector<std::string>& tokens) {
  while (begin < end && u_ispunct(cps[begin].value)) ++begin;
  while (end > begin && u_ispunct(cps[end - 1].value)) --end;
  if (begin == end) return;
  std::string token;
  for (std::size_t k = begin; k < end; ++k) append_utf8(token, u_tolower(cps[k].value));
  tokens.push_back(std::move(token));
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  const auto cps = decode(text);
  std::vector<std::string> tokens;
  std::size_t piece = 0;
  for (std::size_t k = 0; k < cps.size(); ++k) {
    if (u_isUWhiteSpace(cps[k].value)) {
      flush_piece(cps, piece, k, tokens);
      piece = k + 1;
    }
  }
  flush_piece(cps, piece, cps.size(), tokens);
  return tokens;
}

void validate_utf8(std::string_view text, std::size_t line_number, std::size_t base_offset) {
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) {
      std::ostringstream msg;
      msg << "malformed UTF-8 at byte offset " << base_offset + static_cast<std::size_t>(start)
          << " (line " << line_number << ")";
      throw Error(ErrorKind::kDecode, msg.str());
    }
  }
}

std::vector<SourceLine> read_lines(std::istream& in) {
  std::vector<SourceLine> lines;
  std::string text;
  std::size_t offset = 0;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    const std::size_t consumed = text.size() + 1;
    validate_utf8(text, number, offset);
    offset += consumed;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    lines.push_back({number, std::move(text)});
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read failure");
  return lines;
}

TermId Vocabulary::add(std::string_view term) {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  const auto id = static_cast<TermId>(terms_.size());
  ids_.emplace(std::string(term), id);
  terms_.emplace_back(term);
  return id;
}

std::optional<TermId> Vocabulary::find(std::string_view term) const {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  return std::nullopt;
}

const std::string& Vocabulary::term(TermId id) const {
  if (id >= terms_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "term id " + std::to_string(id) + " out of range");
  }
  return terms_[id];
}

Document make_document(std::size_t id, std::string raw, std::size_t line) {
  Document doc;
  doc.id = id;
  doc.tokens = tokenize(raw);
  doc.raw = std::move(raw);
  doc.line = line;
  return doc;
}

Vocabulary build_vocabulary(const std::vector<Document>& documents) {
  Vocabulary vocab;
  for (const auto& doc : documents) {
    for (const auto& token : doc.tokens) vocab.add(token);
  }
  return vocab;
}

Corpus load_corpus(std::istream& in) {
  Corpus corpus;
  for (auto& line : read_lines(in)) {
    auto doc = make_document(corpus.documents.size(), std::move(line.text), line.number);
    if (doc.tokens.empty()) {
      ++corpus.skipped_lines;
      continue;
    }
    corpus.documents.push_back(std::move(doc));
  }
  corpus.vocabulary = build_vocabulary(corpus.documents);
  return corpus;
}

Corpus load_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open corpus file: " + path);
  return load_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents) out << doc.raw << '\n';
}

}  // namespace una
