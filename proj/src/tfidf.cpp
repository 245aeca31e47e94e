#include "una/tfidf.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "una/error.hpp"

namespace una {

double tf(std::size_t term_count, std::size_t total_count) {
  if (total_count == 0) throw Error(ErrorKind::kDomain, "tf: total term count must be positive");
  if (term_count > total_count) throw Error(ErrorKind::kDomain, "tf: term count exceeds total");
  return std::log(1.0 + static_cast<double>(term_count) / static_cast<double>(total_count));
}

double idf(std::size_t docs_with_term, std::size_t total_docs) {
  if (docs_with_term == 0 || docs_with_term > total_docs) {
    throw Error(ErrorKind::kDomain, "idf: document frequency must lie in [1, N]");
  }
  // log(N / N_t) rather than -log(N_t / N) so a universal term yields +0.
  return std::log(static_cast<double>(total_docs) / static_cast<double>(docs_with_term));
}

TfIdfModel::TfIdfModel(Vocabulary vocabulary, std::size_t num_documents, std::vector<double> idf,
                       std::vector<double> max_score, std::vector<TermId> rank_by_score)
    : vocabulary_(std::move(vocabulary)),
      num_documents_(num_documents),
      idf_(std::move(idf)),
      max_score_(std::move(max_score)),
      rank_by_score_(std::move(rank_by_score)),
      rank_of_(rank_by_score_.size()) {
  const std::size_t m = vocabulary_.size();
  if (idf_.size() != m || max_score_.size() != m || rank_by_score_.size() != m) {
    throw Error(ErrorKind::kInvalidArgument, "model statistics do not match vocabulary size");
  }
  for (std::size_t k = 0; k < m; ++k) rank_of_[rank_by_score_[k]] = k;
}

std::size_t TfIdfModel::rank_of(TermId term) const {
  if (term >= rank_of_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "unknown term id " + std::to_string(term));
  }
  return rank_of_[term];
}

std::vector<TermId> rank_terms(std::span<const double> max_score) {
  std::vector<TermId> order(max_score.size());
  std::iota(order.begin(), order.end(), TermId{0});
  std::sort(order.begin(), order.end(), [&](TermId a, TermId b) {
    if (max_score[a] != max_score[b]) return max_score[a] < max_score[b];
    return a < b;
  });
  return order;
}

TfIdfModel fit(const Corpus& corpus) {
  const std::size_t n_docs = corpus.size();
  if (n_docs == 0) throw Error(ErrorKind::kEmptyCorpus, "cannot fit a model on an empty corpus");
  const auto& vocab = corpus.vocabulary;
  const std::size_t m = vocab.size();

  // Per-document term counts, reused across both passes.
  std::vector<std::vector<std::pair<TermId, std::size_t>>> doc_counts(n_docs);
  std::vector<std::size_t> scratch(m, 0);
  std::vector<std::size_t> doc_freq(m, 0);
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::vector<TermId> touched;
    for (const auto& token : corpus.documents[d].tokens) {
      const auto id = vocab.find(token);
      if (!id) throw Error(ErrorKind::kInvalidArgument, "token missing from vocabulary: " + token);
      if (scratch[*id]++ == 0) touched.push_back(*id);
    }
    auto& counts = doc_counts[d];
    counts.reserve(touched.size());
    for (TermId id : touched) {
      counts.emplace_back(id, scratch[id]);
      ++doc_freq[id];
      scratch[id] = 0;
    }
  }

  std::vector<double> idf_values(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (doc_freq[j] > 0) idf_values[j] = idf(doc_freq[j], n_docs);
  }

  std::vector<double> max_score(m, 0.0);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const std::size_t n = corpus.documents[d].tokens.size();
    for (const auto& [id, count] : doc_counts[d]) {
      max_score[id] = std::max(max_score[id], tf(count, n) * idf_values[id]);
    }
  }

  auto ranks = rank_terms(max_score);
  return TfIdfModel(vocab, n_docs, std::move(idf_values), std::move(max_score), std::move(ranks));
}

SentenceScores sentence_scores(const TfIdfModel& model, std::span<const std::string> tokens) {
  SentenceScores out;
  const auto& vocab = model.vocabulary();
  for (const auto& token : tokens) {
    const auto id = vocab.find(token);
    if (!id) continue;
    ++out.total_count;
    auto it = std::find(out.term_ids.begin(), out.term_ids.end(), *id);
    if (it == out.term_ids.end()) {
      out.term_ids.push_back(*id);
      out.counts.push_back(1);
    } else {
      ++out.counts[static_cast<std::size_t>(it - out.term_ids.begin())];
    }
  }
  const auto idf_values = model.idf();
  out.z.reserve(out.term_ids.size());
  for (std::size_t i = 0; i < out.term_ids.size(); ++i) {
    out.z.push_back(tf(out.counts[i], out.total_count) * idf_values[out.term_ids[i]]);
  }
  return out;
}

// --- serialization ---

namespace {

constexpr std::string_view kMagic = "UNA-TFIDF";
constexpr std::string_view kVersion = "v1";

void write_real(std::ostream& out, double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.write(buf, end - buf);
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kParse, "model file line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line, const char* field) {
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    parse_error(line, std::string("bad ") + field + " '" + std::string(text) + "'");
  }
  return value;
}

std::size_t parse_header_field(std::string_view token, std::string_view key, std::size_t line) {
  if (token.substr(0, key.size()) != key) parse_error(line, "expected " + std::string(key));
  return parse_number<std::size_t>(token.substr(key.size()), line, key.data());
}

}  // namespace

void save_model(const TfIdfModel& model, std::ostream& out) {
  const std::size_t m = model.num_terms();
  out << kMagic << ' ' << kVersion << " N=" << model.num_documents() << " m=" << m << '\n';
  const auto idf_values = model.idf();
  const auto scores = model.max_score();
  for (std::size_t j = 0; j < m; ++j) {
    out << model.vocabulary().term(static_cast<TermId>(j)) << '\t';
    write_real(out, idf_values[j]);
    out << '\t';
    write_real(out, scores[j]);
    out << '\n';
  }
  out << "ranks:\n";
  const auto ranks = model.rank_by_score();
  for (std::size_t k = 0; k < m; ++k) {
    if (k > 0) out << ' ';
    out << ranks[k];
  }
  out << '\n';
}

TfIdfModel load_model(std::istream& in) {
  std::string text;
  std::size_t line = 0;

  if (!std::getline(in, text)) parse_error(1, "missing header");
  ++line;
  std::istringstream header(text);
  std::string magic, version, n_field, m_field, extra;
  header >> magic >> version >> n_field >> m_field;
  if (magic != kMagic) parse_error(line, "not a model file");
  if (version != kVersion) parse_error(line, "unsupported version '" + version + "'");
  if (header >> extra) parse_error(line, "trailing header content");
  const std::size_t n_docs = parse_header_field(n_field, "N=", line);
  const std::size_t m = parse_header_field(m_field, "m=", line);
  if (n_docs == 0) parse_error(line, "N must be positive");

  Vocabulary vocab;
  std::vector<double> idf_values;
  std::vector<double> scores;
  idf_values.reserve(m);
  scores.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::getline(in, text)) parse_error(line + 1, "truncated term section");
    ++line;
    const auto tab1 = text.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : text.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || text.find('\t', tab2 + 1) != std::string::npos) {
      parse_error(line, "expected term<TAB>idf<TAB>max_score");
    }
    const std::string_view view(text);
    const auto term = view.substr(0, tab1);
    if (term.empty()) parse_error(line, "empty term");
    if (vocab.find(term)) parse_error(line, "duplicate term '" + std::string(term) + "'");
    vocab.add(term);
    const double idf_value = parse_number<double>(view.substr(tab1 + 1, tab2 - tab1 - 1), line, "idf");
    const double score = parse_number<double>(view.substr(tab2 + 1), line, "max_score");
    if (!(idf_value >= 0.0) || !(score >= 0.0)) parse_error(line, "negative or NaN statistic");
    idf_values.push_back(idf_value);
    scores.push_back(score);
  }

  if (!std::getline(in, text)) parse_error(line + 1, "missing ranks section");
  ++line;
  std::istringstream rank_header(text);
  std::string label;
  rank_header >> label;
  if (label != "ranks:") parse_error(line, "expected 'ranks:'");

  // Rank ids may follow on the same line or on subsequent lines.
  std::vector<TermId> ranks;
  ranks.reserve(m);
  std::vector<std::size_t> seen_at(m, 0);
  auto consume = [&](std::istringstream& stream) {
    std::string token;
    while (stream >> token) {
      if (ranks.size() == m) parse_error(line, "more than m rank entries");
      const auto id = parse_number<std::size_t>(token, line, "rank id");
      if (id >= m) parse_error(line, "rank id " + token + " out of range");
      if (seen_at[id] != 0) {
        parse_error(line, "duplicated id " + token + " in ranks (first seen on line " +
                              std::to_string(seen_at[id]) + ")");
      }
      seen_at[id] = line;
      if (!ranks.empty()) {
        const TermId prev = ranks.back();
        const bool ordered = scores[prev] < scores[id] || (scores[prev] == scores[id] && prev < id);
        if (!ordered) parse_error(line, "ranks not monotone at id " + token);
      }
      ranks.push_back(static_cast<TermId>(id));
    }
  };
  consume(rank_header);
  while (ranks.size() < m && std::getline(in, text)) {
    ++line;
    std::istringstream stream(text);
    consume(stream);
  }
  if (ranks.size() != m) parse_error(line, "truncated ranks section");
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") != std::string::npos) parse_error(line, "trailing content");
  }

  return TfIdfModel(std::move(vocab), n_docs, std::move(idf_values), std::move(scores),
                    std::move(ranks));
}

void save_model_file(const TfIdfModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open model file for writing: " + path);
  save_model(model, out);
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "failed writing model file: " + path);
}

TfIdfModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open model file: " + path);
  return load_model(in);
}

}  // namespace una
