#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "una/corpus.hpp"

namespace una {

/// log(1 + n_t / n), natural log. Throws Error(kDomain) when n == 0 or n_t > n.
double tf(std::size_t term_count, std::size_t total_count);

/// -log(N_t / N), natural log. Throws Error(kDomain) unless 1 <= N_t <= N.
double idf(std::size_t docs_with_term, std::size_t total_docs);

/// Fitted corpus statistics. The document-term score matrix is never stored:
/// per-term idf, the column maxima of the score matrix and the ordering of
/// terms by those maxima are enough to score sentences and build windows.
class TfIdfModel {
 public:
  TfIdfModel() = default;

  /// Takes ownership of already-validated statistics. `rank_by_score` must be
  /// a permutation sorted by (max_score, id).
  TfIdfModel(Vocabulary vocabulary, std::size_t num_documents, std::vector<double> idf,
             std::vector<double> max_score, std::vector<TermId> rank_by_score);

  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  std::size_t num_documents() const noexcept { return num_documents_; }
  std::size_t num_terms() const noexcept { return idf_.size(); }

  std::span<const double> idf() const noexcept { return idf_; }
  std::span<const double> max_score() const noexcept { return max_score_; }
  std::span<const TermId> rank_by_score() const noexcept { return rank_by_score_; }

  /// Position of `term` in rank_by_score().
  std::size_t rank_of(TermId term) const;

  friend bool operator==(const TfIdfModel& a, const TfIdfModel& b) {
    return a.vocabulary_ == b.vocabulary_ && a.num_documents_ == b.num_documents_ &&
           a.idf_ == b.idf_ && a.max_score_ == b.max_score_ &&
           a.rank_by_score_ == b.rank_by_score_;
  }

 private:
  Vocabulary vocabulary_;
  std::size_t num_documents_ = 0;
  std::vector<double> idf_;
  std::vector<double> max_score_;
  std::vector<TermId> rank_by_score_;
  std::vector<std::size_t> rank_of_;
};

/// Terms sorted ascending by score, ties by ascending id.
std::vector<TermId> rank_terms(std::span<const double> max_score);

/// Throws Error(kEmptyCorpus) for a corpus without documents.
TfIdfModel fit(const Corpus& corpus);

struct SentenceScores {
  std::vector<TermId> term_ids;  // distinct, first-occurrence order
  std::vector<std::size_t> counts;
  std::vector<double> z;
  std::size_t total_count = 0;  // in-vocabulary tokens

  std::size_t n_z() const noexcept { return term_ids.size(); }
};

/// Scores a tokenized sentence against the model. Out-of-vocabulary tokens are
/// ignored entirely.
SentenceScores sentence_scores(const TfIdfModel& model, std::span<const std::string> tokens);

/// Text format:
///   UNA-TFIDF v1 N=<int> m=<int>
///   term<TAB>idf<TAB>max_score     (m lines, id order)
///   ranks:
///   <m whitespace separated ids>
void save_model(const TfIdfModel& model, std::ostream& out);
TfIdfModel load_model(std::istream& in);

void save_model_file(const TfIdfModel& model, const std::string& path);
TfIdfModel load_model_file(const std::string& path);

}  // namespace una
