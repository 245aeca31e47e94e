#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "una/contrastive.hpp"

namespace una {

struct ScoredPair {
  std::string sentence_a;
  std::string sentence_b;
  double gold = 0.0;
  std::size_t line = 0;
};

struct EvalReport {
  std::size_t n_pairs = 0;  // pairs that entered the correlation
  std::size_t n_flagged = 0;  // both sides fell back to the empty-sentence embedding
  double rho = 0.0;
};

/// Average (fractional) ranks, 1-based. Tied values share the mean of the
/// ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. Throws Error(kInvalidArgument) on a
/// length mismatch or fewer than two values, Error(kUndefinedCorrelation)
/// when either side is constant.
double spearman(std::span<const double> xs, std::span<const double> ys);

using SentenceEncoder = std::function<EncodedSentence(std::span<const std::string>)>;

/// Embeds both sides of every pair, scores them by cosine and correlates the
/// scores with the gold labels. Pairs where both sides fall back are left out
/// and counted in n_flagged.
EvalReport evaluate_pairs(std::span<const ScoredPair> pairs, const SentenceEncoder& encoder);

/// `sentence_a<TAB>sentence_b<TAB>gold` per line; empty lines skipped.
std::vector<ScoredPair> load_scored_pairs(std::istream& in);
std::vector<ScoredPair> load_scored_pairs_file(const std::string& path);

}  // namespace una
