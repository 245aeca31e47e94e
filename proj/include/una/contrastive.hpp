#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "una/corpus.hpp"

namespace una {

using Embedding = std::vector<double>;

struct ContrastiveConfig {
  double tau = 0.05;
  std::size_t batch_size = 64;
  // Off reproduces the k != i, j denominator; on adds the positive term as in
  // the usual cross-entropy form of InfoNCE.
  bool include_positive_in_denominator = false;
};

/// dot(u, v) / (|u| |v|). Throws Error(kDomain) on a zero vector, a dimension
/// mismatch or non-finite entries.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

/// -s_pos/tau + log sum_k exp(s_neg_k/tau), evaluated with a max shift.
double info_nce_from_similarities(double positive_similarity,
                                  std::span<const double> negative_similarities, double tau,
                                  bool include_positive_in_denominator = false);

double info_nce(const Embedding& anchor, const Embedding& positive,
                std::span<const Embedding> negatives, double tau,
                bool include_positive_in_denominator = false);

/// Mean InfoNCE over a batch. Anchor i is contrasted against every other
/// positive in the batch plus all of `una_negatives`.
double batch_loss(std::span<const Embedding> anchors, std::span<const Embedding> positives,
                  std::span<const Embedding> una_negatives, const ContrastiveConfig& config);

/// Per-anchor losses behind batch_loss.
std::vector<double> batch_losses(std::span<const Embedding> anchors,
                                 std::span<const Embedding> positives,
                                 std::span<const Embedding> una_negatives,
                                 const ContrastiveConfig& config);

/// FNV-1a, stable across platforms.
std::uint64_t stable_hash(std::string_view text) noexcept;

struct EncodedSentence {
  Embedding embedding;
  bool fallback = false;  // no in-vocabulary token; embedding is e_0
};

/// Bag-of-words stand-in for a sentence encoder. Every vocabulary term owns a
/// fixed pseudo-random unit vector seeded by (seed, hash(term)); a sentence is
/// the normalized sum of its token vectors.
class ToyEncoder {
 public:
  ToyEncoder(const Vocabulary& vocabulary, std::size_t dimension, std::uint64_t seed);

  EncodedSentence encode(std::span<const std::string> tokens) const;
  std::size_t dimension() const noexcept { return dimension_; }

  /// Unit vector for one term string, independent of the vocabulary.
  Embedding term_vector(std::string_view term) const;

 private:
  const Vocabulary* vocabulary_;
  std::size_t dimension_;
  std::uint64_t seed_;
};

Embedding toy_encode(std::span<const std::string> tokens, const Vocabulary& vocabulary,
                     std::size_t dimension, std::uint64_t seed);

struct PositivePair {
  std::string anchor;
  std::string positive;
  std::size_t line = 0;
};

using PositivePairSet = std::vector<PositivePair>;

/// `anchor<TAB>positive` per line. Empty lines are skipped; anything else
/// without exactly two non-empty columns is an Error(kParse) naming the line.
PositivePairSet load_pairs(std::istream& in);
PositivePairSet load_pairs_file(const std::string& path);

}  // namespace una
