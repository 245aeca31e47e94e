#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "una/corpus.hpp"
#include "una/random.hpp"
#include "una/tfidf.hpp"

namespace una {

enum class SelectionMode { kTfIdf, kRandom };
enum class ReplacementMode { kTfIdf, kRandom };

struct AugmentationConfig {
  double beta = 0.5;
  std::size_t radius = 4000;
  std::size_t alpha = 5;
  std::uint64_t seed = 0;
  SelectionMode selection_mode = SelectionMode::kTfIdf;
  ReplacementMode replacement_mode = ReplacementMode::kTfIdf;

  /// Throws Error(kInvalidArgument) unless 0 < beta <= 1, radius >= 1, alpha >= 1.
  void validate() const;
};

struct ReplacementProbabilities {
  std::vector<double> p;  // aligned with SentenceScores::term_ids
  std::size_t forced = 0;  // index into p, always 1.0
};

/// Unclamped replacement weights beta * (z_i - min z) / C, with
/// C = mean(z_i - min z). Empty when C == 0.
std::vector<double> unclamped_probabilities(std::span<const double> z, double beta);

/// Per-term replacement probabilities for one sentence.
///
/// tfidf: p_i = min(beta * (z_i - min z) / C, 1); the sentence argmax (lowest
/// id on ties) is forced to 1. When C == 0 only the forced term is kept.
/// random: every p_i = beta and one uniformly chosen term is forced to 1.
///
/// Throws Error(kEmptySentence) when the sentence has no scored terms.
ReplacementProbabilities replacement_probabilities(const SentenceScores& scores, double beta,
                                                   SelectionMode mode, CounterRng& rng);

/// Terms whose rank lies within `radius` of `term`'s rank, clamped at the ends
/// of the ordering, in rank order and excluding `term` itself.
std::vector<TermId> candidate_window(const TfIdfModel& model, TermId term, std::size_t radius);

/// tfidf: draw from `window` proportionally to max_score (uniform if all zero).
/// random: uniform over the whole vocabulary except `original`.
/// Throws Error(kNoReplacement) when there is nothing to draw from.
TermId sample_replacement(const TfIdfModel& model, TermId original, std::span<const TermId> window,
                          ReplacementMode mode, CounterRng& rng);

struct TermDecision {
  TermId term = 0;
  double probability = 0.0;
  bool forced = false;
  std::vector<TermId> window;  // empty under random replacement (whole vocabulary)
  bool replaced = false;
  TermId replacement = 0;  // meaningful only when replaced
};

struct ReplacementPlan {
  std::vector<TermDecision> terms;
};

struct AugmentedSentence {
  std::size_t source_id = 0;
  std::size_t source_line = 0;
  std::vector<std::string> tokens;
  ReplacementPlan plan;
  bool unaugmentable = false;
};

/// Rewrites one document. Each distinct in-vocabulary term gets one Bernoulli
/// draw; a replaced term has every occurrence rewritten to a single sampled
/// replacement. Out-of-vocabulary tokens pass through. Documents with no
/// scored terms, or a model with fewer than two terms, come back unchanged
/// and flagged unaugmentable.
AugmentedSentence augment_sentence(const TfIdfModel& model, const Document& document,
                                   const AugmentationConfig& config, CounterRng& rng);

struct NegativeBatch {
  std::uint64_t batch_index = 0;
  std::vector<AugmentedSentence> sentences;
};

/// True on 1-based batch indices alpha, 2*alpha, ...
bool injects_negatives(std::uint64_t batch_index, std::size_t alpha);

/// Augments every document of a batch with per-slot streams derived from
/// (config.seed, batch_index, position). Runs on up to `threads` workers; the
/// result does not depend on the worker count.
NegativeBatch augment_batch(const TfIdfModel& model, std::span<const Document> batch,
                            const AugmentationConfig& config, std::uint64_t batch_index,
                            std::size_t threads = 1);

/// Drives the every-alpha-batches schedule.
class NegativeScheduler {
 public:
  explicit NegativeScheduler(AugmentationConfig config, std::size_t threads = 1);

  /// Advances to the next batch; returns its negatives on injection batches.
  std::optional<NegativeBatch> step(const TfIdfModel& model, std::span<const Document> batch);

  std::uint64_t batches_seen() const noexcept { return batches_seen_; }
  std::uint64_t injected_batches() const noexcept { return injected_batches_; }
  std::uint64_t negatives() const noexcept { return negatives_; }
  std::uint64_t unaugmentable() const noexcept { return unaugmentable_; }

 private:
  AugmentationConfig config_;
  std::size_t threads_;
  std::uint64_t batches_seen_ = 0;
  std::uint64_t injected_batches_ = 0;
  std::uint64_t negatives_ = 0;
  std::uint64_t unaugmentable_ = 0;
};

/// `<batch_index>\t<source_line>\t<sentence>[\t#unaugmentable]` per sentence.
void write_negative_batch(const NegativeBatch& batch, std::ostream& out);

std::string join_tokens(std::span<const std::string> tokens);

}  // namespace una
