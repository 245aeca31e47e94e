#include "una/augment.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "una/error.hpp"

namespace una {

void AugmentationConfig::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "beta must lie in (0, 1]");
  }
  if (radius < 1) throw Error(ErrorKind::kInvalidArgument, "radius must be at least 1");
  if (alpha < 1) throw Error(ErrorKind::kInvalidArgument, "alpha must be at least 1");
}

std::vector<double> unclamped_probabilities(std::span<const double> z, double beta) {
  if (z.empty()) return {};
  const double lowest = *std::min_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += v - lowest;
  const double c = sum / static_cast<double>(z.size());
  if (!(c > 0.0)) return {};
  std::vector<double> q;
  q.reserve(z.size());
  for (double v : z) q.push_back(beta * (v - lowest) / c);
  return q;
}

ReplacementProbabilities replacement_probabilities(const SentenceScores& scores, double beta,
                                                   SelectionMode mode, CounterRng& rng) {
  const std::size_t n = scores.n_z();
  if (n == 0) throw Error(ErrorKind::kEmptySentence, "sentence has no scored terms");

  ReplacementProbabilities out;
  if (mode == SelectionMode::kRandom) {
    out.p.assign(n, beta);
    out.forced = static_cast<std::size_t>(rng.below(n));
    out.p[out.forced] = 1.0;
    return out;
  }

  std::size_t argmax = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double zi = scores.z[i];
    const double zm = scores.z[argmax];
    if (zi > zm || (zi == zm && scores.term_ids[i] < scores.term_ids[argmax])) argmax = i;
  }
  out.forced = argmax;

  auto q = unclamped_probabilities(scores.z, beta);
  if (q.empty()) {
    out.p.assign(n, 0.0);
  } else {
    out.p.reserve(n);
    for (double v : q) out.p.push_back(std::min(v, 1.0));
  }
  out.p[argmax] = 1.0;
  return out;
}

std::vector<TermId> candidate_window(const TfIdfModel& model, TermId term, std::size_t radius) {
  const std::size_t k = model.rank_of(term);
  const auto ranks = model.rank_by_score();
  const std::size_t lo = k > radius ? k - radius : 0;
  const std::size_t hi = std::min(ranks.size() - 1, k + std::min(radius, ranks.size()));
  std::vector<TermId> window;
  window.reserve(hi - lo);
  for (std::size_t pos = lo; pos <= hi; ++pos) {
    if (pos != k) window.push_back(ranks[pos]);
  }
  return window;
}

TermId sample_replacement(const TfIdfModel& model, TermId original, std::span<const TermId> window,
                          ReplacementMode mode, CounterRng& rng) {
  if (mode == ReplacementMode::kRandom) {
    const std::size_t m = model.num_terms();
    if (m < 2) throw Error(ErrorKind::kNoReplacement, "vocabulary has no alternative term");
    auto pick = static_cast<TermId>(rng.below(m - 1));
    if (pick >= original) ++pick;
    return pick;
  }

  if (window.empty()) throw Error(ErrorKind::kNoReplacement, "empty candidate window");
  const auto scores = model.max_score();
  double total = 0.0;
  for (TermId id : window) total += scores[id];
  if (!(total > 0.0)) return window[rng.below(window.size())];

  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (TermId id : window) {
    acc += scores[id];
    if (target < acc) return id;
  }
  // Rounding left target at the top of the range: take the last weighted term.
  for (auto it = window.rbegin(); it != window.rend(); ++it) {
    if (scores[*it] > 0.0) return *it;
  }
  return window.back();
}

AugmentedSentence augment_sentence(const TfIdfModel& model, const Document& document,
                                   const AugmentationConfig& config, CounterRng& rng) {
  AugmentedSentence out;
  out.source_id = document.id;
  out.source_line = document.line;
  out.tokens = document.tokens;

  const auto scores = sentence_scores(model, document.tokens);
  if (scores.n_z() == 0 || model.num_terms() < 2) {
    out.unaugmentable = true;
    return out;
  }

  const auto probs = replacement_probabilities(scores, config.beta, config.selection_mode, rng);
  auto& decisions = out.plan.terms;
  decisions.reserve(scores.n_z());
  for (std::size_t i = 0; i < scores.n_z(); ++i) {
    TermDecision d;
    d.term = scores.term_ids[i];
    d.probability = probs.p[i];
    d.forced = i == probs.forced;
    d.replaced = d.forced || rng.bernoulli(d.probability);
    if (d.replaced) {
      if (config.replacement_mode == ReplacementMode::kTfIdf) {
        d.window = candidate_window(model, d.term, config.radius);
      }
      d.replacement = sample_replacement(model, d.term, d.window, config.replacement_mode, rng);
    }
    decisions.push_back(std::move(d));
  }

  const auto& vocab = model.vocabulary();
  for (auto& token : out.tokens) {
    const auto id = vocab.find(token);
    if (!id) continue;
    for (const auto& d : decisions) {
      if (d.term == *id) {
        if (d.replaced) token = vocab.term(d.replacement);
        break;
      }
    }
  }
  return out;
}

bool injects_negatives(std::uint64_t batch_index, std::size_t alpha) {
  return alpha > 0 && batch_index > 0 && batch_index % alpha == 0;
}

NegativeBatch augment_batch(const TfIdfModel& model, std::span<const Document> batch,
                            const AugmentationConfig& config, std::uint64_t batch_index,
                            std::size_t threads) {
  NegativeBatch out;
  out.batch_index = batch_index;
  out.sentences.resize(batch.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t pos = begin; pos < end; ++pos) {
      auto rng = sentence_stream(config.seed, batch_index, pos);
      out.sentences[pos] = augment_sentence(model, batch[pos], config, rng);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(batch.size(), 1));
  if (workers == 1) {
    work(0, batch.size());
    return out;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (batch.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(batch.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(work, begin, end);
  }
  return out;
}

NegativeScheduler::NegativeScheduler(AugmentationConfig config, std::size_t threads)
    : config_(config), threads_(threads) {
  config_.validate();
}

std::optional<NegativeBatch> NegativeScheduler::step(const TfIdfModel& model,
                                                     std::span<const Document> batch) {
  const std::uint64_t index = ++batches_seen_;
  if (!injects_negatives(index, config_.alpha)) return std::nullopt;
  auto negatives = augment_batch(model, batch, config_, index, threads_);
  ++injected_batches_;
  negatives_ += negatives.sentences.size();
  for (const auto& s : negatives.sentences) unaugmentable_ += s.unaugmentable ? 1 : 0;
  return negatives;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

void write_negative_batch(const NegativeBatch& batch, std::ostream& out) {
  for (const auto& s : batch.sentences) {
    out << batch.batch_index << '\t' << s.source_line << '\t' << join_tokens(s.tokens);
    if (s.unaugmentable) out << "\t#unaugmentable";
    out << '\n';
  }
}

}  // namespace una
