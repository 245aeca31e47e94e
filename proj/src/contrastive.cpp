#include "una/contrastive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "una/error.hpp"
#include "una/random.hpp"

namespace una {

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(ErrorKind::kDomain, "cosine: dimension mismatch");
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    nu += u[k] * u[k];
    nv += v[k] * v[k];
  }
  if (!std::isfinite(dot) || !std::isfinite(nu) || !std::isfinite(nv)) {
    throw Error(ErrorKind::kDomain, "cosine: non-finite input");
  }
  if (nu == 0.0 || nv == 0.0) throw Error(ErrorKind::kDomain, "cosine: zero-norm vector");
  return std::clamp(dot / (std::sqrt(nu) * std::sqrt(nv)), -1.0, 1.0);
}

double info_nce_from_similarities(double positive_similarity,
                                  std::span<const double> negative_similarities, double tau,
                                  bool include_positive_in_denominator) {
  if (!(tau > 0.0)) throw Error(ErrorKind::kDomain, "temperature must be positive");
  if (negative_similarities.empty() && !include_positive_in_denominator) {
    throw Error(ErrorKind::kInvalidArgument, "InfoNCE needs at least one negative");
  }
  if (!std::isfinite(positive_similarity)) throw Error(ErrorKind::kDomain, "non-finite similarity");

  const double pos = positive_similarity / tau;
  double shift = include_positive_in_denominator ? pos : -INFINITY;
  for (double s : negative_similarities) {
    if (!std::isfinite(s)) throw Error(ErrorKind::kDomain, "non-finite similarity");
    shift = std::max(shift, s / tau);
  }
  double sum = include_positive_in_denominator ? std::exp(pos - shift) : 0.0;
  for (double s : negative_similarities) sum += std::exp(s / tau - shift);
  return -pos + shift + std::log(sum);
}

double info_nce(const Embedding& anchor, const Embedding& positive,
                std::span<const Embedding> negatives, double tau,
                bool include_positive_in_denominator) {
  std::vector<double> sims;
  sims.reserve(negatives.size());
  for (const auto& n : negatives) sims.push_back(cosine_similarity(anchor, n));
  return info_nce_from_similarities(cosine_similarity(anchor, positive), sims, tau,
                                    include_positive_in_denominator);
}

std::vector<double> batch_losses(std::span<const Embedding> anchors,
                                 std::span<const Embedding> positives,
                                 std::span<const Embedding> una_negatives,
                                 const ContrastiveConfig& config) {
  const std::size_t b = anchors.size();
  if (positives.size() != b) throw Error(ErrorKind::kInvalidArgument, "anchors/positives size mismatch");
  if (b == 0) throw Error(ErrorKind::kInvalidArgument, "empty batch");
  if (b < 2 && una_negatives.empty() && !config.include_positive_in_denominator) {
    throw Error(ErrorKind::kInvalidArgument, "batch of one has no negatives");
  }

  std::vector<double> losses;
  losses.reserve(b);
  std::vector<double> sims;
  for (std::size_t i = 0; i < b; ++i) {
    sims.clear();
    for (std::size_t k = 0; k < b; ++k) {
      if (k != i) sims.push_back(cosine_similarity(anchors[i], positives[k]));
    }
    for (const auto& n : una_negatives) sims.push_back(cosine_similarity(anchors[i], n));
    losses.push_back(info_nce_from_similarities(cosine_similarity(anchors[i], positives[i]), sims,
                                                config.tau, config.include_positive_in_denominator));
  }
  return losses;
}

double batch_loss(std::span<const Embedding> anchors, std::span<const Embedding> positives,
                  std::span<const Embedding> una_negatives, const ContrastiveConfig& config) {
  const auto losses = batch_losses(anchors, positives, una_negatives, config);
  double sum = 0.0;
  for (double l : losses) sum += l;
  return sum / static_cast<double>(losses.size());
}

std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ToyEncoder::ToyEncoder(const Vocabulary& vocabulary, std::size_t dimension, std::uint64_t seed)
    : vocabulary_(&vocabulary), dimension_(dimension), seed_(seed) {
  if (dimension == 0) throw Error(ErrorKind::kInvalidArgument, "embedding dimension must be >= 1");
}

Embedding ToyEncoder::term_vector(std::string_view term) const {
  CounterRng rng = CounterRng(seed_).split(stable_hash(term));
  Embedding v(dimension_);
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm += x * x;
    }
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

EncodedSentence ToyEncoder::encode(std::span<const std::string> tokens) const {
  EncodedSentence out;
  out.embedding.assign(dimension_, 0.0);
  bool any = false;
  // Summing in sorted order makes the result bit-identical under permutation.
  std::vector<std::string_view> sorted(tokens.begin(), tokens.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto token : sorted) {
    if (!vocabulary_->find(token)) continue;
    const auto v = term_vector(token);
    for (std::size_t k = 0; k < dimension_; ++k) out.embedding[k] += v[k];
    any = true;
  }
  double norm = 0.0;
  for (double x : out.embedding) norm += x * x;
  if (!any || norm == 0.0) {
    // Tokens cancelling exactly is treated like an empty sentence.
    std::fill(out.embedding.begin(), out.embedding.end(), 0.0);
    out.embedding[0] = 1.0;
    out.fallback = true;
    return out;
  }
  norm = std::sqrt(norm);
  for (auto& x : out.embedding) x /= norm;
  return out;
}

Embedding toy_encode(std::span<const std::string> tokens, const Vocabulary& vocabulary,
                     std::size_t dimension, std::uint64_t seed) {
  return ToyEncoder(vocabulary, dimension, seed).encode(tokens).embedding;
}

PositivePairSet load_pairs(std::istream& in) {
  PositivePairSet pairs;
  for (auto& line : read_lines(in)) {
    if (line.text.empty()) continue;
    const auto tab = line.text.find('\t');
    if (tab == std::string::npos || line.text.find('\t', tab + 1) != std::string::npos) {
      throw Error(ErrorKind::kParse,
                  "pairs file line " + std::to_string(line.number) + ": expected 2 tab-separated columns");
    }
    PositivePair pair{line.text.substr(0, tab), line.text.substr(tab + 1), line.number};
    if (tokenize(pair.anchor).empty() || tokenize(pair.positive).empty()) {
      throw Error(ErrorKind::kParse,
                  "pairs file line " + std::to_string(line.number) + ": empty sentence");
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

PositivePairSet load_pairs_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open pairs file: " + path);
  return load_pairs(in);
}

}  // namespace una
