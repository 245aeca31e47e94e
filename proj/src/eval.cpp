#include "una/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "una/error.hpp"

namespace una {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold equal values: ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw Error(ErrorKind::kInvalidArgument, "spearman: length mismatch");
  if (xs.size() < 2) throw Error(ErrorKind::kInvalidArgument, "spearman: need at least 2 values");
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!std::isfinite(xs[k]) || !std::isfinite(ys[k])) {
      throw Error(ErrorKind::kDomain, "spearman: non-finite input");
    }
  }
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  // Average ranks always have mean (n + 1) / 2.
  const double mean = 0.5 * (n + 1.0);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    const double dx = rx[k] - mean;
    const double dy = ry[k] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::kUndefinedCorrelation, "spearman: constant input");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

EvalReport evaluate_pairs(std::span<const ScoredPair> pairs, const SentenceEncoder& encoder) {
  EvalReport report;
  std::vector<double> sims;
  std::vector<double> gold;
  sims.reserve(pairs.size());
  gold.reserve(pairs.size());
  for (const auto& pair : pairs) {
    const auto a = encoder(tokenize(pair.sentence_a));
    const auto b = encoder(tokenize(pair.sentence_b));
    if (a.fallback && b.fallback) {
      ++report.n_flagged;
      continue;
    }
    sims.push_back(cosine_similarity(a.embedding, b.embedding));
    gold.push_back(pair.gold);
  }
  report.n_pairs = sims.size();
  if (report.n_pairs < 2) {
    throw Error(ErrorKind::kInvalidArgument, "fewer than 2 scoreable pairs");
  }
  report.rho = spearman(sims, gold);
  return report;
}

std::vector<ScoredPair> load_scored_pairs(std::istream& in) {
  std::vector<ScoredPair> pairs;
  for (auto& line : read_lines(in)) {
    if (line.text.empty()) continue;
    const auto where = "eval file line " + std::to_string(line.number) + ": ";
    const auto tab1 = line.text.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.text.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.text.find('\t', tab2 + 1) != std::string::npos) {
      throw Error(ErrorKind::kParse, where + "expected 3 tab-separated columns");
    }
    ScoredPair pair;
    pair.sentence_a = line.text.substr(0, tab1);
    pair.sentence_b = line.text.substr(tab1 + 1, tab2 - tab1 - 1);
    pair.line = line.number;
    std::string_view gold(line.text);
    gold = gold.substr(tab2 + 1);
    while (!gold.empty() && gold.back() == ' ') gold.remove_suffix(1);
    while (!gold.empty() && gold.front() == ' ') gold.remove_prefix(1);
    auto [end, ec] = std::from_chars(gold.data(), gold.data() + gold.size(), pair.gold);
    if (ec != std::errc() || end != gold.data() + gold.size() || !std::isfinite(pair.gold)) {
      throw Error(ErrorKind::kParse, where + "bad gold score '" + std::string(gold) + "'");
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<ScoredPair> load_scored_pairs_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open eval file: " + path);
  return load_scored_pairs(in);
}

}  // namespace una
