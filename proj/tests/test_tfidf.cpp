#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "una/error.hpp"
#include "una/tfidf.hpp"

using namespace una;

namespace {

Corpus corpus_of(const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  std::istringstream in(text);
  return load_corpus(in);
}

constexpr double kLog2 = 0.6931471805599453;

}  // namespace

TEST_CASE("tf") {
  CHECK(tf(0, 5) == 0.0);
  CHECK(tf(3, 3) == doctest::Approx(kLog2).epsilon(1e-15));
  CHECK(tf(2, 3) == doctest::Approx(0.5108256237659907).epsilon(1e-15));
  CHECK_THROWS_AS(tf(0, 0), Error);
  CHECK_THROWS_AS(tf(4, 3), Error);
}

TEST_CASE("idf") {
  CHECK(idf(7, 7) == 0.0);
  CHECK_FALSE(std::signbit(idf(7, 7)));
  CHECK(idf(1, 2) == doctest::Approx(kLog2).epsilon(1e-15));
  CHECK(idf(1, 1000) == doctest::Approx(6.907755278982137).epsilon(1e-15));
  CHECK_THROWS_AS(idf(0, 3), Error);
  CHECK_THROWS_AS(idf(4, 3), Error);
}

TEST_CASE("fit on the two-document example") {
  const auto model = fit(corpus_of({"a b b", "a c"}));
  const auto& v = model.vocabulary();
  const auto a = *v.find("a"), b = *v.find("b"), c = *v.find("c");
  CHECK(model.num_documents() == 2);
  CHECK(model.idf()[a] == 0.0);
  CHECK(model.idf()[b] == doctest::Approx(kLog2).epsilon(1e-15));
  CHECK(model.idf()[c] == doctest::Approx(kLog2).epsilon(1e-15));
  CHECK(model.max_score()[a] == 0.0);
  CHECK(model.max_score()[b] == doctest::Approx(0.35407734087117176).epsilon(1e-14));
  CHECK(model.max_score()[c] == doctest::Approx(0.28104699650060755).epsilon(1e-14));
  CHECK(std::vector<TermId>(model.rank_by_score().begin(), model.rank_by_score().end()) ==
        std::vector<TermId>{a, c, b});
  CHECK(model.rank_of(b) == 2);
  CHECK_THROWS_AS(model.rank_of(3), Error);
}

TEST_CASE("universal term scores zero") {
  const auto model = fit(corpus_of({"x", "x"}));
  CHECK(model.idf()[0] == 0.0);
  CHECK(model.max_score()[0] == 0.0);
}

TEST_CASE("fit rejects an empty corpus") {
  try {
    fit(Corpus{});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyCorpus);
  }
}

TEST_CASE("fit matches the dense brute-force oracle") {
  CounterRng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto lines = oracle::random_corpus_lines(rng, 20, 50);
    const auto corpus = corpus_of(lines);
    std::vector<std::vector<std::string>> docs;
    for (const auto& d : corpus.documents) docs.push_back(d.tokens);
    const auto ref = oracle::brute_force_tfidf(docs);
    const auto model = fit(corpus);
    REQUIRE(model.vocabulary().terms() == ref.terms);
    for (std::size_t j = 0; j < ref.terms.size(); ++j) {
      CHECK(std::abs(model.idf()[j] - ref.idf[j]) <= 1e-12);
      CHECK(std::abs(model.max_score()[j] - ref.column_max[j]) <= 1e-12);
    }
    // Rank ordering: non-decreasing scores, ascending id on ties.
    const auto ranks = model.rank_by_score();
    for (std::size_t k = 1; k < ranks.size(); ++k) {
      const double prev = model.max_score()[ranks[k - 1]];
      const double cur = model.max_score()[ranks[k]];
      CHECK((prev < cur || (prev == cur && ranks[k - 1] < ranks[k])));
    }
  }
}

TEST_CASE("idf is strictly monotone in document frequency") {
  CounterRng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto corpus = corpus_of(oracle::random_corpus_lines(rng, 20, 30));
    const auto model = fit(corpus);
    const std::size_t m = model.num_terms();
    std::vector<std::size_t> df(m, 0);
    for (const auto& d : corpus.documents) {
      std::vector<bool> seen(m, false);
      for (const auto& t : d.tokens) seen[*model.vocabulary().find(t)] = true;
      for (std::size_t j = 0; j < m; ++j) df[j] += seen[j] ? 1 : 0;
    }
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t w = 0; w < m; ++w) {
        if (df[u] < df[w]) CHECK(model.idf()[u] > model.idf()[w]);
      }
      if (df[u] == corpus.size()) CHECK(model.max_score()[u] == 0.0);
    }
  }
}

TEST_CASE("sentence_scores") {
  const auto model = fit(corpus_of({"a b b", "a c"}));
  const auto& v = model.vocabulary();

  CHECK(sentence_scores(model, std::vector<std::string>{}).n_z() == 0);
  CHECK(sentence_scores(model, std::vector<std::string>{"zzz"}).n_z() == 0);

  const auto s = sentence_scores(model, std::vector<std::string>{"a", "b"});
  REQUIRE(s.n_z() == 2);
  CHECK(s.term_ids == std::vector<TermId>{*v.find("a"), *v.find("b")});
  CHECK(s.z[0] == 0.0);
  CHECK(s.z[1] == doctest::Approx(0.28104699650060755).epsilon(1e-14));

  // OOV tokens change neither n nor the term list.
  const auto t = sentence_scores(model, std::vector<std::string>{"zzz", "b", "qq", "b", "c"});
  REQUIRE(t.n_z() == 2);
  CHECK(t.total_count == 3);
  CHECK(t.counts == std::vector<std::size_t>{2, 1});
  CHECK(t.z[0] == doctest::Approx(std::log(1.0 + 2.0 / 3.0) * kLog2));
}

TEST_CASE("model save/load round trip is exact") {
  CounterRng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto model = fit(corpus_of(oracle::random_corpus_lines(rng, 20, 50)));
    std::stringstream buf;
    save_model(model, buf);
    const auto loaded = load_model(buf);
    CHECK(loaded == model);
  }
  const auto model = fit(corpus_of({"a b b", "a c"}));
  std::ostringstream out;
  save_model(model, out);
  CHECK(out.str().rfind("UNA-TFIDF v1 N=2 m=3\na\t0\t0\n", 0) == 0);
}

namespace {

std::string load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    load_model(in);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kParse);
    return e.what();
  }
  FAIL("expected parse error");
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("load_model rejects malformed files") {
  const std::string terms = "a\t0\t0\nb\t0.5\t0.25\nc\t0.5\t0.125\n";
  CHECK(contains(load_error("UNA-TFIDF v1 N=0 m=0\nranks:\n\n"), "N must be positive"));
  CHECK(contains(load_error("UNA-TFIDF v2 N=2 m=3\n" + terms), "unsupported version"));
  CHECK(contains(load_error("UNA-TFIDF v1 N=2 m=3\na\t0\t0\n"), "line 3"));
  CHECK(contains(load_error("UNA-TFIDF v1 N=2 m=3\n" + terms + "ranks:\n0 2 0\n"), "duplicated id 0"));
  CHECK(contains(load_error("UNA-TFIDF v1 N=2 m=3\n" + terms + "ranks:\n0 1 2\n"), "not monotone"));
  CHECK(contains(load_error("UNA-TFIDF v1 N=2 m=3\n" + terms + "ranks:\n0 2\n"), "truncated ranks"));
  CHECK(contains(load_error("UNA-TFIDF v1 N=2 m=3\na\tx\t0\n"), "line 2"));

  std::istringstream ok("UNA-TFIDF v1 N=2 m=3\n" + terms + "ranks: 0 2\n1\n");
  const auto model = load_model(ok);
  CHECK(model.rank_of(1) == 2);
}
