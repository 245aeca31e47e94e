#include "una/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>
#include <vector>

#include "una/augment.hpp"
#include "una/contrastive.hpp"
#include "una/corpus.hpp"
#include "una/error.hpp"
#include "una/eval.hpp"
#include "una/tfidf.hpp"

namespace una::cli {

namespace {

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

const std::map<std::string, SelectionMode> kSelectionModes = {
    {"tfidf", SelectionMode::kTfIdf}, {"random", SelectionMode::kRandom}};
const std::map<std::string, ReplacementMode> kReplacementModes = {
    {"tfidf", ReplacementMode::kTfIdf}, {"random", ReplacementMode::kRandom}};

struct AugmentFlags {
  std::string model;
  std::string input;
  std::string output;
  AugmentationConfig config;
  std::size_t batch_size = 64;
};

struct FitFlags {
  std::string corpus;
  std::string output;
};

struct EvalFlags {
  std::string pairs;
  std::string model;
  std::size_t dim = 256;
  std::uint64_t encoder_seed = 0;
};

struct LossDemoFlags {
  std::string corpus;
  std::string pairs;
  AugmentationConfig config;
  ContrastiveConfig contrastive;
  std::size_t dim = 256;
  std::uint64_t encoder_seed = 0;
  bool with_una = true;
};

void add_augmentation_flags(CLI::App& cmd, AugmentationConfig& config) {
  cmd.add_option("--beta", config.beta, "Augmentation magnitude in (0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd.add_option("--radius", config.radius, "Rank-window radius")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--alpha", config.alpha, "Inject negatives every alpha batches")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--seed", config.seed, "Master seed")->capture_default_str();
  cmd.add_option("--selection-mode", config.selection_mode, "tfidf | random")
      ->transform(CLI::CheckedTransformer(kSelectionModes, CLI::ignore_case));
  cmd.add_option("--replacement-mode", config.replacement_mode, "tfidf | random")
      ->transform(CLI::CheckedTransformer(kReplacementModes, CLI::ignore_case));
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& stdout_stream) {
  if (path == "-") return stdout_stream;
  file.open(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::kIo, "cannot open output file: " + path);
  return file;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kEmptyCorpus:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kUndefinedCorrelation:
      return kInsufficientData;
    default:
      return kIoError;
  }
}

int cmd_fit(const FitFlags& flags, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus_file(flags.corpus);
  if (corpus.skipped_lines > 0) {
    err << "warning: skipped " << corpus.skipped_lines << " blank line(s) in " << flags.corpus << '\n';
  }
  if (corpus.size() == 0) {
    err << "error: corpus " << flags.corpus << " contains no sentences\n";
    return kBadFlags;
  }
  const TfIdfModel model = fit(corpus);
  save_model_file(model, flags.output);
  out << "N=" << model.num_documents() << " m=" << model.num_terms() << '\n';
  return kOk;
}

int cmd_augment(const AugmentFlags& flags, std::ostream& out, std::ostream& err) {
  const TfIdfModel model = load_model_file(flags.model);
  const Corpus input = load_corpus_file(flags.input);
  if (input.skipped_lines > 0) {
    err << "warning: skipped " << input.skipped_lines << " blank line(s) in " << flags.input << '\n';
  }

  std::ofstream file;
  std::ostream& sink = open_output(flags.output, file, out);
  NegativeScheduler scheduler(flags.config, thread_budget());
  const std::span<const Document> docs(input.documents);
  for (std::size_t begin = 0; begin < docs.size(); begin += flags.batch_size) {
    const auto batch = docs.subspan(begin, std::min(flags.batch_size, docs.size() - begin));
    if (auto negatives = scheduler.step(model, batch)) write_negative_batch(*negatives, sink);
  }
  sink.flush();
  if (!sink) throw Error(ErrorKind::kIo, "failed writing " + flags.output);
  if (scheduler.unaugmentable() > 0) {
    err << "warning: " << scheduler.unaugmentable() << " sentence(s) could not be augmented\n";
  }
  out << "batches=" << scheduler.injected_batches() << " negatives=" << scheduler.negatives()
      << " unaugmentable=" << scheduler.unaugmentable() << '\n';
  return kOk;
}

int cmd_eval(const EvalFlags& flags, std::ostream& out, std::ostream& err) {
  const TfIdfModel model = load_model_file(flags.model);
  const auto pairs = load_scored_pairs_file(flags.pairs);
  const ToyEncoder encoder(model.vocabulary(), flags.dim, flags.encoder_seed);
  const auto report = evaluate_pairs(
      pairs, [&](std::span<const std::string> tokens) { return encoder.encode(tokens); });
  if (report.n_flagged > 0) {
    err << "warning: " << report.n_flagged << " pair(s) had no in-vocabulary tokens on either side\n";
  }
  out << "rho=" << format_real(report.rho) << " n=" << report.n_pairs << '\n';
  return kOk;
}

int cmd_loss_demo(const LossDemoFlags& flags, std::ostream& out, std::ostream& err) {
  const Corpus corpus = load_corpus_file(flags.corpus);
  const auto pairs = load_pairs_file(flags.pairs);
  if (corpus.size() == 0) {
    err << "error: corpus " << flags.corpus << " contains no sentences\n";
    return kInsufficientData;
  }
  const std::size_t b = std::min(flags.contrastive.batch_size, pairs.size());
  if (b < 2) {
    err << "error: loss demo needs at least 2 pairs\n";
    return kInsufficientData;
  }

  const TfIdfModel model = fit(corpus);
  const ToyEncoder encoder(model.vocabulary(), flags.dim, flags.encoder_seed);
  std::vector<Document> anchors_docs;
  std::vector<Embedding> anchors, positives;
  for (std::size_t i = 0; i < b; ++i) {
    anchors_docs.push_back(make_document(i, pairs[i].anchor, pairs[i].line));
    anchors.push_back(encoder.encode(anchors_docs.back().tokens).embedding);
    positives.push_back(encoder.encode(tokenize(pairs[i].positive)).embedding);
  }

  const double without = batch_loss(anchors, positives, {}, flags.contrastive);
  out << "loss_without_una=" << format_real(without) << '\n';
  if (!flags.with_una) return kOk;

  // The demo batch stands in for the first injection batch of a run.
  const auto negatives = augment_batch(model, anchors_docs, flags.config, flags.config.alpha,
                                       thread_budget());
  std::vector<Embedding> una;
  una.reserve(negatives.sentences.size());
  for (const auto& s : negatives.sentences) una.push_back(encoder.encode(s.tokens).embedding);
  const double with = batch_loss(anchors, positives, una, flags.contrastive);
  out << "loss_with_una=" << format_real(with) << '\n';
  if (with < without) err << "warning: loss with UNA negatives fell below the baseline\n";
  return kOk;
}

}  // namespace

std::size_t thread_budget() {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("UNA_THREADS")) {
    std::size_t cap = 0;
    const std::string_view text(env);
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
    if (ec == std::errc() && end == text.data() + text.size() && cap >= 1) threads = cap;
  }
  return threads;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"TF-IDF guided hard negative augmentation", "una"};
  app.set_config("--config", "", "key=value config file; flags override it");
  app.require_subcommand(1);

  FitFlags fit_flags;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a TF-IDF model on a corpus");
  fit_cmd->add_option("--corpus", fit_flags.corpus, "One sentence per line")->required();
  fit_cmd->add_option("--output", fit_flags.output, "Model file to write")->required();

  AugmentFlags aug_flags;
  auto* aug_cmd = app.add_subcommand("augment", "Generate hard negatives for a sentence stream");
  aug_cmd->add_option("--model", aug_flags.model)->required();
  aug_cmd->add_option("--input", aug_flags.input)->required();
  aug_cmd->add_option("--output", aug_flags.output, "Augmentation file, '-' for stdout")->required();
  aug_cmd->add_option("--batch-size", aug_flags.batch_size)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_augmentation_flags(*aug_cmd, aug_flags.config);

  EvalFlags eval_flags;
  auto* eval_cmd = app.add_subcommand("eval", "Spearman correlation on scored sentence pairs");
  eval_cmd->add_option("--pairs", eval_flags.pairs, "sentence_a<TAB>sentence_b<TAB>gold")->required();
  eval_cmd->add_option("--model", eval_flags.model)->required();
  eval_cmd->add_option("--dim", eval_flags.dim)->check(CLI::PositiveNumber)->capture_default_str();
  eval_cmd->add_option("--encoder-seed", eval_flags.encoder_seed)->capture_default_str();

  LossDemoFlags demo_flags;
  auto* demo_cmd = app.add_subcommand("loss-demo", "Batch InfoNCE with and without UNA negatives");
  demo_cmd->add_option("--corpus", demo_flags.corpus)->required();
  demo_cmd->add_option("--pairs", demo_flags.pairs, "anchor<TAB>positive")->required();
  demo_cmd->add_option("--tau", demo_flags.contrastive.tau)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  demo_cmd->add_option("--batch-size", demo_flags.contrastive.batch_size)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  demo_cmd->add_option("--dim", demo_flags.dim)->check(CLI::PositiveNumber)->capture_default_str();
  demo_cmd->add_option("--encoder-seed", demo_flags.encoder_seed)->capture_default_str();
  demo_cmd->add_flag("--with-una,!--without-una", demo_flags.with_una,
                     "Also report the loss with UNA negatives appended");
  add_augmentation_flags(*demo_cmd, demo_flags.config);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kBadFlags;
  }

  try {
    if (*aug_cmd) aug_flags.config.validate();
    if (*demo_cmd) demo_flags.config.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kBadFlags;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit_flags, out, err);
    if (*aug_cmd) return cmd_augment(aug_flags, out, err);
    if (*eval_cmd) return cmd_eval(eval_flags, out, err);
    if (*demo_cmd) return cmd_loss_demo(demo_flags, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kBadFlags;
}

}  // namespace una::cli
