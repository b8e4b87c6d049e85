#include "esurf/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "esurf/corpus.hpp"
#include "esurf/errors.hpp"
#include "esurf/eval.hpp"
#include "esurf/features.hpp"
#include "esurf/forest.hpp"
#include "esurf/model_io.hpp"
#include "esurf/parallel.hpp"
#include "esurf/segmenter.hpp"
#include "esurf/synthetic.hpp"

namespace esurf::cli {

namespace {

struct TrainOptions {
  std::string corpus_path;
  std::string sentences_path;
  std::string model_path;
  std::string format = "pipe";
  ForestParams params;
  FilterBounds bounds;
  bool balance = false;
};

struct SegmentOptions {
  std::string model_path;
  std::string input_path;
  std::string output_path;
  std::string format = "pipe";
};

struct EvaluateOptions {
  std::string model_path;
  std::string gold_path;
  std::string sentences_path;
  std::string format = "pipe";
  std::string per_doc_path;
  bool classification_mode = false;
  bool count_sentence_initial = false;
  std::uint64_t seed = 42;
};

struct InspectOptions {
  std::string model_path;
};

struct GenSyntheticOptions {
  std::size_t n_docs = 100;
  std::uint64_t seed = 42;
  std::string output_path;
  std::string prefix = "synth";
};

CorpusFormat parse_corpus_format(const std::string& name) {
  if (name == "pipe") return CorpusFormat::PipeMarked;
  if (name == "edu-lines") return CorpusFormat::EduLines;
  throw CorpusError("unknown corpus format: " + name);
}

std::vector<Document> load_gold(const std::string& path, const std::string& format,
                                const std::string& sentences_path) {
  return load_gold_corpus(path, parse_corpus_format(format), sentences_path);
}

std::vector<LabeledVector> vectorize_labeled(const std::vector<CandidateWindow>& windows,
                                             const FeatureSpace& space) {
  std::vector<LabeledVector> out(windows.size());
  parallel_for(windows.size(), [&](std::size_t i) {
    out[i] = LabeledVector{vectorize(windows[i], space), windows[i].label.value()};
  });
  return out;
}

std::vector<Segmentation> segment_corpus(const std::vector<Document>& docs,
                                         const ForestModel& model) {
  std::vector<Segmentation> segs(docs.size());
  parallel_for(docs.size(), [&](std::size_t i) { segs[i] = segment_document(docs[i], model); });
  return segs;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelIoError("cannot open output file for writing: " + path);
  out << content;
  out.flush();
  if (!out.good()) throw ModelIoError("failed to write output file: " + path);
}

void echo_train_config(const TrainOptions& opt, std::ostream& out) {
  out << "config:\n"
      << "  corpus=" << opt.corpus_path << "\n"
      << "  format=" << opt.format << "\n";
  if (!opt.sentences_path.empty()) out << "  sentences=" << opt.sentences_path << "\n";
  out << "  model=" << opt.model_path << "\n"
      << "  trees=" << opt.params.n_trees << "\n"
      << "  max_depth=" << opt.params.max_depth << "\n"
      << "  min_leaf=" << opt.params.min_leaf << "\n"
      << "  features_per_split=" << opt.params.features_per_split
      << (opt.params.features_per_split == 0 ? " (auto: round(sqrt(D)))" : "") << "\n"
      << "  min_docs=" << opt.bounds.min_docs << "\n"
      << "  max_doc_fraction=" << opt.bounds.max_doc_fraction << "\n"
      << "  balance=" << (opt.balance ? "true" : "false") << "\n"
      << "  seed=" << opt.params.seed << "\n"
      << "  decision_threshold=" << opt.params.decision_threshold << "\n";
}

int cmd_train(const TrainOptions& opt, std::ostream& out) {
  echo_train_config(opt, out);

  const std::vector<Document> docs = load_gold(opt.corpus_path, opt.format, opt.sentences_path);
  std::vector<CandidateWindow> windows = extract_all_windows(docs, /*labeled=*/true);
  std::size_t positives = 0;
  for (const CandidateWindow& w : windows) positives += *w.label ? 1 : 0;
  out << "windows: total=" << windows.size() << " positive=" << positives
      << " negative=" << windows.size() - positives << "\n";

  if (opt.balance) {
    windows = balanced_sample(windows, opt.params.seed);
    out << "balanced: total=" << windows.size() << " (" << windows.size() / 2
        << " per class)\n";
  }

  const FeatureSpace space = build_feature_space(docs, windows, opt.bounds);
  out << "feature space: D=" << space.size() << " over " << space.n_train_docs()
      << " documents\n";

  const std::vector<LabeledVector> samples = vectorize_labeled(windows, space);
  const ForestModel model = train_forest(samples, opt.params, space);
  out << "forest: trees=" << model.params().n_trees
      << " features_per_split=" << model.params().features_per_split << "\n";

  // Training-set accuracy per class.
  std::uint64_t pos_total = 0, pos_hit = 0, neg_total = 0, neg_hit = 0;
  std::vector<std::uint8_t> predicted(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    predicted[i] = model.classify(samples[i].vec) ? 1 : 0;
  });
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label) {
      ++pos_total;
      pos_hit += predicted[i];
    } else {
      ++neg_total;
      neg_hit += 1 - predicted[i];
    }
  }
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(4);
  out << "train accuracy: positive=" << (pos_total ? double(pos_hit) / double(pos_total) : 0.0)
      << " (" << pos_hit << "/" << pos_total << ")"
      << " negative=" << (neg_total ? double(neg_hit) / double(neg_total) : 0.0) << " ("
      << neg_hit << "/" << neg_total << ")\n";
  out.flags(flags);

  auto counts = split_counts(model);
  std::sort(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  out << "top split features:\n";
  for (std::size_t i = 0; i < counts.size() && i < 10; ++i) {
    const FeatureSpace::Entry& e = space.entry(counts[i].first);
    out << "  " << region_letter(e.key.region) << "/"
        << (e.key.kind == FeatureKind::Token ? "token" : "char-sub") << "/" << e.key.value
        << " splits=" << counts[i].second << "\n";
  }

  save_model(model, opt.model_path);
  out << "model written: " << opt.model_path << "\n";
  return kExitOk;
}

int cmd_segment(const SegmentOptions& opt, std::ostream& out) {
  const ForestModel model = load_model(opt.model_path);
  const std::vector<Document> docs = load_plain_corpus(opt.input_path);
  const std::vector<Segmentation> segs = segment_corpus(docs, model);

  std::ostringstream rendered;
  if (opt.format == "pipe") {
    render_pipe_marked(docs, segs, rendered);
  } else if (opt.format == "records") {
    render_records(docs, segs, rendered);
  } else {
    throw CorpusError("unknown output format: " + opt.format);
  }
  write_text_file(opt.output_path, rendered.str());
  std::size_t n_edus = 0;
  for (const Segmentation& s : segs) n_edus += s.edus.size();
  out << "segmented " << docs.size() << " documents into " << n_edus << " EDUs -> "
      << opt.output_path << "\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out) {
  const ForestModel model = load_model(opt.model_path);
  const std::vector<Document> gold = load_gold(opt.gold_path, opt.format, opt.sentences_path);

  if (opt.classification_mode) {
    // Table-style balanced classification over candidate windows.
    std::vector<CandidateWindow> windows = extract_all_windows(gold, /*labeled=*/true);
    windows = balanced_sample(windows, opt.seed);
    std::size_t positives = 0;
    for (const CandidateWindow& w : windows) positives += *w.label ? 1 : 0;
    out << "mode=classification (balanced windows)\n";
    out << "balanced_set_size=" << windows.size() << " positives=" << positives
        << " negatives=" << windows.size() - positives << "\n";

    std::vector<std::pair<bool, bool>> predictions(windows.size());
    parallel_for(windows.size(), [&](std::size_t i) {
      predictions[i] = {model.classify(vectorize(windows[i], model.space())),
                        *windows[i].label};
    });
    print_report(classification_metrics(predictions), out);
    return kExitOk;
  }

  out << "mode=boundary (natural distribution"
      << (opt.count_sentence_initial ? ", counting sentence-initial boundaries" : "") << ")\n";
  const std::vector<Segmentation> segs = segment_corpus(gold, model);
  const MetricsReport report = boundary_metrics(segs, gold, opt.count_sentence_initial);
  print_report(report, out);

  if (!opt.per_doc_path.empty()) {
    const auto per_doc = boundary_metrics_per_doc(segs, gold, opt.count_sentence_initial);
    std::ostringstream tsv;
    tsv << "doc_id\ttp\tfp\tfn\ttn\tprecision\trecall\tf1\n";
    tsv << std::fixed << std::setprecision(6);
    for (const auto& [doc_id, r] : per_doc) {
      tsv << doc_id << '\t' << r.tp << '\t' << r.fp << '\t' << r.fn << '\t' << r.tn << '\t'
          << r.precision << '\t' << r.recall << '\t' << r.f1 << "\n";
    }
    write_text_file(opt.per_doc_path, tsv.str());
    out << "per-document breakdown -> " << opt.per_doc_path << "\n";
  }
  return kExitOk;
}

int cmd_inspect_features(const InspectOptions& opt, std::ostream& out) {
  const ForestModel model = load_model(opt.model_path);
  const FeatureSpace& space = model.space();
  for (std::uint32_t i = 0; i < space.size(); ++i) {
    const FeatureSpace::Entry& e = space.entry(i);
    out << e.key.value << '\t' << region_letter(e.key.region) << '\t'
        << (e.key.kind == FeatureKind::Token ? "token" : "char-sub") << '\t' << e.doc_freq
        << '\t' << i << "\n";
  }
  return kExitOk;
}

int cmd_gen_synthetic(const GenSyntheticOptions& opt, std::ostream& out) {
  const std::vector<Document> docs = generate_synthetic_corpus(opt.n_docs, opt.seed, opt.prefix);
  std::ostringstream rendered;
  write_pipe_marked(docs, rendered);
  write_text_file(opt.output_path, rendered.str());
  out << "wrote " << docs.size() << " synthetic documents -> " << opt.output_path << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"EDU segmentation with a random forest over positional lexical and "
               "character-subsequence features"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from an INI/TOML file (flags win)");

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a segmentation model");
  train_cmd->add_option("--corpus", train.corpus_path, "Gold corpus path")->required();
  train_cmd->add_option("--model", train.model_path, "Output model path")->required();
  train_cmd->add_option("--format", train.format, "Corpus format: pipe|edu-lines")
      ->check(CLI::IsMember({"pipe", "edu-lines"}));
  train_cmd->add_option("--sentences", train.sentences_path,
                        "Sentence file (edu-lines format only)");
  train_cmd->add_option("--trees", train.params.n_trees, "Number of trees");
  train_cmd->add_option("--max-depth", train.params.max_depth, "Maximum tree depth");
  train_cmd->add_option("--min-leaf", train.params.min_leaf, "Minimum samples per leaf side");
  train_cmd->add_option("--features-per-split", train.params.features_per_split,
                        "Candidate features per split; 0 = round(sqrt(D))");
  train_cmd->add_option("--min-docs", train.bounds.min_docs,
                        "Minimum document frequency for a feature");
  train_cmd->add_option("--max-doc-fraction", train.bounds.max_doc_fraction,
                        "Maximum document fraction for char-sub features");
  train_cmd->add_flag("--balance", train.balance, "Balance classes before training");
  train_cmd->add_option("--seed", train.params.seed, "Random seed");
  train_cmd->add_option("--threshold", train.params.decision_threshold,
                        "Decision threshold stored in the model");

  SegmentOptions segment;
  CLI::App* segment_cmd = app.add_subcommand("segment", "Segment plain text into EDUs");
  segment_cmd->add_option("--model", segment.model_path, "Model path")->required();
  segment_cmd->add_option("--input", segment.input_path, "Plain input path")->required();
  segment_cmd->add_option("--output", segment.output_path, "Output path")->required();
  segment_cmd->add_option("--format", segment.format, "Output format: pipe|records")
      ->check(CLI::IsMember({"pipe", "records"}));

  EvaluateOptions evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a model against gold");
  evaluate_cmd->add_option("--model", evaluate.model_path, "Model path")->required();
  evaluate_cmd->add_option("--gold", evaluate.gold_path, "Gold corpus path")->required();
  evaluate_cmd->add_option("--format", evaluate.format, "Corpus format: pipe|edu-lines")
      ->check(CLI::IsMember({"pipe", "edu-lines"}));
  evaluate_cmd->add_option("--sentences", evaluate.sentences_path,
                           "Sentence file (edu-lines format only)");
  evaluate_cmd->add_flag("--classification-mode", evaluate.classification_mode,
                         "Balanced window classification instead of boundary metrics");
  evaluate_cmd->add_flag("--count-sentence-initial", evaluate.count_sentence_initial,
                         "Count sentence-initial boundaries as true positives");
  evaluate_cmd->add_option("--seed", evaluate.seed, "Seed for balanced sampling");
  evaluate_cmd->add_option("--per-doc", evaluate.per_doc_path,
                           "Write a per-document TSV breakdown here");

  InspectOptions inspect;
  CLI::App* inspect_cmd =
      app.add_subcommand("inspect-features", "Dump the model's feature space as TSV");
  inspect_cmd->add_option("--model", inspect.model_path, "Model path")->required();

  GenSyntheticOptions synth;
  CLI::App* synth_cmd =
      app.add_subcommand("gen-synthetic", "Generate a synthetic gold corpus (pipe-marked)");
  synth_cmd->add_option("--docs", synth.n_docs, "Number of documents");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--output", synth.output_path, "Output path")->required();
  synth_cmd->add_option("--prefix", synth.prefix, "doc_id prefix");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train, out);
    if (segment_cmd->parsed()) return cmd_segment(segment, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate, out);
    if (inspect_cmd->parsed()) return cmd_inspect_features(inspect, out);
    if (synth_cmd->parsed()) return cmd_gen_synthetic(synth, out);
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ModelIoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFile;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitEval;
  }
  err << "error: no subcommand given\n";
  return kExitUsage;
}

}  // namespace esurf::cli
