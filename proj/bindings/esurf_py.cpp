#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "esurf/cli.hpp"
#include "esurf/corpus.hpp"
#include "esurf/errors.hpp"
#include "esurf/eval.hpp"
#include "esurf/features.hpp"
#include "esurf/forest.hpp"
#include "esurf/model_io.hpp"
#include "esurf/segmenter.hpp"
#include "esurf/synthetic.hpp"

namespace py = pybind11;
using namespace esurf;

namespace {

std::vector<Document> pipe_from_string(const std::string& text) {
  std::istringstream in(text);
  return load_pipe_marked(in);
}

std::vector<Document> plain_from_string(const std::string& text) {
  std::istringstream in(text);
  return load_plain(in);
}

std::vector<Document> edu_lines_from_strings(const std::string& edus,
                                             const std::string& sentences) {
  std::istringstream e(edus), s(sentences);
  return load_edu_lines(e, s);
}

std::string docs_to_pipe(const std::vector<Document>& docs) {
  std::ostringstream out;
  write_pipe_marked(docs, out);
  return out.str();
}

std::string seg_to_pipe(const Document& doc, const Segmentation& seg) {
  std::ostringstream out;
  render_pipe_marked(doc, seg, out);
  return out.str();
}

std::string seg_to_records(const Document& doc, const Segmentation& seg) {
  std::ostringstream out;
  render_records(doc, seg, out);
  return out.str();
}

}  // namespace

PYBIND11_MODULE(_esurf, m) {
  m.doc() = "EDU segmentation with a random forest over positional lexical and "
            "character-subsequence features";

  py::register_exception<CorpusError>(m, "CorpusError");
  py::register_exception<DataError>(m, "DataError");
  py::register_exception<ModelIoError>(m, "ModelIoError");
  py::register_exception<EvalError>(m, "EvalError");

  py::class_<Token>(m, "Token")
      .def(py::init<std::string, std::uint32_t>(), py::arg("text"), py::arg("index"))
      .def_readonly("text", &Token::text)
      .def_readonly("index", &Token::index)
      .def("__repr__",
           [](const Token& t) { return "Token('" + t.text + "', " + std::to_string(t.index) + ")"; });

  py::class_<Sentence>(m, "Sentence")
      .def(py::init<>())
      .def_readonly("tokens", &Sentence::tokens)
      .def_readonly("gold_boundaries", &Sentence::gold_boundaries)
      .def("__len__", [](const Sentence& s) { return s.tokens.size(); });

  py::class_<Document>(m, "Document")
      .def(py::init<>())
      .def_readonly("doc_id", &Document::doc_id)
      .def_readonly("sentences", &Document::sentences);

  py::class_<CandidateWindow>(m, "CandidateWindow")
      .def_readonly("doc_id", &CandidateWindow::doc_id)
      .def_readonly("sentence_index", &CandidateWindow::sentence_index)
      .def_readonly("gap", &CandidateWindow::gap)
      .def_readonly("before", &CandidateWindow::before)
      .def_readonly("leading", &CandidateWindow::leading)
      .def_readonly("continuing", &CandidateWindow::continuing)
      .def_readonly("label", &CandidateWindow::label);

  py::enum_<Region>(m, "Region")
      .value("BEFORE", Region::Before)
      .value("LEADING", Region::Leading)
      .value("CONTINUING", Region::Continuing);

  py::enum_<FeatureKind>(m, "FeatureKind")
      .value("TOKEN", FeatureKind::Token)
      .value("CHAR_SUB", FeatureKind::CharSub);

  py::class_<FeatureKey>(m, "FeatureKey")
      .def(py::init<FeatureKind, Region, std::string>(), py::arg("kind"), py::arg("region"),
           py::arg("value"))
      .def_readonly("kind", &FeatureKey::kind)
      .def_readonly("region", &FeatureKey::region)
      .def_readonly("value", &FeatureKey::value);

  py::class_<FilterBounds>(m, "FilterBounds")
      .def(py::init<>())
      .def(py::init<std::uint32_t, double>(), py::arg("min_docs"), py::arg("max_doc_fraction"))
      .def_readwrite("min_docs", &FilterBounds::min_docs)
      .def_readwrite("max_doc_fraction", &FilterBounds::max_doc_fraction);

  py::class_<SparseVector>(m, "SparseVector")
      .def(py::init<>())
      .def_readonly("indices", &SparseVector::indices)
      .def("__len__", [](const SparseVector& v) { return v.indices.size(); });

  py::class_<FeatureSpace::Entry>(m, "FeatureEntry")
      .def_readonly("key", &FeatureSpace::Entry::key)
      .def_readonly("doc_freq", &FeatureSpace::Entry::doc_freq);

  py::class_<FeatureSpace>(m, "FeatureSpace")
      .def("__len__", &FeatureSpace::size)
      .def("index_of", &FeatureSpace::index_of)
      .def("entry", &FeatureSpace::entry, py::return_value_policy::reference_internal)
      .def_property_readonly("n_train_docs", &FeatureSpace::n_train_docs);

  py::class_<ForestParams>(m, "ForestParams")
      .def(py::init<>())
      .def_readwrite("n_trees", &ForestParams::n_trees)
      .def_readwrite("max_depth", &ForestParams::max_depth)
      .def_readwrite("min_leaf", &ForestParams::min_leaf)
      .def_readwrite("features_per_split", &ForestParams::features_per_split)
      .def_readwrite("seed", &ForestParams::seed)
      .def_readwrite("decision_threshold", &ForestParams::decision_threshold);

  py::class_<LabeledVector>(m, "LabeledVector")
      .def(py::init<>())
      .def_readwrite("vec", &LabeledVector::vec)
      .def_readwrite("label", &LabeledVector::label);

  py::class_<ForestModel>(m, "ForestModel")
      .def("predict_proba", &ForestModel::predict_proba)
      .def("classify", &ForestModel::classify)
      .def_property_readonly("params", &ForestModel::params)
      .def_property_readonly("space", &ForestModel::space,
                             py::return_value_policy::reference_internal)
      .def_property_readonly("n_trees",
                             [](const ForestModel& m_) { return m_.trees().size(); })
      .def("save", &save_model, py::arg("path"))
      .def_static("load", &load_model, py::arg("path"));

  py::class_<EduSpan>(m, "EduSpan")
      .def_readonly("sentence_index", &EduSpan::sentence_index)
      .def_readonly("start", &EduSpan::start)
      .def_readonly("end", &EduSpan::end);

  py::class_<Segmentation>(m, "Segmentation")
      .def_readonly("doc_id", &Segmentation::doc_id)
      .def_readonly("edus", &Segmentation::edus)
      .def_readonly("boundary_probs", &Segmentation::boundary_probs);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("accuracy", &MetricsReport::accuracy)
      .def_readonly("precision", &MetricsReport::precision)
      .def_readonly("recall", &MetricsReport::recall)
      .def_readonly("f1", &MetricsReport::f1)
      .def_readonly("tp", &MetricsReport::tp)
      .def_readonly("fp", &MetricsReport::fp)
      .def_readonly("fn", &MetricsReport::fn)
      .def_readonly("tn", &MetricsReport::tn)
      .def_readonly("n_docs", &MetricsReport::n_docs)
      .def_readonly("n_boundaries_gold", &MetricsReport::n_boundaries_gold)
      .def_readonly("n_boundaries_pred", &MetricsReport::n_boundaries_pred)
      .def("__repr__", [](const MetricsReport& r) {
        return "MetricsReport(accuracy=" + std::to_string(r.accuracy) +
               ", precision=" + std::to_string(r.precision) +
               ", recall=" + std::to_string(r.recall) + ", f1=" + std::to_string(r.f1) + ")";
      });

  m.def("tokenize", &tokenize, py::arg("raw_sentence"),
        "Whitespace tokenization with edge punctuation split off");
  m.def("load_pipe_marked", &pipe_from_string, py::arg("text"),
        "Parse a pipe-marked gold corpus from a string");
  m.def("load_plain", &plain_from_string, py::arg("text"),
        "Parse a plain (unlabeled) corpus from a string");
  m.def("load_edu_lines", &edu_lines_from_strings, py::arg("edus"), py::arg("sentences"),
        "Parse an edu-lines gold corpus from strings");
  m.def("load_gold_corpus", &load_gold_corpus, py::arg("path"), py::arg("format"),
        py::arg("sentences_path") = std::string());
  m.def("load_plain_corpus", &load_plain_corpus, py::arg("path"));
  m.def("write_pipe_marked", &docs_to_pipe, py::arg("docs"),
        "Render documents with their gold boundaries as pipe-marked text");

  py::enum_<CorpusFormat>(m, "CorpusFormat")
      .value("PIPE_MARKED", CorpusFormat::PipeMarked)
      .value("EDU_LINES", CorpusFormat::EduLines);

  m.def("extract_windows", &extract_windows, py::arg("sentence"), py::arg("doc_id"),
        py::arg("sentence_index"), py::arg("labeled"));
  m.def("extract_all_windows", &extract_all_windows, py::arg("docs"), py::arg("labeled"));
  m.def("balanced_sample", &balanced_sample, py::arg("windows"), py::arg("seed"));

  m.def("char_subsequences", &char_subsequences, py::arg("token_text"));
  m.def("window_keys", &window_keys, py::arg("window"));
  m.def("build_feature_space", &build_feature_space, py::arg("train_docs"),
        py::arg("windows"), py::arg("bounds") = FilterBounds{});
  m.def("vectorize", &vectorize, py::arg("window"), py::arg("space"));

  m.def("gini", &gini, py::arg("positive"), py::arg("total"));
  m.def(
      "train_forest",
      [](const std::vector<LabeledVector>& samples, const ForestParams& params,
         const FeatureSpace& space) { return train_forest(samples, params, space); },
      py::arg("samples"), py::arg("params"), py::arg("space"),
      py::call_guard<py::gil_scoped_release>());

  m.def("segment_document", &segment_document, py::arg("doc"), py::arg("model"),
        py::call_guard<py::gil_scoped_release>());
  m.def("render_pipe_marked", &seg_to_pipe, py::arg("doc"), py::arg("segmentation"));
  m.def("render_records", &seg_to_records, py::arg("doc"), py::arg("segmentation"));

  m.def("classification_metrics",
        [](const std::vector<std::pair<bool, bool>>& preds) {
          return classification_metrics(preds);
        },
        py::arg("predictions"));
  m.def("boundary_metrics", &boundary_metrics, py::arg("pred"), py::arg("gold"),
        py::arg("count_sentence_initial") = false);

  m.def("generate_synthetic_corpus", &generate_synthetic_corpus, py::arg("n_docs"),
        py::arg("seed"), py::arg("id_prefix") = std::string_view("synth"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = esurf::cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run one CLI invocation in-process; returns (exit_code, stdout, stderr)");

  m.attr("MODEL_FORMAT_VERSION") = kModelFormatVersion;
}
