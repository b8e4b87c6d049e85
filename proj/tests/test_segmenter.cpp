#include <doctest.h>

#include <sstream>

#include "esurf/features.hpp"
#include "esurf/rng.hpp"
#include "esurf/segmenter.hpp"
#include "esurf/synthetic.hpp"

using namespace esurf;

namespace {

Sentence make_sentence(const std::vector<std::string>& toks) {
  Sentence s;
  for (std::size_t i = 0; i < toks.size(); ++i)
    s.tokens.push_back(Token{toks[i], static_cast<std::uint32_t>(i)});
  return s;
}

// Hand-built model firing iff `cue` is in the leading region and "," is not.
// In text where every cue follows a comma this fires exactly when the cue is
// the first leading token, which gives full control over firing gaps.
ForestModel cue_model(const std::string& cue) {
  std::vector<FeatureSpace::Entry> entries = {
      {FeatureKey{FeatureKind::Token, Region::Leading, ","}, 2},   // index 0
      {FeatureKey{FeatureKind::Token, Region::Leading, cue}, 2},   // index 1
  };
  FeatureSpace space(std::move(entries), 2, FilterBounds{1, 1.0});
  Tree tree;
  tree.nodes.push_back(Tree::Node{0, 1, 2, 0, 0});            // comma in leading?
  tree.nodes.push_back(Tree::Node{1, 3, 4, 0, 0});            // absent: cue in leading?
  tree.nodes.push_back(Tree::Node{Tree::kLeaf, 0, 0, 0, 1});  // comma -> negative
  tree.nodes.push_back(Tree::Node{Tree::kLeaf, 0, 0, 0, 1});  // no cue -> negative
  tree.nodes.push_back(Tree::Node{Tree::kLeaf, 0, 0, 1, 1});  // cue, no comma -> positive
  return ForestModel({tree}, ForestParams{}, std::move(space));
}

// The mock's firing rule, written out directly for cross-checking.
bool mock_fires(const std::vector<std::string>& toks, std::size_t gap,
                const std::string& cue) {
  bool has_cue = false, has_comma = false;
  for (std::size_t k = gap; k < std::min(gap + 3, toks.size()); ++k) {
    has_cue |= toks[k] == cue;
    has_comma |= toks[k] == ",";
  }
  return has_cue && !has_comma;
}

}  // namespace

TEST_CASE("decode_spans splits at positive gaps") {
  using Spans = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  CHECK(decode_spans(6, {2}) == Spans{{0, 2}, {2, 6}});
  CHECK(decode_spans(5, {}) == Spans{{0, 5}});
  CHECK(decode_spans(3, {1, 2}) == Spans{{0, 1}, {1, 2}, {2, 3}});
  CHECK(decode_spans(0, {}).empty());
}

TEST_CASE("decode_spans partitions for arbitrary gap sets") {
  Rng rng(99);
  for (int iter = 0; iter < 300; ++iter) {
    const std::uint32_t len = 1 + static_cast<std::uint32_t>(rng.next_below(30));
    std::vector<std::uint32_t> gaps;
    for (std::uint32_t g = 1; g < len; ++g) {
      if (rng.next_below(3) == 0) gaps.push_back(g);
    }
    const auto spans = decode_spans(len, gaps);
    REQUIRE(!spans.empty());
    CHECK(spans.front().first == 0);
    CHECK(spans.back().second == len);
    for (std::size_t i = 0; i < spans.size(); ++i) {
      CHECK(spans[i].first < spans[i].second);
      if (i > 0) CHECK(spans[i].first == spans[i - 1].second);
    }
    CHECK(spans.size() == gaps.size() + 1);
  }
}

TEST_CASE("segment_sentence splits where the classifier fires") {
  const ForestModel model = cue_model("because");

  // fires at gap 3 only: "because" opens the second clause after the comma
  const Sentence s = make_sentence({"He", "left", ",", "because", "it", "rained", "."});
  const auto seg = segment_sentence(s, model);
  using Spans = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  CHECK(seg.spans == Spans{{0, 3}, {3, 7}});
  CHECK(seg.gap_probs.size() == 6);
  for (const auto& [gap, p] : seg.gap_probs) {
    CHECK((gap == 3 ? p == 1.0 : p == 0.0));
  }

  // fires nowhere -> one span
  const auto whole = segment_sentence(make_sentence({"It", "rained", "."}), model);
  CHECK(whole.spans == Spans{{0, 3}});

  // fires at every gap -> all single-token EDUs
  const auto shatter =
      segment_sentence(make_sentence({"because", "because", "because"}), model);
  CHECK(shatter.spans == Spans{{0, 1}, {1, 2}, {2, 3}});

  // single-token sentence: no gaps, one EDU
  const auto solo = segment_sentence(make_sentence({"word"}), model);
  CHECK(solo.spans == Spans{{0, 1}});
  CHECK(solo.gap_probs.empty());
}

TEST_CASE("segment_document concatenates sentences in order") {
  const ForestModel model = cue_model("which");
  Document doc;
  doc.doc_id = "d";
  doc.sentences.push_back(make_sentence({"One", "sentence", "."}));
  doc.sentences.push_back(make_sentence({"a", "thing", ",", "which", "works", "."}));
  const Segmentation seg = segment_document(doc, model);
  REQUIRE(seg.edus.size() == 3);
  CHECK(seg.edus[0] == EduSpan{0, 0, 3});
  CHECK(seg.edus[1] == EduSpan{1, 0, 3});
  CHECK(seg.edus[2] == EduSpan{1, 3, 6});
  CHECK(seg.boundary_probs.size() == 2 + 5);
  CHECK(seg.boundary_probs.at({1, 3}) == 1.0);
  CHECK(seg.boundary_probs.at({0, 1}) == 0.0);

  const Segmentation again = segment_document(doc, model);
  CHECK(again.edus == seg.edus);
  CHECK(again.boundary_probs == seg.boundary_probs);
}

TEST_CASE("number of EDUs is one plus the positive gaps per sentence") {
  const ForestModel model = cue_model("cue");
  Rng rng(123);
  const std::vector<std::string> vocab = {"a", "b", "cue", ","};
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<std::string> toks;
    const std::size_t len = 1 + rng.next_below(12);
    for (std::size_t i = 0; i < len; ++i) toks.push_back(vocab[rng.next_below(vocab.size())]);
    const Sentence s = make_sentence(toks);
    std::size_t fired = 0;
    for (std::size_t g = 1; g < len; ++g) fired += mock_fires(toks, g, "cue") ? 1 : 0;
    CHECK(segment_sentence(s, model).spans.size() == fired + 1);
  }
}

TEST_CASE("pipe-marked rendering of a segmentation round-trips") {
  const ForestModel model = cue_model("because");
  Document doc;
  doc.doc_id = "roundtrip";
  doc.sentences.push_back(make_sentence({"He", "left", ",", "because", "it", "rained", "."}));
  doc.sentences.push_back(make_sentence({"Nothing", "here", "."}));
  const Segmentation seg = segment_document(doc, model);

  std::ostringstream out;
  render_pipe_marked(doc, seg, out);
  std::istringstream in(out.str());
  const auto reloaded = load_pipe_marked(in);
  REQUIRE(reloaded.size() == 1);
  CHECK(reloaded[0].sentences[0].gold_boundaries == std::set<std::uint32_t>{3});
  CHECK(reloaded[0].sentences[1].gold_boundaries.empty());
}

TEST_CASE("record stream lists every EDU with its opening probability") {
  const ForestModel model = cue_model("because");
  Document doc;
  doc.doc_id = "rec";
  doc.sentences.push_back(make_sentence({"He", "left", ",", "because", "it", "rained", "."}));
  const Segmentation seg = segment_document(doc, model);
  std::ostringstream out;
  render_records(doc, seg, out);

  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "rec\t0\t0\t3\tHe left ,\t1.000000");
  CHECK(rows[1] == "rec\t0\t3\t7\tbecause it rained .\t1.000000");
}

TEST_CASE("synthetic corpus follows its own boundary rule") {
  const auto docs = generate_synthetic_corpus(20, 9);
  CHECK(docs.size() == 20);
  std::size_t boundaries = 0;
  for (const Document& doc : docs) {
    CHECK(!doc.sentences.empty());
    for (const Sentence& s : doc.sentences) {
      CHECK(s.tokens.size() >= 2);
      for (std::uint32_t g : s.gold_boundaries) {
        REQUIRE(g >= 1);
        REQUIRE(g < s.tokens.size());
        // boundary before a cue, comma right before it
        const std::string& cue = s.tokens[g].text;
        CHECK((cue == "because" || cue == "which" || cue == "although"));
        CHECK(s.tokens[g - 1].text == ",");
        ++boundaries;
      }
      // conversely: every comma opens a boundary
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        if (s.tokens[i].text == ",")
          CHECK(s.gold_boundaries.count(static_cast<std::uint32_t>(i + 1)));
      }
    }
  }
  CHECK(boundaries > 20);

  // determinism + prefix control
  const auto again = generate_synthetic_corpus(20, 9);
  REQUIRE(again.size() == docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(again[i].doc_id == docs[i].doc_id);
    CHECK(again[i].sentences.size() == docs[i].sentences.size());
  }
  const auto other = generate_synthetic_corpus(3, 9, "held");
  CHECK(other[0].doc_id == "held-0000");
}
