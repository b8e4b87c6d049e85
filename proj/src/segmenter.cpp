#include "esurf/segmenter.hpp"

#include <cstdio>
#include <ostream>

#include "esurf/errors.hpp"

namespace esurf {

std::vector<std::pair<std::uint32_t, std::uint32_t>> decode_spans(
    std::uint32_t n_tokens, const std::vector<std::uint32_t>& positive_gaps) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> spans;
  if (n_tokens == 0) return spans;
  std::uint32_t start = 0;
  for (std::uint32_t gap : positive_gaps) {
    if (gap <= start || gap >= n_tokens) continue;  // out-of-range gaps are ignored
    spans.emplace_back(start, gap);
    start = gap;
  }
  spans.emplace_back(start, n_tokens);
  return spans;
}

SentenceSegmentation segment_sentence(const Sentence& sentence, const ForestModel& model) {
  SentenceSegmentation result;
  const auto len = static_cast<std::uint32_t>(sentence.tokens.size());
  if (len == 0) return result;

  std::vector<std::uint32_t> positive;
  for (const CandidateWindow& w : extract_windows(sentence, "", 0, /*labeled=*/false)) {
    const double p = model.predict_proba(vectorize(w, model.space()));
    result.gap_probs.emplace_back(w.gap, p);
    if (p > model.params().decision_threshold) positive.push_back(w.gap);
  }
  result.spans = decode_spans(len, positive);
  return result;
}

Segmentation segment_document(const Document& doc, const ForestModel& model) {
  Segmentation seg;
  seg.doc_id = doc.doc_id;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const auto sentence_index = static_cast<std::uint32_t>(i);
    SentenceSegmentation s = segment_sentence(doc.sentences[i], model);
    for (const auto& [start, end] : s.spans)
      seg.edus.push_back(EduSpan{sentence_index, start, end});
    for (const auto& [gap, p] : s.gap_probs) seg.boundary_probs[{sentence_index, gap}] = p;
  }
  return seg;
}

namespace {

// Predicted boundary gaps per sentence, read back off the spans.
std::vector<std::set<std::uint32_t>> boundaries_by_sentence(const Document& doc,
                                                            const Segmentation& seg) {
  std::vector<std::set<std::uint32_t>> out(doc.sentences.size());
  for (const EduSpan& e : seg.edus) {
    if (e.sentence_index >= out.size())
      throw EvalError("segmentation of '" + seg.doc_id + "' refers to sentence " +
                      std::to_string(e.sentence_index) + " beyond the document");
    if (e.start > 0) out[e.sentence_index].insert(e.start);
  }
  return out;
}

}  // namespace

void render_pipe_marked(const Document& doc, const Segmentation& seg, std::ostream& out) {
  const auto boundaries = boundaries_by_sentence(doc, seg);
  out << "#doc " << doc.doc_id << "\n";
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const Sentence& sentence = doc.sentences[s];
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      if (i > 0) out << (boundaries[s].count(static_cast<std::uint32_t>(i)) ? " | " : " ");
      out << sentence.tokens[i].text;
    }
    out << "\n";
  }
}

void render_pipe_marked(const std::vector<Document>& docs,
                        const std::vector<Segmentation>& segs, std::ostream& out) {
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (i > 0) out << "\n";
    render_pipe_marked(docs[i], segs[i], out);
  }
}

void render_records(const Document& doc, const Segmentation& seg, std::ostream& out) {
  char prob[32];
  for (const EduSpan& e : seg.edus) {
    const Sentence& sentence = doc.sentences.at(e.sentence_index);
    double opening = 1.0;  // sentence starts are boundaries by construction
    if (e.start > 0) opening = seg.boundary_probs.at({e.sentence_index, e.start});
    std::snprintf(prob, sizeof(prob), "%.6f", opening);
    out << doc.doc_id << '\t' << e.sentence_index << '\t' << e.start << '\t' << e.end << '\t';
    for (std::uint32_t t = e.start; t < e.end; ++t) {
      if (t > e.start) out << ' ';
      out << sentence.tokens[t].text;
    }
    out << '\t' << prob << "\n";
  }
}

void render_records(const std::vector<Document>& docs,
                    const std::vector<Segmentation>& segs, std::ostream& out) {
  for (std::size_t i = 0; i < docs.size(); ++i) render_records(docs[i], segs[i], out);
}

}  // namespace esurf
