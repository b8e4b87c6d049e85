#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "esurf/corpus.hpp"
#include "esurf/forest.hpp"

namespace esurf {

/// Half-open token span [start, end) inside one sentence.
struct EduSpan {
  std::uint32_t sentence_index = 0;
  std::uint32_t start = 0;
  std::uint32_t end = 0;

  bool operator==(const EduSpan&) const = default;
};

/// Decoded segmentation of one document. Within each sentence the spans
/// partition [0, len) in order; boundary_probs holds the classifier
/// probability for every intra-sentence gap.
struct Segmentation {
  std::string doc_id;
  std::vector<EduSpan> edus;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> boundary_probs;
};

/// Splits [0, n_tokens) at the given sorted gaps. No gaps means one span.
std::vector<std::pair<std::uint32_t, std::uint32_t>> decode_spans(
    std::uint32_t n_tokens, const std::vector<std::uint32_t>& positive_gaps);

struct SentenceSegmentation {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> spans;
  std::vector<std::pair<std::uint32_t, double>> gap_probs;  // (gap, probability)
};

/// Classifies every candidate gap of the sentence and splits at the positive
/// ones; a sentence with no positive gap is a single EDU.
SentenceSegmentation segment_sentence(const Sentence& sentence, const ForestModel& model);

Segmentation segment_document(const Document& doc, const ForestModel& model);

/// Pipe-marked rendering of predicted boundaries; round-trips through
/// load_pipe_marked.
void render_pipe_marked(const Document& doc, const Segmentation& seg, std::ostream& out);
void render_pipe_marked(const std::vector<Document>& docs,
                        const std::vector<Segmentation>& segs, std::ostream& out);

/// Tab-separated record stream, one line per EDU:
/// doc_id, sentence_index, start, end, text, opening boundary probability
/// (1 for sentence-initial EDUs, which are boundaries by construction).
void render_records(const Document& doc, const Segmentation& seg, std::ostream& out);
void render_records(const std::vector<Document>& docs,
                    const std::vector<Segmentation>& segs, std::ostream& out);

}  // namespace esurf
