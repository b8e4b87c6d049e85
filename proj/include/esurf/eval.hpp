#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "esurf/corpus.hpp"
#include "esurf/segmenter.hpp"

namespace esurf {

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::uint64_t n_docs = 0;
  std::uint64_t n_boundaries_gold = 0;
  std::uint64_t n_boundaries_pred = 0;
};

/// Derives accuracy/precision/recall/f1 from confusion counts, with the
/// 0-denominator-gives-0 convention.
MetricsReport metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                                  std::uint64_t tn);

/// Confusion metrics over (predicted, gold) pairs; positive = boundary.
/// Throws DataError on an empty list.
MetricsReport classification_metrics(std::span<const std::pair<bool, bool>> predictions);

/// Boundary-level metrics micro-averaged over every intra-sentence gap of
/// the corpus. Sentence-initial boundaries are excluded unless
/// count_sentence_initial is set (they are correct by construction). Throws
/// EvalError on doc_id or sentence mismatches, naming the document.
MetricsReport boundary_metrics(const std::vector<Segmentation>& pred,
                               const std::vector<Document>& gold,
                               bool count_sentence_initial = false);

/// Per-document confusion breakdown; summing the counts reproduces
/// boundary_metrics exactly.
std::vector<std::pair<std::string, MetricsReport>> boundary_metrics_per_doc(
    const std::vector<Segmentation>& pred, const std::vector<Document>& gold,
    bool count_sentence_initial = false);

/// Human-readable table followed by a machine-readable key=value block.
void print_report(const MetricsReport& report, std::ostream& out);

}  // namespace esurf
