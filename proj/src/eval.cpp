#include "esurf/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>

#include "esurf/errors.hpp"

namespace esurf {

MetricsReport metrics_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn,
                                  std::uint64_t tn) {
  MetricsReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.tn = tn;
  const std::uint64_t all = tp + fp + fn + tn;
  r.accuracy = all == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(all);
  r.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = (r.precision + r.recall) == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  r.n_boundaries_gold = tp + fn;
  r.n_boundaries_pred = tp + fp;
  return r;
}

MetricsReport classification_metrics(std::span<const std::pair<bool, bool>> predictions) {
  if (predictions.empty()) throw DataError("classification_metrics: empty prediction list");
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (const auto& [predicted, gold] : predictions) {
    if (predicted && gold)
      ++tp;
    else if (predicted && !gold)
      ++fp;
    else if (!predicted && gold)
      ++fn;
    else
      ++tn;
  }
  return metrics_from_counts(tp, fp, fn, tn);
}

namespace {

struct Counts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

Counts doc_counts(const Segmentation& pred, const Document& gold, bool count_sentence_initial) {
  // Rebuild the predicted boundary set from the spans and sanity-check that
  // they actually partition the gold document's sentences.
  std::vector<std::set<std::uint32_t>> predicted(gold.sentences.size());
  std::vector<std::uint32_t> covered(gold.sentences.size(), 0);
  for (const EduSpan& e : pred.edus) {
    if (e.sentence_index >= gold.sentences.size())
      throw EvalError("doc '" + gold.doc_id + "': prediction refers to sentence " +
                      std::to_string(e.sentence_index) + ", gold has " +
                      std::to_string(gold.sentences.size()));
    if (e.start > 0) predicted[e.sentence_index].insert(e.start);
    covered[e.sentence_index] = std::max(covered[e.sentence_index], e.end);
  }
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    if (covered[s] != gold.sentences[s].tokens.size())
      throw EvalError("doc '" + gold.doc_id + "': sentence " + std::to_string(s) +
                      " length mismatch (prediction covers " + std::to_string(covered[s]) +
                      " tokens, gold has " + std::to_string(gold.sentences[s].tokens.size()) +
                      ")");
  }

  Counts c;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const Sentence& sentence = gold.sentences[s];
    const auto len = static_cast<std::uint32_t>(sentence.tokens.size());
    for (std::uint32_t gap = 1; gap < len; ++gap) {
      const bool p = predicted[s].count(gap) > 0;
      const bool g = sentence.gold_boundaries.count(gap) > 0;
      if (p && g)
        ++c.tp;
      else if (p)
        ++c.fp;
      else if (g)
        ++c.fn;
      else
        ++c.tn;
    }
    // Sentence starts are EDU starts on both sides by construction.
    if (count_sentence_initial) ++c.tp;
  }
  return c;
}

}  // namespace

std::vector<std::pair<std::string, MetricsReport>> boundary_metrics_per_doc(
    const std::vector<Segmentation>& pred, const std::vector<Document>& gold,
    bool count_sentence_initial) {
  std::map<std::string, const Document*> gold_by_id;
  for (const Document& d : gold) gold_by_id[d.doc_id] = &d;
  if (gold_by_id.size() != gold.size())
    throw EvalError("gold corpus contains duplicate doc_ids");

  std::set<std::string> seen;
  std::vector<std::pair<std::string, MetricsReport>> out;
  for (const Segmentation& seg : pred) {
    auto it = gold_by_id.find(seg.doc_id);
    if (it == gold_by_id.end())
      throw EvalError("predicted doc '" + seg.doc_id + "' missing from gold corpus");
    if (!seen.insert(seg.doc_id).second)
      throw EvalError("duplicate prediction for doc '" + seg.doc_id + "'");
    const Counts c = doc_counts(seg, *it->second, count_sentence_initial);
    MetricsReport r = metrics_from_counts(c.tp, c.fp, c.fn, c.tn);
    r.n_docs = 1;
    out.emplace_back(seg.doc_id, r);
  }
  for (const Document& d : gold) {
    if (!seen.count(d.doc_id))
      throw EvalError("gold doc '" + d.doc_id + "' has no prediction");
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

MetricsReport boundary_metrics(const std::vector<Segmentation>& pred,
                               const std::vector<Document>& gold,
                               bool count_sentence_initial) {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  const auto per_doc = boundary_metrics_per_doc(pred, gold, count_sentence_initial);
  for (const auto& [doc_id, r] : per_doc) {
    tp += r.tp;
    fp += r.fp;
    fn += r.fn;
    tn += r.tn;
  }
  MetricsReport total = metrics_from_counts(tp, fp, fn, tn);
  total.n_docs = per_doc.size();
  return total;
}

void print_report(const MetricsReport& report, std::ostream& out) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(6);
  out << "  metric      value\n";
  out << "  accuracy    " << report.accuracy << "\n";
  out << "  precision   " << report.precision << "\n";
  out << "  recall      " << report.recall << "\n";
  out << "  f1          " << report.f1 << "\n";
  out << "  counts      tp=" << report.tp << " fp=" << report.fp << " fn=" << report.fn
      << " tn=" << report.tn << "\n";
  out << "\n";
  out << "accuracy=" << report.accuracy << "\n";
  out << "precision=" << report.precision << "\n";
  out << "recall=" << report.recall << "\n";
  out << "f1=" << report.f1 << "\n";
  out << "tp=" << report.tp << "\n";
  out << "fp=" << report.fp << "\n";
  out << "fn=" << report.fn << "\n";
  out << "tn=" << report.tn << "\n";
  out << "n_docs=" << report.n_docs << "\n";
  out << "n_boundaries_gold=" << report.n_boundaries_gold << "\n";
  out << "n_boundaries_pred=" << report.n_boundaries_pred << "\n";
  out.flags(flags);
}

}  // namespace esurf
