#include "esurf/features.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "esurf/errors.hpp"

namespace esurf {

namespace {

// UTF-8 decode into one string per codepoint, lowercasing ASCII letters.
// Invalid bytes pass through one at a time; keys are opaque either way.
std::vector<std::string> codepoints_lower(std::string_view text) {
  std::vector<std::string> cps;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char b = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    if (b >= 0xf0)
      len = 4;
    else if (b >= 0xe0)
      len = 3;
    else if (b >= 0xc0)
      len = 2;
    if (len > 1) {
      if (i + len > text.size()) len = 1;
      for (std::size_t k = 1; k < len; ++k) {
        if ((static_cast<unsigned char>(text[i + k]) & 0xc0) != 0x80) {
          len = 1;
          break;
        }
      }
    }
    std::string cp(text.substr(i, len));
    if (len == 1 && cp[0] >= 'A' && cp[0] <= 'Z') cp[0] += 'a' - 'A';
    cps.push_back(std::move(cp));
    i += len;
  }
  return cps;
}

}  // namespace

char region_letter(Region r) {
  switch (r) {
    case Region::Before: return 'B';
    case Region::Leading: return 'L';
    case Region::Continuing: return 'C';
  }
  return '?';
}

bool SparseVector::contains(std::uint32_t feature) const {
  return std::binary_search(indices.begin(), indices.end(), feature);
}

std::vector<std::string> char_subsequences(std::string_view token_text) {
  // Runs of the wrapped form "^token$" cover the plain runs too, since the
  // token sits contiguously inside it.
  std::vector<std::string> wrapped;
  wrapped.emplace_back("^");
  for (auto& cp : codepoints_lower(token_text)) wrapped.push_back(std::move(cp));
  wrapped.emplace_back("$");

  std::set<std::string> subs;
  for (std::size_t start = 0; start < wrapped.size(); ++start) {
    std::string run;
    for (std::size_t len = 1; len <= 4 && start + len <= wrapped.size(); ++len) {
      run += wrapped[start + len - 1];
      if (len >= 2) subs.insert(run);
    }
  }
  return {subs.begin(), subs.end()};
}

std::vector<FeatureKey> window_keys(const CandidateWindow& window) {
  std::vector<FeatureKey> keys;
  auto add_region = [&](Region region, const std::vector<std::string>& tokens) {
    for (const std::string& tok : tokens) {
      keys.push_back(FeatureKey{FeatureKind::Token, region, tok});
      for (std::string& sub : char_subsequences(tok))
        keys.push_back(FeatureKey{FeatureKind::CharSub, region, std::move(sub)});
    }
  };
  add_region(Region::Before, window.before);
  add_region(Region::Leading, window.leading);
  add_region(Region::Continuing, window.continuing);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

FeatureSpace::FeatureSpace(std::vector<Entry> entries, std::uint32_t n_train_docs,
                           FilterBounds bounds)
    : entries_(std::move(entries)), n_train_docs_(n_train_docs), bounds_(bounds) {
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (!(entries_[i - 1].key < entries_[i].key))
      throw DataError("feature space entries must be strictly sorted by key");
  }
}

std::optional<std::uint32_t> FeatureSpace::index_of(const FeatureKey& key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, const FeatureKey& k) { return e.key < k; });
  if (it == entries_.end() || it->key != key) return std::nullopt;
  return static_cast<std::uint32_t>(it - entries_.begin());
}

FeatureSpace build_feature_space(const std::vector<Document>& train_docs,
                                 const std::vector<CandidateWindow>& windows,
                                 FilterBounds bounds) {
  if (train_docs.empty()) throw DataError("empty training set");
  if (!(bounds.max_doc_fraction > 0.0) || bounds.max_doc_fraction > 1.0)
    throw DataError("max_doc_fraction must be in (0, 1]");

  std::set<std::string> known_docs;
  for (const Document& d : train_docs) known_docs.insert(d.doc_id);

  // Document frequency: count each key once per document. Windows are
  // bucketed by doc_id so the count is independent of window order.
  std::map<std::string, std::vector<const CandidateWindow*>> by_doc;
  for (const CandidateWindow& w : windows) {
    if (!known_docs.count(w.doc_id))
      throw DataError("window from unknown training document '" + w.doc_id + "'");
    by_doc[w.doc_id].push_back(&w);
  }

  std::map<FeatureKey, std::uint32_t> doc_freq;
  for (const auto& [doc_id, doc_windows] : by_doc) {
    std::set<FeatureKey> in_doc;
    for (const CandidateWindow* w : doc_windows) {
      for (FeatureKey& key : window_keys(*w)) in_doc.insert(std::move(key));
    }
    for (const FeatureKey& key : in_doc) ++doc_freq[key];
  }

  const std::uint32_t n_docs = static_cast<std::uint32_t>(train_docs.size());
  const double max_docs = bounds.max_doc_fraction * n_docs;
  std::vector<FeatureSpace::Entry> entries;
  for (const auto& [key, freq] : doc_freq) {
    if (freq < bounds.min_docs) continue;
    if (key.kind == FeatureKind::CharSub && static_cast<double>(freq) > max_docs) continue;
    entries.push_back(FeatureSpace::Entry{key, freq});
  }
  return FeatureSpace(std::move(entries), n_docs, bounds);
}

SparseVector vectorize(const CandidateWindow& window, const FeatureSpace& space) {
  SparseVector vec;
  for (const FeatureKey& key : window_keys(window)) {
    if (auto idx = space.index_of(key)) vec.indices.push_back(*idx);
  }
  std::sort(vec.indices.begin(), vec.indices.end());
  vec.indices.erase(std::unique(vec.indices.begin(), vec.indices.end()), vec.indices.end());
  return vec;
}

}  // namespace esurf
