#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esurf/corpus.hpp"

namespace esurf {

enum class Region : std::uint8_t { Before = 0, Leading = 1, Continuing = 2 };
enum class FeatureKind : std::uint8_t { Token = 0, CharSub = 1 };

char region_letter(Region r);

/// (kind, region, value) identifies a feature. Member order matches the
/// deterministic index assignment: lexicographic over (kind, region, value).
struct FeatureKey {
  FeatureKind kind = FeatureKind::Token;
  Region region = Region::Before;
  std::string value;

  auto operator<=>(const FeatureKey&) const = default;
};

struct FilterBounds {
  std::uint32_t min_docs = 2;
  double max_doc_fraction = 0.5;
};

/// Binary feature vector: sorted distinct indices of the features present.
struct SparseVector {
  std::vector<std::uint32_t> indices;

  bool contains(std::uint32_t feature) const;
  bool operator==(const SparseVector&) const = default;
};

/// Frozen feature vocabulary. Indices are contiguous, assigned in key order,
/// and stable across serialization.
class FeatureSpace {
 public:
  struct Entry {
    FeatureKey key;
    std::uint32_t doc_freq = 0;
  };

  FeatureSpace() = default;
  /// `entries` must already be sorted by key; throws DataError otherwise.
  FeatureSpace(std::vector<Entry> entries, std::uint32_t n_train_docs, FilterBounds bounds);

  std::uint32_t size() const { return static_cast<std::uint32_t>(entries_.size()); }
  std::optional<std::uint32_t> index_of(const FeatureKey& key) const;
  const Entry& entry(std::uint32_t index) const { return entries_[index]; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::uint32_t n_train_docs() const { return n_train_docs_; }
  const FilterBounds& bounds() const { return bounds_; }

 private:
  std::vector<Entry> entries_;
  std::uint32_t n_train_docs_ = 0;
  FilterBounds bounds_;
};

/// All contiguous character runs of length 2..4 of the lowercased token and
/// of its boundary-wrapped form "^token$" (prefixes and suffixes stay
/// distinguishable). Lengths count codepoints, not bytes. Returned sorted
/// and deduplicated.
std::vector<std::string> char_subsequences(std::string_view token_text);

/// The deduplicated feature keys a window exhibits: one token key per
/// (region, token) plus its region-marked character subsequences.
std::vector<FeatureKey> window_keys(const CandidateWindow& window);

/// Builds the frozen space from training windows. A key's document frequency
/// counts training documents with at least one window exhibiting it. Token
/// keys survive when doc_freq >= min_docs; char-sub keys additionally need
/// doc_freq <= max_doc_fraction * n_train_docs.
FeatureSpace build_feature_space(const std::vector<Document>& train_docs,
                                 const std::vector<CandidateWindow>& windows,
                                 FilterBounds bounds);

/// Looks up every key of the window; unknown keys are silently dropped.
SparseVector vectorize(const CandidateWindow& window, const FeatureSpace& space);

}  // namespace esurf
