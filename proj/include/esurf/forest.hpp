#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "esurf/features.hpp"
#include "esurf/rng.hpp"

namespace esurf {

struct ForestParams {
  std::uint32_t n_trees = 100;
  std::uint32_t max_depth = 32;
  std::uint32_t min_leaf = 1;
  std::uint32_t features_per_split = 0;  // 0 = auto: round(sqrt(D)), resolved at training time
  std::uint64_t seed = 42;
  double decision_threshold = 0.5;
};

/// Binary decision tree over presence features, stored as a preorder arena.
/// Internal nodes route right when the tested feature is present.
struct Tree {
  static constexpr std::uint32_t kLeaf = 0xffffffffu;

  struct Node {
    std::uint32_t feature = kLeaf;  // kLeaf marks a leaf
    std::uint32_t left = 0;         // child when feature absent
    std::uint32_t right = 0;        // child when feature present
    std::uint32_t positive = 0;     // leaf class counts
    std::uint32_t total = 0;

    bool is_leaf() const { return feature == kLeaf; }
    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;  // nodes[0] is the root

  /// Fraction of positives at the leaf the vector routes to.
  double leaf_estimate(const SparseVector& vec) const;

  bool operator==(const Tree&) const = default;
};

struct LabeledVector {
  SparseVector vec;
  bool label = false;
};

/// Gini impurity 2p(1-p) for a binary node; 0 when total is 0.
/// Throws DataError when positive > total.
double gini(std::uint64_t positive, std::uint64_t total);

struct Split {
  std::uint32_t feature = 0;
  double impurity_decrease = 0.0;
};

/// Best present/absent split among the candidates by weighted Gini decrease,
/// ties to the lowest feature index. Candidate comparison uses exact integer
/// arithmetic, so equal-decrease ties are real ties, not rounding accidents.
/// Returns nullopt when no candidate gives a strictly positive decrease with
/// both sides >= min_leaf.
std::optional<Split> best_split(std::span<const LabeledVector> samples,
                                std::span<const std::uint32_t> candidate_features,
                                std::uint32_t min_leaf = 1);

/// `count` distinct feature indices below n_features, drawn from rng,
/// returned sorted. count >= n_features selects every feature.
std::vector<std::uint32_t> sample_features(std::uint32_t count, std::uint32_t n_features,
                                           Rng& rng);

/// Size-n bootstrap resample: n index draws with replacement.
std::vector<std::uint32_t> bootstrap_indices(std::uint32_t n, Rng& rng);

/// CART growth: per node, draw features_per_split candidates without
/// replacement, split by best_split, stop on max_depth, purity, or no valid
/// split. Leaves record class counts.
Tree train_tree(std::span<const LabeledVector> samples, const ForestParams& params,
                std::uint32_t n_features, Rng& rng);

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::vector<Tree> trees, ForestParams params, FeatureSpace space);

  /// Mean of per-tree leaf estimates; exactly invariant to tree order.
  double predict_proba(const SparseVector& vec) const;

  /// predict_proba strictly above the decision threshold. A tie at the
  /// threshold resolves to non-boundary.
  bool classify(const SparseVector& vec) const;

  const std::vector<Tree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }
  const FeatureSpace& space() const { return space_; }

 private:
  std::vector<Tree> trees_;
  ForestParams params_;
  FeatureSpace space_;
};

/// Bags params.n_trees trees, tree t trained on a bootstrap resample drawn
/// from a stream seeded with params.seed + t. Trees may be trained in
/// parallel (ESURF_THREADS caps it); the result is schedule-independent.
/// Throws DataError when the samples contain a single class.
ForestModel train_forest(const std::vector<LabeledVector>& samples, ForestParams params,
                         FeatureSpace space);

/// Number of internal nodes testing each feature, summed over trees.
std::vector<std::pair<std::uint32_t, std::uint64_t>> split_counts(const ForestModel& model);

}  // namespace esurf
