#include "esurf/forest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "esurf/errors.hpp"
#include "esurf/parallel.hpp"

namespace esurf {

namespace {

using u128 = unsigned __int128;

// Child-impurity score of a candidate partition, kept as an exact fraction:
//   num / den = P_l(n_l - P_l)/n_l + P_r(n_r - P_r)/n_r, den = n_l * n_r.
// Minimizing it maximizes the weighted Gini decrease (the parent term is
// shared by every candidate), and integer comparison makes tie-breaking by
// feature index exact instead of rounding-dependent.
struct ChildScore {
  u128 num = 0;
  u128 den = 1;
};

ChildScore child_score(std::uint64_t n_left, std::uint64_t pos_left, std::uint64_t n_right,
                       std::uint64_t pos_right) {
  ChildScore s;
  s.num = u128(pos_left) * (n_left - pos_left) * n_right +
          u128(pos_right) * (n_right - pos_right) * n_left;
  s.den = u128(n_left) * n_right;
  return s;
}

bool strictly_less(const ChildScore& a, const ChildScore& b) {
  return a.num * b.den < b.num * a.den;
}

// decrease > 0  <=>  P(N-P)/N > num/den  <=>  P(N-P)*den > num*N
bool positive_decrease(std::uint64_t n, std::uint64_t pos, const ChildScore& s) {
  return u128(pos) * (n - pos) * s.den > s.num * n;
}

std::uint32_t resolve_features_per_split(std::uint32_t requested, std::uint32_t n_features) {
  if (requested != 0) return requested;
  if (n_features == 0) return 0;
  auto k = static_cast<std::uint32_t>(std::lround(std::sqrt(static_cast<double>(n_features))));
  return std::clamp<std::uint32_t>(k, 1, n_features);
}

struct NodeCounts {
  std::uint32_t total = 0;
  std::uint32_t positive = 0;
};

NodeCounts count_subset(std::span<const LabeledVector> samples,
                        std::span<const std::uint32_t> subset) {
  NodeCounts c;
  c.total = static_cast<std::uint32_t>(subset.size());
  for (std::uint32_t idx : subset) c.positive += samples[idx].label ? 1u : 0u;
  return c;
}

std::optional<Split> best_split_subset(std::span<const LabeledVector> samples,
                                       std::span<const std::uint32_t> subset,
                                       std::span<const std::uint32_t> candidates,
                                       std::uint32_t min_leaf) {
  const std::uint64_t n = subset.size();
  if (n == 0 || candidates.empty()) return std::nullopt;

  // Presence counts per candidate via merge over each sample's sorted
  // indices; the candidate list is sorted, so one pass per sample suffices.
  std::vector<std::uint32_t> present(candidates.size(), 0);
  std::vector<std::uint32_t> present_pos(candidates.size(), 0);
  std::uint64_t pos_total = 0;
  for (std::uint32_t idx : subset) {
    const LabeledVector& s = samples[idx];
    pos_total += s.label ? 1 : 0;
    const auto& ind = s.vec.indices;
    std::size_t a = 0, b = 0;
    while (a < ind.size() && b < candidates.size()) {
      if (ind[a] < candidates[b]) {
        ++a;
      } else if (ind[a] > candidates[b]) {
        ++b;
      } else {
        present[b] += 1;
        present_pos[b] += s.label ? 1 : 0;
        ++a;
        ++b;
      }
    }
  }

  std::optional<std::size_t> best;
  ChildScore best_score;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::uint64_t n_right = present[c];
    const std::uint64_t n_left = n - n_right;
    if (n_right < min_leaf || n_left < min_leaf) continue;
    const std::uint64_t pos_right = present_pos[c];
    const std::uint64_t pos_left = pos_total - pos_right;
    const ChildScore score = child_score(n_left, pos_left, n_right, pos_right);
    if (!positive_decrease(n, pos_total, score)) continue;
    if (!best || strictly_less(score, best_score)) {  // ascending scan: ties keep lowest index
      best = c;
      best_score = score;
    }
  }
  if (!best) return std::nullopt;

  const std::uint64_t n_right = present[*best];
  const std::uint64_t n_left = n - n_right;
  const std::uint64_t pos_right = present_pos[*best];
  const std::uint64_t pos_left = pos_total - pos_right;
  const double decrease =
      gini(pos_total, n) -
      (static_cast<double>(n_left) / static_cast<double>(n)) * gini(pos_left, n_left) -
      (static_cast<double>(n_right) / static_cast<double>(n)) * gini(pos_right, n_right);
  return Split{candidates[*best], decrease};
}

class TreeBuilder {
 public:
  TreeBuilder(std::span<const LabeledVector> samples, const ForestParams& params,
              std::uint32_t n_features, Rng& rng)
      : samples_(samples),
        params_(params),
        n_features_(n_features),
        k_(resolve_features_per_split(params.features_per_split, n_features)),
        rng_(rng) {}

  Tree build(std::vector<std::uint32_t> root_subset) {
    tree_.nodes.clear();
    grow(std::move(root_subset), 0);
    return std::move(tree_);
  }

 private:
  std::uint32_t grow(std::vector<std::uint32_t> subset, std::uint32_t depth) {
    const std::uint32_t id = static_cast<std::uint32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    const NodeCounts counts = count_subset(samples_, subset);

    std::optional<Split> split;
    if (depth < params_.max_depth && counts.positive != 0 && counts.positive != counts.total &&
        k_ > 0) {
      std::vector<std::uint32_t> candidates = sample_features(k_, n_features_, rng_);
      split = best_split_subset(samples_, subset, candidates,
                                std::max<std::uint32_t>(params_.min_leaf, 1));
    }
    if (!split) {
      tree_.nodes[id].positive = counts.positive;
      tree_.nodes[id].total = counts.total;
      return id;
    }

    std::vector<std::uint32_t> left, right;
    for (std::uint32_t idx : subset) {
      (samples_[idx].vec.contains(split->feature) ? right : left).push_back(idx);
    }
    subset.clear();
    subset.shrink_to_fit();

    tree_.nodes[id].feature = split->feature;
    const std::uint32_t left_id = grow(std::move(left), depth + 1);
    const std::uint32_t right_id = grow(std::move(right), depth + 1);
    tree_.nodes[id].left = left_id;
    tree_.nodes[id].right = right_id;
    return id;
  }

  std::span<const LabeledVector> samples_;
  const ForestParams& params_;
  std::uint32_t n_features_;
  std::uint32_t k_;
  Rng& rng_;
  Tree tree_;
};

void validate_params(const ForestParams& params, std::uint32_t n_features) {
  if (params.n_trees == 0) throw DataError("n_trees must be positive");
  if (params.max_depth == 0) throw DataError("max_depth must be positive");
  if (params.min_leaf == 0) throw DataError("min_leaf must be positive");
  if (params.features_per_split > n_features)
    throw DataError("features_per_split exceeds the feature space size");
  if (!(params.decision_threshold > 0.0 && params.decision_threshold < 1.0))
    throw DataError("decision_threshold must be inside (0, 1)");
}

}  // namespace

double gini(std::uint64_t positive, std::uint64_t total) {
  if (positive > total) throw DataError("gini: positive count exceeds total");
  if (total == 0) return 0.0;
  const double p = static_cast<double>(positive) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

std::optional<Split> best_split(std::span<const LabeledVector> samples,
                                std::span<const std::uint32_t> candidate_features,
                                std::uint32_t min_leaf) {
  if (samples.empty()) return std::nullopt;
  std::vector<std::uint32_t> subset(samples.size());
  for (std::uint32_t i = 0; i < subset.size(); ++i) subset[i] = i;
  std::vector<std::uint32_t> candidates(candidate_features.begin(), candidate_features.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  return best_split_subset(samples, subset, candidates, std::max<std::uint32_t>(min_leaf, 1));
}

std::vector<std::uint32_t> sample_features(std::uint32_t count, std::uint32_t n_features,
                                           Rng& rng) {
  std::vector<std::uint32_t> out;
  if (count >= n_features) {
    out.resize(n_features);
    for (std::uint32_t i = 0; i < n_features; ++i) out[i] = i;
    return out;
  }
  // Floyd's sampling: k distinct draws in O(k) without touching all D slots.
  std::unordered_set<std::uint32_t> chosen;
  out.reserve(count);
  for (std::uint32_t j = n_features - count; j < n_features; ++j) {
    const auto t = static_cast<std::uint32_t>(rng.next_below(j + 1));
    if (chosen.insert(t).second) {
      out.push_back(t);
    } else {
      chosen.insert(j);
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> bootstrap_indices(std::uint32_t n, Rng& rng) {
  std::vector<std::uint32_t> out(n);
  for (std::uint32_t i = 0; i < n; ++i)
    out[i] = static_cast<std::uint32_t>(rng.next_below(n));
  return out;
}

Tree train_tree(std::span<const LabeledVector> samples, const ForestParams& params,
                std::uint32_t n_features, Rng& rng) {
  if (samples.empty()) throw DataError("train_tree: no samples");
  validate_params(params, n_features);
  std::vector<std::uint32_t> subset(samples.size());
  for (std::uint32_t i = 0; i < subset.size(); ++i) subset[i] = i;
  return TreeBuilder(samples, params, n_features, rng).build(std::move(subset));
}

double Tree::leaf_estimate(const SparseVector& vec) const {
  std::uint32_t at = 0;
  while (!nodes[at].is_leaf()) {
    at = vec.contains(nodes[at].feature) ? nodes[at].right : nodes[at].left;
  }
  return static_cast<double>(nodes[at].positive) / static_cast<double>(nodes[at].total);
}

ForestModel::ForestModel(std::vector<Tree> trees, ForestParams params, FeatureSpace space)
    : trees_(std::move(trees)), params_(params), space_(std::move(space)) {
  if (trees_.empty()) throw DataError("a forest needs at least one tree");
}

double ForestModel::predict_proba(const SparseVector& vec) const {
  std::vector<double> estimates;
  estimates.reserve(trees_.size());
  for (const Tree& t : trees_) estimates.push_back(t.leaf_estimate(vec));
  // Summing in sorted order makes the mean exactly independent of tree order.
  std::sort(estimates.begin(), estimates.end());
  double sum = 0.0;
  for (double e : estimates) sum += e;
  return sum / static_cast<double>(estimates.size());
}

bool ForestModel::classify(const SparseVector& vec) const {
  return predict_proba(vec) > params_.decision_threshold;
}

ForestModel train_forest(const std::vector<LabeledVector>& samples, ForestParams params,
                         FeatureSpace space) {
  if (samples.empty()) throw DataError("train_forest: no samples");
  const std::uint32_t n_features = space.size();
  validate_params(params, n_features);

  std::size_t positives = 0;
  for (const LabeledVector& s : samples) positives += s.label ? 1 : 0;
  if (positives == 0 || positives == samples.size())
    throw DataError("cannot train on single-class data");

  params.features_per_split = resolve_features_per_split(params.features_per_split, n_features);

  const auto n = static_cast<std::uint32_t>(samples.size());
  std::vector<Tree> trees(params.n_trees);
  parallel_for(params.n_trees, [&](std::size_t t) {
    Rng rng(params.seed + t);
    std::vector<std::uint32_t> bag = bootstrap_indices(n, rng);
    trees[t] = TreeBuilder(samples, params, n_features, rng).build(std::move(bag));
  });
  return ForestModel(std::move(trees), params, std::move(space));
}

std::vector<std::pair<std::uint32_t, std::uint64_t>> split_counts(const ForestModel& model) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const Tree& tree : model.trees()) {
    for (const Tree::Node& node : tree.nodes) {
      if (!node.is_leaf()) ++counts[node.feature];
    }
  }
  return {counts.begin(), counts.end()};
}

}  // namespace esurf
