#pragma once

// Exhaustive CART reference used to cross-check train_tree. Written against
// the stated split rules only: dense feature matrix, every feature evaluated
// at every node, exact small-integer rational comparisons, ties to the
// lowest feature index. Deliberately shares no code with esurf::train_tree.

#include <cstdint>
#include <memory>
#include <vector>

#include "esurf/forest.hpp"

namespace cart_oracle {

struct Sample {
  std::vector<char> features;  // dense 0/1, size = n_features
  bool label = false;
};

struct Node {
  bool leaf = true;
  std::uint32_t feature = 0;
  std::unique_ptr<Node> absent;   // left
  std::unique_ptr<Node> present;  // right
  std::uint32_t positive = 0;
  std::uint32_t total = 0;
};

std::unique_ptr<Node> build_tree(const std::vector<Sample>& samples, std::uint32_t n_features,
                                 std::uint32_t max_depth, std::uint32_t min_leaf);

/// Structural equality against the library tree: same shape, same split
/// features, same leaf counts.
bool equals(const Node& oracle, const esurf::Tree& tree);

}  // namespace cart_oracle
