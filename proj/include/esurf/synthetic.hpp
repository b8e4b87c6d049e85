#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "esurf/corpus.hpp"

namespace esurf {

/// Seeded gold corpus with a deterministic boundary rule: an EDU boundary
/// sits before every cue word ("because", "which", "although"), each cue is
/// preceded by a comma, and commas appear nowhere else. The rule is exactly
/// expressible with region-marked token features, so a trained forest can
/// recover it; stands in for licensed treebank data in tests.
std::vector<Document> generate_synthetic_corpus(std::size_t n_docs, std::uint64_t seed,
                                                std::string_view id_prefix = "synth");

}  // namespace esurf
