#include "esurf/synthetic.hpp"

#include <array>
#include <cstdio>

#include "esurf/rng.hpp"

namespace esurf {

namespace {

constexpr std::array<std::string_view, 3> kCues = {"because", "which", "although"};

// Filler vocabulary; no cues, commas, or periods in here, so the boundary
// rule stays exact.
constexpr std::array<std::string_view, 40> kFillers = {
    "the",    "a",      "old",    "new",     "small",  "large",  "house", "river",
    "team",   "report", "market", "garden",  "city",   "child",  "storm", "window",
    "doctor", "song",   "bridge", "teacher", "forest", "letter", "train", "summer",
    "stone",  "light",  "moved",  "stayed",  "opened", "closed", "found", "carried",
    "spoke",  "walked", "saw",    "made",    "kept",   "held",   "ran",   "gave"};

}  // namespace

std::vector<Document> generate_synthetic_corpus(std::size_t n_docs, std::uint64_t seed,
                                                std::string_view id_prefix) {
  Rng rng(seed);
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    char id[64];
    std::snprintf(id, sizeof(id), "%.*s-%04zu", static_cast<int>(id_prefix.size()),
                  id_prefix.data(), d);
    Document doc;
    doc.doc_id = id;

    const std::size_t n_sentences = 4 + rng.next_below(5);  // 4..8
    for (std::size_t s = 0; s < n_sentences; ++s) {
      std::vector<std::string> texts;
      Sentence sentence;
      auto fillers = [&](std::size_t lo, std::size_t hi) {
        const std::size_t n = lo + rng.next_below(hi - lo + 1);
        for (std::size_t i = 0; i < n; ++i)
          texts.emplace_back(kFillers[rng.next_below(kFillers.size())]);
      };
      fillers(3, 6);
      // 0..2 clauses per sentence, each opened by ", <cue>". Keeping >=3
      // fillers after a cue guarantees no comma lands within three tokens
      // before another cue, so the rule is separable at region granularity.
      const std::uint64_t roll = rng.next_below(4);
      const std::size_t n_clauses = roll == 0 ? 0 : (roll == 3 ? 2 : 1);
      for (std::size_t c = 0; c < n_clauses; ++c) {
        texts.emplace_back(",");
        sentence.gold_boundaries.insert(static_cast<std::uint32_t>(texts.size()));
        texts.emplace_back(kCues[rng.next_below(kCues.size())]);
        fillers(3, 6);
      }
      texts.emplace_back(".");
      sentence.tokens.reserve(texts.size());
      for (std::size_t i = 0; i < texts.size(); ++i)
        sentence.tokens.push_back(Token{std::move(texts[i]), static_cast<std::uint32_t>(i)});
      doc.sentences.push_back(std::move(sentence));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace esurf
