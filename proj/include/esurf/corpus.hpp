#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace esurf {

struct Token {
  std::string text;         // non-empty, contains no whitespace
  std::uint32_t index = 0;  // 0-based position within its sentence
};

/// One sentence with its gold EDU boundaries. A boundary at gap g sits
/// immediately before tokens[g], so valid gaps are 1..len-1; sentence starts
/// are EDU starts by construction and are never stored as gaps.
struct Sentence {
  std::vector<Token> tokens;
  std::set<std::uint32_t> gold_boundaries;
};

struct Document {
  std::string doc_id;
  std::vector<Sentence> sentences;  // never empty for loaded documents
};

/// One candidate boundary with its truncated context regions. Regions never
/// cross sentence edges, so `before` and `continuing` may be short or empty;
/// `leading` always holds at least the token right after the gap.
struct CandidateWindow {
  std::string doc_id;
  std::uint32_t sentence_index = 0;
  std::uint32_t gap = 0;  // candidate boundary precedes tokens[gap]
  std::vector<std::string> before;      // tokens[gap-3 .. gap-1]
  std::vector<std::string> leading;     // tokens[gap .. gap+2]
  std::vector<std::string> continuing;  // tokens[gap+3 .. gap+5]
  std::optional<bool> label;            // absent for inference windows
};

enum class CorpusFormat { PipeMarked, EduLines };

/// Whitespace tokenization plus splitting of leading/trailing punctuation
/// (.,;:!?"'()[] and the em dash) into their own tokens. Interior
/// punctuation -- hyphens, apostrophes in contractions -- stays attached.
/// Empty or whitespace-only input yields an empty list.
std::vector<Token> tokenize(std::string_view raw_sentence);

/// Pipe-marked gold corpus: "#doc <id>" headers, one sentence per line,
/// " | " between EDUs, blank line between documents.
std::vector<Document> load_pipe_marked(std::istream& in);

/// Plain (unlabeled) corpus: same block structure without boundary markers.
std::vector<Document> load_plain(std::istream& in);

/// edu-lines gold corpus: one EDU per line aligned against a parallel
/// sentence file by greedy longest-prefix token matching. Misalignment is a
/// hard error. See docs/data-formats.md.
std::vector<Document> load_edu_lines(std::istream& edus, std::istream& sentences);

std::vector<Document> load_gold_corpus(const std::string& path, CorpusFormat format,
                                       const std::string& sentences_path = {});
std::vector<Document> load_plain_corpus(const std::string& path);

/// Writes documents in pipe-marked format using their gold boundaries.
void write_pipe_marked(const std::vector<Document>& docs, std::ostream& out);

/// One window per gap in [1, len-1]; a sentence with fewer than two tokens
/// yields none. When `labeled`, each window's label is taken from
/// gold_boundaries.
std::vector<CandidateWindow> extract_windows(const Sentence& sentence,
                                             const std::string& doc_id,
                                             std::uint32_t sentence_index,
                                             bool labeled);

/// All windows of a corpus, ordered by (doc_id, sentence_index, gap) so the
/// result does not depend on input document order.
std::vector<CandidateWindow> extract_all_windows(const std::vector<Document>& docs,
                                                 bool labeled);

/// Keeps the whole minority class plus an equal-size seeded sample (without
/// replacement) of the majority class, then shuffles deterministically.
/// Throws DataError when only one class is present.
std::vector<CandidateWindow> balanced_sample(const std::vector<CandidateWindow>& windows,
                                             std::uint64_t seed);

}  // namespace esurf
