#include "esurf/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "esurf/errors.hpp"
#include "esurf/rng.hpp"

namespace esurf {

namespace {

constexpr std::string_view kEmDash = "\xe2\x80\x94";

bool is_ascii_mark(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '"': case '\'': case '(': case ')': case '[': case ']':
      return true;
    default:
      return false;
  }
}

// Length of the punctuation mark at the front of s, 0 if none.
std::size_t mark_prefix_len(std::string_view s) {
  if (s.empty()) return 0;
  if (is_ascii_mark(s.front())) return 1;
  if (s.substr(0, kEmDash.size()) == kEmDash) return kEmDash.size();
  return 0;
}

std::size_t mark_suffix_len(std::string_view s) {
  if (s.empty()) return 0;
  if (is_ascii_mark(s.back())) return 1;
  if (s.size() >= kEmDash.size() && s.substr(s.size() - kEmDash.size()) == kEmDash)
    return kEmDash.size();
  return 0;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), is_space);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

void emit_chunk(std::string_view chunk, std::vector<std::string>& out) {
  // Peel punctuation off the front, then off the back; the middle (if any)
  // stays intact, which keeps contractions and hyphenated words whole.
  while (std::size_t n = mark_prefix_len(chunk)) {
    out.emplace_back(chunk.substr(0, n));
    chunk.remove_prefix(n);
  }
  std::vector<std::string> tail;
  while (std::size_t n = mark_suffix_len(chunk)) {
    tail.emplace_back(chunk.substr(chunk.size() - n));
    chunk.remove_suffix(n);
  }
  if (!chunk.empty()) out.emplace_back(chunk);
  out.insert(out.end(), tail.rbegin(), tail.rend());
}

// Reads "#doc <id>" block structure shared by every corpus text format.
// on_line is called for each non-blank, non-header line of the open block.
void parse_blocks(std::istream& in, const std::string& what,
                  const std::function<void(const std::string& doc_id, std::size_t line_no,
                                           std::string_view line)>& on_line,
                  const std::function<void(const std::string& doc_id, std::size_t line_no)>&
                      on_doc_start,
                  const std::function<void(const std::string& doc_id)>& on_doc_end) {
  std::string line;
  std::string doc_id;
  bool in_doc = false;
  bool doc_has_line = false;
  std::size_t line_no = 0;
  std::size_t doc_start_line = 0;

  auto close_doc = [&] {
    if (!in_doc) return;
    if (!doc_has_line)
      throw CorpusError(what + ": document '" + doc_id + "' (line " +
                        std::to_string(doc_start_line) + ") has no sentences");
    on_doc_end(doc_id);
    in_doc = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) {
      close_doc();
      continue;
    }
    if (!in_doc) {
      if (!line.starts_with("#doc")) {
        throw CorpusError(what + ": line " + std::to_string(line_no) +
                          ": expected '#doc <id>' header, got: " + line);
      }
      std::string id(trim(std::string_view(line).substr(4)));
      if (id.empty())
        throw CorpusError(what + ": line " + std::to_string(line_no) + ": missing document id");
      doc_id = std::move(id);
      in_doc = true;
      doc_has_line = false;
      doc_start_line = line_no;
      on_doc_start(doc_id, line_no);
      continue;
    }
    if (line.starts_with("#doc")) {
      throw CorpusError(what + ": line " + std::to_string(line_no) +
                        ": document header inside block '" + doc_id +
                        "' (documents must be separated by a blank line)");
    }
    doc_has_line = true;
    on_line(doc_id, line_no, line);
  }
  close_doc();
}

std::vector<Token> to_tokens(const std::vector<std::string>& texts) {
  std::vector<Token> tokens;
  tokens.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    tokens.push_back(Token{texts[i], static_cast<std::uint32_t>(i)});
  }
  return tokens;
}

struct CorpusBuilder {
  std::vector<Document> docs;
  std::map<std::string, std::size_t> seen;  // doc_id -> first header line

  void start(const std::string& id, std::size_t line_no, const std::string& what) {
    auto [it, inserted] = seen.emplace(id, line_no);
    if (!inserted) {
      throw CorpusError(what + ": line " + std::to_string(line_no) + ": duplicate doc_id '" +
                        id + "' (first seen at line " + std::to_string(it->second) + ")");
    }
    docs.push_back(Document{id, {}});
  }
};

}  // namespace

std::vector<Token> tokenize(std::string_view raw_sentence) {
  std::vector<std::string> texts;
  std::size_t i = 0;
  while (i < raw_sentence.size()) {
    while (i < raw_sentence.size() && is_space(raw_sentence[i])) ++i;
    std::size_t start = i;
    while (i < raw_sentence.size() && !is_space(raw_sentence[i])) ++i;
    if (i > start) emit_chunk(raw_sentence.substr(start, i - start), texts);
  }
  return to_tokens(texts);
}

std::vector<Document> load_pipe_marked(std::istream& in) {
  CorpusBuilder builder;
  const std::string what = "pipe-marked corpus";

  parse_blocks(
      in, what,
      [&](const std::string& doc_id, std::size_t line_no, std::string_view line) {
        auto fail = [&](const std::string& msg) {
          throw CorpusError(what + ": doc '" + doc_id + "', line " + std::to_string(line_no) +
                            ": " + msg);
        };
        constexpr std::string_view kMarker = " | ";
        std::string_view rest = line;
        if (trim(rest) == "|" || trim(rest).starts_with("| ") || trim(rest).ends_with(" |"))
          fail("boundary marker adjacent to nothing");

        Sentence sentence;
        std::vector<std::string> texts;
        for (;;) {
          std::size_t pos = rest.find(kMarker);
          std::string_view chunk = (pos == std::string_view::npos) ? rest : rest.substr(0, pos);
          std::vector<Token> chunk_tokens = tokenize(chunk);
          if (chunk_tokens.empty()) fail("boundary marker adjacent to nothing");
          if (!texts.empty())
            sentence.gold_boundaries.insert(static_cast<std::uint32_t>(texts.size()));
          for (auto& t : chunk_tokens) texts.push_back(std::move(t.text));
          if (pos == std::string_view::npos) break;
          rest.remove_prefix(pos + kMarker.size());
        }
        sentence.tokens = to_tokens(texts);
        builder.docs.back().sentences.push_back(std::move(sentence));
      },
      [&](const std::string& id, std::size_t line_no) { builder.start(id, line_no, what); },
      [](const std::string&) {});
  return std::move(builder.docs);
}

std::vector<Document> load_plain(std::istream& in) {
  CorpusBuilder builder;
  const std::string what = "plain corpus";
  parse_blocks(
      in, what,
      [&](const std::string&, std::size_t, std::string_view line) {
        builder.docs.back().sentences.push_back(Sentence{tokenize(line), {}});
      },
      [&](const std::string& id, std::size_t line_no) { builder.start(id, line_no, what); },
      [](const std::string&) {});
  return std::move(builder.docs);
}

std::vector<Document> load_edu_lines(std::istream& edus, std::istream& sentences) {
  std::vector<Document> docs = load_plain(sentences);
  std::map<std::string, Document*> by_id;
  for (Document& d : docs) by_id[d.doc_id] = &d;

  struct EduLine {
    std::size_t line_no;
    std::vector<Token> tokens;
  };
  std::map<std::string, std::vector<EduLine>> edu_lines;
  std::vector<std::string> edu_doc_order;
  const std::string what = "edu-lines corpus";

  parse_blocks(
      edus, what,
      [&](const std::string& doc_id, std::size_t line_no, std::string_view line) {
        std::vector<Token> tokens = tokenize(line);
        if (tokens.empty())
          throw CorpusError(what + ": doc '" + doc_id + "', line " + std::to_string(line_no) +
                            ": empty EDU");
        edu_lines[doc_id].push_back(EduLine{line_no, std::move(tokens)});
      },
      [&](const std::string& id, std::size_t line_no) {
        if (!by_id.count(id))
          throw CorpusError(what + ": line " + std::to_string(line_no) + ": doc '" + id +
                            "' has no counterpart in the sentence file");
        if (!edu_lines.emplace(id, std::vector<EduLine>{}).second)
          throw CorpusError(what + ": line " + std::to_string(line_no) + ": duplicate doc_id '" +
                            id + "'");
        edu_doc_order.push_back(id);
      },
      [](const std::string&) {});

  for (const Document& d : docs) {
    if (!edu_lines.count(d.doc_id))
      throw CorpusError(what + ": doc '" + d.doc_id + "' present in the sentence file but not in "
                        "the EDU file");
  }

  // Greedy longest-prefix alignment: each EDU must match the next run of
  // sentence tokens exactly; a boundary is recorded wherever an EDU starts
  // mid-sentence.
  for (const std::string& doc_id : edu_doc_order) {
    Document& doc = *by_id.at(doc_id);
    const std::vector<EduLine>& lines = edu_lines.at(doc_id);
    std::size_t sent = 0;
    std::size_t offset = 0;
    for (const EduLine& edu : lines) {
      auto fail = [&](const std::string& msg) {
        throw CorpusError(what + ": doc '" + doc_id + "', EDU file line " +
                          std::to_string(edu.line_no) + ": " + msg);
      };
      if (sent >= doc.sentences.size()) fail("EDU after all sentence tokens were consumed");
      Sentence& s = doc.sentences[sent];
      if (offset + edu.tokens.size() > s.tokens.size())
        fail("EDU crosses a sentence boundary (sentence " + std::to_string(sent) + " has " +
             std::to_string(s.tokens.size()) + " tokens, EDU needs " +
             std::to_string(offset + edu.tokens.size()) + ")");
      for (std::size_t k = 0; k < edu.tokens.size(); ++k) {
        if (edu.tokens[k].text != s.tokens[offset + k].text)
          fail("alignment mismatch at sentence " + std::to_string(sent) + " token " +
               std::to_string(offset + k) + ": expected '" + s.tokens[offset + k].text +
               "', EDU has '" + edu.tokens[k].text + "'");
      }
      if (offset > 0) s.gold_boundaries.insert(static_cast<std::uint32_t>(offset));
      offset += edu.tokens.size();
      if (offset == s.tokens.size()) {
        ++sent;
        offset = 0;
      }
    }
    if (sent != doc.sentences.size() || offset != 0) {
      throw CorpusError(what + ": doc '" + doc_id + "': EDUs ended mid-document (sentence " +
                        std::to_string(sent) + ", token " + std::to_string(offset) + ")");
    }
  }
  return docs;
}

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open input file: " + path);
  return in;
}

}  // namespace

std::vector<Document> load_gold_corpus(const std::string& path, CorpusFormat format,
                                       const std::string& sentences_path) {
  std::ifstream in = open_or_throw(path);
  if (format == CorpusFormat::PipeMarked) return load_pipe_marked(in);
  if (sentences_path.empty())
    throw CorpusError("edu-lines format needs a sentence file (--sentences)");
  std::ifstream sents = open_or_throw(sentences_path);
  return load_edu_lines(in, sents);
}

std::vector<Document> load_plain_corpus(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  return load_plain(in);
}

void write_pipe_marked(const std::vector<Document>& docs, std::ostream& out) {
  bool first = true;
  for (const Document& doc : docs) {
    if (!first) out << "\n";
    first = false;
    out << "#doc " << doc.doc_id << "\n";
    for (const Sentence& s : doc.sentences) {
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        if (i > 0) {
          out << (s.gold_boundaries.count(static_cast<std::uint32_t>(i)) ? " | " : " ");
        }
        out << s.tokens[i].text;
      }
      out << "\n";
    }
  }
}

std::vector<CandidateWindow> extract_windows(const Sentence& sentence,
                                             const std::string& doc_id,
                                             std::uint32_t sentence_index, bool labeled) {
  std::vector<CandidateWindow> windows;
  const std::size_t len = sentence.tokens.size();
  if (len < 2) return windows;
  windows.reserve(len - 1);
  auto slice = [&](std::size_t from, std::size_t to) {  // clamped [from, to)
    std::vector<std::string> out;
    from = std::min(from, len);
    to = std::min(to, len);
    for (std::size_t k = from; k < to; ++k) out.push_back(sentence.tokens[k].text);
    return out;
  };
  for (std::size_t gap = 1; gap < len; ++gap) {
    CandidateWindow w;
    w.doc_id = doc_id;
    w.sentence_index = sentence_index;
    w.gap = static_cast<std::uint32_t>(gap);
    w.before = slice(gap >= 3 ? gap - 3 : 0, gap);
    w.leading = slice(gap, gap + 3);
    w.continuing = slice(gap + 3, gap + 6);
    if (labeled) w.label = sentence.gold_boundaries.count(w.gap) > 0;
    windows.push_back(std::move(w));
  }
  return windows;
}

std::vector<CandidateWindow> extract_all_windows(const std::vector<Document>& docs,
                                                 bool labeled) {
  std::vector<const Document*> ordered;
  ordered.reserve(docs.size());
  for (const Document& d : docs) ordered.push_back(&d);
  std::sort(ordered.begin(), ordered.end(),
            [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });

  std::vector<CandidateWindow> windows;
  for (const Document* doc : ordered) {
    for (std::size_t i = 0; i < doc->sentences.size(); ++i) {
      auto ws = extract_windows(doc->sentences[i], doc->doc_id,
                                static_cast<std::uint32_t>(i), labeled);
      windows.insert(windows.end(), std::make_move_iterator(ws.begin()),
                     std::make_move_iterator(ws.end()));
    }
  }
  return windows;
}

std::vector<CandidateWindow> balanced_sample(const std::vector<CandidateWindow>& windows,
                                             std::uint64_t seed) {
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!windows[i].label.has_value())
      throw DataError("balanced_sample requires labeled windows");
    (*windows[i].label ? positives : negatives).push_back(i);
  }
  if (positives.empty() || negatives.empty())
    throw DataError("cannot balance single-class data");

  std::vector<std::size_t>& minority = positives.size() <= negatives.size() ? positives
                                                                            : negatives;
  std::vector<std::size_t>& majority = positives.size() <= negatives.size() ? negatives
                                                                            : positives;
  Rng rng(seed);
  // Partial Fisher-Yates: the first |minority| entries become a uniform
  // sample without replacement.
  for (std::size_t i = 0; i < minority.size(); ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.next_below(majority.size() - i));
    std::swap(majority[i], majority[j]);
  }
  std::vector<std::size_t> chosen(minority.begin(), minority.end());
  chosen.insert(chosen.end(), majority.begin(), majority.begin() + minority.size());
  rng.shuffle(chosen);

  std::vector<CandidateWindow> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(windows[i]);
  return out;
}

}  // namespace esurf
