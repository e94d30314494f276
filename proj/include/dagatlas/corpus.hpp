#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dagatlas {

// An event descriptor. Labels are opaque text; equality is exact and
// case-sensitive. Valid labels are nonempty and not whitespace-only.
using EventLabel = std::string;

// One chronological step of a comic book: the events that happen
// simultaneously. Canonical form keeps labels lexicographically sorted so
// every downstream emitter is deterministic.
struct Frame {
  std::vector<EventLabel> events;

  bool operator==(const Frame&) const = default;
};

// A comic book: an id plus chronologically ordered frames. Valid CBs have
// at least one frame, no empty frames, and no event occurring twice
// anywhere in the book.
struct ComicBook {
  std::string id;
  std::vector<Frame> frames;

  bool operator==(const ComicBook&) const = default;
};

// An ordered set of comic books. Arrival order is semantic: it drives the
// greedy library-building step downstream.
struct Corpus {
  std::vector<ComicBook> cbs;

  std::size_t cb_count() const { return cbs.size(); }
  // Number of distinct event labels across all CBs.
  std::size_t event_vocabulary_size() const;

  bool operator==(const Corpus&) const = default;
};

enum class CorpusFormat {
  cb_jsonl,  // {"id": ..., "frames": [["A","B"],["C"]]} per line
  ttt_list,  // ["X1","O2",...] per line, one single-event frame per move
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

// Raised for any malformed or invariant-violating input record.
// `line` is 1-based.
struct ParseError : std::runtime_error {
  ParseError(std::size_t line, const std::string& message);

  std::size_t line;
};

// Builds a CB with each frame sorted into canonical (lexicographic) order.
// Does not validate; pair with validate_cb.
ComicBook make_cb(std::string id, std::vector<std::vector<EventLabel>> frames);

// Checks all ComicBook invariants. Violations name the frame index and the
// label involved.
ValidationReport validate_cb(const ComicBook& cb);

// Union of all frames, lexicographically sorted.
std::vector<EventLabel> event_set(const ComicBook& cb);

// 0-based frame holding `e`; throws std::out_of_range if absent.
int frame_index(const ComicBook& cb, const EventLabel& e);

// label -> 0-based frame index, for hot paths that probe many events.
using FrameIndexMap = std::unordered_map<EventLabel, int>;
FrameIndexMap frame_index_map(const ComicBook& cb);

// Parses one CB per line, skipping blank lines. Records keep arrival order.
// Ids default to the record's 0-based ordinal when the input lacks them.
// Throws ParseError on malformed lines, invariant violations, or duplicate
// CB ids.
Corpus parse_corpus(std::istream& input, CorpusFormat format);
Corpus parse_corpus(const std::string& text, CorpusFormat format);
Corpus parse_corpus_file(const std::filesystem::path& path, CorpusFormat format);

// Emits cb-jsonl, one record per line, frames in canonical label order.
void serialize_corpus(const Corpus& corpus, std::ostream& out);
std::string serialize_corpus(const Corpus& corpus);

// Emits ttt-list. Every frame must hold exactly one event and labels must
// not contain quotes or backslashes; throws std::invalid_argument otherwise.
void serialize_ttt_list(const Corpus& corpus, std::ostream& out);

}  // namespace dagatlas
