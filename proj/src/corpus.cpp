#include "dagatlas/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace dagatlas {

namespace {

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string squote(const std::string& s) { return "'" + s + "'"; }

// ttt-list line: a bracketed, comma-separated list of quoted strings.
// Both quote styles are accepted; no escape sequences.
std::vector<std::string> parse_ttt_items(const std::string& line,
                                         std::size_t lineno) {
  std::vector<std::string> items;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
  };
  auto fail = [&](const std::string& what) -> void {
    throw ParseError(lineno, "malformed ttt-list line: " + what);
  };

  skip_ws();
  if (i >= line.size() || line[i] != '[') fail("expected '['");
  ++i;
  skip_ws();
  if (i < line.size() && line[i] == ']') {
    ++i;
  } else {
    while (true) {
      skip_ws();
      if (i >= line.size() || (line[i] != '\'' && line[i] != '"'))
        fail("expected quoted string");
      const char quote = line[i++];
      const std::size_t end = line.find(quote, i);
      if (end == std::string::npos) fail("unterminated string");
      items.push_back(line.substr(i, end - i));
      i = end + 1;
      skip_ws();
      if (i >= line.size()) fail("expected ',' or ']'");
      if (line[i] == ',') {
        ++i;
        continue;
      }
      if (line[i] == ']') {
        ++i;
        break;
      }
      fail("expected ',' or ']'");
    }
  }
  skip_ws();
  if (i != line.size()) fail("trailing characters after ']'");
  return items;
}

ComicBook parse_ttt_line(const std::string& line, std::size_t lineno,
                         std::string fallback_id) {
  std::vector<std::vector<EventLabel>> frames;
  for (auto& item : parse_ttt_items(line, lineno)) frames.push_back({item});
  return make_cb(std::move(fallback_id), std::move(frames));
}

ComicBook parse_jsonl_line(const std::string& line, std::size_t lineno,
                           std::string fallback_id) {
  const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object())
    throw ParseError(lineno, "malformed cb-jsonl line: not a JSON object");
  if (!j.contains("frames") || !j["frames"].is_array())
    throw ParseError(lineno, "malformed cb-jsonl line: missing \"frames\" array");

  std::string id = std::move(fallback_id);
  if (j.contains("id")) {
    if (!j["id"].is_string())
      throw ParseError(lineno, "malformed cb-jsonl line: \"id\" must be a string");
    id = j["id"].get<std::string>();
  }

  std::vector<std::vector<EventLabel>> frames;
  for (const auto& jframe : j["frames"]) {
    if (!jframe.is_array())
      throw ParseError(lineno, "malformed cb-jsonl line: frame is not an array");
    std::vector<EventLabel> events;
    for (const auto& jlabel : jframe) {
      if (!jlabel.is_string())
        throw ParseError(lineno, "malformed cb-jsonl line: label is not a string");
      events.push_back(jlabel.get<std::string>());
    }
    frames.push_back(std::move(events));
  }
  return make_cb(std::move(id), std::move(frames));
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line(line) {}

std::size_t Corpus::event_vocabulary_size() const {
  std::unordered_set<std::string> vocab;
  for (const auto& cb : cbs)
    for (const auto& frame : cb.frames)
      for (const auto& e : frame.events) vocab.insert(e);
  return vocab.size();
}

ComicBook make_cb(std::string id, std::vector<std::vector<EventLabel>> frames) {
  ComicBook cb;
  cb.id = std::move(id);
  cb.frames.reserve(frames.size());
  for (auto& events : frames) {
    Frame frame{std::move(events)};
    std::sort(frame.events.begin(), frame.events.end());
    cb.frames.push_back(std::move(frame));
  }
  return cb;
}

ValidationReport validate_cb(const ComicBook& cb) {
  ValidationReport report;
  if (cb.frames.empty()) {
    report.violations.push_back("empty CB (zero frames)");
    return report;
  }
  std::unordered_map<std::string, int> first_frame;
  for (std::size_t i = 0; i < cb.frames.size(); ++i) {
    const Frame& frame = cb.frames[i];
    if (frame.events.empty()) {
      report.violations.push_back("frame " + std::to_string(i) + ": empty frame");
      continue;
    }
    for (const auto& label : frame.events) {
      if (is_blank(label)) {
        report.violations.push_back("frame " + std::to_string(i) +
                                    ": blank event label");
        continue;
      }
      auto [it, inserted] = first_frame.emplace(label, static_cast<int>(i));
      if (!inserted)
        report.violations.push_back(
            "frame " + std::to_string(i) + ": duplicate event " + squote(label) +
            " (first seen in frame " + std::to_string(it->second) + ")");
    }
  }
  return report;
}

std::vector<EventLabel> event_set(const ComicBook& cb) {
  std::vector<EventLabel> events;
  for (const auto& frame : cb.frames)
    events.insert(events.end(), frame.events.begin(), frame.events.end());
  std::sort(events.begin(), events.end());
  return events;
}

int frame_index(const ComicBook& cb, const EventLabel& e) {
  for (std::size_t i = 0; i < cb.frames.size(); ++i) {
    const auto& events = cb.frames[i].events;
    if (std::find(events.begin(), events.end(), e) != events.end())
      return static_cast<int>(i);
  }
  throw std::out_of_range("event " + squote(e) + " not present in CB " +
                          squote(cb.id));
}

FrameIndexMap frame_index_map(const ComicBook& cb) {
  FrameIndexMap map;
  for (std::size_t i = 0; i < cb.frames.size(); ++i)
    for (const auto& e : cb.frames[i].events) map.emplace(e, static_cast<int>(i));
  return map;
}

Corpus parse_corpus(std::istream& input, CorpusFormat format) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(input, line)) {
    ++lineno;
    strip_cr(line);
    if (is_blank(line)) continue;

    std::string fallback_id = std::to_string(corpus.cbs.size());
    ComicBook cb = format == CorpusFormat::ttt_list
                       ? parse_ttt_line(line, lineno, std::move(fallback_id))
                       : parse_jsonl_line(line, lineno, std::move(fallback_id));

    const auto report = validate_cb(cb);
    if (!report.ok()) throw ParseError(lineno, report.violations.front());
    if (!seen_ids.insert(cb.id).second)
      throw ParseError(lineno, "duplicate CB id " + squote(cb.id));
    corpus.cbs.push_back(std::move(cb));
  }
  return corpus;
}

Corpus parse_corpus(const std::string& text, CorpusFormat format) {
  std::istringstream stream(text);
  return parse_corpus(stream, format);
}

Corpus parse_corpus_file(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream stream(path);
  if (!stream)
    throw std::runtime_error("cannot open corpus file: " + path.string());
  return parse_corpus(stream, format);
}

void serialize_corpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& cb : corpus.cbs) {
    nlohmann::ordered_json j;
    j["id"] = cb.id;
    auto& jframes = j["frames"] = nlohmann::ordered_json::array();
    for (const auto& frame : cb.frames) {
      // canonical label order, even for hand-built frames
      auto events = frame.events;
      std::sort(events.begin(), events.end());
      jframes.push_back(events);
    }
    out << j.dump() << '\n';
  }
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream out;
  serialize_corpus(corpus, out);
  return out.str();
}

void serialize_ttt_list(const Corpus& corpus, std::ostream& out) {
  for (const auto& cb : corpus.cbs) {
    out << '[';
    for (std::size_t i = 0; i < cb.frames.size(); ++i) {
      const auto& events = cb.frames[i].events;
      if (events.size() != 1)
        throw std::invalid_argument(
            "CB " + squote(cb.id) +
            " has a multi-event frame; ttt-list holds one event per frame");
      const auto& label = events.front();
      if (label.find_first_of("\"'\\\n\r") != std::string::npos)
        throw std::invalid_argument("label " + squote(label) +
                                    " is not representable in ttt-list");
      if (i > 0) out << ',';
      out << '"' << label << '"';
    }
    out << "]\n";
  }
}

}  // namespace dagatlas
