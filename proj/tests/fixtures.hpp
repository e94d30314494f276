#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// recompute expected values from first principles (plain loops over the raw
// data) and never call the library code paths they are checking.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "dagatlas/corpus.hpp"
#include "dagatlas/time_order.hpp"

namespace fixtures {

using dagatlas::CbLib;
using dagatlas::ComicBook;
using dagatlas::Corpus;
using dagatlas::EventLabel;

inline ComicBook cb_from_moves(std::string id,
                               const std::vector<std::string>& moves) {
  std::vector<std::vector<EventLabel>> frames;
  frames.reserve(moves.size());
  for (const auto& move : moves) frames.push_back({move});
  return dagatlas::make_cb(std::move(id), std::move(frames));
}

// The four golden games: one 9-move game plus three 5-move games that are
// all tc-smaller than it.
inline const std::vector<std::string> kGameA = {"X2", "O5", "X7", "O1", "X4",
                                                "O0", "X8", "O3", "X6"};
inline const std::vector<std::string> kGameB = {"X2", "O5", "X4", "O3", "X6"};
inline const std::vector<std::string> kGameC = {"X7", "O1", "X8", "O3", "X6"};
inline const std::vector<std::string> kGameD = {"X2", "O1", "X4", "O0", "X6"};

inline ComicBook game_a() { return cb_from_moves("A", kGameA); }
inline ComicBook game_b() { return cb_from_moves("B", kGameB); }
inline ComicBook game_c() { return cb_from_moves("C", kGameC); }
inline ComicBook game_d() { return cb_from_moves("D", kGameD); }

inline Corpus golden_corpus() {
  return Corpus{{game_a(), game_b(), game_c(), game_d()}};
}

inline CbLib golden_lib() {
  return CbLib{game_a(), {game_a(), game_b(), game_c(), game_d()}};
}

inline std::string golden_ttt_list() {
  return "[\"X2\",\"O5\",\"X7\",\"O1\",\"X4\",\"O0\",\"X8\",\"O3\",\"X6\"]\n"
         "[\"X2\",\"O5\",\"X4\",\"O3\",\"X6\"]\n"
         "[\"X7\",\"O1\",\"X8\",\"O3\",\"X6\"]\n"
         "[\"X2\",\"O1\",\"X4\",\"O0\",\"X6\"]\n";
}

// Expected parent sets of the golden lib's hfa DAG at t_mem=2, n_art=2,
// parents ordered most-recent-first.
inline const std::vector<std::pair<std::string, std::vector<std::string>>>
    kGoldenParents = {
        {"X2", {}},
        {"O5", {"X2"}},
        {"X7", {}},
        {"O1", {"X7"}},
        {"X4", {"O1", "X2"}},
        {"O0", {"X4", "O1"}},
        {"X8", {}},
        {"O3", {"X8"}},
        {"X6", {"O3", "X8", "X4"}},
};

// An 8-frame, 11-event storyboard with two two-event frames; its vocabulary
// doubles as the classic worked example for the window rule.
inline ComicBook storyboard_cb() {
  return dagatlas::make_cb("story", {{"SuRi"},
                                     {"RoCr", "BuSt"},
                                     {"BoWa"},
                                     {"BoEa", "RaSt"},
                                     {"BoRu", "BuAr"},
                                     {"DoBa"},
                                     {"BoBo"},
                                     {"RaEn"}});
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// Two-pointer proper-subsequence check over label sequences.
inline bool oracle_proper_subsequence(const std::vector<std::string>& small,
                                      const std::vector<std::string>& big) {
  if (small.size() >= big.size()) return false;
  std::size_t i = 0;
  for (std::size_t j = 0; j < big.size() && i < small.size(); ++j)
    if (small[i] == big[j]) ++i;
  return i == small.size();
}

// Iterative three-color DFS cycle check over (tail, head) label pairs.
inline bool oracle_acyclic(
    const std::vector<std::pair<std::string, std::string>>& arrows) {
  std::map<std::string, std::vector<std::string>> adjacency;
  std::set<std::string> nodes;
  for (const auto& [tail, head] : arrows) {
    adjacency[tail].push_back(head);
    nodes.insert(tail);
    nodes.insert(head);
  }
  std::map<std::string, int> color;  // 0 white, 1 gray, 2 black
  for (const auto& start : nodes) {
    if (color[start] != 0) continue;
    std::vector<std::pair<std::string, std::size_t>> stack{{start, 0}};
    color[start] = 1;
    while (!stack.empty()) {
      auto& [node, next_child] = stack.back();
      const auto& children = adjacency[node];
      if (next_child == children.size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::string& child = children[next_child++];
      if (color[child] == 1) return false;
      if (color[child] == 0) {
        color[child] = 1;
        stack.emplace_back(child, 0);
      }
    }
  }
  return true;
}

// Independent tally of how many member CBs contain each window-rule arrow.
inline std::map<std::pair<std::string, std::string>, long> oracle_arrow_counts(
    const CbLib& lib, int t_mem) {
  std::map<std::pair<std::string, std::string>, long> counts;
  for (const auto& member : lib.members) {
    const int n = static_cast<int>(member.frames.size());
    for (int i = 1; i < n; ++i)
      for (int j = std::max(0, i - t_mem); j < i; ++j)
        for (const auto& tail : member.frames[j].events)
          for (const auto& head : member.frames[i].events)
            ++counts[{tail, head}];
  }
  return counts;
}

// Naive per-pattern tallies for one node: pattern -> (members with the node
// present, members matching the pattern).
inline std::map<std::vector<std::uint8_t>, std::pair<long, long>>
oracle_tpm_counts(const std::string& node,
                  const std::vector<std::string>& parents, const CbLib& lib) {
  std::map<std::vector<std::uint8_t>, std::pair<long, long>> rows;
  for (const auto& member : lib.members) {
    std::unordered_set<std::string> events;
    for (const auto& frame : member.frames)
      for (const auto& e : frame.events) events.insert(e);
    std::vector<std::uint8_t> pattern;
    pattern.reserve(parents.size());
    for (const auto& parent : parents)
      pattern.push_back(events.contains(parent) ? 1 : 0);
    auto& [present, total] = rows[pattern];
    ++total;
    if (events.contains(node)) ++present;
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Random CB generators for property tests
// ---------------------------------------------------------------------------

inline std::string synth_label(int i) {
  return "E" + std::to_string(i / 10) + std::to_string(i % 10);
}

// A random valid CB: distinct labels from a small alphabet, randomly
// partitioned into frames (some simultaneous events).
inline ComicBook random_cb(std::mt19937_64& rng, int max_events = 9,
                           int alphabet = 20) {
  std::vector<int> ids(static_cast<std::size_t>(alphabet));
  for (int i = 0; i < alphabet; ++i) ids[static_cast<std::size_t>(i)] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_events));

  std::vector<std::vector<EventLabel>> frames;
  for (int i = 0; i < k; ++i) {
    const bool join_previous = !frames.empty() && rng() % 10 < 3;
    if (join_previous)
      frames.back().push_back(synth_label(ids[static_cast<std::size_t>(i)]));
    else
      frames.push_back({synth_label(ids[static_cast<std::size_t>(i)])});
  }
  return dagatlas::make_cb("r" + std::to_string(rng() % 1000000), frames);
}

// A random CB with one event per frame (a strict chain).
inline ComicBook random_chain_cb(std::mt19937_64& rng, int max_events = 9,
                                 int alphabet = 12) {
  std::vector<int> ids(static_cast<std::size_t>(alphabet));
  for (int i = 0; i < alphabet; ++i) ids[static_cast<std::size_t>(i)] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_events));
  std::vector<std::vector<EventLabel>> frames;
  for (int i = 0; i < k; ++i)
    frames.push_back({synth_label(ids[static_cast<std::size_t>(i)])});
  return dagatlas::make_cb("c" + std::to_string(rng() % 1000000), frames);
}

// Deletes a random nonempty proper subset of events while preserving frame
// structure; the result is tc-smaller than the parent by construction.
// Returns nullopt when the parent has a single event (no proper sub-CB).
inline std::optional<ComicBook> random_subcb(const ComicBook& parent,
                                             std::mt19937_64& rng) {
  std::vector<std::pair<int, EventLabel>> events;
  for (std::size_t i = 0; i < parent.frames.size(); ++i)
    for (const auto& e : parent.frames[i].events)
      events.emplace_back(static_cast<int>(i), e);
  if (events.size() < 2) return std::nullopt;

  std::vector<bool> keep(events.size());
  std::size_t kept = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    keep[i] = rng() % 10 < 6;
    if (keep[i]) ++kept;
  }
  if (kept == 0) {
    keep[rng() % events.size()] = true;
    kept = 1;
  }
  if (kept == events.size()) {
    std::size_t drop = rng() % events.size();
    keep[drop] = false;
    --kept;
  }

  std::vector<std::vector<EventLabel>> frames(parent.frames.size());
  for (std::size_t i = 0; i < events.size(); ++i)
    if (keep[i])
      frames[static_cast<std::size_t>(events[i].first)].push_back(
          events[i].second);
  std::erase_if(frames, [](const auto& f) { return f.empty(); });
  return dagatlas::make_cb("s" + std::to_string(rng() % 1000000), frames);
}

inline std::vector<std::string> move_list(const ComicBook& cb) {
  std::vector<std::string> moves;
  for (const auto& frame : cb.frames)
    for (const auto& e : frame.events) moves.push_back(e);
  return moves;
}

}  // namespace fixtures
