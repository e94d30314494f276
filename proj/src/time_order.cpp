#include "dagatlas/time_order.hpp"

#include <algorithm>
#include <utility>

namespace dagatlas {

TcRelation tc_compare(const FrameIndexMap& c1, const FrameIndexMap& c2) {
  if (c1.empty() || c1.size() > c2.size()) return TcRelation::none;

  // Pair each shared event's frame index in c1 with its index in c2.
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(c1.size());
  for (const auto& [label, f1] : c1) {
    const auto it = c2.find(label);
    if (it == c2.end()) return TcRelation::none;
    pairs.emplace_back(f1, it->second);
  }
  std::sort(pairs.begin(), pairs.end());

  // Co-frame in c1 must stay co-frame in c2; strictly earlier must stay
  // strictly earlier.
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    const auto& [prev_f1, prev_f2] = pairs[i - 1];
    const auto& [f1, f2] = pairs[i];
    if (f1 == prev_f1) {
      if (f2 != prev_f2) return TcRelation::none;
    } else if (f2 <= prev_f2) {
      return TcRelation::none;
    }
  }
  return c1.size() < c2.size() ? TcRelation::smaller : TcRelation::equal;
}

bool tc_less(const ComicBook& c1, const ComicBook& c2) {
  return tc_compare(frame_index_map(c1), frame_index_map(c2)) ==
         TcRelation::smaller;
}

namespace {

bool compatible_with_max(const FrameIndexMap& c, const FrameIndexMap& c_max,
                         const CollectionOptions& opts, bool* promotes) {
  *promotes = false;
  const TcRelation rel = tc_compare(c, c_max);
  if (rel == TcRelation::smaller) return true;
  if (rel == TcRelation::equal)
    return opts.equality_policy == EqualityPolicy::allow_equal;
  if (opts.grow_max && tc_compare(c_max, c) == TcRelation::smaller) {
    *promotes = true;
    return true;
  }
  return false;
}

}  // namespace

bool is_time_compatible(const ComicBook& c, const CbLib& lib,
                        const CollectionOptions& opts) {
  bool promotes = false;
  return compatible_with_max(frame_index_map(c), frame_index_map(lib.c_max),
                             opts, &promotes);
}

Collection build_collection(const Corpus& corpus,
                            const CollectionOptions& opts) {
  Collection collection;
  std::vector<FrameIndexMap> max_maps;  // parallel to collection.libs

  for (const auto& cb : corpus.cbs) {
    FrameIndexMap cb_map = frame_index_map(cb);
    bool placed = false;
    for (std::size_t i = 0; i < collection.libs.size(); ++i) {
      bool promotes = false;
      if (!compatible_with_max(cb_map, max_maps[i], opts, &promotes)) continue;
      CbLib& lib = collection.libs[i];
      lib.members.push_back(cb);
      if (promotes) {
        lib.c_max = cb;
        max_maps[i] = cb_map;
      }
      placed = true;
    }
    if (!placed) {
      collection.libs.push_back(CbLib{cb, {cb}});
      max_maps.push_back(std::move(cb_map));
    }
  }
  return collection;
}

std::vector<LibSummary> summarize(const Collection& collection) {
  std::vector<LibSummary> summaries;
  summaries.reserve(collection.libs.size());
  for (std::size_t i = 0; i < collection.libs.size(); ++i) {
    const CbLib& lib = collection.libs[i];
    LibSummary summary;
    summary.lib_index = static_cast<int>(i);
    summary.n_cb = lib.n_cb();
    summary.c_max_id = lib.c_max.id;
    for (const auto& member : lib.members)
      summary.member_ids.push_back(member.id);
    summaries.push_back(std::move(summary));
  }
  return summaries;
}

}  // namespace dagatlas
