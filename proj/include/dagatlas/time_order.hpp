#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dagatlas/corpus.hpp"

namespace dagatlas {

// A time-compatible CB library: one maximal CB plus every member that is
// tc-smaller than it (tc-equal members are admitted under the allow_equal
// policy). Members keep arrival order and include c_max itself.
struct CbLib {
  ComicBook c_max;
  std::vector<ComicBook> members;

  std::size_t n_cb() const { return members.size(); }
};

struct Collection {
  std::vector<CbLib> libs;
};

enum class EqualityPolicy {
  proper_only,  // only a proper tc-smaller CB is compatible
  allow_equal,  // a CB order-isomorphic to c_max is also compatible
};

struct CollectionOptions {
  EqualityPolicy equality_policy = EqualityPolicy::allow_equal;
  // When set, a CB tc-greater than a lib's c_max joins that lib and is
  // promoted to its new c_max.
  bool grow_max = false;
};

enum class TcRelation {
  none,     // event sets not nested, or shared order differs
  smaller,  // proper subset with the order relation preserved exactly
  equal,    // same event set, order-isomorphic
};

// Core comparison over precomputed frame-index maps. Order preservation is
// exact: strict precedence maps to strict precedence and co-frame events map
// to co-frame events, restricted to the smaller event set.
TcRelation tc_compare(const FrameIndexMap& c1, const FrameIndexMap& c2);

// True iff c1 is time-compatible smaller than c2.
bool tc_less(const ComicBook& c1, const ComicBook& c2);

// True iff c may join the lib under the given options.
bool is_time_compatible(const ComicBook& c, const CbLib& lib,
                        const CollectionOptions& opts = {});

// Greedy builder: CBs are processed in arrival order, each joining every
// compatible lib; a CB compatible with none opens a new singleton lib.
// Deterministic given the corpus order and options.
Collection build_collection(const Corpus& corpus,
                            const CollectionOptions& opts = {});

// Summary record for the collection export (shared with the atlas bundle).
struct LibSummary {
  int lib_index = 0;
  std::size_t n_cb = 0;
  std::string c_max_id;
  std::vector<std::string> member_ids;
};

std::vector<LibSummary> summarize(const Collection& collection);

}  // namespace dagatlas
