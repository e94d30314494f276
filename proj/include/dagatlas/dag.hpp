#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dagatlas/corpus.hpp"
#include "dagatlas/time_order.hpp"

namespace dagatlas {

struct Arrow {
  EventLabel tail;
  EventLabel head;

  auto operator<=>(const Arrow&) const = default;
};

// A node pinned to the frame it occurred in.
struct DagNode {
  EventLabel label;
  int frame = 0;

  auto operator<=>(const DagNode&) const = default;
};

// The per-CB DAG: every event of the CB, with arrows entering each event
// from all events in the t_mem frames immediately before it. Arrows never
// join co-frame events, so the graph is acyclic by construction.
struct EventDag {
  std::string cb_id;
  std::vector<DagNode> nodes;    // frame ascending, label ascending within
  std::vector<Arrow> arrows;
  int t_mem = 1;
};

struct ArrowCount {
  EventLabel tail;
  EventLabel head;
  long count = 0;

  auto operator<=>(const ArrowCount&) const = default;
};

// The high-frequency-arrows DAG of one lib: all events of c_max (isolated
// nodes permitted) plus the arrows whose repetition count across the member
// DAGs reaches n_art. Arrows always run strictly forward in c_max frame
// order.
struct HfaDag {
  int lib_index = 0;
  std::vector<DagNode> nodes;         // E(c_max) at c_max frame indices
  std::vector<ArrowCount> kept_arrows;
  int n_art = 1;
  int t_mem = 1;
};

// Builds G for one CB with the given memory time (t_mem >= 1).
EventDag build_event_dag(const ComicBook& cb, int t_mem);

using ArrowCountMap = std::map<std::pair<EventLabel, EventLabel>, long>;

// Number of member DAGs containing each arrow; arrows are identified by
// label pair only.
ArrowCountMap count_arrows(const CbLib& lib, int t_mem);

// Thresholds the arrow counts of a lib into its hfa DAG.
HfaDag build_hfa(const CbLib& lib, int t_mem, int n_art, int lib_index = 0);

// Nodes by c_max frame ascending, lexicographic within a frame. Verifies
// that every arrow runs forward; a violation means a broken lib invariant
// and raises std::logic_error.
std::vector<EventLabel> topo_order(const HfaDag& hfa);

FrameIndexMap node_frame_map(const HfaDag& hfa);

// Graphviz emitters. The hfa form labels each edge with its repetition
// count; member DAGs are emitted bare.
std::string to_dot(const EventDag& dag);
std::string to_dot(const HfaDag& hfa);

}  // namespace dagatlas
