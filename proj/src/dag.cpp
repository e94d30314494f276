#include "dagatlas/dag.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dagatlas {

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

int frame_of(const FrameIndexMap& map, const EventLabel& label,
             const char* context) {
  const auto it = map.find(label);
  if (it == map.end())
    throw std::invalid_argument(std::string(context) + ": event '" + label +
                                "' not in c_max");
  return it->second;
}

}  // namespace

EventDag build_event_dag(const ComicBook& cb, int t_mem) {
  if (t_mem < 1) throw std::invalid_argument("t_mem must be >= 1");
  EventDag dag;
  dag.cb_id = cb.id;
  dag.t_mem = t_mem;

  for (std::size_t i = 0; i < cb.frames.size(); ++i)
    for (const auto& e : cb.frames[i].events)
      dag.nodes.push_back({e, static_cast<int>(i)});
  std::sort(dag.nodes.begin(), dag.nodes.end(),
            [](const DagNode& a, const DagNode& b) {
              return std::tie(a.frame, a.label) < std::tie(b.frame, b.label);
            });

  const int n = static_cast<int>(cb.frames.size());
  for (int i = 1; i < n; ++i) {
    const int lo = std::max(0, i - t_mem);
    for (int j = lo; j < i; ++j)
      for (const auto& tail : cb.frames[j].events)
        for (const auto& head : cb.frames[i].events)
          dag.arrows.push_back({tail, head});
  }
  return dag;
}

ArrowCountMap count_arrows(const CbLib& lib, int t_mem) {
  ArrowCountMap counts;
  for (const auto& member : lib.members) {
    // Events are unique per CB, so each arrow occurs at most once per DAG.
    const EventDag dag = build_event_dag(member, t_mem);
    for (const auto& arrow : dag.arrows) ++counts[{arrow.tail, arrow.head}];
  }
  return counts;
}

HfaDag build_hfa(const CbLib& lib, int t_mem, int n_art, int lib_index) {
  if (n_art < 1) throw std::invalid_argument("n_art must be >= 1");

  HfaDag hfa;
  hfa.lib_index = lib_index;
  hfa.t_mem = t_mem;
  hfa.n_art = n_art;

  const FrameIndexMap max_map = frame_index_map(lib.c_max);
  for (const auto& [label, frame] : max_map) hfa.nodes.push_back({label, frame});
  std::sort(hfa.nodes.begin(), hfa.nodes.end(),
            [](const DagNode& a, const DagNode& b) {
              return std::tie(a.frame, a.label) < std::tie(b.frame, b.label);
            });

  for (const auto& [pair, count] : count_arrows(lib, t_mem)) {
    if (count < n_art) continue;
    const int tail_frame = frame_of(max_map, pair.first, "build_hfa");
    const int head_frame = frame_of(max_map, pair.second, "build_hfa");
    if (tail_frame >= head_frame)
      throw std::logic_error("build_hfa: arrow '" + pair.first + "' -> '" +
                             pair.second + "' does not run forward in c_max");
    hfa.kept_arrows.push_back({pair.first, pair.second, count});
  }
  std::sort(hfa.kept_arrows.begin(), hfa.kept_arrows.end(),
            [&](const ArrowCount& a, const ArrowCount& b) {
              return std::tuple(max_map.at(a.tail), max_map.at(a.head), a.tail,
                                a.head) < std::tuple(max_map.at(b.tail),
                                                     max_map.at(b.head), b.tail,
                                                     b.head);
            });
  return hfa;
}

FrameIndexMap node_frame_map(const HfaDag& hfa) {
  FrameIndexMap map;
  for (const auto& node : hfa.nodes) map.emplace(node.label, node.frame);
  return map;
}

std::vector<EventLabel> topo_order(const HfaDag& hfa) {
  const FrameIndexMap frames = node_frame_map(hfa);
  for (const auto& arrow : hfa.kept_arrows) {
    const int tail_frame = frame_of(frames, arrow.tail, "topo_order");
    const int head_frame = frame_of(frames, arrow.head, "topo_order");
    if (tail_frame >= head_frame)
      throw std::logic_error("topo_order: cycle-inducing arrow '" + arrow.tail +
                             "' -> '" + arrow.head + "'");
  }
  std::vector<EventLabel> order;
  order.reserve(hfa.nodes.size());
  for (const auto& node : hfa.nodes) order.push_back(node.label);
  return order;
}

std::string to_dot(const EventDag& dag) {
  std::ostringstream out;
  out << "digraph \"" << dot_escape(dag.cb_id) << "\" {\n";
  for (const auto& node : dag.nodes)
    out << "  \"" << dot_escape(node.label) << "\";\n";
  for (const auto& arrow : dag.arrows)
    out << "  \"" << dot_escape(arrow.tail) << "\" -> \""
        << dot_escape(arrow.head) << "\";\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(const HfaDag& hfa) {
  std::ostringstream out;
  out << "digraph \"lib" << hfa.lib_index << "_hfa\" {\n";
  for (const auto& node : hfa.nodes)
    out << "  \"" << dot_escape(node.label) << "\";\n";
  for (const auto& arrow : hfa.kept_arrows)
    out << "  \"" << dot_escape(arrow.tail) << "\" -> \""
        << dot_escape(arrow.head) << "\" [label=\"" << arrow.count << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace dagatlas
