#include "dagatlas/bnet.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dagatlas {

namespace {

constexpr std::size_t kMaxParentsPerNode = 24;  // 2^24 rows ~ desk-scale limit

std::string fixed8(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8f", v);
  return buf;
}

std::unordered_set<EventLabel> member_event_set(const ComicBook& cb) {
  std::unordered_set<EventLabel> events;
  for (const auto& frame : cb.frames)
    for (const auto& e : frame.events) events.insert(e);
  return events;
}

}  // namespace

std::size_t Tpm::row_index(const PresencePattern& pattern) const {
  if (pattern.size() != parents.size())
    throw std::invalid_argument("pattern length does not match parent count");
  std::size_t index = 0;
  for (const auto bit : pattern) index = (index << 1) | (bit ? 1u : 0u);
  return index;
}

PresencePattern Tpm::pattern_of(std::size_t index, std::size_t n_parents) {
  PresencePattern pattern(n_parents, 0);
  for (std::size_t k = 0; k < n_parents; ++k)
    pattern[k] = static_cast<std::uint8_t>((index >> (n_parents - 1 - k)) & 1u);
  return pattern;
}

const Tpm& Bnet::tpm_of(const EventLabel& node) const {
  for (const auto& tpm : tpms)
    if (tpm.node == node) return tpm;
  throw std::out_of_range("unknown node '" + node + "'");
}

std::size_t Bnet::undefined_row_count() const {
  std::size_t count = 0;
  for (const auto& tpm : tpms)
    for (const auto& row : tpm.rows)
      if (!row) ++count;
  return count;
}

UndefinedRowError::UndefinedRowError(EventLabel node_arg,
                                     PresencePattern pattern_arg)
    : std::runtime_error("undefined TPM row: node '" + node_arg +
                         "', pattern " + render_pattern(pattern_arg)),
      node(std::move(node_arg)),
      pattern(std::move(pattern_arg)) {}

QueryError::QueryError(Kind kind_arg, const std::string& message)
    : std::runtime_error(message), kind(kind_arg) {}

std::vector<EventLabel> canonical_parents(const HfaDag& hfa,
                                          const EventLabel& node) {
  const FrameIndexMap frames = node_frame_map(hfa);
  if (!frames.contains(node))
    throw std::out_of_range("unknown node '" + node + "'");
  std::vector<EventLabel> parents;
  for (const auto& arrow : hfa.kept_arrows)
    if (arrow.head == node) parents.push_back(arrow.tail);
  std::sort(parents.begin(), parents.end(),
            [&](const EventLabel& a, const EventLabel& b) {
              const int fa = frames.at(a), fb = frames.at(b);
              if (fa != fb) return fa > fb;  // most recent first
              return a < b;
            });
  return parents;
}

Bnet estimate_tpms(const HfaDag& hfa, const CbLib& lib) {
  Bnet bnet;
  bnet.hfa = hfa;

  std::vector<std::unordered_set<EventLabel>> member_events;
  member_events.reserve(lib.members.size());
  for (const auto& member : lib.members)
    member_events.push_back(member_event_set(member));

  for (const auto& node : topo_order(hfa)) {
    Tpm tpm;
    tpm.node = node;
    tpm.parents = canonical_parents(hfa, node);
    const std::size_t n = tpm.parents.size();
    if (n > kMaxParentsPerNode)
      throw std::length_error("node '" + node + "' has " + std::to_string(n) +
                              " parents; TPM would not fit in memory");
    const std::size_t n_rows = std::size_t(1) << n;
    std::vector<long> present(n_rows, 0), total(n_rows, 0);

    for (const auto& events : member_events) {
      std::size_t row = 0;
      for (const auto& parent : tpm.parents)
        row = (row << 1) | (events.contains(parent) ? 1u : 0u);
      ++total[row];
      if (events.contains(node)) ++present[row];
    }

    tpm.rows.resize(n_rows);
    for (std::size_t row = 0; row < n_rows; ++row) {
      if (total[row] == 0) continue;  // unsupported pattern stays undefined
      const double p_present =
          static_cast<double>(present[row]) / static_cast<double>(total[row]);
      const double p_absent =
          static_cast<double>(total[row] - present[row]) /
          static_cast<double>(total[row]);
      tpm.rows[row] = TpmRow{p_absent, p_present};
    }
    bnet.tpms.push_back(std::move(tpm));
  }
  return bnet;
}

double joint_probability(const Bnet& bnet,
                         const std::map<EventLabel, bool>& assignment) {
  if (assignment.size() != bnet.tpms.size())
    throw std::invalid_argument("assignment must cover every node exactly");
  const FrameIndexMap nodes = node_frame_map(bnet.hfa);
  for (const auto& [node, value] : assignment) {
    (void)value;
    if (!nodes.contains(node))
      throw std::invalid_argument("assignment names unknown node '" + node +
                                  "'");
  }

  double product = 1.0;
  for (const auto& tpm : bnet.tpms) {
    PresencePattern pattern;
    pattern.reserve(tpm.parents.size());
    for (const auto& parent : tpm.parents)
      pattern.push_back(assignment.at(parent) ? 1 : 0);
    const auto& row = tpm.rows[tpm.row_index(pattern)];
    if (!row) throw UndefinedRowError(tpm.node, pattern);
    product *= assignment.at(tpm.node) ? row->p_present : row->p_absent;
  }
  return product;
}

double marginal(const Bnet& bnet, const EventLabel& target,
                const std::map<EventLabel, bool>& evidence,
                std::size_t enumeration_cap) {
  std::unordered_map<EventLabel, std::size_t> tpm_index;
  for (std::size_t i = 0; i < bnet.tpms.size(); ++i)
    tpm_index.emplace(bnet.tpms[i].node, i);

  const auto require_known = [&](const EventLabel& node) {
    if (!tpm_index.contains(node))
      throw QueryError(QueryError::Kind::unknown_node,
                       "unknown node '" + node + "'");
  };
  require_known(target);
  for (const auto& [node, value] : evidence) {
    (void)value;
    require_known(node);
  }

  // Nodes outside the ancestral closure of {target} + evidence marginalize
  // to one and are skipped.
  std::unordered_set<EventLabel> relevant;
  std::vector<EventLabel> stack{target};
  for (const auto& [node, value] : evidence) {
    (void)value;
    stack.push_back(node);
  }
  while (!stack.empty()) {
    EventLabel node = std::move(stack.back());
    stack.pop_back();
    if (!relevant.insert(node).second) continue;
    for (const auto& parent : bnet.tpms[tpm_index.at(node)].parents)
      stack.push_back(parent);
  }
  if (relevant.size() > enumeration_cap)
    throw QueryError(QueryError::Kind::cap_exceeded,
                     "query touches " + std::to_string(relevant.size()) +
                         " nodes, above the enumeration cap of " +
                         std::to_string(enumeration_cap));

  std::vector<const Tpm*> order;  // topo order restricted to relevant nodes
  for (const auto& tpm : bnet.tpms)
    if (relevant.contains(tpm.node)) order.push_back(&tpm);

  std::unordered_map<EventLabel, bool> values;
  double numerator = 0.0, denominator = 0.0;

  const std::function<void(std::size_t, double)> enumerate =
      [&](std::size_t depth, double weight) {
        if (weight == 0.0) return;  // dead branch; nothing to add or report
        if (depth == order.size()) {
          denominator += weight;
          if (values.at(target)) numerator += weight;
          return;
        }
        const Tpm& tpm = *order[depth];
        PresencePattern pattern;
        pattern.reserve(tpm.parents.size());
        for (const auto& parent : tpm.parents)
          pattern.push_back(values.at(parent) ? 1 : 0);
        const auto& row = tpm.rows[tpm.row_index(pattern)];
        if (!row) throw UndefinedRowError(tpm.node, pattern);

        const auto fixed = evidence.find(tpm.node);
        for (const bool value : {false, true}) {
          if (fixed != evidence.end() && fixed->second != value) continue;
          values[tpm.node] = value;
          enumerate(depth + 1, weight * (value ? row->p_present : row->p_absent));
        }
        values.erase(tpm.node);
      };
  enumerate(0, 1.0);

  if (denominator == 0.0)
    throw QueryError(QueryError::Kind::zero_evidence,
                     "evidence has probability zero");
  return numerator / denominator;
}

Bnet do_intervene(const Bnet& bnet, const EventLabel& node, bool value) {
  if (!node_frame_map(bnet.hfa).contains(node))
    throw std::out_of_range("unknown node '" + node + "'");

  Bnet result = bnet;
  std::erase_if(result.hfa.kept_arrows,
                [&](const ArrowCount& arrow) { return arrow.head == node; });
  for (auto& tpm : result.tpms) {
    if (tpm.node != node) continue;
    tpm.parents.clear();
    tpm.rows.assign(1, TpmRow{value ? 0.0 : 1.0, value ? 1.0 : 0.0});
  }
  return result;
}

std::string render_pattern(const PresencePattern& pattern) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (i > 0) out << ", ";
    out << int(pattern[i]);
  }
  if (pattern.size() == 1) out << ',';
  out << ')';
  return out.str();
}

std::string render_tpm_report(const Bnet& bnet, bool paper_compat_inf) {
  std::ostringstream out;
  for (std::size_t i = 0; i < bnet.tpms.size(); ++i) {
    const Tpm& tpm = bnet.tpms[i];
    if (i > 0) out << '\n';
    out << "node: " << tpm.node << ", parents: [";
    for (std::size_t k = 0; k < tpm.parents.size(); ++k) {
      if (k > 0) out << ", ";
      out << '\'' << tpm.parents[k] << '\'';
    }
    out << "]\n";
    for (std::size_t row = 0; row < tpm.rows.size(); ++row) {
      const auto pattern = Tpm::pattern_of(row, tpm.parents.size());
      out << "  " << render_pattern(pattern) << ": ";
      if (tpm.is_root() && paper_compat_inf) {
        out << "[inf, inf]\n";
      } else if (!tpm.rows[row]) {
        out << "[nan, nan]\n";
      } else {
        out << '[' << fixed8(tpm.rows[row]->p_absent) << ", "
            << fixed8(tpm.rows[row]->p_present) << "]\n";
      }
    }
  }
  return out.str();
}

}  // namespace dagatlas
