#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dagatlas/dag.hpp"

namespace dagatlas {

// One Boolean presence bit per parent, in canonical parent order.
using PresencePattern = std::vector<std::uint8_t>;

struct TpmRow {
  double p_absent = 0.0;
  double p_present = 0.0;
};

// Conditional distribution of one node over {absent, present}, given each
// presence pattern of its parents. A row is undefined (nullopt) exactly when
// no member CB exhibited the pattern.
struct Tpm {
  EventLabel node;
  std::vector<EventLabel> parents;            // canonical order
  std::vector<std::optional<TpmRow>> rows;    // 2^n rows, parents[0] = MSB

  std::size_t row_index(const PresencePattern& pattern) const;
  static PresencePattern pattern_of(std::size_t index, std::size_t n_parents);
  bool is_root() const { return parents.empty(); }
};

struct Bnet {
  HfaDag hfa;
  std::vector<Tpm> tpms;  // in topo order of hfa

  const Tpm& tpm_of(const EventLabel& node) const;  // std::out_of_range
  std::size_t undefined_row_count() const;
};

struct UndefinedRowError : std::runtime_error {
  UndefinedRowError(EventLabel node, PresencePattern pattern);

  EventLabel node;
  PresencePattern pattern;
};

struct QueryError : std::runtime_error {
  enum class Kind { unknown_node, cap_exceeded, zero_evidence };

  QueryError(Kind kind, const std::string& message);

  Kind kind;
};

// Parents of `node`, sorted by descending c_max frame index (most recent
// first), lexicographic on ties. Throws std::out_of_range for unknown nodes.
std::vector<EventLabel> canonical_parents(const HfaDag& hfa,
                                          const EventLabel& node);

// Empirical conditional-probability estimation over the lib members:
// within the members whose parent presences match a pattern, the fraction
// in which the node itself is present. Root nodes get their empirical
// marginal over all members.
Bnet estimate_tpms(const HfaDag& hfa, const CbLib& lib);

// Product of the TPM entries selected by a full assignment. Throws
// UndefinedRowError if the assignment touches an undefined row, and
// std::invalid_argument if the assignment does not cover the node set
// exactly.
double joint_probability(const Bnet& bnet,
                         const std::map<EventLabel, bool>& assignment);

// P(target = 1 | evidence), by exact enumeration over the ancestral closure
// of the target and evidence nodes (other nodes marginalize to one and are
// skipped). Errors: enumeration cap exceeded; undefined row reached with
// nonzero accumulated weight; evidence of probability zero.
double marginal(const Bnet& bnet, const EventLabel& target,
                const std::map<EventLabel, bool>& evidence = {},
                std::size_t enumeration_cap = 20);

// Rung-2 surgery: removes every arrow entering `node` and replaces its TPM
// with the point mass on `value`.
Bnet do_intervene(const Bnet& bnet, const EventLabel& node, bool value);

// Human-readable TPM report: per node, the parent list and every pattern in
// ascending binary order, probabilities at 8 decimals, undefined rows as
// "nan". With paper_compat_inf, parentless nodes print "[inf, inf]" instead
// of their marginal.
std::string render_tpm_report(const Bnet& bnet, bool paper_compat_inf = false);

std::string render_pattern(const PresencePattern& pattern);

}  // namespace dagatlas
