#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dagatlas/bnet.hpp"
#include "dagatlas/ttt.hpp"
#include "fixtures.hpp"

using namespace dagatlas;
using namespace fixtures;

namespace {

Bnet golden_bnet() { return estimate_tpms(build_hfa(golden_lib(), 2, 2), golden_lib()); }

const std::optional<TpmRow>& row_of(const Bnet& bnet, const EventLabel& node,
                                    const PresencePattern& pattern) {
  const Tpm& tpm = bnet.tpm_of(node);
  return tpm.rows[tpm.row_index(pattern)];
}

void check_row(const Bnet& bnet, const EventLabel& node,
               const PresencePattern& pattern, double p_absent,
               double p_present) {
  const auto& row = row_of(bnet, node, pattern);
  REQUIRE_MESSAGE(row.has_value(), node << " " << render_pattern(pattern));
  CHECK(row->p_absent == doctest::Approx(p_absent).epsilon(1e-12));
  CHECK(row->p_present == doctest::Approx(p_present).epsilon(1e-12));
}

std::map<EventLabel, bool> all_present(const Bnet& bnet) {
  std::map<EventLabel, bool> assignment;
  for (const auto& tpm : bnet.tpms) assignment[tpm.node] = true;
  return assignment;
}

}  // namespace

TEST_CASE("canonical parent order is most-recent-first") {
  const auto hfa = build_hfa(golden_lib(), 2, 2);
  for (const auto& [node, parents] : kGoldenParents)
    CHECK(canonical_parents(hfa, node) == parents);
  CHECK_THROWS_AS(canonical_parents(hfa, "Z9"), std::out_of_range);
}

TEST_CASE("golden lib TPMs match the worked example") {
  const auto bnet = golden_bnet();

  check_row(bnet, "O5", {0}, 1.0, 0.0);
  check_row(bnet, "O5", {1}, 1.0 / 3.0, 2.0 / 3.0);

  check_row(bnet, "O1", {0}, 0.5, 0.5);
  check_row(bnet, "O1", {1}, 0.0, 1.0);

  CHECK_FALSE(row_of(bnet, "X4", {0, 0}).has_value());
  check_row(bnet, "X4", {0, 1}, 0.0, 1.0);
  check_row(bnet, "X4", {1, 0}, 1.0, 0.0);
  check_row(bnet, "X4", {1, 1}, 0.0, 1.0);

  CHECK_FALSE(row_of(bnet, "O0", {0, 0}).has_value());
  check_row(bnet, "O0", {0, 1}, 1.0, 0.0);
  check_row(bnet, "O0", {1, 0}, 1.0, 0.0);
  check_row(bnet, "O0", {1, 1}, 0.0, 1.0);

  check_row(bnet, "O3", {0}, 0.5, 0.5);
  check_row(bnet, "O3", {1}, 0.0, 1.0);

  for (const auto idx : {std::size_t(0), std::size_t(2), std::size_t(4)})
    CHECK_FALSE(row_of(bnet, "X6", Tpm::pattern_of(idx, 3)).has_value());
  CHECK_FALSE(row_of(bnet, "X6", {0, 1, 1}).has_value());
  check_row(bnet, "X6", {0, 0, 1}, 0.0, 1.0);
  check_row(bnet, "X6", {1, 0, 1}, 0.0, 1.0);
  check_row(bnet, "X6", {1, 1, 0}, 0.0, 1.0);
  check_row(bnet, "X6", {1, 1, 1}, 0.0, 1.0);

  // parentless nodes carry their empirical marginals
  check_row(bnet, "X2", {}, 0.25, 0.75);
  check_row(bnet, "X7", {}, 0.5, 0.5);
  check_row(bnet, "X8", {}, 0.5, 0.5);

  CHECK(bnet.undefined_row_count() == 6);
}

TEST_CASE("joint probability factorizes over the DAG") {
  const auto bnet = golden_bnet();
  CHECK(joint_probability(bnet, all_present(bnet)) ==
        doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("joint probability reports the undefined row it touched") {
  const auto bnet = golden_bnet();
  auto assignment = all_present(bnet);
  assignment["O1"] = false;
  assignment["X2"] = false;
  try {
    joint_probability(bnet, assignment);
    FAIL("expected UndefinedRowError");
  } catch (const UndefinedRowError& e) {
    CHECK(e.node == "X4");
    CHECK(e.pattern == PresencePattern{0, 0});
  }
}

TEST_CASE("joint probability requires a full assignment") {
  const auto bnet = golden_bnet();
  auto assignment = all_present(bnet);
  assignment.erase("X6");
  CHECK_THROWS_AS(joint_probability(bnet, assignment), std::invalid_argument);
  assignment["X6"] = true;
  assignment["Z9"] = true;
  assignment.erase("X2");
  CHECK_THROWS_AS(joint_probability(bnet, assignment), std::invalid_argument);
}

TEST_CASE("single root bnets are their marginal") {
  const auto max = make_cb("m", {{"A"}, {"B"}});
  const CbLib lib{max, {max, make_cb("s", {{"A"}})}};
  const auto bnet = estimate_tpms(build_hfa(lib, 1, 2), lib);  // A->B count 1
  CHECK(bnet.tpm_of("B").is_root());
  CHECK(joint_probability(bnet, {{"A", true}, {"B", true}}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(marginal(bnet, "B") == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("marginals by enumeration") {
  const auto bnet = golden_bnet();
  CHECK(marginal(bnet, "O5") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(marginal(bnet, "X2", {{"X2", true}}) == 1.0);
  // Only the ancestral closure is enumerated, so undefined rows of
  // descendants (X6 here) never poison this query.
  CHECK(marginal(bnet, "O1", {{"X7", true}}) == 1.0);
}

TEST_CASE("marginal error conditions") {
  const auto bnet = golden_bnet();

  try {
    marginal(bnet, "O5", {{"X2", false}, {"O5", true}});
    FAIL("expected zero-evidence error");
  } catch (const QueryError& e) {
    CHECK(e.kind == QueryError::Kind::zero_evidence);
  }

  try {
    marginal(bnet, "X6", {}, 3);
    FAIL("expected cap error");
  } catch (const QueryError& e) {
    CHECK(e.kind == QueryError::Kind::cap_exceeded);
  }

  try {
    marginal(bnet, "Z9");
    FAIL("expected unknown-node error");
  } catch (const QueryError& e) {
    CHECK(e.kind == QueryError::Kind::unknown_node);
  }

  // an undefined row of a relevant ancestor is reached with positive weight
  try {
    marginal(bnet, "X4", {{"X2", false}, {"O1", false}});
    FAIL("expected UndefinedRowError");
  } catch (const UndefinedRowError& e) {
    CHECK(e.node == "X4");
    CHECK(e.pattern == PresencePattern{0, 0});
  }
}

TEST_CASE("do-operator removes incoming arrows and pins the node") {
  const auto bnet = golden_bnet();
  const auto surgered = do_intervene(bnet, "X4", true);

  CHECK(surgered.tpm_of("X4").parents.empty());
  check_row(surgered, "X4", {}, 0.0, 1.0);
  for (const auto& arrow : surgered.hfa.kept_arrows) CHECK(arrow.head != "X4");
  CHECK(surgered.hfa.kept_arrows.size() == bnet.hfa.kept_arrows.size() - 2);

  // downstream TPMs untouched
  CHECK_FALSE(row_of(surgered, "O0", {0, 0}).has_value());
  check_row(surgered, "O0", {1, 1}, 0.0, 1.0);

  CHECK(marginal(surgered, "O0", {{"O1", true}}) == 1.0);
  CHECK(marginal(surgered, "X4") == 1.0);
  CHECK(marginal(do_intervene(bnet, "X4", false), "X4") == 0.0);
}

TEST_CASE("do on a root only swaps its TPM") {
  const auto bnet = golden_bnet();
  const auto surgered = do_intervene(bnet, "X7", true);
  CHECK(surgered.hfa.kept_arrows.size() == bnet.hfa.kept_arrows.size());
  check_row(surgered, "X7", {}, 0.0, 1.0);
  CHECK(marginal(surgered, "O1", {{"X7", true}}) == 1.0);
  CHECK_THROWS_AS(do_intervene(bnet, "Z9", true), std::out_of_range);
}

TEST_CASE("TPM report formatting") {
  const auto bnet = golden_bnet();
  const auto report = render_tpm_report(bnet);
  CHECK(report.find("node: X6, parents: ['O3', 'X8', 'X4']") !=
        std::string::npos);
  CHECK(report.find("(1,): [0.33333333, 0.66666667]") != std::string::npos);
  CHECK(report.find("(0, 0): [nan, nan]") != std::string::npos);
  CHECK(report.find("(): [0.25000000, 0.75000000]") != std::string::npos);
  CHECK(report.find("inf") == std::string::npos);

  const auto compat = render_tpm_report(bnet, /*paper_compat_inf=*/true);
  std::size_t infs = 0, pos = 0;
  while ((pos = compat.find("(): [inf, inf]", pos)) != std::string::npos) {
    ++infs;
    ++pos;
  }
  CHECK(infs == 3);  // X2, X7, X8
  CHECK(compat.find("0.75000000") == std::string::npos);
}

TEST_CASE("random libs: row sums, support, and the naive estimator oracle") {
  std::mt19937_64 seeds(31);
  int all_defined_bnets = 0;
  for (int round = 0; round < 20; ++round) {
    const auto corpus = ttt::generate_games(40, seeds());
    const auto collection = build_collection(corpus);
    for (const auto& lib : collection.libs) {
      const auto hfa = build_hfa(lib, 2, 2);
      const auto bnet = estimate_tpms(hfa, lib);

      bool all_defined = true;
      for (const auto& tpm : bnet.tpms) {
        const auto oracle = oracle_tpm_counts(tpm.node, tpm.parents, lib);
        for (std::size_t r = 0; r < tpm.rows.size(); ++r) {
          const auto pattern = Tpm::pattern_of(r, tpm.parents.size());
          const auto it = oracle.find(pattern);
          const long total = it == oracle.end() ? 0 : it->second.second;
          // a row is defined exactly when its pattern has support
          CHECK(tpm.rows[r].has_value() == (total > 0));
          if (!tpm.rows[r]) {
            all_defined = false;
            continue;
          }
          if (it == oracle.end()) continue;  // mismatch already flagged
          const double expect_present =
              static_cast<double>(it->second.first) / static_cast<double>(total);
          CHECK(tpm.rows[r]->p_present == expect_present);  // same division
          CHECK(tpm.rows[r]->p_absent >= 0.0);
          CHECK(tpm.rows[r]->p_present <= 1.0);
          CHECK(std::abs(tpm.rows[r]->p_absent + tpm.rows[r]->p_present - 1.0) <
                1e-9);
        }
      }

      if (all_defined && bnet.tpms.size() <= 12) {
        ++all_defined_bnets;
        // the joint over all full assignments must sum to one
        double sum = 0.0;
        const auto nodes = topo_order(hfa);
        for (std::size_t mask = 0; mask < (std::size_t(1) << nodes.size());
             ++mask) {
          std::map<EventLabel, bool> assignment;
          for (std::size_t b = 0; b < nodes.size(); ++b)
            assignment[nodes[b]] = (mask >> b) & 1;
          sum += joint_probability(bnet, assignment);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }
  CHECK(all_defined_bnets > 0);
}

TEST_CASE("isolating every node always yields a fully defined bnet") {
  const auto lib = golden_lib();
  const auto hfa = build_hfa(lib, 2, 100);  // nothing survives the threshold
  const auto bnet = estimate_tpms(hfa, lib);
  CHECK(bnet.undefined_row_count() == 0);
  double sum = 0.0;
  const auto nodes = topo_order(hfa);
  for (std::size_t mask = 0; mask < (std::size_t(1) << nodes.size()); ++mask) {
    std::map<EventLabel, bool> assignment;
    for (std::size_t b = 0; b < nodes.size(); ++b)
      assignment[nodes[b]] = (mask >> b) & 1;
    sum += joint_probability(bnet, assignment);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
}
