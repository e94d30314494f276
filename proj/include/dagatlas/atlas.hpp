#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dagatlas/bnet.hpp"
#include "dagatlas/corpus.hpp"
#include "dagatlas/dag.hpp"
#include "dagatlas/time_order.hpp"

namespace dagatlas {

struct AtlasConfig {
  int t_mem = 2;
  int n_art = 2;
  EqualityPolicy equality_policy = EqualityPolicy::allow_equal;
  bool grow_max = false;
  bool emit_member_dags = false;
  bool paper_compat_inf = false;
  std::size_t enumeration_cap = 20;

  CollectionOptions collection_options() const {
    return {equality_policy, grow_max};
  }
};

// One processed lib: its hfa DAG, the bnet upgrade, and diagnostics.
struct LibRecord {
  HfaDag hfa;
  Bnet bnet;
  std::size_t undefined_rows = 0;
};

struct Atlas {
  Collection collection;
  std::vector<LibRecord> records;  // one per lib, same order
};

// Collection building is sequential (arrival order is semantics); per-lib
// DAG extraction and TPM estimation run in parallel and join in lib order.
Atlas build_atlas(const Corpus& corpus, const AtlasConfig& config);

// Writes the bundle: collection.jsonl, per-lib hfa.dot / tpm.txt /
// bnet.json (plus members/*.dot when configured), manifest.json last.
// Rebuilding from the same corpus and config is byte-identical.
void write_bundle(const Atlas& atlas, const AtlasConfig& config,
                  const std::filesystem::path& out_dir,
                  std::uint64_t input_digest);

std::filesystem::path lib_dir(const std::filesystem::path& out_dir,
                              int lib_index);

// Reloads one lib's bnet from a bundle written by write_bundle.
Bnet load_bnet(const std::filesystem::path& out_dir, int lib_index);

// FNV-1a 64-bit, used as the bundle's input digest.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace dagatlas
