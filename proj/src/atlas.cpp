#include "dagatlas/atlas.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

namespace dagatlas {

namespace {

using nlohmann::ordered_json;

LibRecord build_record(const CbLib& lib, int lib_index,
                       const AtlasConfig& config) {
  LibRecord record;
  record.hfa = build_hfa(lib, config.t_mem, config.n_art, lib_index);
  record.bnet = estimate_tpms(record.hfa, lib);
  record.undefined_rows = record.bnet.undefined_row_count();
  return record;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

ordered_json bnet_to_json(const LibRecord& record) {
  ordered_json j;
  j["lib"] = record.hfa.lib_index;
  j["t_mem"] = record.hfa.t_mem;
  j["n_art"] = record.hfa.n_art;

  const auto frames = node_frame_map(record.bnet.hfa);
  auto& jnodes = j["nodes"] = ordered_json::array();
  for (const auto& tpm : record.bnet.tpms) {
    ordered_json jnode;
    jnode["label"] = tpm.node;
    jnode["frame"] = frames.at(tpm.node);
    jnode["parents"] = tpm.parents;
    auto& jrows = jnode["rows"] = ordered_json::array();
    for (std::size_t row = 0; row < tpm.rows.size(); ++row) {
      ordered_json jrow;
      jrow["pattern"] = Tpm::pattern_of(row, tpm.parents.size());
      if (tpm.rows[row])
        jrow["p"] = {tpm.rows[row]->p_absent, tpm.rows[row]->p_present};
      else
        jrow["p"] = nullptr;
      jrows.push_back(std::move(jrow));
    }
    jnodes.push_back(std::move(jnode));
  }

  auto& jarrows = j["arrows"] = ordered_json::array();
  for (const auto& arrow : record.bnet.hfa.kept_arrows)
    jarrows.push_back(ordered_json{
        {"tail", arrow.tail}, {"head", arrow.head}, {"count", arrow.count}});
  j["undefined_rows"] = record.undefined_rows;
  return j;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Atlas build_atlas(const Corpus& corpus, const AtlasConfig& config) {
  if (config.t_mem < 1) throw std::invalid_argument("t_mem must be >= 1");
  if (config.n_art < 1) throw std::invalid_argument("n_art must be >= 1");

  Atlas atlas;
  atlas.collection = build_collection(corpus, config.collection_options());
  const std::size_t n_libs = atlas.collection.libs.size();
  atlas.records.resize(n_libs);

  const std::size_t hw = std::thread::hardware_concurrency();
  const std::size_t n_workers = std::min(n_libs, hw == 0 ? std::size_t(1) : hw);
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < n_libs; ++i)
      atlas.records[i] =
          build_record(atlas.collection.libs[i], static_cast<int>(i), config);
    return atlas;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_libs) return;
      try {
        atlas.records[i] =
            build_record(atlas.collection.libs[i], static_cast<int>(i), config);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_workers);
  for (std::size_t t = 0; t < n_workers; ++t) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  if (first_error) std::rethrow_exception(first_error);
  return atlas;
}

std::filesystem::path lib_dir(const std::filesystem::path& out_dir,
                              int lib_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "lib%04d", lib_index);
  return out_dir / buf;
}

void write_bundle(const Atlas& atlas, const AtlasConfig& config,
                  const std::filesystem::path& out_dir,
                  std::uint64_t input_digest) {
  std::filesystem::create_directories(out_dir);

  {
    std::ostringstream collection;
    for (const auto& summary : summarize(atlas.collection)) {
      ordered_json j;
      j["lib"] = summary.lib_index;
      j["n_cb"] = summary.n_cb;
      j["c_max"] = summary.c_max_id;
      j["members"] = summary.member_ids;
      collection << j.dump() << '\n';
    }
    write_file(out_dir / "collection.jsonl", collection.str());
  }

  for (std::size_t i = 0; i < atlas.records.size(); ++i) {
    const LibRecord& record = atlas.records[i];
    const auto dir = lib_dir(out_dir, static_cast<int>(i));
    std::filesystem::create_directories(dir);
    write_file(dir / "hfa.dot", to_dot(record.hfa));
    write_file(dir / "tpm.txt",
               render_tpm_report(record.bnet, config.paper_compat_inf));
    write_file(dir / "bnet.json", bnet_to_json(record).dump(2) + "\n");

    if (config.emit_member_dags) {
      const auto member_dir = dir / "members";
      std::filesystem::create_directories(member_dir);
      const CbLib& lib = atlas.collection.libs[i];
      for (std::size_t m = 0; m < lib.members.size(); ++m) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "g%04d.dot", static_cast<int>(m));
        write_file(member_dir / buf,
                   to_dot(build_event_dag(lib.members[m], config.t_mem)));
      }
    }
  }

  // Manifest last: its presence marks a complete bundle.
  ordered_json manifest;
  manifest["generator"] = "dagatlas";
  manifest["config"] = ordered_json{
      {"t_mem", config.t_mem},
      {"n_art", config.n_art},
      {"equality",
       config.equality_policy == EqualityPolicy::allow_equal ? "equal"
                                                             : "proper"},
      {"grow_max", config.grow_max},
      {"emit_member_dags", config.emit_member_dags},
      {"paper_compat_inf", config.paper_compat_inf},
      {"enumeration_cap", config.enumeration_cap},
  };
  // every ingested CB is a member of at least one lib
  std::unordered_set<std::string> distinct_ids;
  std::size_t member_count = 0;
  for (const auto& lib : atlas.collection.libs) {
    member_count += lib.n_cb();
    for (const auto& member : lib.members) distinct_ids.insert(member.id);
  }
  manifest["input"] = ordered_json{
      {"digest_fnv1a64", hex64(input_digest)},
      {"cb_count", distinct_ids.size()},
      {"lib_memberships", member_count},
  };
  manifest["lib_count"] = atlas.records.size();
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

Bnet load_bnet(const std::filesystem::path& out_dir, int lib_index) {
  const auto path = lib_dir(out_dir, lib_index) / "bnet.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("nodes"))
    throw std::runtime_error("malformed bnet file: " + path.string());

  Bnet bnet;
  bnet.hfa.lib_index = j.value("lib", lib_index);
  bnet.hfa.t_mem = j.value("t_mem", 1);
  bnet.hfa.n_art = j.value("n_art", 1);
  std::unordered_set<std::string> seen;  // nodes must arrive parents-first
  for (const auto& jnode : j["nodes"]) {
    bnet.hfa.nodes.push_back(
        {jnode.at("label").get<std::string>(), jnode.at("frame").get<int>()});
    Tpm tpm;
    tpm.node = jnode.at("label").get<std::string>();
    tpm.parents = jnode.at("parents").get<std::vector<std::string>>();
    for (const auto& parent : tpm.parents)
      if (!seen.contains(parent))
        throw std::runtime_error("malformed bnet file (parent '" + parent +
                                 "' not defined before '" + tpm.node +
                                 "'): " + path.string());
    const auto& jrows = jnode.at("rows");
    if (jrows.size() != std::size_t(1) << tpm.parents.size())
      throw std::runtime_error("malformed bnet file (row count): " +
                               path.string());
    tpm.rows.resize(jrows.size());
    for (const auto& jrow : jrows) {
      const auto pattern = jrow.at("pattern").get<PresencePattern>();
      if (jrow.at("p").is_null()) continue;
      const auto p = jrow.at("p").get<std::vector<double>>();
      if (p.size() != 2)
        throw std::runtime_error("malformed bnet row in " + path.string());
      tpm.rows[tpm.row_index(pattern)] = TpmRow{p[0], p[1]};
    }
    seen.insert(tpm.node);
    bnet.tpms.push_back(std::move(tpm));
  }
  std::sort(bnet.hfa.nodes.begin(), bnet.hfa.nodes.end(),
            [](const DagNode& a, const DagNode& b) {
              return std::tie(a.frame, a.label) < std::tie(b.frame, b.label);
            });
  if (j.contains("arrows"))
    for (const auto& jarrow : j["arrows"])
      bnet.hfa.kept_arrows.push_back({jarrow.at("tail").get<std::string>(),
                                      jarrow.at("head").get<std::string>(),
                                      jarrow.at("count").get<long>()});
  return bnet;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

}  // namespace dagatlas
