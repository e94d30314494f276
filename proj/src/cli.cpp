#include "dagatlas/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dagatlas/atlas.hpp"
#include "dagatlas/ttt.hpp"

namespace dagatlas {

namespace {

constexpr const char* kOutDirEnv = "DAGATLAS_OUT";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CorpusFormat sniff_format(const std::string& text) {
  for (const char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '[' ? CorpusFormat::ttt_list : CorpusFormat::cb_jsonl;
  }
  return CorpusFormat::cb_jsonl;  // empty corpus; format is irrelevant
}

std::pair<std::string, bool> parse_node_value(const std::string& text,
                                              const char* flag) {
  const auto eq = text.rfind('=');
  if (eq == std::string::npos || eq == 0 ||
      (text.substr(eq + 1) != "0" && text.substr(eq + 1) != "1"))
    throw std::runtime_error(std::string(flag) + " expects NODE=0 or NODE=1, got '" +
                             text + "'");
  return {text.substr(0, eq), text[eq + 1] == '1'};
}

std::string resolve_out_dir(std::string flag_value, const char* what) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv(kOutDirEnv)) {
    if (*env) return env;
  }
  throw std::runtime_error(std::string("no ") + what + ": pass the flag or set " +
                           kOutDirEnv);
}

struct GenerateArgs {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  CorpusFormat format = CorpusFormat::ttt_list;
  std::string out_path = "-";
};

int cmd_generate(const GenerateArgs& args, std::ostream& out,
                 std::ostream& err) {
  const Corpus corpus = ttt::generate_games(args.n, args.seed);
  std::ostringstream body;
  if (args.format == CorpusFormat::ttt_list)
    serialize_ttt_list(corpus, body);
  else
    serialize_corpus(corpus, body);

  if (args.out_path == "-") {
    out << body.str();
  } else {
    std::ofstream file(args.out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + args.out_path);
    file << body.str();
    err << "wrote " << corpus.cb_count() << " CBs to " << args.out_path << "\n";
  }
  return 0;
}

struct BuildArgs {
  std::string corpus_path;
  std::string out_dir;
  AtlasConfig config;
  std::optional<CorpusFormat> format;
};

int cmd_build(const BuildArgs& args, std::ostream& err) {
  const std::string bytes = read_file(args.corpus_path);
  const CorpusFormat format = args.format ? *args.format : sniff_format(bytes);
  const Corpus corpus = parse_corpus(bytes, format);

  const Atlas atlas = build_atlas(corpus, args.config);
  const std::string out_dir = resolve_out_dir(args.out_dir, "output directory");
  write_bundle(atlas, args.config, out_dir, fnv1a64(bytes));
  err << "built atlas: " << atlas.records.size() << " lib(s) from "
      << corpus.cb_count() << " CB(s) -> " << out_dir << "\n";
  return 0;
}

struct QueryArgs {
  std::string atlas_dir;
  int lib_index = 0;
  std::string target;
  std::vector<std::string> evidence;
  std::vector<std::string> interventions;
  std::size_t cap = 20;
};

int cmd_query(const QueryArgs& args, std::ostream& out) {
  const std::string atlas_dir =
      resolve_out_dir(args.atlas_dir, "atlas directory");
  Bnet bnet = load_bnet(atlas_dir, args.lib_index);

  for (const auto& intervention : args.interventions) {
    const auto [node, value] = parse_node_value(intervention, "--do");
    bnet = do_intervene(bnet, node, value);
  }
  std::map<EventLabel, bool> evidence;
  for (const auto& observed : args.evidence) {
    const auto [node, value] = parse_node_value(observed, "--evidence");
    evidence[node] = value;
  }

  const double p = marginal(bnet, args.target, evidence, args.cap);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.8f", p);
  out << buf << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"builds causal DAG atlases from chronologically framed event corpora"};
  app.require_subcommand(1);

  const std::map<std::string, CorpusFormat> format_names{
      {"ttt-list", CorpusFormat::ttt_list},
      {"cb-jsonl", CorpusFormat::cb_jsonl}};

  GenerateArgs generate_args;
  auto* generate = app.add_subcommand(
      "generate", "generate a corpus of random Tic-Tac-Toe games");
  generate->add_option("--n", generate_args.n, "number of games")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--seed", generate_args.seed, "corpus seed");
  generate
      ->add_option("--format", generate_args.format, "corpus file format")
      ->transform(CLI::CheckedTransformer(format_names))
      ->default_str("ttt-list");
  generate->add_option("--out", generate_args.out_path,
                       "output file ('-' for stdout)");

  BuildArgs build_args;
  std::string equality = "equal";
  auto* build = app.add_subcommand(
      "build", "build the DAG atlas bundle from a corpus file");
  build->add_option("corpus", build_args.corpus_path, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--out", build_args.out_dir,
                    "bundle directory (default: $" + std::string(kOutDirEnv) +
                        ")");
  build->add_option("--t-mem", build_args.config.t_mem, "memory time")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build
      ->add_option("--n-art", build_args.config.n_art,
                   "arrow repetition threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build
      ->add_option("--equality", equality,
                   "admit CBs order-isomorphic to c_max into a lib")
      ->check(CLI::IsMember({"proper", "equal"}))
      ->capture_default_str();
  build->add_flag("--grow-max", build_args.config.grow_max,
                  "let a tc-greater CB join a lib and become its c_max");
  build->add_flag("--emit-member-dags", build_args.config.emit_member_dags,
                  "also write one DOT file per member CB");
  build->add_flag("--paper-compat-inf", build_args.config.paper_compat_inf,
                  "print [inf, inf] rows for parentless nodes in tpm.txt");
  std::string build_format;
  build->add_option("--format", build_format, "corpus format (default: sniff)")
      ->check(CLI::IsMember({"ttt-list", "cb-jsonl"}));

  QueryArgs query_args;
  auto* query =
      app.add_subcommand("query", "query one lib's Bayesian network");
  query->add_option("--atlas", query_args.atlas_dir,
                    "bundle directory (default: $" + std::string(kOutDirEnv) +
                        ")");
  query->add_option("--lib", query_args.lib_index, "lib index")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  query->add_option("--target", query_args.target, "node whose probability of presence to report")
      ->required();
  query->add_option("--evidence", query_args.evidence,
                    "observed node, NODE=0|1 (repeatable)");
  query->add_option("--do", query_args.interventions,
                    "intervention applied before querying, NODE=0|1 (repeatable)");
  query->add_option("--cap", query_args.cap, "enumeration cap")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("dagatlas");
  for (const auto& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (generate->parsed()) return cmd_generate(generate_args, out, err);
    if (build->parsed()) {
      build_args.config.equality_policy = equality == "proper"
                                              ? EqualityPolicy::proper_only
                                              : EqualityPolicy::allow_equal;
      if (!build_format.empty())
        build_args.format = format_names.at(build_format);
      return cmd_build(build_args, err);
    }
    if (query->parsed()) return cmd_query(query_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace dagatlas
