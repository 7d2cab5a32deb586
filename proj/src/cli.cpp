#include "tlsum/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <mutex>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "tlsum/atoms.hpp"
#include "tlsum/consensus.hpp"
#include "tlsum/dataset.hpp"
#include "tlsum/parallel.hpp"
#include "tlsum/pipelines.hpp"
#include "tlsum/selection.hpp"
#include "tlsum/text.hpp"
#include "tlsum/timeline_text.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace tlsum {

namespace {

std::size_t positive(const json& v, const char* key) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw Error(ErrorCode::kConfig, std::string("'") + key + "' must be an integer >= 1");
  }
  return v.get<std::size_t>();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kUnreadable, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kUnreadable, "cannot write " + p.string());
  out << content;
}

json diagnostics_json(const Diagnostics& d) {
  json a = json::array();
  for (const auto& x : d) a.push_back({{"code", x.code}, {"message", x.message}});
  return a;
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
  static const std::regex secret(R"(key|token|secret|password|credential)", std::regex::icase);
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (std::regex_search(key, secret)) {
      throw Error(ErrorCode::kConfig, "'" + key + "' looks like a credential; set it in the environment instead");
    }
    if (key == "workers") {
      c.workers = positive(v, "workers");
    } else if (key == "decompose_concurrency") {
      c.decompose_concurrency = positive(v, "decompose_concurrency");
    } else if (key == "cache_dir") {
      c.cache_dir = v.get<std::string>();
    } else if (key == "length_budget") {
      c.length_budget = positive(v, "length_budget");
    } else if (key == "fan_in") {
      c.fan_in = positive(v, "fan_in");
      if (c.fan_in < 2) throw Error(ErrorCode::kConfig, "'fan_in' must be >= 2");
    } else if (key == "recursive_merge") {
      c.recursive_merge = v.get<bool>();
    } else if (key == "support_k") {
      c.support_k = positive(v, "support_k");
    } else if (key == "fallback_to_rules") {
      c.fallback_to_rules = v.get<bool>();
    } else if (key == "max_attempts") {
      c.max_attempts = static_cast<int>(positive(v, "max_attempts"));
    } else if (key == "prompt_dir") {
      c.prompt_dir = v.get<std::string>();
    } else if (key == "language") {
      c.language = v.get<std::string>();
    } else if (key == "decomposer") {
      c.decomposer = v.get<std::string>();
      if (c.decomposer != "rule-based" && c.decomposer != "prompted") {
        throw Error(ErrorCode::kConfig, "'decomposer' must be rule-based or prompted");
      }
    } else if (key == "entailment") {
      c.entailment = v.get<std::string>();
      if (c.entailment != "exact-match" && c.entailment != "nli") {
        throw Error(ErrorCode::kConfig, "'entailment' must be exact-match or nli");
      }
    } else if (key == "nli_premise") {
      const auto s = v.get<std::string>();
      if (s == "joined") {
        c.nli_premise_mode = PremiseMode::kJoinedAtoms;
      } else if (s == "per-atom") {
        c.nli_premise_mode = PremiseMode::kPerAtom;
      } else {
        throw Error(ErrorCode::kConfig, "'nli_premise' must be joined or per-atom");
      }
    } else if (key == "granu_denominator") {
      const auto s = v.get<std::string>();
      if (s == "predicted") {
        c.granu_denominator = GranuDenominator::kPredictedEdges;
      } else if (s == "reference") {
        c.granu_denominator = GranuDenominator::kReferenceEdges;
      } else {
        throw Error(ErrorCode::kConfig, "'granu_denominator' must be predicted or reference");
      }
    } else if (key == "coherence_exemplars") {
      c.coherence_exemplars = v.get<std::string>();
    } else {
      throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
    }
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
  try {
    return run_config_from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, path.string() + ": " + e.what());
  }
}

namespace {

struct Options {
  fs::path dataset;
  std::string level;
  std::optional<fs::path> out;
  std::optional<fs::path> config;
  std::optional<fs::path> mock;
  std::string method = "lp";
  bool gold = false;
  std::string style = "count";
  std::string instruction;
  std::optional<int> n;
  fs::path predictions;
  std::string label_method;
  std::string label_model;
  fs::path prompts_out;
};

// "GN", "G10", "G5", "G<k>" or "n:<int>".
struct LevelArg {
  std::string name;  // empty for n:<int>
  std::optional<int> count;
};

LevelArg parse_level(const std::string& s) {
  static const std::regex n_re(R"(^n:(\d{1,6})$)");
  std::smatch m;
  if (std::regex_match(s, m, n_re)) {
    const int n = std::stoi(m[1].str());
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n:<int> needs a positive count");
    return {"", n};
  }
  const std::string name = canonical_level(s);
  if (name != "GN" && !level_node_count(name)) throw Error(ErrorCode::kInvalidArgument, "bad level '" + s + "'");
  return {name, level_node_count(name)};
}

// Owns every backend a command may need.
struct Backends {
  RunConfig config;
  PromptStore prompts;
  json mock;
  std::unique_ptr<AuditLog> audit;
  std::vector<std::unique_ptr<ChatClient>> owned;
  std::unique_ptr<Decomposer> decomposer;
  std::unique_ptr<EntailmentBackend> entail_inner;
  std::unique_ptr<CachingEntailment> entailment;
  std::unique_ptr<AtomCache> cache;
  std::string exemplars;

  // A retried, audited client from the mock script section or environment.
  ChatClient* chat(const std::string& mock_key, const std::string& env_prefix, const std::string& env_fallback = {}) {
    std::unique_ptr<ChatClient> base;
    if (!mock.is_null()) {
      if (!mock.contains(mock_key)) return nullptr;
      base.reset(new ScriptedChatClient(ScriptedChatClient::from_json(mock.at(mock_key))));
    } else {
      auto ep = endpoint_from_env(env_prefix);
      if (!ep && !env_fallback.empty()) ep = endpoint_from_env(env_fallback);
      if (!ep) return nullptr;
      base = std::make_unique<HttpChatClient>(*ep);
    }
    ChatClient* inner = base.get();
    owned.push_back(std::move(base));
    owned.push_back(std::make_unique<RetryingClient>(*inner, RetryPolicy{config.max_attempts}, audit.get()));
    return owned.back().get();
  }

  void init_decomposer() {
    if (config.decomposer == "prompted" || (!mock.is_null() && mock.contains("decomposer"))) {
      ChatClient* c = chat("decomposer", "TLSUM_DECOMPOSE", "TLSUM_CHAT");
      if (!c) throw Error(ErrorCode::kConfig, "prompted decomposition needs TLSUM_DECOMPOSE_ENDPOINT or --mock");
      decomposer = std::make_unique<PromptedDecomposer>(*c, prompts);
    } else {
      decomposer = std::make_unique<RuleBasedDecomposer>();
    }
  }

  void init_entailment() {
    if (config.entailment == "nli") {
      auto ep = endpoint_from_env("TLSUM_NLI");
      if (!ep) throw Error(ErrorCode::kConfig, "entailment 'nli' needs TLSUM_NLI_ENDPOINT");
      entail_inner = std::make_unique<RemoteNliEntailment>(*ep, config.nli_premise_mode);
    } else {
      entail_inner = std::make_unique<ExactMatchEntailment>();
    }
    entailment = std::make_unique<CachingEntailment>(*entail_inner);
  }
};

std::unique_ptr<Backends> make_backends(const Options& o) {
  auto b = std::make_unique<Backends>();
  if (o.config) b->config = load_run_config(*o.config);
  b->prompts = PromptStore(b->config.prompt_dir, b->config.language);
  if (o.mock) {
    try {
      b->mock = json::parse(read_file(*o.mock));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kConfig, o.mock->string() + ": " + e.what());
    }
    if (!b->mock.is_object()) throw Error(ErrorCode::kConfig, "mock script must be a JSON object");
  }
  if (o.out) b->audit = std::make_unique<AuditLog>(*o.out / "audit.jsonl");
  if (b->config.cache_dir) {
    b->cache = std::make_unique<AtomCache>(*b->config.cache_dir);
  } else if (o.out) {
    b->cache = std::make_unique<AtomCache>(*o.out / "cache");
  } else {
    b->cache = std::make_unique<AtomCache>();
  }
  if (b->config.coherence_exemplars) b->exemplars = read_file(*b->config.coherence_exemplars);
  return b;
}

LoadedDataset load_sorted(const fs::path& path) {
  LoadedDataset d = load_dataset(path);
  for (const auto& diag : d.diagnostics) spdlog::warn("{}: {}", diag.code, diag.message);
  std::stable_sort(d.records.begin(), d.records.end(),
                   [](const DatasetRecord& a, const DatasetRecord& b) { return a.topic.id < b.topic.id; });
  return d;
}

DecomposePolicy policy_of(const RunConfig& c) { return {c.fallback_to_rules, c.decompose_concurrency}; }

int cmd_decompose(const Options& o, std::ostream& out) {
  auto b = make_backends(o);
  b->init_decomposer();
  std::optional<std::string> level;
  if (!o.level.empty()) {
    auto l = parse_level(o.level);
    if (l.name.empty()) throw Error(ErrorCode::kInvalidArgument, "decompose needs a named level");
    level = l.name;
  }
  LoadedDataset data = load_sorted(o.dataset);

  struct TopicResult {
    std::size_t ref_atoms = 0;
    std::size_t article_atoms = 0;
    DecomposeStats stats;
    Diagnostics diags;
    bool ok = true;
  };
  std::vector<TopicResult> results(data.records.size());
  const auto policy = policy_of(b->config);
  parallel_for(data.records.size(), b->config.workers, [&](std::size_t i) {
    auto& rec = data.records[i];
    auto& r = results[i];
    try {
      for (auto& [name, tl] : rec.reference_timelines) {
        if (level && name != *level) continue;
        auto d = decompose_timeline(tl, *b->decomposer, b->cache.get(), policy);
        tl = std::move(d.timeline);
        r.ref_atoms += tl.atom_count();
        r.stats += d.stats;
        r.diags.insert(r.diags.end(), d.diagnostics.begin(), d.diagnostics.end());
      }
      for (const auto& a : rec.articles) {
        auto d = decompose_article(a, *b->decomposer, b->cache.get(), policy);
        r.article_atoms += d.atoms.size();
        r.stats += d.stats;
        r.diags.insert(r.diags.end(), d.diagnostics.begin(), d.diagnostics.end());
      }
    } catch (const Error& e) {
      r.ok = false;
      r.diags.push_back({"topic_failed", e.what()});
    }
  });

  DecomposeStats total;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    total += r.stats;
    for (const auto& d : r.diags) spdlog::warn("{} {}: {}", data.records[i].topic.id, d.code, d.message);
    out << data.records[i].topic.id << ": " << r.ref_atoms << " reference atoms, " << r.article_atoms
        << " article atoms" << (r.ok ? "" : " (failed)") << "\n";
  }
  out << total.backend_calls << " backend calls, " << total.cache_hits << " cache hits, " << total.fallbacks
      << " fallbacks\n";
  if (o.out) write_dataset(*o.out / "atoms.jsonl", data.records);
  return 0;
}

GranularitySpec granularity_for(const Options& o, const LevelArg& level, const DatasetRecord& rec,
                                std::span<const DatasetRecord> all) {
  if (o.style == "count") {
    if (o.n) return NodeCount{*o.n};
    if (level.count) return NodeCount{*level.count};
    const Timeline* ref = rec.reference(level.name);
    if (!ref) throw Error(ErrorCode::kMissingReference, "no " + level.name + " reference to size the timeline");
    return NodeCount{static_cast<int>(ref->size())};
  }
  if (o.style == "prompt") {
    std::string which = o.instruction;
    if (which.empty()) which = level.name == "GN" ? "fine" : "coarse";
    return PromptInstruction{which == "fine" ? InstructionStyle::kFine : InstructionStyle::kCoarse};
  }
  if (level.name.empty()) throw Error(ErrorCode::kInvalidArgument, "oneshot needs a named level");
  for (const auto& other : all) {
    if (other.topic.id == rec.topic.id) continue;
    if (const Timeline* ex = other.reference(level.name)) return OneShotExemplar{*ex};
  }
  throw Error(ErrorCode::kMissingReference, "no other topic has a " + level.name + " reference to use as exemplar");
}

int cmd_generate(const Options& o, std::ostream& out) {
  if (!o.out) throw Error(ErrorCode::kInvalidArgument, "generate needs --out");
  const Method method = parse_method(o.method);
  const LevelArg level = parse_level(o.level.empty() ? "G10" : o.level);
  auto b = make_backends(o);
  ChatClient* client = b->chat("generator", "TLSUM_CHAT");
  if (!client) throw Error(ErrorCode::kConfig, "no generator: set TLSUM_CHAT_ENDPOINT or pass --mock");
  LoadedDataset data = load_sorted(o.dataset);

  PipelineConfig pc;
  pc.fan_in = b->config.fan_in;
  pc.recursive_merge = b->config.recursive_merge;
  pc.max_concurrency = b->config.workers;
  pc.prompts = b->prompts;

  struct TopicResult {
    std::optional<GenerationResult> result;
    std::string error;
  };
  std::vector<TopicResult> results(data.records.size());
  parallel_for(data.records.size(), b->config.workers, [&](std::size_t i) {
    const auto& rec = data.records[i];
    try {
      GenerationJob job;
      job.job_id = rec.topic.id;
      job.method = method;
      job.topic = rec.topic;
      job.model = client->id();
      job.length_budget = b->config.length_budget;
      job.granularity = granularity_for(o, level, rec, data.records);
      if (method != Method::kTO) job.articles = rec.articles;
      if (o.gold) job = apply_gold_timestamps(std::move(job), level.name.empty() ? nullptr : rec.reference(level.name));
      results[i].result = generate(job, *client, pc);
    } catch (const Error& e) {
      results[i].error = e.what();
    }
  });

  json run = {{"command", "generate"},
              {"method", to_string(method)},
              {"level", o.level.empty() ? "G10" : o.level},
              {"style", o.style},
              {"gold_timestamps", o.gold},
              {"model", client->id()}};
  json topics = json::array();
  std::size_t ok = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& id = data.records[i].topic.id;
    const auto& r = results[i];
    if (r.result) {
      ++ok;
      write_file(*o.out / "predictions" / (id + ".txt"), serialize_timeline(r.result->timeline) + "\n");
      topics.push_back({{"topic", id},
                        {"status", "ok"},
                        {"nodes", r.result->timeline.size()},
                        {"model_calls", r.result->model_calls},
                        {"diagnostics", diagnostics_json(r.result->diagnostics)}});
      out << id << ": " << r.result->timeline.size() << " nodes\n";
    } else {
      spdlog::error("{}: {}", id, r.error);
      topics.push_back({{"topic", id}, {"status", "failed"}, {"error", r.error}});
      out << id << ": failed\n";
    }
  }
  run["topics"] = topics;
  write_file(*o.out / "run.json", run.dump(2) + "\n");
  out << ok << " of " << results.size() << " topics generated\n";
  return ok > 0 ? 0 : 2;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  if (!o.out) throw Error(ErrorCode::kInvalidArgument, "evaluate needs --out");
  const LevelArg level = parse_level(o.level.empty() ? "G10" : o.level);
  if (level.name.empty()) throw Error(ErrorCode::kInvalidArgument, "evaluate needs a named level");
  if (!fs::is_directory(o.predictions)) {
    throw Error(ErrorCode::kUnreadable, "predictions directory not found: " + o.predictions.string());
  }
  auto b = make_backends(o);
  b->init_decomposer();
  b->init_entailment();
  ChatClient* judge = b->chat("judge", "TLSUM_JUDGE");
  LoadedDataset data = load_sorted(o.dataset);

  EvalConfig ec;
  ec.support_k = b->config.support_k;
  ec.decompose = policy_of(b->config);
  ec.granu_denominator = b->config.granu_denominator;
  ec.coherence.exemplars = b->exemplars;
  ec.workers = 1;
  EvalBackends eb{*b->decomposer, b->cache.get(), *b->entailment, judge, &b->prompts};

  std::vector<std::optional<MetricReport>> reports(data.records.size());
  std::vector<std::string> skipped(data.records.size());
  parallel_for(data.records.size(), b->config.workers, [&](std::size_t i) {
    const auto& rec = data.records[i];
    const fs::path file = o.predictions / (rec.topic.id + ".txt");
    if (!fs::exists(file)) {
      skipped[i] = "no prediction file " + file.filename().string();
      return;
    }
    try {
      ParsedTimeline parsed = parse_timeline_text(read_file(file));
      parsed.timeline.set_topic_id(rec.topic.id);
      MetricReport r = evaluate_topic(rec, parsed.timeline, level.name, eb, ec);
      r.method = o.label_method;
      r.model = o.label_model;
      r.diagnostics.insert(r.diagnostics.begin(), parsed.skipped.begin(), parsed.skipped.end());
      reports[i] = std::move(r);
    } catch (const Error& e) {
      skipped[i] = e.what();
    }
  });

  std::vector<MetricReport> done;
  std::string lines;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!reports[i]) {
      spdlog::warn("{}: skipped: {}", data.records[i].topic.id, skipped[i]);
      continue;
    }
    lines += to_json(*reports[i]).dump() + "\n";
    done.push_back(std::move(*reports[i]));
  }
  if (done.empty()) {
    out << "no topic could be evaluated\n";
    return 2;
  }
  const AggregateReport agg = aggregate(done);
  write_file(*o.out / "reports.jsonl", lines);
  write_file(*o.out / "aggregate.json", to_json(agg).dump(2) + "\n");
  const std::string table = render_table(agg);
  write_file(*o.out / "aggregate.txt", table);
  out << table;
  return 0;
}

int cmd_consensus(const Options& o, std::ostream& out) {
  if (!o.out) throw Error(ErrorCode::kInvalidArgument, "consensus needs --out");
  const int n = o.n.value_or(10);
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "--n must be positive");
  const LevelArg level = parse_level(o.level.empty() ? "GN" : o.level);
  if (level.name.empty()) throw Error(ErrorCode::kInvalidArgument, "consensus needs a named source level");
  auto b = make_backends(o);
  b->init_decomposer();
  ChatClient* selector = b->chat("selector", "TLSUM_CHAT");
  if (!selector) throw Error(ErrorCode::kConfig, "no selector: set TLSUM_CHAT_ENDPOINT or pass --mock");
  LoadedDataset data = load_sorted(o.dataset);

  struct TopicResult {
    std::optional<ConsensusRun> run;
    std::vector<AtomGroup> groups;
    std::string error;
  };
  std::vector<TopicResult> results(data.records.size());
  const auto policy = policy_of(b->config);
  parallel_for(data.records.size(), b->config.workers, [&](std::size_t i) {
    const auto& rec = data.records[i];
    try {
      const Timeline* src = rec.reference(level.name);
      if (!src) throw Error(ErrorCode::kMissingReference, "no " + level.name + " reference");
      auto d = decompose_timeline(*src, *b->decomposer, b->cache.get(), policy);
      results[i].groups = group_atoms_by_timestamp(d.timeline);
      results[i].run = run_consensus(results[i].groups, static_cast<std::size_t>(n), rec.topic, *selector, b->prompts);
    } catch (const Error& e) {
      results[i].error = e.what();
    }
  });

  AgreementStats total;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& rec = data.records[i];
    const auto& r = results[i];
    if (!r.run) {
      spdlog::error("{}: {}", rec.topic.id, r.error);
      out << rec.topic.id << ": failed\n";
      continue;
    }
    ++ok;
    const fs::path dir = *o.out / "consensus";
    write_file(dir / (rec.topic.id + ".json"), to_json(*r.run).dump(2) + "\n");
    write_file(dir / (rec.topic.id + ".edit.txt"), write_edit_file(rec.topic, r.groups, r.run->result));
    total.full += r.run->stats.full;
    total.partial_12 += r.run->stats.partial_12;
    total.partial_13 += r.run->stats.partial_13;
    total.partial_23 += r.run->stats.partial_23;
    total.none += r.run->stats.none;
    out << rec.topic.id << ": " << r.run->result.final.size() << " groups selected\n";
  }
  if (ok == 0) return 2;
  const std::string table = render_agreement_table(total);
  write_file(*o.out / "consensus" / "agreement.txt", table);
  out << table;
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Timeline summarization generation and evaluation toolkit", "tlsum"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sc, bool needs_dataset) {
    auto* d = sc->add_option("--dataset", o.dataset, "JSONL dataset");
    if (needs_dataset) d->required();
    sc->add_option("--out", o.out, "Run directory");
    sc->add_option("--config", o.config, "JSON run configuration");
    sc->add_option("--mock", o.mock, "Scripted backends for offline runs");
  };

  auto* dec = app.add_subcommand("decompose", "Decompose reference timelines and articles into atoms");
  common(dec, true);
  dec->add_option("--level", o.level, "Only this reference level");

  auto* gen = app.add_subcommand("generate", "Generate one timeline per topic");
  common(gen, true);
  gen->add_option("--method", o.method, "lp, hm or to")->check(CLI::IsMember({"lp", "hm", "to"}, CLI::ignore_case));
  gen->add_option("--level", o.level, "GN, G10, G5 or n:<int>");
  gen->add_flag("--gold-timestamps", o.gold, "Give the reference dates to the model");
  gen->add_option("--granularity-style", o.style, "count, prompt or oneshot")
      ->check(CLI::IsMember({"count", "prompt", "oneshot"}));
  gen->add_option("--instruction", o.instruction, "fine or coarse (prompt style)")
      ->check(CLI::IsMember({"fine", "coarse"}));
  gen->add_option("--n", o.n, "Node count override (count style)");

  auto* ev = app.add_subcommand("evaluate", "Score predicted timelines");
  common(ev, true);
  ev->add_option("--predictions", o.predictions, "Directory of <topic>.txt timelines")->required();
  ev->add_option("--level", o.level, "Target reference level");
  ev->add_option("--method", o.label_method, "Method label for the report");
  ev->add_option("--model", o.label_model, "Model label for the report");

  auto* con = app.add_subcommand("consensus", "Role-based selection of atom groups");
  common(con, true);
  con->add_option("--n", o.n, "Groups to select");
  con->add_option("--level", o.level, "Source reference level (default GN)");

  auto* pr = app.add_subcommand("prompts", "Write the built-in prompt templates");
  pr->add_option("--out", o.prompts_out, "Directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (dec->parsed()) return cmd_decompose(o, out);
    if (gen->parsed()) return cmd_generate(o, out);
    if (ev->parsed()) return cmd_evaluate(o, out);
    if (con->parsed()) return cmd_consensus(o, out);
    PromptStore::dump_builtin(o.prompts_out);
    out << PromptStore::keys().size() << " templates written to " << o.prompts_out.string() << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tlsum
