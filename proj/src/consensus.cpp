#include "tlsum/consensus.hpp"

#include <algorithm>
#include <cstdio>
#include <regex>
#include <set>
#include <tuple>

#include "tlsum/json_extract.hpp"
#include "tlsum/parallel.hpp"
#include "tlsum/text.hpp"

namespace tlsum {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::kNewsEditor: return "news_editor";
    case Role::kJournalist: return "journalist";
    case Role::kNlpResearcher: return "nlp_researcher";
  }
  return "news_editor";
}

Role parse_role(std::string_view s) {
  for (Role r : kRoles) {
    if (text::ascii_lower(s) == to_string(r)) return r;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown role '" + std::string(s) + "'");
}

int role_number(Role r) { return static_cast<int>(r) + 1; }

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kThreeVote: return "three-vote";
    case Provenance::kTwoVote: return "two-vote";
    case Provenance::kFill: return "fill";
  }
  return "fill";
}

std::string render_groups(std::span<const AtomGroup> groups) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& g : groups) {
    j[group_label(g.group_id)] = {{"date", g.timestamp.to_string()}, {"atoms", atom_texts(g.atoms)}};
  }
  return j.dump(-1, ' ', false);
}

namespace {

bool is_array(const nlohmann::json& j) { return j.is_array(); }
bool is_object(const nlohmann::json& j) { return j.is_object(); }

int resolve_reference(const nlohmann::json& item) {
  if (item.is_number_integer()) return item.get<int>();
  if (!item.is_string()) return -1;
  static const std::regex re(R"(^\s*(?:group)?[\s_\-]*(\d{1,9})\s*$)", std::regex::icase);
  std::smatch m;
  const std::string s = item.get<std::string>();
  if (!std::regex_match(s, m, re)) return -1;
  return std::stoi(m[1].str());
}

}  // namespace

std::vector<int> parse_group_references(std::string_view response) {
  std::optional<nlohmann::json> arr = find_first_json(response, '[', &is_array);
  if (!arr) {
    if (auto obj = find_first_json(response, '{', &is_object)) {
      for (const auto& [k, v] : obj->items()) {
        if (v.is_array()) {
          arr = v;
          break;
        }
      }
    }
  }
  if (!arr) throw Error(ErrorCode::kUnparseableResponse, "no group list in response");
  std::vector<int> ids;
  for (const auto& item : *arr) ids.push_back(resolve_reference(item));
  return ids;
}

RoleSelection role_select(std::span<const AtomGroup> groups, Role role, std::size_t n, const Topic& topic,
                          ChatClient& client, const PromptStore& prompts, const RoleSelectOptions& options) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "N must be positive");
  if (groups.size() < n) {
    throw Error(ErrorCode::kInsufficientGroups,
                std::to_string(groups.size()) + " groups available, " + std::to_string(n) + " requested");
  }
  std::set<int> universe;
  for (const auto& g : groups) universe.insert(g.group_id);

  const std::string role_key = "consensus." + std::string(to_string(role));
  ChatRequest req;
  req.job_id = "consensus:" + topic.id + ":" + std::string(to_string(role));
  req.system = prompts.get(role_key + ".system");
  req.user = fill_template(prompts.get(role_key + ".input"),
                           {{"N", std::to_string(n)},
                            {"EXAMPLE", options.example.empty() ? "(none)" : options.example},
                            {"TOPIC", topic.query},
                            {"GROUPS", render_groups(groups)}});
  const std::string base_user = req.user;

  RoleSelection sel;
  sel.role = role;
  std::set<int> chosen;
  auto absorb = [&](const std::string& response) {
    std::vector<int> ids;
    try {
      ids = parse_group_references(response);
    } catch (const Error& e) {
      add_diagnostic(&sel.diagnostics, "unparseable_selection", e.what());
      return;
    }
    for (int id : ids) {
      if (!universe.count(id)) {
        add_diagnostic(&sel.diagnostics, "unknown_group",
                       id < 0 ? "unrecognized group reference dropped" : group_label(id) + " does not exist");
      } else if (chosen.count(id)) {
        add_diagnostic(&sel.diagnostics, "duplicate_group", group_label(id) + " listed twice");
      } else if (sel.selected.size() >= n) {
        add_diagnostic(&sel.diagnostics, "truncated_selection", group_label(id) + " beyond the first N dropped");
      } else {
        chosen.insert(id);
        sel.selected.push_back(id);
      }
    }
  };

  absorb(client.complete(req));
  ++sel.model_calls;
  for (int repad = 1; sel.selected.size() < n && repad <= options.max_repads; ++repad) {
    std::vector<std::string> kept;
    for (int id : sel.selected) kept.push_back("\"" + group_label(id) + "\"");
    add_diagnostic(&sel.diagnostics, "repad",
                   "re-prompt " + std::to_string(repad) + ": have " + std::to_string(sel.selected.size()) + " of " +
                       std::to_string(n));
    req.user = base_user + "\n\n" +
               fill_template(prompts.get("consensus.repad"),
                             {{"HAVE", std::to_string(sel.selected.size())},
                              {"KEPT", "[" + text::join(kept, ", ") + "]"},
                              {"MISSING", std::to_string(n - sel.selected.size())}});
    req.job_id = "consensus:" + topic.id + ":" + std::string(to_string(role)) + ":repad" + std::to_string(repad);
    absorb(client.complete(req));
    ++sel.model_calls;
  }
  if (sel.selected.size() < n) {
    throw Error(ErrorCode::kPadFailure, std::string(to_string(role)) + " selected " +
                                            std::to_string(sel.selected.size()) + " of " + std::to_string(n) +
                                            " groups after re-prompting");
  }
  return sel;
}

ConsensusResult consensus_merge(std::span<const AtomGroup> groups, std::span<const RoleSelection> selections,
                                std::size_t n) {
  if (selections.size() != 3) throw Error(ErrorCode::kInvalidArgument, "consensus needs exactly three selections");
  if (groups.size() < n) {
    throw Error(ErrorCode::kInsufficientGroups,
                std::to_string(groups.size()) + " groups available, " + std::to_string(n) + " requested");
  }
  std::map<int, const AtomGroup*> by_id;
  for (const auto& g : groups) by_id[g.group_id] = &g;
  std::map<int, int> votes;
  for (const auto& s : selections) {
    for (int id : std::set<int>(s.selected.begin(), s.selected.end())) {
      if (!by_id.count(id)) throw Error(ErrorCode::kInvalidArgument, "selection names unknown " + group_label(id));
      ++votes[id];
    }
  }
  auto rank_key = [&](int id) {
    const AtomGroup& g = *by_id.at(id);
    return std::make_tuple(-static_cast<long>(g.atoms.size()), g.timestamp, id);
  };
  std::array<std::vector<int>, 3> tiers;  // three, two, one vote(s)
  for (const auto& [id, v] : votes) tiers[3 - v].push_back(id);

  ConsensusResult r;
  const std::array<Provenance, 3> prov{Provenance::kThreeVote, Provenance::kTwoVote, Provenance::kFill};
  for (std::size_t t = 0; t < 3 && r.final.size() < n; ++t) {
    auto& tier = tiers[t];
    std::sort(tier.begin(), tier.end(), [&](int a, int b) { return rank_key(a) < rank_key(b); });
    for (int id : tier) {
      if (r.final.size() == n) break;
      r.final.push_back(id);
      r.provenance[id] = prov[t];
    }
  }
  std::sort(r.final.begin(), r.final.end());
  return r;
}

AgreementStats agreement_stats(std::span<const RoleSelection> selections) {
  if (selections.size() != 3) throw Error(ErrorCode::kInvalidArgument, "agreement needs exactly three selections");
  std::set<int> roles;
  for (const auto& s : selections) roles.insert(role_number(s.role));
  if (roles.size() != 3) throw Error(ErrorCode::kInvalidArgument, "agreement needs three distinct roles");

  std::map<int, unsigned> mask;  // bit (role - 1)
  for (const auto& s : selections) {
    for (int id : s.selected) mask[id] |= 1u << (role_number(s.role) - 1);
  }
  AgreementStats st;
  for (const auto& [id, m] : mask) {
    switch (m) {
      case 0b111: ++st.full; break;
      case 0b011: ++st.partial_12; break;
      case 0b101: ++st.partial_13; break;
      case 0b110: ++st.partial_23; break;
      default: ++st.none; break;
    }
  }
  return st;
}

std::string render_agreement_table(const AgreementStats& stats) {
  const double total = static_cast<double>(stats.total());
  const std::pair<const char*, std::size_t> rows[] = {{"Full Agreement", stats.full},
                                                      {"Partial (1, 2)", stats.partial_12},
                                                      {"Partial (1, 3)", stats.partial_13},
                                                      {"Partial (2, 3)", stats.partial_23},
                                                      {"No Agreement", stats.none}};
  std::string out;
  for (const auto& [label, count] : rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s %zu %.2f%%\n", label, count, total > 0 ? 100.0 * count / total : 0.0);
    out += buf;
  }
  return out;
}

ConsensusRun run_consensus(std::span<const AtomGroup> groups, std::size_t n, const Topic& topic, ChatClient& client,
                           const PromptStore& prompts, const RoleSelectOptions& options, std::size_t workers) {
  ConsensusRun run;
  run.selections.resize(kRoles.size());
  parallel_for(kRoles.size(), workers, [&](std::size_t i) {
    run.selections[i] = role_select(groups, kRoles[i], n, topic, client, prompts, options);
  });
  run.result = consensus_merge(groups, run.selections, n);
  run.stats = agreement_stats(run.selections);
  return run;
}

nlohmann::json to_json(const ConsensusRun& run) {
  nlohmann::json j;
  auto& sels = j["selections"] = nlohmann::json::array();
  for (const auto& s : run.selections) {
    nlohmann::json d = nlohmann::json::array();
    for (const auto& x : s.diagnostics) d.push_back({{"code", x.code}, {"message", x.message}});
    sels.push_back({{"role", to_string(s.role)}, {"selected", s.selected}, {"model_calls", s.model_calls},
                    {"diagnostics", d}});
  }
  auto& fin = j["final"] = nlohmann::json::array();
  for (int id : run.result.final) {
    fin.push_back({{"group", group_label(id)}, {"provenance", to_string(run.result.provenance.at(id))}});
  }
  j["agreement"] = {{"full", run.stats.full},
                    {"partial_12", run.stats.partial_12},
                    {"partial_13", run.stats.partial_13},
                    {"partial_23", run.stats.partial_23},
                    {"none", run.stats.none}};
  return j;
}

std::string write_edit_file(const Topic& topic, std::span<const AtomGroup> groups, const ConsensusResult& result) {
  std::map<int, const AtomGroup*> by_id;
  for (const auto& g : groups) by_id[g.group_id] = &g;
  std::string out = "# Topic " + topic.id + ": " + topic.query + "\n";
  out += "# Write one summary after each date below. Lines starting with '#' are ignored.\n";
  for (int id : result.final) {
    const AtomGroup& g = *by_id.at(id);
    out += "# " + group_label(id) + " " + g.timestamp.to_string() + " [" +
           std::string(to_string(result.provenance.at(id))) + "]\n";
    for (const auto& a : g.atoms) out += "#   - " + a.text() + "\n";
  }
  int k = 1;
  for (int id : result.final) out += std::to_string(k++) + ". " + by_id.at(id)->timestamp.to_string() + ": \n";
  return out;
}

ParsedTimeline read_edit_file(std::string_view text) { return parse_timeline_text(text); }

}  // namespace tlsum
