#include "tlsum/pipelines.hpp"

#include <algorithm>
#include <map>
#include <span>

#include "tlsum/parallel.hpp"
#include "tlsum/text.hpp"
#include "tlsum/timeline_text.hpp"

namespace tlsum {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kLP: return "lp";
    case Method::kHM: return "hm";
    case Method::kTO: return "to";
  }
  return "lp";
}

Method parse_method(std::string_view s) {
  const std::string l = text::ascii_lower(s);
  if (l == "lp") return Method::kLP;
  if (l == "hm") return Method::kHM;
  if (l == "to") return Method::kTO;
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + std::string(s) + "'");
}

namespace {

std::size_t measure(const LengthFn& length, std::string_view s) { return length ? length(s) : text::utf8_length(s); }

// Drops lines equal to `note` (after trimming).
std::string drop_line(std::string_view tmpl, std::string_view note) {
  std::vector<std::string> kept;
  for (auto& line : text::split_lines(tmpl)) {
    if (text::trim(line) != text::trim(note)) kept.push_back(line);
  }
  return text::join(kept, "\n");
}

std::string with_gold_note(std::string system, const GenerationJob& job, const PromptStore& prompts) {
  if (job.gold_dates.empty()) return system;
  std::vector<std::string> dates;
  for (const auto& d : job.gold_dates) dates.push_back(d.to_string());
  return system + "\n" + fill_template(prompts.get("gt.note"), {{"DATES", text::join(dates, ", ")}});
}

Timeline parse_output(const std::string& response, const GenerationJob& job, Diagnostics& diags,
                      const std::string& where) {
  ParsedTimeline parsed = parse_timeline_text(response);
  for (const auto& d : parsed.skipped) diags.push_back({d.code, where + ": " + d.message});
  for (const auto& d : parsed.merged_dates) {
    diags.push_back({"merged_date", where + ": several summaries for " + d.to_string() + " merged"});
  }
  if (!job.gold_dates.empty()) {
    for (const auto& node : parsed.timeline.nodes()) {
      if (!std::binary_search(job.gold_dates.begin(), job.gold_dates.end(), node.timestamp)) {
        diags.push_back({"gold_date_mismatch", where + ": " + node.timestamp.to_string() + " is not a gold date"});
      }
    }
  }
  parsed.timeline.set_topic_id(job.topic.id);
  return std::move(parsed.timeline);
}

std::string topic_block(const Topic& topic) { return "[Topic]\n" + topic.query; }

ChatRequest make_request(const GenerationJob& job, std::string stage, std::string system, std::string user) {
  ChatRequest req;
  req.job_id = job.job_id + ":" + stage;
  req.system = std::move(system);
  req.user = std::move(user);
  return req;
}

}  // namespace

std::string render_granularity_instruction(const GranularitySpec& spec, std::string_view task_template,
                                           const PromptStore& prompts) {
  const std::string& count_note = prompts.get("count.note");
  if (const auto* nc = std::get_if<NodeCount>(&spec)) {
    std::string t(task_template);
    if (t.find(count_note) == std::string::npos) t += "\n" + count_note;
    return fill_template(t, {{"N", std::to_string(nc->n)}});
  }
  std::string task = fill_template(drop_line(task_template, count_note), {{"N", "N"}});
  if (const auto* pi = std::get_if<PromptInstruction>(&spec)) {
    const char* key = pi->style == InstructionStyle::kCoarse ? "granularity.coarse" : "granularity.fine";
    return prompts.get(key) + "\n\n" + task;
  }
  const auto& shot = std::get<OneShotExemplar>(spec);
  return prompts.get("granularity.oneshot") + "\n" + serialize_timeline(shot.exemplar) + "\n\n" + task;
}

std::size_t article_length(const Article& article, const LengthFn& length) {
  std::size_t n = measure(length, article.title);
  for (const auto& p : article.paragraphs) n += measure(length, p);
  return n;
}

std::vector<Article> truncate_articles(std::vector<Article> articles, std::size_t budget, const LengthFn& length) {
  if (budget == 0) throw Error(ErrorCode::kInvalidArgument, "length budget must be positive");
  std::size_t titles = 0;
  for (const auto& a : articles) titles += measure(length, a.title);
  if (titles > budget) {
    throw Error(ErrorCode::kBudgetTooSmall,
                "titles alone need " + std::to_string(titles) + " > budget " + std::to_string(budget));
  }
  std::vector<std::size_t> lens;
  std::size_t total = 0;
  for (const auto& a : articles) {
    lens.push_back(article_length(a, length));
    total += lens.back();
  }
  while (total > budget) {
    std::size_t pick = articles.size();
    for (std::size_t i = 0; i < articles.size(); ++i) {
      if (articles[i].paragraphs.empty()) continue;
      if (pick == articles.size() || lens[i] > lens[pick]) pick = i;
    }
    const std::size_t drop = measure(length, articles[pick].paragraphs.back());
    articles[pick].paragraphs.pop_back();
    lens[pick] -= drop;
    total -= drop;
  }
  return articles;
}

std::string render_articles(const std::vector<Article>& articles) {
  std::string out;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    const auto& a = articles[i];
    if (i) out += "\n\n";
    out += "[Article " + std::to_string(i + 1) + "]\nTitle: " + a.title +
           "\nRelease-time: " + a.publish_date.to_string() + "\nContent: " + text::join(a.paragraphs, "\n");
  }
  return out;
}

GenerationResult lp_generate(const GenerationJob& job, ChatClient& client, const PipelineConfig& config) {
  validate(job.granularity);
  const auto articles =
      job.length_budget ? truncate_articles(job.articles, *job.length_budget, config.length) : job.articles;
  const std::string system = with_gold_note(
      render_granularity_instruction(job.granularity, config.prompts.get("lp.system"), config.prompts), job,
      config.prompts);
  const std::string user = topic_block(job.topic) + "\n\n" + render_articles(articles);
  const std::string response = client.complete(make_request(job, "lp", system, user));
  Diagnostics diags;
  Timeline tl = parse_output(response, job, diags, "lp");
  return {std::move(tl), std::move(diags), 1};
}

DaySummaries hm_day_summaries(const GenerationJob& job, ChatClient& client, const PipelineConfig& config) {
  std::map<Date, std::vector<Article>> by_date;
  for (const auto& a : job.articles) by_date[a.publish_date].push_back(a);

  struct Batch {
    Date date;
    std::vector<Article> articles;
  };
  std::vector<Batch> batches;
  for (auto& [date, arts] : by_date) {
    if (!job.length_budget) {
      batches.push_back({date, std::move(arts)});
      continue;
    }
    const std::size_t budget = *job.length_budget;
    std::vector<Article> cur;
    std::size_t cur_len = 0;
    for (auto& a : arts) {
      std::size_t len = article_length(a, config.length);
      if (!cur.empty() && cur_len + len > budget) {
        batches.push_back({date, std::move(cur)});
        cur.clear();
        cur_len = 0;
      }
      if (len > budget) {
        a = truncate_articles({a}, budget, config.length).front();
        len = article_length(a, config.length);
      }
      cur.push_back(std::move(a));
      cur_len += len;
    }
    if (!cur.empty()) batches.push_back({date, std::move(cur)});
  }

  const std::string system =
      fill_template(drop_line(config.prompts.get("hm.day.system"), config.prompts.get("count.note")), {{"N", "N"}});
  std::vector<std::optional<Timeline>> outputs(batches.size());
  std::vector<Diagnostics> batch_diags(batches.size());
  parallel_for(batches.size(), config.max_concurrency, [&](std::size_t i) {
    const std::string where = "batch " + std::to_string(i + 1) + " (" + batches[i].date.to_string() + ")";
    try {
      const std::string user = topic_block(job.topic) + "\n\n" + render_articles(batches[i].articles);
      const std::string response = client.complete(make_request(job, "day" + std::to_string(i + 1), system, user));
      GenerationJob no_gold = job;
      no_gold.gold_dates.clear();
      outputs[i] = parse_output(response, no_gold, batch_diags[i], where);
    } catch (const Error& e) {
      batch_diags[i].push_back({"batch_failed", where + ": " + e.what()});
    }
  });

  DaySummaries out;
  out.model_calls = batches.size();
  for (std::size_t i = 0; i < batches.size(); ++i) {
    if (outputs[i]) out.partials.push_back(std::move(*outputs[i]));
    out.diagnostics.insert(out.diagnostics.end(), batch_diags[i].begin(), batch_diags[i].end());
  }
  return out;
}

std::size_t expected_merge_calls(std::size_t partials, std::size_t fan_in, bool recursive) {
  if (partials == 0) return 0;
  if (fan_in < 2) throw Error(ErrorCode::kInvalidArgument, "fan-in must be at least 2");
  std::size_t calls = 0;
  std::size_t level = partials;
  while (level > fan_in) {
    level = (level + fan_in - 1) / fan_in;
    calls += level;
    if (!recursive) break;
  }
  return calls + 1;
}

GenerationResult hm_merge(const std::vector<Timeline>& partials, const GenerationJob& job, ChatClient& client,
                          const PipelineConfig& config) {
  if (partials.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to merge");
  if (config.fan_in < 2) throw Error(ErrorCode::kInvalidArgument, "fan-in must be at least 2");
  validate(job.granularity);

  auto user_for = [&](std::span<const Timeline> group) {
    std::string user = topic_block(job.topic);
    for (std::size_t i = 0; i < group.size(); ++i) {
      user += "\n\n[Timeline " + std::to_string(i + 1) + "]\n" + serialize_timeline(group[i]);
    }
    return user;
  };

  GenerationResult result{partials.front(), {}, 0};
  std::vector<Timeline> level = partials;
  const std::string intermediate_system =
      fill_template(drop_line(config.prompts.get("hm.merge.system"), config.prompts.get("count.note")), {{"N", "N"}});
  std::size_t depth = 0;
  while (level.size() > config.fan_in) {
    ++depth;
    const std::size_t groups = (level.size() + config.fan_in - 1) / config.fan_in;
    std::vector<std::optional<Timeline>> next(groups);
    std::vector<Diagnostics> diags(groups);
    parallel_for(groups, config.max_concurrency, [&](std::size_t g) {
      const std::size_t lo = g * config.fan_in;
      const std::size_t hi = std::min(level.size(), lo + config.fan_in);
      const std::string stage = "merge" + std::to_string(depth) + "." + std::to_string(g + 1);
      GenerationJob no_gold = job;
      no_gold.gold_dates.clear();
      const std::string response = client.complete(
          make_request(job, stage, intermediate_system, user_for(std::span(level).subspan(lo, hi - lo))));
      next[g] = parse_output(response, no_gold, diags[g], stage);
    });
    result.model_calls += groups;
    level.clear();
    for (std::size_t g = 0; g < groups; ++g) {
      level.push_back(std::move(*next[g]));
      result.diagnostics.insert(result.diagnostics.end(), diags[g].begin(), diags[g].end());
    }
    if (!config.recursive_merge) break;
  }

  const std::string final_system = with_gold_note(
      render_granularity_instruction(job.granularity, config.prompts.get("hm.merge.system"), config.prompts), job,
      config.prompts);
  const std::string response = client.complete(make_request(job, "merge.final", final_system, user_for(level)));
  ++result.model_calls;
  result.timeline = parse_output(response, job, result.diagnostics, "merge.final");
  return result;
}

GenerationResult hm_generate(const GenerationJob& job, ChatClient& client, const PipelineConfig& config) {
  DaySummaries days = hm_day_summaries(job, client, config);
  if (days.partials.empty()) {
    throw Error(ErrorCode::kNoValidNodes, "no day summary succeeded for topic " + job.topic.id);
  }
  GenerationResult r = hm_merge(days.partials, job, client, config);
  days.diagnostics.insert(days.diagnostics.end(), r.diagnostics.begin(), r.diagnostics.end());
  r.diagnostics = std::move(days.diagnostics);
  r.model_calls += days.model_calls;
  return r;
}

GenerationResult to_generate(const GenerationJob& job, ChatClient& client, const PipelineConfig& config) {
  if (!job.articles.empty()) throw Error(ErrorCode::kInvalidArgument, "topic-only jobs carry no articles");
  validate(job.granularity);
  const std::string system = with_gold_note(
      render_granularity_instruction(job.granularity, config.prompts.get("to.system"), config.prompts), job,
      config.prompts);
  const std::string response = client.complete(make_request(job, "to", system, topic_block(job.topic)));
  Diagnostics diags;
  Timeline tl = parse_output(response, job, diags, "to");
  return {std::move(tl), std::move(diags), 1};
}

GenerationJob apply_gold_timestamps(GenerationJob job, const Timeline* reference) {
  if (!reference) throw Error(ErrorCode::kMissingReference, "gold timestamps need a reference timeline");
  job.gold_timestamps = true;
  job.gold_dates = reference->dates();
  return job;
}

GenerationResult generate(const GenerationJob& job, ChatClient& client, const PipelineConfig& config) {
  if (job.gold_timestamps && job.gold_dates.empty()) {
    throw Error(ErrorCode::kMissingReference, "gold timestamps requested but no reference dates applied");
  }
  switch (job.method) {
    case Method::kLP: return lp_generate(job, client, config);
    case Method::kHM: return hm_generate(job, client, config);
    case Method::kTO: {
      if (job.articles.empty()) return to_generate(job, client, config);
      GenerationJob bare = job;
      bare.articles.clear();
      return to_generate(bare, client, config);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method");
}

}  // namespace tlsum
