#include "tlsum/dataset.hpp"

#include <fstream>

#include "tlsum/text.hpp"

namespace tlsum {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::kMalformedRecord, what); }

const json& require(const json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) malformed(context + ": missing field '" + key + "'");
  return j.at(key);
}

std::string require_string(const json& j, const char* key, const std::string& context) {
  const json& v = require(j, key, context);
  if (!v.is_string()) malformed(context + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

Date require_date(const json& j, const char* key, const std::string& context) {
  const std::string s = require_string(j, key, context);
  auto d = Date::parse(s);
  if (!d) malformed(context + ": invalid date '" + s + "'");
  return *d;
}

}  // namespace

Timeline timeline_from_json(const json& nodes, const std::string& topic_id, const std::string& level) {
  const std::string ctx = "timeline " + level;
  if (!nodes.is_array() || nodes.empty()) malformed(ctx + ": must be a non-empty array");
  std::vector<TimelineNode> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) {
    TimelineNode node;
    node.timestamp = require_date(n, "date", ctx);
    node.summary = text::trim(require_string(n, "summary", ctx));
    if (node.summary.empty()) malformed(ctx + ": empty summary on " + node.timestamp.to_string());
    if (n.contains("atoms")) {
      const auto& atoms = n.at("atoms");
      if (!atoms.is_array()) malformed(ctx + ": atoms must be an array");
      for (const auto& a : atoms) {
        if (!a.is_string() || text::collapse_whitespace(a.get<std::string>()).empty()) {
          malformed(ctx + ": atoms must be non-empty strings");
        }
        node.atoms.emplace_back(a.get<std::string>());
      }
    }
    out.push_back(std::move(node));
  }
  return Timeline(std::move(out), topic_id, level);
}

json timeline_to_json(const Timeline& timeline) {
  json arr = json::array();
  for (const auto& n : timeline.nodes()) {
    json node = {{"date", n.timestamp.to_string()}, {"summary", n.summary}};
    if (n.decomposed()) node["atoms"] = atom_texts(n.atoms);
    arr.push_back(std::move(node));
  }
  return arr;
}

DatasetRecord record_from_json(const json& j) {
  if (!j.is_object()) malformed("record must be a JSON object");
  DatasetRecord rec;
  const json& topic = require(j, "topic", "record");
  rec.topic.id = require_string(topic, "id", "topic");
  rec.topic.query = text::trim(require_string(topic, "query", "topic"));
  if (rec.topic.id.empty()) malformed("topic: empty id");
  if (rec.topic.query.empty()) malformed("topic: empty query");
  if (topic.contains("category") && topic.at("category").is_string()) {
    rec.topic.category = parse_category(topic.at("category").get<std::string>());
  }

  const json& timelines = require(j, "timelines", "record");
  if (!timelines.is_object() || timelines.empty()) malformed("timelines: must be a non-empty object");
  for (const auto& [level, nodes] : timelines.items()) {
    const std::string canon = canonical_level(level);
    rec.reference_timelines.emplace(canon, timeline_from_json(nodes, rec.topic.id, canon));
  }

  const json& articles = require(j, "articles", "record");
  if (!articles.is_array()) malformed("articles: must be an array");
  for (const auto& a : articles) {
    Article art;
    art.id = require_string(a, "id", "article");
    art.title = require_string(a, "title", "article " + art.id);
    art.source = a.contains("source") && a.at("source").is_string() ? a.at("source").get<std::string>() : "";
    art.publish_date = require_date(a, "publish_date", "article " + art.id);
    if (a.contains("paragraphs")) {
      const auto& ps = a.at("paragraphs");
      if (!ps.is_array()) malformed("article " + art.id + ": paragraphs must be an array");
      for (const auto& p : ps) {
        if (!p.is_string()) malformed("article " + art.id + ": paragraphs must be strings");
        art.paragraphs.push_back(p.get<std::string>());
      }
    }
    if (art.paragraphs.empty() && text::trim(art.title).empty()) {
      malformed("article " + art.id + ": needs a title or content");
    }
    rec.articles.push_back(std::move(art));
  }
  return rec;
}

json record_to_json(const DatasetRecord& record) {
  json timelines = json::object();
  for (const auto& [level, tl] : record.reference_timelines) timelines[level] = timeline_to_json(tl);
  json articles = json::array();
  for (const auto& a : record.articles) {
    articles.push_back({{"id", a.id},
                        {"title", a.title},
                        {"source", a.source},
                        {"publish_date", a.publish_date.to_string()},
                        {"paragraphs", a.paragraphs}});
  }
  return {{"topic",
           {{"id", record.topic.id}, {"query", record.topic.query}, {"category", to_string(record.topic.category)}}},
          {"timelines", std::move(timelines)},
          {"articles", std::move(articles)}};
}

LoadedDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kUnreadable, "cannot open dataset " + path.string());
  LoadedDataset out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    try {
      out.records.push_back(record_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      out.diagnostics.push_back({"MalformedRecord", where + ": " + e.what()});
    } catch (const Error& e) {
      out.diagnostics.push_back({"MalformedRecord", where + ": " + e.what()});
    }
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kUnreadable, "cannot write " + path.string());
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

}  // namespace tlsum
