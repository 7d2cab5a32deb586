#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tlsum {

// Prompt templates keyed by name ("lp.system", "hm.merge.system", ...).
// Built-in English templates are always available; a template directory can
// override any of them with files named `<key>.<language>.txt`.
class PromptStore {
 public:
  PromptStore() = default;
  PromptStore(std::optional<std::filesystem::path> dir, std::string language);

  const std::string& get(std::string_view key) const;

  static const std::map<std::string, std::string, std::less<>>& builtin();
  static std::vector<std::string> keys();
  // Writes every built-in template as `<key>.en.txt` under dir.
  static void dump_builtin(const std::filesystem::path& dir);

 private:
  std::map<std::string, std::string, std::less<>> overrides_;
};

// Replaces `{NAME}` placeholders; unknown placeholders are left as-is.
std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

}  // namespace tlsum
