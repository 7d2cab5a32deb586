#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "tlsum/prompts.hpp"

using namespace tlsum;

TEST(Prompts, ShippedFilesMatchBuiltins) {
  const std::filesystem::path dir = TLSUM_PROMPT_DIR;
  for (const auto& [key, text] : PromptStore::builtin()) {
    std::ifstream in(dir / (key + ".en.txt"), std::ios::binary);
    ASSERT_TRUE(in) << key;
    std::ostringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), text + "\n") << key;
  }
  PromptStore from_dir(dir, "en");
  for (const auto& key : PromptStore::keys()) EXPECT_EQ(from_dir.get(key), PromptStore().get(key));
}

TEST(Prompts, FillTemplate) {
  EXPECT_EQ(fill_template("at least {N} of {X}", {{"N", "5"}}), "at least 5 of {X}");
  EXPECT_THROW(PromptStore().get("no.such.key"), std::exception);
}
