#include <gtest/gtest.h>

#include <sstream>

#include "diagsynth/describe.hpp"
#include "diagsynth/errors.hpp"
#include "diagsynth/genspec.hpp"
#include "diagsynth/mermaid.hpp"

using namespace diagsynth;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Describe, HeaderOnlyGraph) {
    const auto text = describe(parse("graph LR\n"));
    EXPECT_EQ(lines_of(text).size(), 1u);
    EXPECT_NE(text.find(" 0 "), std::string::npos);
}

TEST(Describe, LabeledEdgeSentence) {
    const auto text = describe(parse("graph LR\n  A[alpha] -->|sends| B[beta]\n"));
    const auto lines = lines_of(text);
    ASSERT_EQ(lines.size(), 4u);
    EXPECT_NE(lines[3].find("alpha"), std::string::npos);
    EXPECT_NE(lines[3].find("beta"), std::string::npos);
    EXPECT_NE(lines[3].find("sends"), std::string::npos);
}

TEST(Describe, InversionAndCompletenessOverRandomSpecs) {
    const auto table = default_profiles();
    int checked = 0;
    for (auto f : kAllFamilies) {
        for (auto l : kAllLevels) {
            for (std::uint64_t seed = 0; seed < 60; ++seed, ++checked) {
                const auto s = summarize(sample_spec(f, l, profile_for(table, f, l), KeywordBank::builtin(), seed));
                const auto text = describe(s);
                ASSERT_EQ(describe(s), text);
                ASSERT_EQ(parse_description(text), s) << text;
                for (const auto& b : s.blocks) ASSERT_NE(text.find("\"" + b + "\""), std::string::npos);
                const auto n = lines_of(text).size();
                const auto expected = f == DiagramFamily::Packet
                                          ? 1 + s.bits.size()
                                          : 1 + s.blocks.size() + s.edges.size() + (f == DiagramFamily::Class ? s.member_count() : 0);
                ASSERT_EQ(n, expected);
            }
        }
    }
    EXPECT_GE(checked, 1000);
}

TEST(Describe, DroppingAnEdgeSentenceDropsThatEdge) {
    const auto s = parse("graph LR\n  A[alpha] --> B[beta]\n  B -->|x| C[gamma]\n");
    auto lines = lines_of(describe(s));
    ASSERT_EQ(lines.size(), 6u);
    lines.erase(lines.begin() + 4);
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    const auto back = parse_description(text);
    ASSERT_EQ(back.edges.size(), 1u);
    EXPECT_EQ(back.edges[0], s.edges[1]);
    EXPECT_EQ(back.blocks, s.blocks);
}

TEST(Describe, FreeFormProseIsRejected) {
    EXPECT_THROW(parse_description("A cat sat on the mat.\n"), InversionError);
    EXPECT_THROW(parse_description(""), InversionError);
    auto text = describe(parse("graph LR\n  A --> B\n"));
    text += "Then everything exploded.\n";
    EXPECT_THROW(parse_description(text), InversionError);
}

TEST(Describe, TemplateSetValidation) {
    EXPECT_THROW(DescriptionTemplateSet::from_json("{}"), ConfigError);
    EXPECT_THROW(DescriptionTemplateSet::from_json(R"({"families": {"Graph": {"preamble": "{count}"}}})"), ConfigError);
    EXPECT_THROW(DescriptionTemplateSet::from_json(
                     R"({"families": {"Graph": {"preamble": "{count}", "component": "{colour}", "edge": "{src}{dst}", "edge_labeled": "{label}"}}})"),
                 ConfigError);
    const auto custom = DescriptionTemplateSet::from_json(
        R"({"families": {"Graph": {"preamble": "G {count}.", "component": "N \"{name}\".", "edge": "E \"{src}\" \"{dst}\".", "edge_labeled": "E \"{src}\" \"{dst}\" \"{label}\"."}}})");
    EXPECT_TRUE(custom.supports(DiagramFamily::Graph));
    EXPECT_FALSE(custom.supports(DiagramFamily::Class));
    const auto s = parse("graph LR\n  A --> B\n");
    EXPECT_EQ(describe(s, custom), "G 2.\nN \"a\".\nN \"b\".\nE \"a\" \"b\".\n");
    EXPECT_EQ(parse_description(describe(s, custom), custom), s);
}
