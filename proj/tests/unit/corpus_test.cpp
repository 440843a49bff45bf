#include <gtest/gtest.h>

#include <sstream>

#include "eit/corpus.hpp"
#include "eit/error.hpp"

using namespace eit;

namespace {

Corpus two_question_corpus() {
  Corpus c;
  c.add_question({"Q1", "Why?", QuestionCategory::reflection, 1, PollKind::word_cloud});
  c.add_question({"MC1", "Pick one", QuestionCategory::numerical, 1, PollKind::multiple_choice});
  return c;
}

ColumnMapping vendor_mapping() {
  return ColumnMapping::parse(
      "# vendor export\n"
      "column.question_id = Poll\n"
      "column.student_id = Who\n"
      "column.raw_text = Answer\n"
      "column.mode = Channel\n"
      "column.submitted_at = When\n"
      "timestamp_format = %Y-%m-%d %H:%M:%S\n"
      "mode.live = synchronous\n"
      "mode.recording = asynchronous\n");
}

}  // namespace

TEST(Timestamp, FormatAndParse) {
  const auto t = parse_timestamp("2023-01-16T16:04:09Z");
  ASSERT_TRUE(t);
  EXPECT_EQ(format_timestamp(*t), "2023-01-16T16:04:09Z");
  EXPECT_FALSE(parse_timestamp("yesterday"));
  EXPECT_TRUE(parse_timestamp("2023-01-16 16:04:09", "%Y-%m-%d %H:%M:%S"));
}

TEST(Corpus, RejectsDuplicateQuestionsAndBadLectures) {
  Corpus c = two_question_corpus();
  EXPECT_THROW(c.add_question({"Q1", "again", QuestionCategory::reflection, 2, PollKind::word_cloud}), InvalidArgument);
  EXPECT_THROW(c.add_question({"Q2", "x", QuestionCategory::reflection, 0, PollKind::word_cloud}), InvalidArgument);
}

TEST(Corpus, AddResponseNormalizesAndDeduplicates) {
  Corpus c = two_question_corpus();
  Response r{"", "Q1", "S1", "  New  Questions ", "", ResponseMode::synchronous, *parse_timestamp("2023-01-16T10:00:00Z")};
  EXPECT_TRUE(c.add_response(r));
  EXPECT_FALSE(c.add_response(r));  // same (student, question, raw text, time)
  ASSERT_EQ(c.responses().size(), 1u);
  EXPECT_EQ(c.responses()[0].normalized_text, "new questions");
  EXPECT_FALSE(c.responses()[0].response_id.empty());

  Response unknown = r;
  unknown.question_id = "Q9";
  EXPECT_THROW(c.add_response(unknown), NotFound);
}

TEST(Corpus, UniqueResponsesOrderedByCountThenText) {
  Corpus c = two_question_corpus();
  auto t = *parse_timestamp("2023-01-16T10:00:00Z");
  int n = 0;
  for (const char* text : {"b", "a", "B", "c", "a"})
    c.add_response({"", "Q1", "S" + std::to_string(n++), text, "", ResponseMode::synchronous, t});
  const auto u = c.unique_responses("Q1");
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(u[0].normalized_text, "a");
  EXPECT_EQ(u[0].count, 2u);
  EXPECT_EQ(u[1].normalized_text, "b");
  EXPECT_EQ(u[1].count, 2u);
  EXPECT_EQ(u[2].normalized_text, "c");
  EXPECT_EQ(u[0].member_response_ids.size(), 2u);
}

TEST(Ingest, MapsVendorColumnsAndReportsBadRows) {
  Corpus c = two_question_corpus();
  std::istringstream in(
      "Poll,Who,Answer,Channel,When\n"
      "Q1,S1,Because data,live,2023-01-16 16:04:09\n"
      "Q1,S2,idk,recording,2023-01-17 09:00:00\n"
      "Q1,S3,hm,carrier-pigeon,2023-01-17 09:00:00\n"
      "Q1,S4,hm,live,not a time\n"
      "Q7,S5,hm,live,2023-01-17 09:00:00\n"
      "Q1,S1,Because data,live,2023-01-16 16:04:09\n"
      "Q1,,hm,live,2023-01-17 09:00:00\n");
  const auto report = ingest(c, in, vendor_mapping());
  EXPECT_EQ(report.accepted, 2u);
  ASSERT_EQ(report.rejected.size(), 5u);
  EXPECT_EQ(report.rejected[0], (std::pair<std::size_t, std::string>{4, "unknown mode"}));
  EXPECT_EQ(report.rejected[1].second, "unparseable timestamp");
  EXPECT_EQ(report.rejected[2].second, "unknown question");
  EXPECT_EQ(report.rejected[3].second, "duplicate");
  EXPECT_EQ(report.rejected[4].second, "missing fields");
  EXPECT_EQ(c.responses()[1].mode, ResponseMode::asynchronous);
}

TEST(Ingest, MissingMappedColumnIsFatal) {
  Corpus c = two_question_corpus();
  std::istringstream in("Poll,Who,Answer,When\nQ1,S1,x,2023-01-16 16:04:09\n");
  EXPECT_THROW(ingest(c, in, vendor_mapping()), InvalidArgument);
}

TEST(Ingest, MappingMustCoverRequiredFields) {
  EXPECT_THROW(ColumnMapping::parse("column.question_id = A\n").validate(), InvalidArgument);
  EXPECT_NO_THROW(vendor_mapping().validate());
}

TEST(Ingest, MissingFileNamesPath) {
  Corpus c;
  try {
    ingest_file(c, "/nonexistent/missing.csv", vendor_mapping());
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/missing.csv"), std::string::npos);
  }
}

TEST(Corpus, LoadQuestionsAndRoster) {
  Corpus c;
  std::istringstream in(
      "question_id,text,category,lecture_number,poll_kind\n"
      "Q1,Why?,reflection,1,word_cloud\n"
      "Q2,\"What, exactly?\",conceptual,3,word_cloud\n"
      "MC3,Pick,numerical,3,multiple_choice\n");
  EXPECT_EQ(load_questions(c, in), 3u);
  EXPECT_EQ(c.question("Q2").text, "What, exactly?");
  EXPECT_EQ(c.lecture_roster(), (std::vector<int>{1, 3}));
  EXPECT_THROW(c.question("nope"), NotFound);
}
