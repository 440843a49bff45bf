#include <gtest/gtest.h>

#include <sstream>

#include "eit/csv.hpp"
#include "eit/error.hpp"
#include "eit/random.hpp"
#include "eit/text.hpp"

using namespace eit;

TEST(NormalizeText, FoldsCaseAndCollapsesWhitespace) {
  EXPECT_EQ(normalize_text("  Hello\t\tWORLD \n"), "hello world");
  EXPECT_EQ(normalize_text("Straße"), "strasse");  // full folding, not just lowercase
  EXPECT_EQ(normalize_text("ΣΊΣΥΦΟΣ"), normalize_text("σίσυφος"));
}

TEST(NormalizeText, DropsControlCharacters) {
  EXPECT_EQ(normalize_text(std::string("a\x01" "b\x7f" "c")), "abc");
  EXPECT_EQ(normalize_text("a  b"), "a b");  // Unicode spaces count as whitespace
}

TEST(NormalizeText, ReplacesInvalidUtf8) {
  EXPECT_EQ(normalize_text(std::string("ok\xff")), "ok\xef\xbf\xbd");
  EXPECT_EQ(normalize_text(""), "");
  EXPECT_EQ(normalize_text(" \t\n "), "");
}

TEST(NormalizeText, IsIdempotentOnFuzzedInput) {
  Rng rng(11);
  const std::vector<std::string> pieces = {"A", "b", " ", "\t", "\n", "É", "ß", "ﬁ", "İ", "\x01", "😀", "\xe2\x80",
                                           "\xff", "Ω", "ǅ", " ", "ΐ", "x"};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const auto len = rng.below(12);
    for (std::uint64_t i = 0; i < len; ++i) s += pieces[rng.below(pieces.size())];
    const auto once = normalize_text(s);
    EXPECT_EQ(normalize_text(once), once) << "input: " << s;
  }
}

TEST(Utf8, CodePointRoundTripAndLength) {
  const std::string s = "añ😀";
  EXPECT_EQ(char_length(s), 3u);
  EXPECT_EQ(to_utf8(to_code_points(s)), s);
  EXPECT_EQ(to_code_points(std::string("\xc3")), std::u32string(1, U'\uFFFD'));
}

TEST(Hash, Fnv1aKnownVectors) {
  // Published FNV-1a 64-bit test vectors.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Csv, QuotedFieldsAndLineNumbers) {
  std::istringstream in("\xEF\xBB\xBFh1,h2\r\n\"a,1\",\"say \"\"hi\"\"\"\n\"multi\nline\",z\n");
  const auto rows = csv::read_all(in);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].fields, (csv::Row{"h1", "h2"}));
  EXPECT_EQ(rows[1].fields, (csv::Row{"a,1", "say \"hi\""}));
  EXPECT_EQ(rows[2].fields, (csv::Row{"multi\nline", "z"}));
  EXPECT_EQ(rows[2].line, 3u);
}

TEST(Csv, EscapeRoundTrip) {
  const csv::Row row = {"plain", "with,comma", "with \"quote\"", "line\nbreak", ""};
  std::ostringstream out;
  csv::write_row(out, row);
  std::istringstream in(out.str());
  const auto back = csv::read_all(in);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].fields, row);
  EXPECT_EQ(csv::escape("plain"), "plain");
}

TEST(Csv, UnterminatedQuoteIsDataError) {
  std::istringstream in("a,\"open\n");
  EXPECT_THROW(csv::read_all(in), DataError);
}

TEST(Csv, TabDelimiter) {
  std::istringstream in("a\tb,c\n");
  const auto rows = csv::read_all(in, '\t');
  EXPECT_EQ(rows[0].fields, (csv::Row{"a", "b,c"}));
}

TEST(Rng, SequenceIsFixedBySeed) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  // First output of mt19937_64 seeded with 5489 is fixed by the standard.
  Rng d(5489);
  EXPECT_EQ(d.next(), 14514284786278117030ULL);
}

TEST(Rng, BelowIsInRangeAndRoughlyUniform) {
  Rng rng(3);
  std::vector<int> counts(7);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, NormalMoments) {
  Rng rng(9);
  double s = 0, s2 = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(WeightedSample, DistinctAndProportional) {
  const std::vector<std::uint64_t> w = {1, 3, 0, 6};
  std::vector<int> first(4);
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    Rng rng(seed);
    const auto d = weighted_sample_without_replacement(w, 4, rng);
    ASSERT_EQ(d.size(), 4u);
    EXPECT_EQ(d.back(), 2u);  // the zero-weight index comes last
    ++first[d[0]];
  }
  EXPECT_NEAR(first[0] / 20000.0, 0.1, 0.01);
  EXPECT_NEAR(first[1] / 20000.0, 0.3, 0.015);
  EXPECT_EQ(first[2], 0);
  EXPECT_NEAR(first[3] / 20000.0, 0.6, 0.015);
}

TEST(WeightedSample, CountLargerThanPopulationThrows) {
  Rng rng(1);
  const std::vector<std::uint64_t> w = {2, 2};
  EXPECT_THROW(weighted_sample_without_replacement(w, 5, rng), InvalidArgument);
  EXPECT_THROW(uniform_sample_without_replacement(3, 10, rng), InvalidArgument);
  EXPECT_THROW(rng.below(0), InvalidArgument);
}
