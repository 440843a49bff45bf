#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "eit/embedding.hpp"
#include "eit/error.hpp"
#include "eit/matrix.hpp"
#include "eit/random.hpp"
#include "eit/text.hpp"

using namespace eit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("eit-embed-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Trigram projection recomputed from its definition: padded character
// trigrams, FNV-1a bucket in the low 16 bits, SplitMix64 counter-based ±1
// projection, then L2 normalization.
std::vector<double> reference_embed(const std::u32string& text, std::uint64_t seed, std::size_t dim) {
  std::vector<double> v(dim, 0.0);
  if (text.empty()) return v;
  const std::u32string padded = U"\u0002" + text + U"\u0003";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::string gram = to_utf8(padded.substr(i, 3));
    const std::uint64_t bucket = fnv1a64(gram) & 0xFFFFu;
    const std::uint64_t base = splitmix64(seed ^ (bucket * 0x9E3779B97F4A7C15ULL));
    for (std::size_t j = 0; j < dim; ++j) v[j] += 2.0 * bits_to_unit(splitmix64(base + j)) - 1.0;
  }
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

}  // namespace

TEST(Fallback, MatchesDefinition) {
  for (const char* t : {"a", "idk", "because results lead to new questions", "😀 ok"}) {
    const auto got = fallback_embed(t, kDefaultEmbeddingSeed, 64);
    const auto want = reference_embed(to_code_points(t), kDefaultEmbeddingSeed, 64);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[j], want[j], 1e-12) << t;
  }
}

TEST(Fallback, UnitNormDeterministicAndEmptyIsZero) {
  FallbackProvider p;
  EXPECT_EQ(p.dimension(), kDefaultDimension);
  const auto a = p.embed("new questions");
  EXPECT_NEAR(l2_norm(a), 1.0, 1e-12);
  EXPECT_EQ(a, p.embed("new questions"));
  EXPECT_EQ(l2_norm(p.embed("")), 0.0);
  EXPECT_NE(FallbackProvider(1).id(), FallbackProvider(2).id());
}

TEST(Fallback, SimilarTextsAreCloser) {
  FallbackProvider p;
  const auto a = p.embed("new questions arise");
  const auto b = p.embed("new questtions arise");
  const auto c = p.embed("asdf");
  EXPECT_LT(cosine_distance(a, b), cosine_distance(a, c));
}

TEST(Precomputed, ReadsTableAndRejectsUnknownText) {
  const auto dir = scratch("pre");
  {
    std::ofstream f(dir / "vectors.jsonl");
    f << R"({"provider":"test-encoder","dimension":3})" << "\n"
      << R"({"text":"a","vector":[1,0,0]})" << "\n"
      << R"({"text":"b","vector":[0,1,0]})" << "\n";
  }
  PrecomputedProvider p(dir / "vectors.jsonl");
  EXPECT_EQ(p.dimension(), 3u);
  EXPECT_EQ(p.embed("b"), (std::vector<double>{0, 1, 0}));
  EXPECT_THROW(p.embed("zzz"), ProviderError);
  EXPECT_THROW(PrecomputedProvider(dir / "absent.jsonl"), ProviderError);

  {
    std::ofstream f(dir / "bad.jsonl");
    f << R"({"text":"a","vector":[1,0]})" << "\n" << R"({"text":"b","vector":[1,0,0]})" << "\n";
  }
  EXPECT_THROW(PrecomputedProvider(dir / "bad.jsonl"), ProviderError);
  fs::remove_all(dir);
}

TEST(Cache, TransparentAndPersistent) {
  const auto dir = scratch("cache");
  FallbackProvider p(7, 32);
  const std::vector<std::string> texts = {"b", "a", "b", "c"};
  const Matrix direct = embed_batch(texts, p);
  {
    EmbeddingCache cache(dir);
    EXPECT_EQ(embed_batch(texts, p, &cache), direct);
    EXPECT_EQ(cache.size(), 3u);
  }
  EmbeddingCache reopened(dir);
  ASSERT_TRUE(reopened.find(p.id(), "a"));
  EXPECT_EQ(*reopened.find(p.id(), "a"), p.embed("a"));
  EXPECT_FALSE(reopened.find("other-provider", "a"));
  EXPECT_EQ(embed_batch(texts, p, &reopened), direct);
  fs::remove_all(dir);
}

TEST(Centroid, OrderIndependentAndValidated) {
  FallbackProvider p(3, 16);
  std::vector<EmbeddingVector> v;
  for (const char* t : {"x", "yy", "zzz", "wwww"}) v.push_back({p.embed(t), p.id(), text_hash(t)});
  const auto c1 = centroid(v);
  std::reverse(v.begin(), v.end());
  EXPECT_EQ(centroid(v), c1);  // bit-identical regardless of input order
  EXPECT_THROW(centroid(std::vector<EmbeddingVector>{}), InvalidArgument);
  v.push_back({{1.0}, p.id(), 0});
  EXPECT_THROW(centroid(v), InvalidArgument);
}

TEST(MakeProvider, PicksFallbackWithoutPath) {
  const auto p = make_provider("", 5, 0);
  EXPECT_EQ(p->dimension(), kDefaultDimension);
  EXPECT_EQ(p->id(), FallbackProvider(5).id());
}
