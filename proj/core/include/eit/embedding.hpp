#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eit/matrix.hpp"

namespace eit {

struct EmbeddingVector {
  std::vector<double> values;
  std::string provider_id;
  std::uint64_t text_hash = 0;
};

/// Maps a normalized text to a fixed-dimension vector. Implementations must
/// be deterministic and safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual const std::string& id() const noexcept = 0;
  virtual std::size_t dimension() const noexcept = 0;
  /// Throws ProviderError on failure.
  virtual std::vector<double> embed(std::string_view normalized_text) const = 0;
};

inline constexpr std::size_t kDefaultDimension = 768;
inline constexpr std::uint64_t kDefaultEmbeddingSeed = 20230101;
inline constexpr std::size_t kTrigramBuckets = std::size_t{1} << 16;

/// Hashed character trigrams with a seeded random projection.
///
/// The text is padded with U+0002 / U+0003 boundary markers and split into
/// code-point trigrams. Each trigram's UTF-8 bytes are hashed with FNV-1a 64
/// into one of 2^16 buckets. Bucket b contributes count(b) * R(b, j) to output
/// coordinate j, where R(b, j) is uniform in [-1, 1) and drawn from SplitMix64:
/// R(b, j) = 2 * unit(splitmix64(splitmix64(seed ^ b * 0x9E3779B97F4A7C15) + j)) - 1.
/// The result is L2-normalized; the empty text maps to the zero vector.
std::vector<double> fallback_embed(std::string_view text, std::uint64_t seed, std::size_t dimension);

class FallbackProvider final : public EmbeddingProvider {
 public:
  explicit FallbackProvider(std::uint64_t seed = kDefaultEmbeddingSeed, std::size_t dimension = kDefaultDimension);

  const std::string& id() const noexcept override { return id_; }
  std::size_t dimension() const noexcept override { return dimension_; }
  std::vector<double> embed(std::string_view normalized_text) const override;

 private:
  std::uint64_t seed_;
  std::size_t dimension_;
  std::string id_;
};

/// Vectors exported offline from an external sentence encoder. The file is
/// JSON lines, one `{"text": <normalized text>, "vector": [..]}` per line; an
/// optional first line `{"provider": <id>, "dimension": <D>}` declares the
/// dimension, otherwise it is taken from the first vector. Every vector's
/// length is validated against the declared dimension. Asking for a text
/// that is not in the table is a ProviderError, never a silent fallback.
class PrecomputedProvider final : public EmbeddingProvider {
 public:
  explicit PrecomputedProvider(const std::filesystem::path& path);

  const std::string& id() const noexcept override { return id_; }
  std::size_t dimension() const noexcept override { return dimension_; }
  std::vector<double> embed(std::string_view normalized_text) const override;

 private:
  std::string id_;
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> table_;
};

/// Persistent (provider_id, text) -> vector cache. One binary file per
/// provider under `dir`; entries are appended whole under a mutex. With an
/// empty `dir` the cache is memory-only.
class EmbeddingCache {
 public:
  explicit EmbeddingCache(std::filesystem::path dir = {});

  std::optional<std::vector<double>> find(const std::string& provider_id, std::string_view text) const;
  void insert(const std::string& provider_id, std::string_view text, std::span<const double> values);
  std::size_t size() const;

 private:
  struct Entry {
    std::string text;
    std::vector<double> values;
  };
  using Table = std::unordered_map<std::uint64_t, Entry>;

  Table& table_for(const std::string& provider_id) const;  // mutex held
  std::filesystem::path file_for(const std::string& provider_id) const;

  std::filesystem::path dir_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, Table> tables_;
};

/// Row i embeds texts[i]. Distinct texts are embedded once. When a cache is
/// given, hits are returned bit-identical and misses are inserted.
Matrix embed_batch(std::span<const std::string> texts, const EmbeddingProvider& provider,
                   EmbeddingCache* cache = nullptr);

/// Coordinate-wise mean. Inputs are summed in ascending (text_hash, values)
/// order, so the result does not depend on input order. Throws InvalidArgument on empty input or mismatched dimensions.
std::vector<double> centroid(std::span<const EmbeddingVector> vectors);

/// Mean of matrix rows in row order.
std::vector<double> row_mean(const Matrix& m);

/// A PrecomputedProvider when `model_path` is set, else the fallback encoder
/// with `seed` and `dimension` (0 means the default).
std::unique_ptr<EmbeddingProvider> make_provider(const std::string& model_path, std::uint64_t seed,
                                                 std::size_t dimension);

}  // namespace eit
