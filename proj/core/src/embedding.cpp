#include "eit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>

#include "eit/error.hpp"
#include "eit/random.hpp"
#include "eit/text.hpp"

namespace eit {

namespace fs = std::filesystem;

std::vector<double> fallback_embed(std::string_view text, std::uint64_t seed, std::size_t dimension) {
  if (dimension < 2) throw InvalidArgument("fallback_embed: dimension must be at least 2");
  std::vector<double> out(dimension, 0.0);
  if (text.empty()) return out;

  std::u32string padded = U"\u0002";
  padded += to_code_points(text);
  padded += U"\u0003";

  std::map<std::uint32_t, std::uint32_t> buckets;  // ordered, so accumulation order is fixed
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
    const std::string gram = to_utf8(std::u32string_view(padded).substr(i, 3));
    ++buckets[static_cast<std::uint32_t>(fnv1a64(gram) & (kTrigramBuckets - 1))];
  }

  for (const auto& [bucket, count] : buckets) {
    const std::uint64_t base = splitmix64(seed ^ (std::uint64_t{bucket} * 0x9E3779B97F4A7C15ULL));
    for (std::size_t j = 0; j < dimension; ++j) {
      const double r = 2.0 * bits_to_unit(splitmix64(base + j)) - 1.0;
      out[j] += static_cast<double>(count) * r;
    }
  }
  const double norm = l2_norm(out);
  if (norm > 0.0)
    for (double& x : out) x /= norm;
  return out;
}

FallbackProvider::FallbackProvider(std::uint64_t seed, std::size_t dimension)
    : seed_(seed), dimension_(dimension) {
  if (dimension < 2) throw InvalidArgument("fallback provider dimension must be at least 2");
  id_ = "fallback-trigram-v1/d" + std::to_string(dimension) + "/s" + std::to_string(seed);
}

std::vector<double> FallbackProvider::embed(std::string_view normalized_text) const {
  return fallback_embed(normalized_text, seed_, dimension_);
}

PrecomputedProvider::PrecomputedProvider(const fs::path& path) {
  id_ = "precomputed:" + path.filename().string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProviderError(id_, "model file not found: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  bool declared = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(id_, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (line_no == 1 && j.contains("dimension")) {
      dimension_ = j.at("dimension").get<std::size_t>();
      if (j.contains("provider")) id_ = "precomputed:" + j.at("provider").get<std::string>();
      declared = true;
      continue;
    }
    if (!j.contains("text") || !j.contains("vector"))
      throw ProviderError(id_, "line " + std::to_string(line_no) + ": expected text and vector");
    auto values = j.at("vector").get<std::vector<double>>();
    if (!declared && dimension_ == 0) dimension_ = values.size();
    if (values.size() != dimension_)
      throw ProviderError(id_, "line " + std::to_string(line_no) + ": vector has dimension " +
                                   std::to_string(values.size()) + ", declared " + std::to_string(dimension_));
    for (double v : values)
      if (!std::isfinite(v)) throw ProviderError(id_, "line " + std::to_string(line_no) + ": non-finite value");
    table_[j.at("text").get<std::string>()] = std::move(values);
  }
  if (dimension_ == 0) throw ProviderError(id_, "model file declares no vectors: " + path.string());
}

std::vector<double> PrecomputedProvider::embed(std::string_view normalized_text) const {
  const auto it = table_.find(std::string(normalized_text));
  if (it == table_.end()) throw ProviderError(id_, "no vector for text \"" + std::string(normalized_text) + "\"");
  return it->second;
}

EmbeddingCache::EmbeddingCache(fs::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) fs::create_directories(dir_);
}

fs::path EmbeddingCache::file_for(const std::string& provider_id) const {
  std::string name;
  for (char c : provider_id) name.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return dir_ / (name + "-" + hex64(fnv1a64(provider_id)) + ".bin");
}

namespace {

template <typename T>
bool read_pod(std::istream& in, T& value) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof value));
}

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

}  // namespace

EmbeddingCache::Table& EmbeddingCache::table_for(const std::string& provider_id) const {
  auto [it, inserted] = tables_.try_emplace(provider_id);
  if (!inserted || dir_.empty()) return it->second;
  // Record: u64 text length, text bytes, u64 dimension, doubles. A torn
  // trailing record is ignored.
  std::ifstream in(file_for(provider_id), std::ios::binary);
  while (in) {
    std::uint64_t len = 0, dim = 0;
    if (!read_pod(in, len) || len > (1u << 24)) break;
    std::string text(len, '\0');
    if (!in.read(text.data(), static_cast<std::streamsize>(len))) break;
    if (!read_pod(in, dim) || dim > (1u << 20)) break;
    std::vector<double> values(dim);
    if (!in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(dim * sizeof(double)))) break;
    const auto h = text_hash(text);
    it->second[h] = Entry{std::move(text), std::move(values)};
  }
  return it->second;
}

std::optional<std::vector<double>> EmbeddingCache::find(const std::string& provider_id, std::string_view text) const {
  std::lock_guard lock(mutex_);
  const auto& table = table_for(provider_id);
  const auto it = table.find(text_hash(text));
  if (it == table.end() || it->second.text != text) return std::nullopt;
  return it->second.values;
}

void EmbeddingCache::insert(const std::string& provider_id, std::string_view text, std::span<const double> values) {
  std::lock_guard lock(mutex_);
  auto& table = table_for(provider_id);
  const auto h = text_hash(text);
  if (const auto it = table.find(h); it != table.end() && it->second.text == text) return;
  table[h] = Entry{std::string(text), std::vector<double>(values.begin(), values.end())};
  if (dir_.empty()) return;
  std::ofstream out(file_for(provider_id), std::ios::binary | std::ios::app);
  write_pod(out, static_cast<std::uint64_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  write_pod(out, static_cast<std::uint64_t>(values.size()));
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(double)));
}

std::size_t EmbeddingCache::size() const {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const auto& [id, t] : tables_) n += t.size();
  return n;
}

Matrix embed_batch(std::span<const std::string> texts, const EmbeddingProvider& provider, EmbeddingCache* cache) {
  const std::size_t dim = provider.dimension();
  Matrix out(texts.size(), dim);
  std::unordered_map<std::string_view, std::size_t> first_row;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto [it, fresh] = first_row.try_emplace(texts[i], i);
    if (!fresh) {
      std::copy_n(out.row(it->second).begin(), dim, out.row(i).begin());
      continue;
    }
    std::optional<std::vector<double>> v;
    if (cache) v = cache->find(provider.id(), texts[i]);
    if (!v) {
      v = provider.embed(texts[i]);
      if (v->size() != dim)
        throw ProviderError(provider.id(), "returned dimension " + std::to_string(v->size()) + ", declared " +
                                               std::to_string(dim));
      for (double x : *v)
        if (!std::isfinite(x)) throw ProviderError(provider.id(), "returned a non-finite value");
      if (cache) cache->insert(provider.id(), texts[i], *v);
    }
    std::copy(v->begin(), v->end(), out.row(i).begin());
  }
  return out;
}

std::vector<double> centroid(std::span<const EmbeddingVector> vectors) {
  if (vectors.empty()) throw InvalidArgument("centroid of an empty set");
  const std::size_t dim = vectors.front().values.size();
  for (const auto& v : vectors)
    if (v.values.size() != dim) throw InvalidArgument("centroid: dimension mismatch");

  std::vector<std::size_t> order(vectors.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (vectors[a].text_hash != vectors[b].text_hash) return vectors[a].text_hash < vectors[b].text_hash;
    return vectors[a].values < vectors[b].values;
  });
  std::vector<double> sum(dim, 0.0);
  for (auto i : order)
    for (std::size_t j = 0; j < dim; ++j) sum[j] += vectors[i].values[j];
  for (double& x : sum) x /= static_cast<double>(vectors.size());
  return sum;
}

std::vector<double> row_mean(const Matrix& m) {
  if (m.rows() == 0) throw InvalidArgument("mean of an empty matrix");
  std::vector<double> sum(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) sum[j] += m(i, j);
  for (double& x : sum) x /= static_cast<double>(m.rows());
  return sum;
}

std::unique_ptr<EmbeddingProvider> make_provider(const std::string& model_path, std::uint64_t seed,
                                                 std::size_t dimension) {
  if (!model_path.empty()) {
    return std::make_unique<PrecomputedProvider>(model_path);
  }
  return std::make_unique<FallbackProvider>(seed, dimension == 0 ? kDefaultDimension : dimension);
}

}  // namespace eit
