#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace eit {

/// Canonical form used for grouping, hashing and labeling responses:
/// Unicode default case folding, whitespace runs collapsed to one space,
/// leading/trailing whitespace stripped, control characters (Cc) removed.
/// Invalid UTF-8 sequences become U+FFFD. Idempotent.
std::string normalize_text(std::string_view raw);

/// Decodes UTF-8 into code points; invalid sequences become U+FFFD.
std::u32string to_code_points(std::string_view utf8);
std::string to_utf8(std::u32string_view code_points);

/// Length in Unicode scalar values.
std::size_t char_length(std::string_view utf8);

/// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Digest of a normalized text used as cache key and for exclusion sets.
inline std::uint64_t text_hash(std::string_view normalized) noexcept { return fnv1a64(normalized); }

std::string hex64(std::uint64_t value);

}  // namespace eit
