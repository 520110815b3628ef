#pragma once

#include <string>

#include "stereobench/error.hpp"

namespace stereobench::detail {

template <typename A, typename B>
void require_same_size(const A& a, const B& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                                  " vs " + std::to_string(b.width()) + "x" +
                                                  std::to_string(b.height()));
  }
}

}  // namespace stereobench::detail

#include <filesystem>
#include <string_view>

namespace stereobench::detail {

/// Writes to a sibling temporary file, then renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace stereobench::detail

#include <vector>

namespace stereobench::detail {

/// Raw little-endian float32 payloads (disparity and latent files).
void write_f32_le(const std::filesystem::path& path, const std::vector<double>& values);
std::vector<double> read_f32_le(const std::filesystem::path& path, std::size_t expected_count);

}  // namespace stereobench::detail
