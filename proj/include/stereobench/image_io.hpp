#pragma once

#include <cstdint>
#include <filesystem>

#include "stereobench/image.hpp"

namespace stereobench {

/// Decodes PNG/JPEG (anything the codec backend reads) as RGB. Alpha is
/// dropped with a warning on stderr; single-channel files are replicated.
Image load_image(const std::filesystem::path& path);

/// 8-bit RGB, no alpha. Values are clamped to [0, 255] and rounded half-up.
void save_image(const std::filesystem::path& path, const Image& img);
void save_gray(const std::filesystem::path& path, const GrayImage& gray);
/// Mask pixels are written as 255 (true) or 0 (false) in all channels.
void save_mask(const std::filesystem::path& path, const BinaryMap& mask);
BinaryMap load_mask(const std::filesystem::path& path);

std::uint8_t quantize_u8(double value) noexcept;

/// Path of the JSON sidecar that describes a raw or scaled binary file.
std::filesystem::path sidecar_path(const std::filesystem::path& path);

}  // namespace stereobench
