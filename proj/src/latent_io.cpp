#include <vector>

#include "detail.hpp"
#include "json.hpp"
#include "stereobench/diffusion.hpp"
#include "stereobench/error.hpp"
#include "stereobench/image_io.hpp"

namespace stereobench {

void write_latent(const std::filesystem::path& path, const LatentTensor& tensor) {
  const auto v = tensor.values();
  detail::write_f32_le(path, std::vector<double>(v.begin(), v.end()));
  const nlohmann::json side = {{"channels", tensor.channels()},
                               {"height", tensor.height()},
                               {"width", tensor.width()},
                               {"role", std::string(to_string(tensor.role()))}};
  detail::write_text_atomic(sidecar_path(path), side.dump() + "\n");
}

LatentTensor read_latent(const std::filesystem::path& path) {
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(detail::read_text(sidecar_path(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "malformed latent sidecar for " + path.string() + ": " + e.what());
  }
  try {
    const int c = side.at("channels").get<int>();
    const int h = side.at("height").get<int>();
    const int w = side.at("width").get<int>();
    if (c < 1 || h < 1 || w < 1) throw Error(ErrorCode::ZeroDimension, "latent sidecar has a zero dimension");
    const LatentRole role = latent_role_from_string(side.value("role", std::string("unspecified")));
    auto values = detail::read_f32_le(path, static_cast<std::size_t>(c) * static_cast<std::size_t>(h) *
                                                static_cast<std::size_t>(w));
    return LatentTensor(c, h, w, std::move(values), role);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "latent sidecar for " + path.string() + ": " + e.what());
  }
}

}  // namespace stereobench
