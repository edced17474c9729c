#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gsvt/spectral.hpp"

namespace gsvt {

/// 8-bit image as one matrix per channel (1 for PGM, 3 for PPM), values in
/// [0, 255].
struct Image {
  std::vector<Matrix> channels;

  Eigen::Index rows() const { return channels.empty() ? 0 : channels[0].rows(); }
  Eigen::Index cols() const { return channels.empty() ? 0 : channels[0].cols(); }
};

/// Binary PGM (P5) or PPM (P6) with maxval 255. Throws DataError on an
/// unsupported magic, bad header or truncated payload.
Image decode_pnm(const std::string& bytes);
Image load_image(const std::filesystem::path& path);

/// Values are clamped to [0, 255] and rounded.
std::string encode_pnm(const Image& image);
void save_image(const std::filesystem::path& path, const Image& image);

}  // namespace gsvt
