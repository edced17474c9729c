#include "gsvt/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "gsvt/errors.hpp"

namespace gsvt {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(const std::string& bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) throw DataError("image: truncated header");
  return bytes.substr(start, pos - start);
}

long header_int(const std::string& bytes, std::size_t& pos, const char* what) {
  const std::string tok = next_token(bytes, pos);
  if (!std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw DataError(std::string("image: bad ") + what + " '" + tok + "'");
  }
  return std::stol(tok);
}

}  // namespace

Image decode_pnm(const std::string& bytes) {
  std::size_t pos = 0;
  const std::string magic = next_token(bytes, pos);
  std::size_t channels = 0;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw DataError("image: unsupported format magic '" + magic + "' (need P5 or P6)");

  const long width = header_int(bytes, pos, "width");
  const long height = header_int(bytes, pos, "height");
  const long maxval = header_int(bytes, pos, "maxval");
  if (width <= 0 || height <= 0) throw DataError("image: empty image");
  if (maxval != 255) throw DataError("image: only 8-bit images (maxval 255) are supported");
  if (pos >= bytes.size()) throw DataError("image: truncated payload");
  ++pos;  // single whitespace byte after maxval

  const auto pixels = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < pixels * channels) throw DataError("image: truncated payload");

  Image img;
  img.channels.assign(channels, Matrix(height, width));
  for (long r = 0; r < height; ++r) {
    for (long c = 0; c < width; ++c) {
      for (std::size_t ch = 0; ch < channels; ++ch) {
        img.channels[ch](r, c) = static_cast<unsigned char>(bytes[pos++]);
      }
    }
  }
  return img;
}

Image load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open image " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pnm(bytes);
}

std::string encode_pnm(const Image& image) {
  const std::size_t channels = image.channels.size();
  if (channels != 1 && channels != 3) throw DomainError("image: need 1 or 3 channels");
  const Eigen::Index h = image.rows();
  const Eigen::Index w = image.cols();
  for (const auto& ch : image.channels) {
    if (ch.rows() != h || ch.cols() != w) throw DomainError("image: channel shape mismatch");
  }
  std::ostringstream out;
  out << (channels == 1 ? "P5" : "P6") << '\n' << w << ' ' << h << "\n255\n";
  std::string payload;
  payload.reserve(static_cast<std::size_t>(h * w) * channels);
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) {
      for (const auto& ch : image.channels) {
        const double v = std::clamp(std::round(ch(r, c)), 0.0, 255.0);
        payload.push_back(static_cast<char>(static_cast<unsigned char>(v)));
      }
    }
  }
  return out.str() + payload;
}

void save_image(const std::filesystem::path& path, const Image& image) {
  const std::string bytes = encode_pnm(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write image " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing image " + path.string());
}

}  // namespace gsvt
