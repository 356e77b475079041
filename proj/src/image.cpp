#include "dip/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

namespace dip {

ImageBuffer::ImageBuffer(int width, int height, int channels, std::uint8_t fill)
    : ImageBuffer(width, height, channels,
                  std::vector<std::uint8_t>(
                      width > 0 && height > 0 && channels > 0
                          ? static_cast<std::size_t>(width) * height * channels
                          : 0,
                      fill)) {}

ImageBuffer::ImageBuffer(int width, int height, int channels,
                         std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kInvalidArgument, "image dimensions must be >= 1");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::kInvalidArgument, "image must have 1 or 3 channels");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw Error(ErrorCode::kInvalidArgument, "image data length mismatch");
  }
}

Plane to_plane(const ImageBuffer& gray) {
  if (gray.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "expected a 1-channel image");
  }
  Plane p(gray.width(), gray.height());
  const auto src = gray.data();
  for (std::size_t i = 0; i < src.size(); ++i) p.data[i] = src[i];
  return p;
}

Rect full_frame(int width, int height) {
  return {0.0, 0.0, width - 1.0, height - 1.0};
}

Rect clamp_to_frame(const Rect& r, int width, int height) {
  return {std::max(0.0, std::floor(r.x_min)), std::max(0.0, std::floor(r.y_min)),
          std::min(width - 1.0, std::ceil(r.x_max)),
          std::min(height - 1.0, std::ceil(r.y_max))};
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Reads one whitespace-delimited token, skipping '#' comments.
  std::string token() {
    skip_space_and_comments();
    std::string out;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
      out.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (out.empty()) throw Error(ErrorCode::kMalformedHeader, "unexpected end of header");
    return out;
  }

  long number() {
    const std::string t = token();
    for (char ch : t) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) {
        throw Error(ErrorCode::kMalformedHeader, "non-numeric header field '" + t + "'");
      }
    }
    if (t.size() > 9) throw Error(ErrorCode::kMalformedHeader, "header value too large");
    return std::stol(t);
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kMalformedHeader, "missing separator before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageBuffer decode_netpbm(std::span<const std::uint8_t> bytes) {
  HeaderReader reader(bytes);
  const std::string magic = reader.token();
  int channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw Error(ErrorCode::kMalformedHeader, "unsupported magic '" + magic + "'");
  }
  const long width = reader.number();
  const long height = reader.number();
  const long maxval = reader.number();
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kMalformedHeader, "zero image dimension");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::kUnsupportedMaxval, "maxval " + std::to_string(maxval));
  }
  const std::size_t offset = reader.raster_offset();
  const std::size_t need = static_cast<std::size_t>(width) * height * channels;
  if (bytes.size() < offset + need) {
    throw Error(ErrorCode::kTruncatedData, "raster has " +
                                               std::to_string(bytes.size() - offset) +
                                               " bytes, expected " + std::to_string(need));
  }
  std::vector<std::uint8_t> data(bytes.begin() + offset, bytes.begin() + offset + need);
  return ImageBuffer(static_cast<int>(width), static_cast<int>(height), channels,
                     std::move(data));
}

std::vector<std::uint8_t> encode_netpbm(const ImageBuffer& image) {
  const std::string header = (image.channels() == 1 ? "P5\n" : "P6\n") +
                             std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.data().begin(), image.data().end());
  return out;
}

ImageBuffer load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_netpbm(bytes);
}

void save_image(const ImageBuffer& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  const auto bytes = encode_netpbm(image);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace dip
