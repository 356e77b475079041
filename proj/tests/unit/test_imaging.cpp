#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "dip/color.hpp"
#include "dip/features.hpp"
#include "dip/filters.hpp"
#include "dip/image.hpp"
#include "support.hpp"

namespace dip {
namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header, std::vector<std::uint8_t> body) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no dip::Error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(NetPbm, GrayBytesMapRowMajor) {
  const ImageBuffer img = decode_netpbm(bytes_of("P5\n2 2\n255\n", {0, 255, 128, 64}));
  ASSERT_EQ(img.channels(), 1);
  EXPECT_EQ(img.at(0, 0), 0);
  EXPECT_EQ(img.at(1, 0), 255);
  EXPECT_EQ(img.at(0, 1), 128);
  EXPECT_EQ(img.at(1, 1), 64);
}

TEST(NetPbm, RgbPixels) {
  const ImageBuffer img =
      decode_netpbm(bytes_of("P6\n3 1\n255\n", {255, 0, 0, 0, 255, 0, 0, 0, 255}));
  ASSERT_EQ(img.channels(), 3);
  EXPECT_EQ(img.at(0, 0, 0), 255);
  EXPECT_EQ(img.at(1, 0, 1), 255);
  EXPECT_EQ(img.at(2, 0, 2), 255);
  EXPECT_EQ(img.at(0, 0, 1), 0);
}

TEST(NetPbm, HeaderErrors) {
  EXPECT_EQ(code_of([] { decode_netpbm(bytes_of("P5 0 0 255\n", {})); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([] { decode_netpbm(bytes_of("P3\n1 1\n255\n", {0})); }),
            ErrorCode::kMalformedHeader);
  EXPECT_EQ(code_of([] { decode_netpbm(bytes_of("P5\n1 1\n65535\n", {0, 0})); }),
            ErrorCode::kUnsupportedMaxval);
  EXPECT_EQ(code_of([] { decode_netpbm(bytes_of("P5\n2 2\n255\n", {1, 2, 3})); }),
            ErrorCode::kTruncatedData);
  EXPECT_EQ(code_of([] { decode_netpbm(bytes_of("P5\n2", {})); }), ErrorCode::kMalformedHeader);
}

TEST(NetPbm, CommentsInHeaderAreSkipped) {
  const ImageBuffer img = decode_netpbm(bytes_of("P5 # c\n# x\n1 1 # y\n255\n", {9}));
  EXPECT_EQ(img.at(0, 0), 9);
}

TEST(NetPbm, CanonicalBytesRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> v(0, 255);
  for (int ch : {1, 3}) {
    std::vector<std::uint8_t> body(7 * 5 * ch);
    for (auto& b : body) b = static_cast<std::uint8_t>(v(rng));
    const auto bytes = bytes_of(ch == 1 ? "P5\n7 5\n255\n" : "P6\n7 5\n255\n", body);
    EXPECT_EQ(encode_netpbm(decode_netpbm(bytes)), bytes);
  }
}

TEST(NetPbm, FileRoundTrip) {
  test::TempDir dir;
  std::mt19937_64 rng(2);
  ImageBuffer img(31, 17, 3);
  add_noise(img, rng, 120);
  save_image(img, dir / "a.ppm");
  EXPECT_EQ(load_image(dir / "a.ppm"), img);
  const auto bytes = test::read_file(dir / "a.ppm");
  save_image(load_image(dir / "a.ppm"), dir / "b.ppm");
  EXPECT_EQ(test::read_file(dir / "b.ppm"), bytes);
  EXPECT_EQ(code_of([&] { load_image(dir / "missing.ppm"); }), ErrorCode::kIoError);
}

TEST(ImageBuffer, Invariants) {
  EXPECT_THROW(ImageBuffer(0, 3, 1), Error);
  EXPECT_THROW(ImageBuffer(3, 3, 2), Error);
  EXPECT_THROW(ImageBuffer(2, 2, 1, std::vector<std::uint8_t>(3)), Error);
  EXPECT_EQ(ImageBuffer(4, 3, 3).data().size(), 36u);
}

TEST(Grayscale, LumaExamples) {
  auto gray_of = [](std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return to_grayscale(ImageBuffer(1, 1, 3, {r, g, b})).at(0, 0);
  };
  EXPECT_EQ(gray_of(255, 255, 255), 255);
  EXPECT_EQ(gray_of(0, 0, 0), 0);
  // 0.299*100 + 0.587*150 + 0.114*200 = 140.75
  EXPECT_EQ(gray_of(100, 150, 200), 141);
  EXPECT_EQ(code_of([] { to_grayscale(ImageBuffer(2, 2, 1)); }), ErrorCode::kAlreadyGray);
  EXPECT_EQ(ensure_gray(ImageBuffer(2, 2, 1, 7)), ImageBuffer(2, 2, 1, 7));
}

TEST(GaussianBlur, ConstantImageUnchanged) {
  const ImageBuffer img(40, 30, 1, 137);
  EXPECT_EQ(gaussian_blur(img, 1.4), img);
  EXPECT_EQ(gaussian_blur(ImageBuffer(5, 4, 3, 9), 2.0), ImageBuffer(5, 4, 3, 9));
}

TEST(GaussianBlur, KernelIsNormalizedWithRadiusThreeSigma) {
  for (double s : {0.5, 1.0, 1.4, 2.3}) {
    const auto k = gaussian_kernel(s);
    EXPECT_EQ(k.size(), 2 * static_cast<std::size_t>(std::ceil(3 * s)) + 1);
    EXPECT_NEAR(std::accumulate(k.begin(), k.end(), 0.0), 1.0, 1e-12);
  }
  EXPECT_THROW(gaussian_kernel(0.0), Error);
}

TEST(GaussianBlur, ImpulseMatchesSeparableGaussian) {
  Plane p(21, 21);
  p.at(10, 10) = 1000.0;
  const Plane out = blur_plane(p, 1.0);
  double norm = 0.0;
  for (int i = -3; i <= 3; ++i) norm += std::exp(-i * i / 2.0);
  for (int y = 0; y < 21; ++y) {
    for (int x = 0; x < 21; ++x) {
      const int dx = x - 10, dy = y - 10;
      const double expected = (std::abs(dx) <= 3 && std::abs(dy) <= 3)
                                   ? 1000.0 * std::exp(-(dx * dx + dy * dy) / 2.0) / (norm * norm)
                                   : 0.0;
      EXPECT_NEAR(out.at(x, y), expected, 1e-9);
    }
  }
}

TEST(GaussianBlur, PreservesMeanOnLargeImage) {
  std::mt19937_64 rng(4);
  ImageBuffer img(640, 480, 1, 128);
  add_noise(img, rng, 100);
  const auto mean = [](const ImageBuffer& i) {
    double s = 0;
    for (auto v : i.data()) s += v;
    return s / static_cast<double>(i.data().size());
  };
  EXPECT_NEAR(mean(gaussian_blur(img, 0.5)), mean(img), 1.0);
}

TEST(Sobel, ConstantIsZero) {
  const Gradients g = sobel_gradients(ImageBuffer(12, 9, 1, 77));
  for (double v : g.gx.data) EXPECT_EQ(v, 0.0);
  for (double v : g.gy.data) EXPECT_EQ(v, 0.0);
}

TEST(Sobel, VerticalStep) {
  const int k = 10;
  ImageBuffer img(20, 12, 1);
  for (int y = 0; y < 12; ++y)
    for (int x = k; x < 20; ++x) img.at(x, y) = 255;
  const Gradients g = sobel_gradients(img);
  for (int y = 1; y < 11; ++y) {
    double best = -1;
    std::set<int> argmax;
    for (int x = 0; x < 20; ++x) {
      EXPECT_EQ(g.gy.at(x, y), 0.0);
      const double a = std::abs(g.gx.at(x, y));
      if (a > best) {
        best = a;
        argmax = {x};
      } else if (a == best) {
        argmax.insert(x);
      }
    }
    EXPECT_EQ(argmax, (std::set<int>{k - 1, k}));
  }
}

TEST(Sobel, DiagonalRampPointsAtQuarterPi) {
  ImageBuffer img(30, 30, 1);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 30; ++x) img.at(x, y) = static_cast<std::uint8_t>(3 * (x + y));
  const Gradients g = sobel_gradients(img);
  for (int y = 1; y < 29; ++y)
    for (int x = 1; x < 29; ++x) EXPECT_NEAR(g.direction.at(x, y), kPi / 4, 1e-12);
}

TEST(Canny, ConstantImageHasNoEdges) {
  EXPECT_EQ(canny(ImageBuffer(50, 40, 1, 200)).count(), 0u);
}

TEST(Canny, SquareGivesClosedRingOnTheBoundary) {
  const ImageBuffer img = test::square_scene(200, 200, {50, 50, 149, 149});
  const EdgeMap e = canny(img);
  ASSERT_GT(e.count(), 0u);
  for (int y = 0; y < 200; ++y) {
    for (int x = 0; x < 200; ++x) {
      if (!e.at(x, y)) continue;
      // Distance to the square outline at 49.5 / 149.5.
      const double dx = std::max({49.5 - x, x - 149.5, 0.0});
      const double dy = std::max({49.5 - y, y - 149.5, 0.0});
      const double outside = std::hypot(dx, dy);
      const double inside = std::min({x - 49.5, 149.5 - x, y - 49.5, 149.5 - y});
      EXPECT_LE(outside > 0 ? outside : inside, 1.0) << x << "," << y;
    }
  }
  // Every interior row and column crosses the ring exactly twice.
  for (int i = 55; i <= 144; ++i) {
    int row = 0, col = 0;
    for (int j = 0; j < 200; ++j) {
      row += e.at(j, i);
      col += e.at(i, j);
    }
    EXPECT_EQ(row, 2) << "row " << i;
    EXPECT_EQ(col, 2) << "col " << i;
  }
  const auto contours = extract_contours(e, 20);
  ASSERT_EQ(contours.size(), 1u);
}

TEST(Canny, HighThresholdAboveMaxGradientIsEmpty) {
  const ImageBuffer img = test::square_scene(200, 200, {50, 50, 149, 149});
  const CannyStages s = canny_stages(img);
  double max_mag = 0;
  for (double v : s.gradients.magnitude.data) max_mag = std::max(max_mag, v);
  EXPECT_EQ(canny(img, {1.4, 40, max_mag + 1}).count(), 0u);
  EXPECT_THROW(canny(img, {1.4, 100, 40}), Error);
}

// Flood fill from high-threshold seeds through suppressed pixels >= low.
EdgeMap hysteresis_oracle(const Plane& nms, double low, double high) {
  EdgeMap out(nms.width, nms.height);
  std::vector<std::pair<int, int>> queue;
  for (int y = 0; y < nms.height; ++y)
    for (int x = 0; x < nms.width; ++x)
      if (nms.at(x, y) >= high) {
        out.set(x, y, true);
        queue.emplace_back(x, y);
      }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto [x, y] = queue[i];
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= nms.width || ny >= nms.height || out.at(nx, ny)) continue;
        if (nms.at(nx, ny) >= low) {
          out.set(nx, ny, true);
          queue.emplace_back(nx, ny);
        }
      }
  }
  return out;
}

TEST(Canny, HysteresisAuditOnRandomScenes) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    ImageBuffer img = textured_background(160, 120, 1, rng);
    std::uniform_int_distribution<int> pos(0, 140), val(60, 255);
    for (int k = 0; k < 4; ++k) {
      const int x = pos(rng), y = pos(rng) % 100;
      const auto v = static_cast<std::uint8_t>(val(rng));
      fill_rect(img, {double(x), double(y), double(x + 15), double(y + 12)}, {v, v, v});
    }
    add_noise(img, rng, 20);
    const CannyParams params;
    const CannyStages s = canny_stages(img, params);
    EXPECT_EQ(s.edges.data, hysteresis_oracle(s.suppressed, params.low, params.high).data);
  }
}

TEST(Contours, EmptyMapGivesNothing) {
  EXPECT_TRUE(extract_contours(EdgeMap(30, 30), 1).empty());
}

TEST(Contours, RingCentroidAtSquareCentre) {
  const auto contours = extract_contours(canny(test::square_scene(200, 200, {50, 50, 149, 149})), 20);
  ASSERT_EQ(contours.size(), 1u);
  EXPECT_NEAR(contours[0].centroid.x, 99.5, 0.5);
  EXPECT_NEAR(contours[0].centroid.y, 99.5, 0.5);
}

TEST(Contours, LargerRingFirstAndInvariantsHold) {
  ImageBuffer img(300, 200, 1);
  fill_rect(img, {20, 20, 59, 59}, {255, 255, 255});
  fill_rect(img, {120, 40, 219, 139}, {255, 255, 255});
  const auto contours = extract_contours(canny(img), 20);
  ASSERT_EQ(contours.size(), 2u);
  EXPECT_GT(contours[0].area, contours[1].area);
  EXPECT_NEAR(contours[0].centroid.x, 169.5, 0.5);
  EXPECT_NEAR(contours[1].centroid.x, 39.5, 0.5);
  for (const auto& c : contours) {
    EXPECT_EQ(c.area, c.pixels.size());
    EXPECT_TRUE(c.bbox.contains(c.centroid));
  }
}

TEST(Contours, MinAreaFilters) {
  EdgeMap e(10, 10);
  e.set(1, 1, true);
  e.set(2, 2, true);
  e.set(7, 7, true);
  EXPECT_EQ(extract_contours(e, 1).size(), 2u);
  EXPECT_EQ(extract_contours(e, 2).size(), 1u);
  EXPECT_EQ(extract_contours(e, 3).size(), 0u);
}

TEST(Contours, FourFoldSymmetricSetsCentreExactly) {
  for (int r : {6, 11, 25}) {
    ImageBuffer img(120, 120, 1);
    fill_disk(img, {60, 60}, r, {230, 230, 230});
    const auto contours = extract_contours(canny(img), 1);
    ASSERT_FALSE(contours.empty());
    EXPECT_NEAR(contours[0].centroid.x, 60, 0.5);
    EXPECT_NEAR(contours[0].centroid.y, 60, 0.5);
  }
}

TEST(CornerResponse, ConstantIsZero) {
  const Plane r = corner_response(ImageBuffer(30, 30, 1, 90));
  for (double v : r.data) EXPECT_EQ(v, 0.0);
}

TEST(CornerResponse, StraightEdgeIsNonPositive) {
  ImageBuffer img(40, 40, 1);
  for (int y = 0; y < 40; ++y)
    for (int x = 20; x < 40; ++x) img.at(x, y) = 200;
  const Plane r = corner_response(img);
  for (int y = 0; y < 40; ++y)
    for (int x = 0; x < 40; ++x) EXPECT_LE(r.at(x, y), 0.0);
}

TEST(CornerResponse, JunctionIsPositiveMaximum) {
  const ImageBuffer img = test::quadrant_junction(64, 48, 30, 20);
  const Plane r = corner_response(img);
  int bx = 0, by = 0;
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x)
      if (r.at(x, y) > r.at(bx, by)) bx = x, by = y;
  EXPECT_GT(r.at(bx, by), 0.0);
  EXPECT_LE(std::abs(bx - 29.5), 1.0);
  EXPECT_LE(std::abs(by - 19.5), 1.0);
}

TEST(CornerResponse, RegionValuesMatchFullFrameExactly) {
  std::mt19937_64 rng(12);
  ImageBuffer img = textured_background(90, 70, 1, rng);
  add_noise(img, rng, 40);
  const Plane full = corner_response(img);
  for (const Rect region : {Rect{0, 0, 10, 10}, Rect{30, 20, 60, 45}, Rect{80, 60, 89, 69}}) {
    const Plane part = corner_response_in(img, {}, region);
    for (int y = int(region.y_min); y <= int(region.y_max); ++y)
      for (int x = int(region.x_min); x <= int(region.x_max); ++x)
        ASSERT_EQ(part.at(x, y), full.at(x, y));
  }
}

TEST(Keypoints, ConstantImageIsEmpty) {
  EXPECT_TRUE(detect_keypoints(ImageBuffer(40, 40, 1, 10), {}).empty());
}

TEST(Keypoints, SingleJunction) {
  const auto kps = detect_keypoints(test::quadrant_junction(64, 48, 30, 20), {});
  ASSERT_EQ(kps.size(), 1u);
  EXPECT_LE(std::abs(kps[0].location.x - 29.5), 1.0);
  EXPECT_LE(std::abs(kps[0].location.y - 19.5), 1.0);
}

TEST(Keypoints, MaskSelectsOneOfTwoJunctions) {
  const ImageBuffer img = test::two_junctions(120, 60, 30, 90, 30);
  const auto all = detect_keypoints(img, {});
  ASSERT_EQ(all.size(), 2u);
  PixelMask right{{70, 10, 110, 50}, [](int x, int) { return x >= 70; }};
  const auto masked = detect_keypoints(img, {}, right);
  ASSERT_EQ(masked.size(), 1u);
  EXPECT_LE(std::abs(masked[0].location.x - 89.5), 1.0);
  EXPECT_LE(std::abs(masked[0].location.y - 29.5), 1.0);
}

TEST(Keypoints, MaskedResultIsFilteredUnmaskedResult) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> cx(0, 160), cy(0, 120);
  for (int scene = 0; scene < 100; ++scene) {
    ImageBuffer img = textured_background(160, 120, 1, rng);
    for (int k = 0; k < 5; ++k) {
      const double x = std::floor(cx(rng)), y = std::floor(cy(rng));
      const auto v = static_cast<std::uint8_t>(100 + 30 * k);
      fill_rect(img, {x, y, x + 9 + 2 * k, y + 7 + k}, {v, v, v});
    }
    const Triangle t{{cx(rng), cy(rng)}, {cx(rng), cy(rng)}, {cx(rng), cy(rng)}};
    if (t.signed_area() == 0.0) continue;
    ScanRegion region;
    try {
      region = clip_triangle_to_image(t, 160, 120);
    } catch (const Error&) {
      continue;
    }
    const auto all = detect_keypoints(img, {});
    const auto masked = detect_keypoints(img, {}, PixelMask::from(region));
    std::vector<Keypoint> expected;
    for (const auto& k : all)
      if (region.contains(k.location.x, k.location.y)) expected.push_back(k);
    ASSERT_EQ(masked, expected) << "scene " << scene;
  }
}

TEST(Keypoints, OrderedAndDeterministic) {
  std::mt19937_64 rng(30);
  ImageBuffer img(120, 100, 1, 50);
  for (int k = 0; k < 6; ++k)
    fill_rect(img, {10.0 + 17 * k, 10.0 + 11 * k, 22.0 + 17 * k, 25.0 + 11 * k},
              {static_cast<std::uint8_t>(90 + 25 * k), 0, 0});
  const auto a = detect_keypoints(img, {});
  const auto b = detect_keypoints(img, {});
  EXPECT_EQ(a, b);
  ASSERT_GT(a.size(), 4u);
  for (std::size_t i = 1; i < a.size(); ++i) {
    const auto& p = a[i - 1];
    const auto& q = a[i];
    EXPECT_TRUE(p.strength > q.strength ||
                (p.strength == q.strength &&
                 (p.location.y < q.location.y ||
                  (p.location.y == q.location.y && p.location.x < q.location.x))));
  }
  const Plane r = corner_response(img);
  for (const auto& k : a) {
    EXPECT_GT(k.strength, KeypointParams{}.threshold);
    for (int dy = -5; dy <= 5; ++dy)
      for (int dx = -5; dx <= 5; ++dx) {
        const int x = k.location.x + dx, y = k.location.y + dy;
        if (x >= 0 && y >= 0 && x < 120 && y < 100) EXPECT_LE(r.at(x, y), k.strength);
      }
  }
}

TEST(HueHistogram, PureRedWindow) {
  const ImageBuffer img(10, 10, 3, std::vector<std::uint8_t>(300, 0));
  ImageBuffer red = img;
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) red.at(x, y, 0) = 255;
  const HueHistogram h = hue_histogram(red, {2, 2, 7, 7});
  ASSERT_EQ(h.bins.size(), 16u);
  EXPECT_DOUBLE_EQ(h.bins[static_cast<std::size_t>(h.bin_of(0.0))], 1.0);
  EXPECT_NEAR(std::accumulate(h.bins.begin(), h.bins.end(), 0.0), 1.0, 1e-12);
}

TEST(HueHistogram, BackProjectionSeparatesRedAndBlue) {
  ImageBuffer img(20, 10, 3);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 20; ++x) img.at(x, y, x < 10 ? 0 : 2) = 255;
  const HueHistogram h = hue_histogram(img, {0, 0, 9, 9});
  const Plane p = back_project(img, h);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 20; ++x) EXPECT_DOUBLE_EQ(p.at(x, y), x < 10 ? 1.0 : 0.0);
}

TEST(HueHistogram, GrayWindowIsEmpty) {
  const ImageBuffer img(8, 8, 3, 128);
  const HueHistogram h = hue_histogram(img, {0, 0, 7, 7});
  EXPECT_TRUE(h.empty());
  for (double v : back_project(img, h).data) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(code_of([&] { hue_histogram(img, {20, 20, 30, 30}); }), ErrorCode::kEmptyWindow);
}

TEST(HueHistogram, NormalizedAndBackProjectionInUnitRange) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    ImageBuffer img(40, 30, 3);
    add_noise(img, rng, 255);
    const HueHistogram h = hue_histogram(img, {5, 5, 30, 25});
    EXPECT_NEAR(std::accumulate(h.bins.begin(), h.bins.end(), 0.0), 1.0, 1e-6);
    for (double v : back_project(img, h).data) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Hsv, ChromaThreshold) {
  EXPECT_FALSE(is_chromatic(rgb_to_hsv(128, 128, 128)));
  EXPECT_FALSE(is_chromatic(rgb_to_hsv(20, 0, 0)));
  EXPECT_TRUE(is_chromatic(rgb_to_hsv(200, 40, 40)));
  EXPECT_NEAR(rgb_to_hsv(0, 255, 0).h, 120.0, 1e-12);
  EXPECT_NEAR(rgb_to_hsv(0, 0, 255).h, 240.0, 1e-12);
}

}  // namespace
}  // namespace dip
