#include "mocr/render/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "mocr/common/error.hpp"
#include "mocr/render/renderer.hpp"

namespace mocr::render {

namespace {

constexpr std::string_view kSchema = "mocr-score/1";

void require_same_shape(const Bitmap& a, const Bitmap& b) {
  if (!a.valid() || !b.valid()) throw std::invalid_argument("similarity: invalid bitmap");
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("similarity: dimension mismatch");
}

// RGB over white, one channel.
double over_white(const std::uint8_t* rgba, int channel) {
  const double alpha = rgba[3] / 255.0;
  return rgba[channel] * alpha + 255.0 * (1.0 - alpha);
}

std::vector<double> luma_plane(const Bitmap& bitmap) {
  std::vector<double> plane(bitmap.width * bitmap.height);
  for (std::size_t y = 0; y < bitmap.height; ++y)
    for (std::size_t x = 0; x < bitmap.width; ++x)
      plane[y * bitmap.width + x] = luminance_over_white(bitmap.pixel(x, y));
  return plane;
}

}  // namespace

double pixel_similarity(const Bitmap& a, const Bitmap& b) {
  require_same_shape(a, b);
  double total = 0.0;
  const std::size_t pixels = a.width * a.height;
  for (std::size_t i = 0; i < pixels; ++i) {
    const std::uint8_t* pa = a.samples.data() + i * 4;
    const std::uint8_t* pb = b.samples.data() + i * 4;
    for (int channel = 0; channel < 3; ++channel)
      total += std::abs(over_white(pa, channel) - over_white(pb, channel));
  }
  return 1.0 - total / (static_cast<double>(pixels) * 3.0 * 255.0);
}

double structural_similarity(const Bitmap& a, const Bitmap& b) {
  require_same_shape(a, b);
  constexpr std::size_t kWindow = 8;
  constexpr std::size_t kStride = 4;
  constexpr double kC1 = 6.5025;    // (0.01 * 255)^2
  constexpr double kC2 = 58.5225;   // (0.03 * 255)^2
  if (a.width < kWindow || a.height < kWindow) return pixel_similarity(a, b);

  const std::vector<double> luma_a = luma_plane(a);
  const std::vector<double> luma_b = luma_plane(b);
  const std::size_t w = a.width;

  double total = 0.0;
  std::size_t windows = 0;
  for (std::size_t wy = 0; wy + kWindow <= a.height; wy += kStride) {
    for (std::size_t wx = 0; wx + kWindow <= a.width; wx += kStride) {
      double mean_a = 0.0, mean_b = 0.0;
      for (std::size_t y = 0; y < kWindow; ++y)
        for (std::size_t x = 0; x < kWindow; ++x) {
          mean_a += luma_a[(wy + y) * w + wx + x];
          mean_b += luma_b[(wy + y) * w + wx + x];
        }
      constexpr double kN = static_cast<double>(kWindow * kWindow);
      mean_a /= kN;
      mean_b /= kN;
      double var_a = 0.0, var_b = 0.0, cov = 0.0;
      for (std::size_t y = 0; y < kWindow; ++y)
        for (std::size_t x = 0; x < kWindow; ++x) {
          const double da = luma_a[(wy + y) * w + wx + x] - mean_a;
          const double db = luma_b[(wy + y) * w + wx + x] - mean_b;
          var_a += da * da;
          var_b += db * db;
          cov += da * db;
        }
      var_a /= kN;
      var_b /= kN;
      cov /= kN;
      const double numerator = (2.0 * mean_a * mean_b + kC1) * (2.0 * cov + kC2);
      const double denominator =
          (mean_a * mean_a + mean_b * mean_b + kC1) * (var_a + var_b + kC2);
      total += numerator / denominator;
      ++windows;
    }
  }
  return std::clamp(total / static_cast<double>(windows), 0.0, 1.0);
}

ScoreBreakdown reconstruction_score(const Bitmap& reference, std::string_view predicted_svg) {
  if (!reference.valid())
    throw std::invalid_argument("reconstruction_score: degenerate reference");
  ScoreBreakdown breakdown;
  Bitmap predicted;
  try {
    predicted = render(predicted_svg, reference.width, reference.height);
  } catch (const Error&) {
    breakdown.failed = true;
    return breakdown;
  }
  breakdown.pixel = pixel_similarity(reference, predicted);
  breakdown.structural = structural_similarity(reference, predicted);
  breakdown.composite = 0.5 * breakdown.pixel + 0.5 * breakdown.structural;
  return breakdown;
}

void write_scores(const std::string& path, std::span<const ScoreRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open scores for writing: " + path);
  for (const ScoreRecord& record : records) {
    nlohmann::json line{
        {"schema", kSchema},
        {"id", record.asset_id},
        {"pixel", record.score.pixel},
        {"structural", record.score.structural},
        {"composite", record.score.composite},
        {"failed", record.score.failed},
    };
    out << line.dump() << '\n';
  }
  out.flush();
  if (!out) throw IoError("failed writing scores: " + path);
}

std::vector<ScoreRecord> read_scores(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scores: " + path);
  std::vector<ScoreRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    auto bad = [&](const std::string& why) {
      throw TextParseError("score line " + std::to_string(line_number) + ": " + why);
    };
    if (record.is_discarded() || !record.is_object()) bad("not a JSON object");
    if (record.value("schema", "") != kSchema) bad("unsupported schema");
    try {
      ScoreRecord parsed;
      parsed.asset_id = record.at("id").get<std::string>();
      parsed.score.pixel = record.at("pixel").get<double>();
      parsed.score.structural = record.at("structural").get<double>();
      parsed.score.composite = record.at("composite").get<double>();
      parsed.score.failed = record.at("failed").get<bool>();
      records.push_back(std::move(parsed));
    } catch (const nlohmann::json::exception& e) {
      bad(e.what());
    }
  }
  return records;
}

}  // namespace mocr::render
