#include "bojtc/charts.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace bojtc::charts {

namespace {

constexpr std::array<std::array<const char*, 7>, 10> kFont = {{
  {"01110", "10001", "10011", "10101", "11001", "10001", "01110"},
  {"00100", "01100", "00100", "00100", "00100", "00100", "01110"},
  {"01110", "10001", "00001", "00010", "00100", "01000", "11111"},
  {"11111", "00010", "00100", "00010", "00001", "10001", "01110"},
  {"00010", "00110", "01010", "10010", "11111", "00010", "00010"},
  {"11111", "10000", "11110", "00001", "00001", "10001", "01110"},
  {"00110", "01000", "10000", "11110", "10001", "10001", "01110"},
  {"11111", "00001", "00010", "00100", "01000", "01000", "01000"},
  {"01110", "10001", "10001", "01110", "10001", "10001", "01110"},
  {"01110", "10001", "10001", "01111", "00001", "00010", "01100"},
}};

} // namespace

Frame digitGlyph(char digit, int scale)
{
  if (digit < '0' || digit > '9')
    throw std::invalid_argument(std::string("no glyph for '") + digit + "'");
  if (scale < 1)
    throw std::invalid_argument("glyph scale must be >= 1");
  const auto& rows = kFont[digit - '0'];
  Frame g(5 * scale, 7 * scale);
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x)
      g(x, y) = rows[y / scale][x / scale] == '1' ? 1.0 : 0.0;
  return g;
}

Frame digitString(std::string_view digits, int scale)
{
  if (digits.empty())
    throw std::invalid_argument("digit string is empty");
  const int n = static_cast<int>(digits.size());
  Frame f((6 * n - 1) * scale, 7 * scale);
  for (int i = 0; i < n; ++i)
    paste(f, digitGlyph(digits[i], scale), 6 * scale * i, 0);
  return f;
}

Frame barTriplet(int barWidth, bool vertical)
{
  if (barWidth < 1)
    throw std::invalid_argument("bar width must be >= 1");
  const int length = 5 * barWidth;
  Frame f(length, length);
  for (int b = 0; b < 3; ++b)
    for (int along = 0; along < length; ++along)
      for (int across = 2 * b * barWidth; across < (2 * b + 1) * barWidth;
           ++across)
      {
        if (vertical)
          f(across, along) = 1.0;
        else
          f(along, across) = 1.0;
      }
  return f;
}

Frame square(int size)
{
  return Frame(size, size, 1.0);
}

Frame random(int width, int height, std::uint64_t seed)
{
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Frame f(width, height);
  for (double& v : f.values())
    v = dist(gen);
  return f;
}

void paste(Frame& canvas, const Frame& src, int x, int y)
{
  if (x < 0 || y < 0 || x + src.width() > canvas.width() ||
      y + src.height() > canvas.height())
    throw std::out_of_range("paste of " + std::to_string(src.width()) + "x" +
                            std::to_string(src.height()) + " at (" +
                            std::to_string(x) + "," + std::to_string(y) +
                            ") leaves the canvas");
  for (int j = 0; j < src.height(); ++j)
    for (int i = 0; i < src.width(); ++i)
      canvas(x + i, y + j) = src(i, j);
}

Frame crop(const Frame& src, int x, int y, int width, int height)
{
  if (x < 0 || y < 0 || width < 1 || height < 1 || x + width > src.width() ||
      y + height > src.height())
    throw std::out_of_range("crop rectangle (" + std::to_string(x) + "," +
                            std::to_string(y) + ") " + std::to_string(width) +
                            "x" + std::to_string(height) +
                            " leaves the source");
  Frame out(width, height);
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i)
      out(i, j) = src(x + i, y + j);
  return out;
}

Frame usafChart(int size)
{
  if (size < 32)
    throw std::invalid_argument("USAF chart needs size >= 32");
  Frame chart(size, size);
  int x = 1;
  int y = 1;
  int rowHeight = 0;
  for (int w = std::max(1, size / 32); w >= 1 && y < size; w = w * 3 / 4)
  {
    const Frame label = digitString(std::to_string(w), 1);
    const Frame h = barTriplet(w, false);
    const Frame v = barTriplet(w, true);
    const int need = label.width() + 1 + h.width() + 1 + v.width() + 2;
    if (x + need > size)
    {
      x = 1;
      y += rowHeight + 2;
      rowHeight = 0;
    }
    const int height = std::max(label.height(), h.height());
    if (y + height > size)
      break;
    paste(chart, label, x, y);
    paste(chart, h, x + label.width() + 1, y);
    paste(chart, v, x + label.width() + 2 + h.width(), y);
    x += need;
    rowHeight = std::max(rowHeight, height);
    if (w == 1)
      break;
  }
  return chart;
}

Frame featureReference()
{
  Frame ref(64, 64);
  paste(ref, digitString("1945", 2), 2, 2);
  paste(ref, digitString("5094", 2), 2, 18);
  paste(ref, barTriplet(3, false), 2, 34);
  paste(ref, barTriplet(3, true), 20, 34);
  paste(ref, barTriplet(2, false), 38, 34);
  paste(ref, barTriplet(2, true), 50, 34);
  paste(ref, barTriplet(1, false), 38, 48);
  paste(ref, barTriplet(1, true), 46, 48);
  paste(ref, digitString("7", 2), 54, 48);
  return ref;
}

double energy(const Frame& f)
{
  double e = 0.0;
  for (double v : f.values())
    e += v * v;
  return e;
}

std::vector<FeaturePair> featureCorpus(const Frame& ref, int count,
                                       double minFraction, double maxFraction)
{
  if (count < 1 || !(minFraction > 0.0) || !(maxFraction > minFraction))
    throw std::invalid_argument(
      "feature corpus needs count >= 1 and 0 < minFraction < maxFraction");
  const double total = energy(ref);
  if (!(total > 0.0))
    throw std::invalid_argument("feature corpus needs a nonzero reference");

  struct Candidate
  {
    Rect rect;
    double fraction;
  };
  std::vector<Candidate> candidates;
  const int step = std::max(1, std::min(ref.width(), ref.height()) / 16);
  for (int h = 4; h <= ref.height(); h += step)
    for (int w = 4; w <= ref.width(); w += step)
      for (int y = 0; y + h <= ref.height(); y += step)
        for (int x = 0; x + w <= ref.width(); x += step)
        {
          const double f = energy(crop(ref, x, y, w, h)) / total;
          if (f >= minFraction && f <= maxFraction)
            candidates.push_back({{x, y, w, h}, f});
        }
  if (candidates.empty())
    throw std::runtime_error("no crop of the reference falls in the energy "
                             "range");

  std::vector<FeaturePair> corpus;
  std::vector<bool> used(candidates.size(), false);
  const double ratio = std::log(maxFraction / minFraction);
  for (int i = 0; i < count; ++i)
  {
    const double target =
      count == 1 ? minFraction
                 : minFraction * std::exp(ratio * i / (count - 1));
    std::size_t best = candidates.size();
    for (std::size_t c = 0; c < candidates.size(); ++c)
      if (!used[c] && (best == candidates.size() ||
                       std::abs(std::log(candidates[c].fraction / target)) <
                         std::abs(std::log(candidates[best].fraction / target))))
        best = c;
    if (best == candidates.size())
      break;
    used[best] = true;
    const Rect& r = candidates[best].rect;
    corpus.push_back({ref, crop(ref, r.x, r.y, r.width, r.height), r,
                      candidates[best].fraction});
  }
  std::stable_sort(corpus.begin(), corpus.end(),
                   [](const FeaturePair& a, const FeaturePair& b) {
                     return a.energyFraction < b.energyFraction;
                   });
  return corpus;
}

} // namespace bojtc::charts
