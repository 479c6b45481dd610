#include "bojtc/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>
#include <utility>

namespace bojtc {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (shape, direction) and kept for the
// process lifetime.
class PlanCache
{
public:
  ~PlanCache()
  {
    for (auto& [key, plan] : mPlans)
      fftw_destroy_plan(plan);
  }

  fftw_plan get(int width, int height, int sign)
  {
    std::lock_guard lock(mMutex);
    const auto key = std::make_tuple(width, height, sign);
    if (auto it = mPlans.find(key); it != mPlans.end())
      return it->second;

    std::vector<Complex> scratch(static_cast<std::size_t>(width) * height);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_2d(height, width, buf, buf, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan)
      throw std::runtime_error("FFTW failed to create a plan");
    mPlans.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mMutex;
  std::map<std::tuple<int, int, int>, fftw_plan> mPlans;
};

PlanCache& planCache()
{
  static PlanCache cache;
  return cache;
}

void requireTransformable(int width, int height)
{
  if (width < 2 || height < 2)
    throw std::invalid_argument("transform needs at least 2x2, got " +
                                std::to_string(width) + "x" +
                                std::to_string(height));
  if (width % 2 != 0 || height % 2 != 0)
    throw std::invalid_argument("transform needs even dimensions, got " +
                                std::to_string(width) + "x" +
                                std::to_string(height));
}

// Swaps quadrants. For even dimensions this is its own inverse.
ComplexField swapQuadrants(const ComplexField& f)
{
  const int w = f.width();
  const int h = f.height();
  ComplexField out(w, h);
  for (int y = 0; y < h; ++y)
  {
    const int sy = (y + h / 2) % h;
    for (int x = 0; x < w; ++x)
      out((x + w / 2) % w, sy) = f(x, y);
  }
  return out;
}

ComplexField transform(const ComplexField& f, int sign)
{
  requireTransformable(f.width(), f.height());
  requireFinite(f);

  ComplexField buf = swapQuadrants(f);
  fftw_plan plan = planCache().get(f.width(), f.height(), sign);
  auto* io = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plan, io, io);

  const double norm = 1.0 / std::sqrt(static_cast<double>(f.size()));
  for (auto& v : buf.values())
    v *= norm;
  return swapQuadrants(buf);
}

std::string pixelName(std::size_t i, int width)
{
  std::ostringstream os;
  os << "(x=" << (i % width) << ", y=" << (i / width) << ")";
  return os.str();
}

} // namespace

void requireFinite(const Frame& f, const char* what)
{
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw std::domain_error(std::string("non-finite value in ") + what +
                              " at pixel " + pixelName(i, f.width()));
}

void requireFinite(const ComplexField& f, const char* what)
{
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      throw std::domain_error(std::string("non-finite value in ") + what +
                              " at pixel " + pixelName(i, f.width()));
}

ComplexField toComplex(const Frame& f)
{
  ComplexField out(f.width(), f.height());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = f[i];
  return out;
}

Frame realPart(const ComplexField& f)
{
  Frame out(f.width(), f.height());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = f[i].real();
  return out;
}

ComplexField ft2Centered(const ComplexField& f)
{
  return transform(f, FFTW_FORWARD);
}

ComplexField ft2Centered(const Frame& f)
{
  requireFinite(f);
  return transform(toComplex(f), FFTW_FORWARD);
}

ComplexField ift2Centered(const ComplexField& f)
{
  return transform(f, FFTW_BACKWARD);
}

ComplexField dft2Oracle(const ComplexField& f)
{
  constexpr int kMaxSide = 32;
  if (f.width() > kMaxSide || f.height() > kMaxSide)
    throw std::invalid_argument(
      "dft2Oracle is O(N^4) and limited to 32x32; use ft2Centered for " +
      std::to_string(f.width()) + "x" + std::to_string(f.height()));
  requireTransformable(f.width(), f.height());
  requireFinite(f);

  const int w = f.width();
  const int h = f.height();
  const int cx = w / 2;
  const int cy = h / 2;
  const double norm = 1.0 / std::sqrt(static_cast<double>(w) * h);
  constexpr double twoPi = 2.0 * std::numbers::pi;

  ComplexField out(w, h);
  for (int ky = 0; ky < h; ++ky)
    for (int kx = 0; kx < w; ++kx)
    {
      Complex acc = 0.0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
        {
          const double phase =
            -twoPi * (static_cast<double>((kx - cx) * (x - cx)) / w +
                      static_cast<double>((ky - cy) * (y - cy)) / h);
          acc += f(x, y) * std::polar(1.0, phase);
        }
      out(kx, ky) = acc * norm;
    }
  return out;
}

ComplexField dft2Oracle(const Frame& f)
{
  return dft2Oracle(toComplex(f));
}

Frame intensity(const ComplexField& f)
{
  Frame out(f.width(), f.height());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = std::norm(f[i]);
  return out;
}

void placeCentered(Frame& canvas, const Frame& img, Offset position)
{
  const int x0 = canvas.width() / 2 + position.x - img.width() / 2;
  const int y0 = canvas.height() / 2 + position.y - img.height() / 2;
  if (x0 < 0 || y0 < 0 || x0 + img.width() > canvas.width() ||
      y0 + img.height() > canvas.height())
  {
    std::ostringstream os;
    os << "image footprint [x " << x0 << ".." << x0 + img.width() << ", y "
       << y0 << ".." << y0 + img.height() << ") falls outside the "
       << canvas.width() << "x" << canvas.height() << " canvas";
    throw std::out_of_range(os.str());
  }
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      canvas(x0 + x, y0 + y) = img(x, y);
}

std::pair<Offset, Offset> offsetPositions(Offset offset)
{
  // floor division so that a + offset lands exactly on b
  auto floorHalf = [](int v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); };
  const Offset a{-floorHalf(offset.x), -floorHalf(offset.y)};
  const Offset b{a.x + offset.x, a.y + offset.y};
  return {a, b};
}

Frame embedWithOffset(const Frame& imgA, const Frame& imgB, Offset offset,
                      int canvasWidth, int canvasHeight)
{
  const auto [posA, posB] = offsetPositions(offset);

  struct Rect { int x0, y0, x1, y1; };
  auto footprint = [&](const Frame& img, Offset p) {
    const int x0 = canvasWidth / 2 + p.x - img.width() / 2;
    const int y0 = canvasHeight / 2 + p.y - img.height() / 2;
    return Rect{x0, y0, x0 + img.width(), y0 + img.height()};
  };
  const Rect ra = footprint(imgA, posA);
  const Rect rb = footprint(imgB, posB);
  const int ix0 = std::max(ra.x0, rb.x0);
  const int iy0 = std::max(ra.y0, rb.y0);
  const int ix1 = std::min(ra.x1, rb.x1);
  const int iy1 = std::min(ra.y1, rb.y1);
  if (ix0 < ix1 && iy0 < iy1)
  {
    std::ostringstream os;
    os << "images overlap in rectangle [x " << ix0 << ".." << ix1 << ", y "
       << iy0 << ".." << iy1 << ") for offset (" << offset.x << ","
       << offset.y << ")";
    throw std::invalid_argument(os.str());
  }

  Frame canvas(canvasWidth, canvasHeight);
  placeCentered(canvas, imgA, posA);
  placeCentered(canvas, imgB, posB);
  return canvas;
}

Frame shiftZeroFill(const Frame& f, Offset shift)
{
  if (std::abs(shift.x) >= f.width() || std::abs(shift.y) >= f.height())
    throw std::invalid_argument("shift (" + std::to_string(shift.x) + "," +
                                std::to_string(shift.y) +
                                ") is not smaller than the frame");
  if (shift.x == 0 && shift.y == 0)
    return f;

  Frame out(f.width(), f.height());
  for (int y = 0; y < f.height(); ++y)
  {
    const int sy = y - shift.y;
    if (sy < 0 || sy >= f.height())
      continue;
    for (int x = 0; x < f.width(); ++x)
    {
      const int sx = x - shift.x;
      if (sx >= 0 && sx < f.width())
        out(x, y) = f(sx, sy);
    }
  }
  return out;
}

} // namespace bojtc
