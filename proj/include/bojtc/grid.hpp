#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bojtc {

/// Integer pixel displacement. x grows to the right, y grows downward.
struct Offset
{
  int x = 0;
  int y = 0;

  friend bool operator==(const Offset&, const Offset&) = default;
};

/// Dense row-major 2D grid. Element (x, y) lives at index y * width + x.
template <typename T>
class Grid
{
public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{}) :
    mWidth(width), mHeight(height)
  {
    if (width < 1 || height < 1)
      throw std::invalid_argument("grid dimensions must be positive, got " +
                                  std::to_string(width) + "x" +
                                  std::to_string(height));
    mData.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Grid(int width, int height, std::vector<T> values) :
    mWidth(width), mHeight(height), mData(std::move(values))
  {
    if (width < 1 || height < 1)
      throw std::invalid_argument("grid dimensions must be positive");
    if (mData.size() != static_cast<std::size_t>(width) * height)
      throw std::invalid_argument("grid value count does not match " +
                                  std::to_string(width) + "x" +
                                  std::to_string(height));
  }

  int width() const { return mWidth; }
  int height() const { return mHeight; }
  std::size_t size() const { return mData.size(); }
  bool empty() const { return mData.empty(); }

  T& operator()(int x, int y) { return mData[index(x, y)]; }
  const T& operator()(int x, int y) const { return mData[index(x, y)]; }

  T& operator[](std::size_t i) { return mData[i]; }
  const T& operator[](std::size_t i) const { return mData[i]; }

  std::span<T> values() { return mData; }
  std::span<const T> values() const { return mData; }

  T* data() { return mData.data(); }
  const T* data() const { return mData.data(); }

  bool sameShape(const auto& other) const
  {
    return mWidth == other.width() && mHeight == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

private:
  std::size_t index(int x, int y) const
  {
    return static_cast<std::size_t>(y) * mWidth + x;
  }

  int mWidth = 0;
  int mHeight = 0;
  std::vector<T> mData;
};

using Complex = std::complex<double>;

/// Real-valued plane: images, detected intensities and SLM signals.
using Frame = Grid<double>;

/// Complex-valued plane: Fourier-domain fields.
using ComplexField = Grid<Complex>;

} // namespace bojtc
