#include "bojtc/optics.hpp"

#include "bojtc/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bojtc {

QuantSpec QuantSpec::withBits(int bits)
{
  QuantSpec spec;
  spec.bits = bits;
  spec.validate();
  return spec;
}

void QuantSpec::validate() const
{
  if (bits < 1 || bits > 16)
    throw std::invalid_argument("bit-depth must lie in [1, 16], got " +
                                std::to_string(bits));
}

void DeviceModel::requireResolution(const Frame& f) const
{
  if (f.width() != width || f.height() != height)
    throw std::invalid_argument(
      "frame " + std::to_string(f.width()) + "x" + std::to_string(f.height()) +
      " does not match device resolution " + std::to_string(width) + "x" +
      std::to_string(height));
}

double roundHalfAwayFromZero(double v)
{
  return v >= 0.0 ? std::floor(v + 0.5) : -std::floor(-v + 0.5);
}

Frame quantize(const Frame& scaled, const QuantSpec& spec)
{
  spec.validate();
  requireFinite(scaled, "quantizer input");

  const double top = spec.maxCode();
  Frame out(scaled.width(), scaled.height());
  const auto in = scaled.values();
  auto dst = out.values();
  if (spec.saturate)
  {
    for (std::size_t i = 0; i < in.size(); ++i)
      dst[i] = std::clamp(roundHalfAwayFromZero(in[i]), 0.0, top);
  }
  else
  {
    for (std::size_t i = 0; i < in.size(); ++i)
      dst[i] = roundHalfAwayFromZero(in[i]);
  }
  return out;
}

Frame slmProject(const Frame& codes, const BitDepth& spec)
{
  if (!spec)
    return codes;

  spec->validate();
  const double top = spec->maxCode();
  Frame out(codes.width(), codes.height());
  for (std::size_t i = 0; i < codes.size(); ++i)
  {
    const double c = codes[i];
    if (!(c >= 0.0 && c <= top) || c != std::floor(c))
      throw std::out_of_range("SLM code " + std::to_string(c) +
                              " at index " + std::to_string(i) +
                              " is not an integer in [0, " +
                              std::to_string(static_cast<int>(top)) + "]");
    out[i] = c / top;
  }
  return out;
}

Frame fpaCapture(const Frame& opticalIntensity, const BitDepth& spec,
                 double fullScale)
{
  requireFinite(opticalIntensity, "optical intensity");
  for (std::size_t i = 0; i < opticalIntensity.size(); ++i)
    if (opticalIntensity[i] < 0.0)
      throw std::domain_error("negative optical intensity at index " +
                              std::to_string(i));
  if (!spec)
    return opticalIntensity;
  if (!(fullScale > 0.0) || !std::isfinite(fullScale))
    throw std::invalid_argument("FPA full scale must be positive");

  const double top = spec->maxCode();
  Frame scaled(opticalIntensity.width(), opticalIntensity.height());
  for (std::size_t i = 0; i < scaled.size(); ++i)
    scaled[i] = opticalIntensity[i] * top / fullScale;

  QuantSpec clamped = *spec;
  clamped.saturate = true;
  return quantize(scaled, clamped);
}

std::size_t countSaturated(const Frame& opticalIntensity, const BitDepth& spec,
                           double fullScale)
{
  if (!spec)
    return 0;
  return static_cast<std::size_t>(
    std::count_if(opticalIntensity.values().begin(),
                  opticalIntensity.values().end(),
                  [fullScale](double v) { return v > fullScale; }));
}

} // namespace bojtc
