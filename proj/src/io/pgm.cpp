#include "bojtc/io/pgm.hpp"

#include "bojtc/field.hpp"
#include "bojtc/optics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace bojtc::io {

namespace {

// Skips whitespace and '#' comments between header tokens.
void skipSeparators(std::istream& in)
{
  while (true)
  {
    const int c = in.peek();
    if (c == '#')
    {
      std::string discard;
      std::getline(in, discard);
    }
    else if (c != EOF && std::isspace(c))
      in.get();
    else
      return;
  }
}

int readHeaderInt(std::istream& in, const char* field)
{
  skipSeparators(in);
  long v = -1;
  if (!(in >> v) || v < 1 || v > 65535 * 4)
    throw std::runtime_error(std::string("PGM header: bad ") + field);
  return static_cast<int>(v);
}

} // namespace

Pgm readPgm(std::istream& in)
{
  char magic[2] = {};
  if (!in.read(magic, 2) || magic[0] != 'P' || magic[1] != '5')
    throw std::runtime_error("not a binary PGM (expected magic P5)");

  Pgm img;
  img.width = readHeaderInt(in, "width");
  img.height = readHeaderInt(in, "height");
  img.maxval = readHeaderInt(in, "maxval");
  if (img.maxval > 65535)
    throw std::runtime_error("PGM maxval exceeds 65535");
  if (!std::isspace(in.get()))
    throw std::runtime_error("PGM header: missing separator before raster");

  const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
  const std::size_t bytesPer = img.maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(count * bytesPer);
  if (!in.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(raw.size())))
    throw std::runtime_error("PGM raster truncated: expected " +
                             std::to_string(raw.size()) + " bytes");

  img.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i)
  {
    const std::uint16_t v =
      bytesPer == 1 ? raw[i]
                    : static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1]);
    if (v > img.maxval)
      throw std::runtime_error("PGM sample " + std::to_string(v) +
                               " exceeds maxval at index " + std::to_string(i));
    img.samples[i] = v;
  }
  return img;
}

Pgm readPgm(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  try
  {
    return readPgm(in);
  }
  catch (const std::runtime_error& e)
  {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void writePgm(std::ostream& out, const Pgm& img)
{
  if (img.maxval < 1 || img.maxval > 65535)
    throw std::invalid_argument("PGM maxval must lie in [1, 65535]");
  if (img.samples.size() != static_cast<std::size_t>(img.width) * img.height)
    throw std::invalid_argument("PGM sample count does not match dimensions");

  out << "P5\n" << img.width << ' ' << img.height << '\n' << img.maxval << '\n';
  std::vector<unsigned char> raw;
  raw.reserve(img.samples.size() * 2);
  for (std::uint16_t v : img.samples)
  {
    if (v > img.maxval)
      throw std::invalid_argument("PGM sample exceeds maxval");
    if (img.maxval < 256)
      raw.push_back(static_cast<unsigned char>(v));
    else
    {
      raw.push_back(static_cast<unsigned char>(v >> 8));
      raw.push_back(static_cast<unsigned char>(v & 0xff));
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
}

void writePgm(const std::filesystem::path& path, const Pgm& img)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  writePgm(out, img);
  if (!out)
    throw std::runtime_error("write failed for " + path.string());
}

Frame toFrame(const Pgm& img)
{
  Frame f(img.width, img.height);
  const double m = img.maxval;
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = img.samples[i] / m;
  return f;
}

Pgm fromUnitFrame(const Frame& f, int maxval)
{
  requireFinite(f, "image");
  Pgm img{f.width(), f.height(), maxval, {}};
  img.samples.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
  {
    if (f[i] < 0.0 || f[i] > 1.0)
      throw std::out_of_range("image value " + std::to_string(f[i]) +
                              " outside [0, 1] at index " + std::to_string(i));
    img.samples.push_back(
      static_cast<std::uint16_t>(roundHalfAwayFromZero(f[i] * maxval)));
  }
  return img;
}

Pgm fromCodes(const Frame& codes, int bits)
{
  const QuantSpec spec = QuantSpec::withBits(bits);
  const double top = spec.maxCode();
  Pgm img{codes.width(), codes.height(), static_cast<int>(top), {}};
  img.samples.reserve(codes.size());
  for (std::size_t i = 0; i < codes.size(); ++i)
  {
    const double c = codes[i];
    if (!(c >= 0.0 && c <= top) || c != std::floor(c))
      throw std::out_of_range("code " + std::to_string(c) + " at index " +
                              std::to_string(i) + " is not a " +
                              std::to_string(bits) + "-bit code");
    img.samples.push_back(static_cast<std::uint16_t>(c));
  }
  return img;
}

ScaledPgm fromRealFrame(const Frame& f)
{
  requireFinite(f, "plane");
  const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
  ScaledPgm out;
  out.offset = *lo;
  out.scale = *hi > *lo ? (*hi - *lo) / 65535.0 : 1.0;
  out.image = {f.width(), f.height(), 65535, {}};
  out.image.samples.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    out.image.samples.push_back(static_cast<std::uint16_t>(std::clamp(
      roundHalfAwayFromZero((f[i] - out.offset) / out.scale), 0.0, 65535.0)));
  return out;
}

} // namespace bojtc::io
