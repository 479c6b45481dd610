#pragma once

#include "bojtc/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

namespace bojtc::io {

/// Binary P5 graymap. maxval < 256 stores one byte per sample, otherwise two
/// bytes big-endian.
struct Pgm
{
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint16_t> samples;

  friend bool operator==(const Pgm&, const Pgm&) = default;
};

Pgm readPgm(std::istream& in);
Pgm readPgm(const std::filesystem::path& path);
void writePgm(std::ostream& out, const Pgm& img);
void writePgm(const std::filesystem::path& path, const Pgm& img);

/// samples / maxval, i.e. amplitudes in [0, 1].
Frame toFrame(const Pgm& img);

/// Frame in [0, 1] to samples with the given maxval, rounded half away from
/// zero. Throws on values outside [0, 1].
Pgm fromUnitFrame(const Frame& f, int maxval);

/// Integer codes in [0, 2^bits - 1] stored verbatim with maxval 2^bits - 1.
Pgm fromCodes(const Frame& codes, int bits);

/// Linear map of an arbitrary real plane onto 16-bit samples:
/// value = offset + sample * scale.
struct ScaledPgm
{
  Pgm image;
  double offset = 0.0;
  double scale = 1.0;
};

ScaledPgm fromRealFrame(const Frame& f);

} // namespace bojtc::io
