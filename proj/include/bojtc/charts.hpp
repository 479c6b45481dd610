#pragma once

#include "bojtc/grid.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace bojtc::charts {

/// 5x7 bitmap digit, each cell blown up to scale x scale pixels.
Frame digitGlyph(char digit, int scale = 2);

/// Digits laid out left to right with one glyph cell of spacing.
Frame digitString(std::string_view digits, int scale = 2);

/// Three bars of the given width, 5x as long, separated by one bar width:
/// one element of a resolution target.
Frame barTriplet(int barWidth, bool vertical);

Frame square(int size);

/// Uniform values in [0, 1) from a seeded generator.
Frame random(int width, int height, std::uint64_t seed);

/// Copies src into a zero canvas of the given size at (x, y).
void paste(Frame& canvas, const Frame& src, int x, int y);

Frame crop(const Frame& src, int x, int y, int width, int height);

/// USAF-style resolution chart: horizontal and vertical bar triplets of
/// decreasing width with digit labels.
Frame usafChart(int size);

/// The 64x64 reference used for feature-extraction experiments: two rows of
/// digits above a block of bar triplets.
Frame featureReference();

/// Sum of squared values.
double energy(const Frame& f);

struct Rect
{
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

struct FeaturePair
{
  Frame ref;
  Frame query;
  Rect source;
  double energyFraction = 0.0;
};

/// Crops of ref whose energy fraction lies in [minFraction, maxFraction],
/// picked closest to count log-spaced targets across that range. Distinct
/// crops only; the result is sorted by energy fraction.
std::vector<FeaturePair> featureCorpus(const Frame& ref, int count,
                                       double minFraction, double maxFraction);

} // namespace bojtc::charts
