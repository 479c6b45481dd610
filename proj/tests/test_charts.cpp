#include "bojtc/charts.hpp"

#include <gtest/gtest.h>

using namespace bojtc;

TEST(Charts, GlyphShape)
{
  const Frame one = charts::digitGlyph('1', 1);
  EXPECT_EQ(one.width(), 5);
  EXPECT_EQ(one.height(), 7);
  EXPECT_EQ(one(2, 0), 1.0);
  EXPECT_EQ(one(0, 0), 0.0);
  EXPECT_EQ(charts::energy(charts::digitGlyph('1', 2)), 4 * charts::energy(one));
  EXPECT_THROW(charts::digitGlyph('x'), std::invalid_argument);
}

TEST(Charts, DigitStringSpacing)
{
  const Frame s = charts::digitString("11", 1);
  EXPECT_EQ(s.width(), 11);
  EXPECT_EQ(charts::energy(s), 2 * charts::energy(charts::digitGlyph('1', 1)));
}

TEST(Charts, BarTriplet)
{
  const Frame h = charts::barTriplet(2, false);
  EXPECT_EQ(h.width(), 10);
  EXPECT_EQ(charts::energy(h), 3.0 * 2 * 10);
  EXPECT_EQ(h(0, 0), 1.0);
  EXPECT_EQ(h(0, 2), 0.0);
  const Frame v = charts::barTriplet(2, true);
  EXPECT_EQ(v(0, 0), 1.0);
  EXPECT_EQ(v(2, 0), 0.0);
}

TEST(Charts, CropAndPasteBounds)
{
  Frame canvas(8, 8);
  EXPECT_THROW(charts::paste(canvas, Frame(4, 4), 5, 0), std::out_of_range);
  EXPECT_THROW(charts::crop(canvas, 6, 6, 4, 4), std::out_of_range);
  charts::paste(canvas, Frame(2, 2, 1.0), 3, 4);
  EXPECT_EQ(charts::energy(charts::crop(canvas, 3, 4, 2, 2)), 4.0);
}

TEST(Charts, RandomIsSeeded)
{
  EXPECT_EQ(charts::random(8, 8, 3), charts::random(8, 8, 3));
  EXPECT_NE(charts::random(8, 8, 3), charts::random(8, 8, 4));
}

TEST(Charts, UsafChartHasContent)
{
  const Frame c = charts::usafChart(64);
  EXPECT_GT(charts::energy(c), 100.0);
  EXPECT_LT(charts::energy(c), 64.0 * 64.0);
}

TEST(Charts, FeatureCorpusSpansEnergyRange)
{
  const Frame ref = charts::featureReference();
  const auto corpus = charts::featureCorpus(ref, 12, 0.01, 0.5);
  ASSERT_EQ(corpus.size(), 12u);
  int weak = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
  {
    const auto& p = corpus[i];
    EXPECT_GE(p.energyFraction, 0.01);
    EXPECT_LE(p.energyFraction, 0.5);
    EXPECT_DOUBLE_EQ(p.energyFraction,
                     charts::energy(p.query) / charts::energy(ref));
    EXPECT_EQ(p.query, charts::crop(ref, p.source.x, p.source.y,
                                    p.source.width, p.source.height));
    if (i > 0)
      EXPECT_LE(corpus[i - 1].energyFraction, p.energyFraction);
    weak += p.energyFraction <= 0.05;
  }
  EXPECT_GE(weak, 2);
}
