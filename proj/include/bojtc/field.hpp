#pragma once

#include "bojtc/grid.hpp"

namespace bojtc {

/// Throws std::domain_error naming the first non-finite pixel.
void requireFinite(const Frame& f, const char* what = "frame");
void requireFinite(const ComplexField& f, const char* what = "field");

ComplexField toComplex(const Frame& f);
Frame realPart(const ComplexField& f);

/// Centered, unitary 2D DFT with a negative exponent. Zero frequency sits at
/// pixel (width/2, height/2). Both dimensions must be even and at least 2.
ComplexField ft2Centered(const ComplexField& f);
ComplexField ft2Centered(const Frame& f);

/// Inverse of ft2Centered.
ComplexField ift2Centered(const ComplexField& f);

/// Direct-summation centered DFT with the same convention as ft2Centered.
/// Limited to 32x32 grids; it costs O(N^4).
ComplexField dft2Oracle(const ComplexField& f);
ComplexField dft2Oracle(const Frame& f);

/// Per-pixel squared modulus.
Frame intensity(const ComplexField& f);

/// Copies img onto a zero canvas so that the image's center pixel
/// (width/2, height/2) lands at canvas center + position. Throws if any part
/// of the image falls outside the canvas.
void placeCentered(Frame& canvas, const Frame& img, Offset position);

/// The position pair used for side-by-side placement: a at
/// -floor(offset/2), b at a + offset. The displacement b - a equals offset
/// exactly for odd offsets too.
std::pair<Offset, Offset> offsetPositions(Offset offset);

/// Places img_a at -offset/2 and img_b at +offset/2 around the canvas center.
/// The two footprints must fit inside the canvas and must not overlap.
Frame embedWithOffset(const Frame& imgA, const Frame& imgB, Offset offset,
                      int canvasWidth, int canvasHeight);

/// Translates by (dx, dy) with zero fill. |dx| must be < width and |dy| <
/// height.
Frame shiftZeroFill(const Frame& f, Offset shift);

} // namespace bojtc
