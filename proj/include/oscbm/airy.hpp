#pragma once

namespace oscbm::airy {

// Airy Ai on the real line: Maclaurin series for |x| <= 1.5, saddle-point
// contour quadrature elsewhere.  Underflows to 0 beyond x = 108.
double airy_ai(double x);

}  // namespace oscbm::airy
