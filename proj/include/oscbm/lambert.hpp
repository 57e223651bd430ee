#pragma once

#include <complex>
#include <utility>

namespace oscbm::lambert {

using cplx = std::complex<double>;

// Limit to take when z sits on the branch cut (negative real axis pieces).
enum class CutSide { Above, Below };

// Branch k of w e^w = z.  On-cut values obey L_k(x - i0) = conj(L_{-k}(x + i0)).
cplx lambert_w(int k, cplx z, CutSide side = CutSide::Above);

// Loose horizontal strip containing Im L_k: [(2k-2)pi,(2k+1)pi] for k > 0,
// [-pi, pi] for k = 0, mirrored for k < 0.
std::pair<double, double> branch_strip(int k);

// Exact region test for branch k. Regions between adjacent branches are
// separated by the curves Re w = -Im w * cot(Im w) (images of the cuts).
bool branch_member(int k, cplx w);

// Expansion around the branch point: w = sum mu_j p^j, p = sqrt(2(e z + 1)),
// valid on the sheet where w -> -1.
cplx branch_point_series(cplx p, int nterms = 10);

// Real principal branch for x >= -1/e in extended precision; near the branch
// point this avoids the O(1/|p|) root-conditioning noise of iterative solves.
long double w0_real_ld(long double x);

// phi(z) = L_0(z e^z); identity on the principal region, contractive outside.
cplx phi_map(cplx z);

// Defect w e^w - z.
cplx residual(cplx w, cplx z);

}  // namespace oscbm::lambert
