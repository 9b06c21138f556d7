#pragma once

#include "bhflow/types.hpp"

namespace bhflow {

/// Point on the Riemann sphere.
struct CPoint {
  cplx value{0.0, 0.0};
  bool infinite = false;

  CPoint() = default;
  CPoint(cplx z) : value(z) {}
  CPoint(double x) : value(x, 0.0) {}
  static CPoint inf() {
    CPoint p;
    p.infinite = true;
    return p;
  }
};

/// z -> (a z + b) / (c z + d), stored with determinant normalized to 1.
struct MobiusTransform {
  cplx a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

  MobiusTransform() = default;
  MobiusTransform(cplx a_, cplx b_, cplx c_, cplx d_);

  CPoint apply(CPoint z) const;
  /// Finite-input convenience; maps poles to a non-finite complex value.
  cplx apply_finite(cplx z) const;

  MobiusTransform inverse() const;
};

/// Composition: (lhs * rhs)(z) = lhs(rhs(z)).
MobiusTransform operator*(const MobiusTransform& lhs,
                          const MobiusTransform& rhs);

/// The unique transform sending (p0, p1, p2) to (0, 1, infinity).
/// Points must be pairwise distinct (DegenerateTriple otherwise).
MobiusTransform mobius_to_standard_triple(CPoint p0, CPoint p1, CPoint p2);

/// Disk automorphism sending interior point `a` to 0 and rotating so `b`
/// lands on the positive real axis, at 1 when |b| = 1. Requires |a| < 1 and
/// b distinct from a (InvalidPoints otherwise).
MobiusTransform disk_automorphism_two_point(cplx a, cplx b);

}  // namespace bhflow
