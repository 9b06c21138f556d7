#include "bhflow/mobius.hpp"

#include <cmath>
#include <limits>

namespace bhflow {

namespace {

bool close(CPoint p, CPoint q) {
  if (p.infinite || q.infinite) return p.infinite && q.infinite;
  return std::abs(p.value - q.value) < 1e-12;
}

}  // namespace

MobiusTransform::MobiusTransform(cplx a_, cplx b_, cplx c_, cplx d_)
    : a(a_), b(b_), c(c_), d(d_) {
  const cplx det = a * d - b * c;
  if (std::abs(det) < 1e-12)
    fail(ErrorCode::DegenerateTriple,
         "Mobius coefficients have near-zero determinant");
  const cplx s = std::sqrt(det);
  a /= s;
  b /= s;
  c /= s;
  d /= s;
}

CPoint MobiusTransform::apply(CPoint z) const {
  // Denominator zero is detected relative to the size of its terms, so a
  // cancellation that leaves only rounding noise still maps to infinity.
  if (z.infinite) {
    if (std::abs(c) <= 1e-14 * (std::abs(a) + std::abs(d))) return CPoint::inf();
    return CPoint(a / c);
  }
  const cplx den = c * z.value + d;
  const double scale = std::abs(c) * std::abs(z.value) + std::abs(d);
  if (std::abs(den) <= 1e-14 * scale) return CPoint::inf();
  return CPoint((a * z.value + b) / den);
}

cplx MobiusTransform::apply_finite(cplx z) const {
  const CPoint r = apply(CPoint(z));
  if (r.infinite)
    return {std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  return r.value;
}

MobiusTransform MobiusTransform::inverse() const {
  return MobiusTransform(d, -b, -c, a);
}

MobiusTransform operator*(const MobiusTransform& lhs,
                          const MobiusTransform& rhs) {
  return MobiusTransform(lhs.a * rhs.a + lhs.b * rhs.c,
                         lhs.a * rhs.b + lhs.b * rhs.d,
                         lhs.c * rhs.a + lhs.d * rhs.c,
                         lhs.c * rhs.b + lhs.d * rhs.d);
}

MobiusTransform mobius_to_standard_triple(CPoint p0, CPoint p1, CPoint p2) {
  if (close(p0, p1) || close(p1, p2) || close(p0, p2))
    fail(ErrorCode::DegenerateTriple,
         "triple points must be pairwise distinct");

  // T(z) = ((z - p0)(p1 - p2)) / ((z - p2)(p1 - p0)), with the usual limits
  // when one of the points is infinity.
  if (p0.infinite)
    return MobiusTransform(cplx(0, 0), p1.value - p2.value, cplx(1, 0),
                           -p2.value);
  if (p1.infinite)
    return MobiusTransform(cplx(1, 0), -p0.value, cplx(1, 0), -p2.value);
  if (p2.infinite)
    return MobiusTransform(cplx(1, 0), -p0.value, cplx(0, 0),
                           p1.value - p0.value);
  const cplx n = p1.value - p2.value;
  const cplx m = p1.value - p0.value;
  return MobiusTransform(n, -p0.value * n, m, -p2.value * m);
}

MobiusTransform disk_automorphism_two_point(cplx a, cplx b) {
  if (std::abs(a) >= 1.0)
    fail(ErrorCode::InvalidPoints,
         "first gauge point must be interior to the unit disk");
  if (std::abs(b) > 1.0 + 1e-9)
    fail(ErrorCode::InvalidPoints,
         "second gauge point must lie in the closed unit disk");
  const cplx bb = (b - a) / (1.0 - std::conj(a) * b);
  const double r = std::abs(bb);
  if (r < 1e-12)
    fail(ErrorCode::InvalidPoints, "gauge points coincide");
  const cplx rot = std::conj(bb) / r;
  // T(z) = rot (z - a) / (1 - conj(a) z)
  return MobiusTransform(rot, -rot * a, -std::conj(a), cplx(1.0, 0.0));
}

}  // namespace bhflow
