#include "bhflow/locate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bhflow {

namespace {

constexpr double kBaryTol = 1e-9;

// Barycentric coordinates of q in triangle (a, b, c); degenerate triangles
// report failure through the boolean.
bool barycentric(cplx a, cplx b, cplx c, cplx q, std::array<double, 3>* out) {
  const cplx e1 = b - a, e2 = c - a, d = q - a;
  const double det = e1.real() * e2.imag() - e1.imag() * e2.real();
  if (std::abs(det) < 1e-300) return false;
  const double l1 = (d.real() * e2.imag() - d.imag() * e2.real()) / det;
  const double l2 = (e1.real() * d.imag() - e1.imag() * d.real()) / det;
  (*out)[0] = 1.0 - l1 - l2;
  (*out)[1] = l1;
  (*out)[2] = l2;
  return true;
}

void clamp_and_normalize(std::array<double, 3>* bary) {
  double total = 0.0;
  for (double& l : *bary) {
    l = std::clamp(l, 0.0, 1.0);
    total += l;
  }
  if (total <= 0.0) {
    *bary = {1.0, 0.0, 0.0};
    return;
  }
  for (double& l : *bary) l /= total;
}

double point_segment_dist2(cplx p, cplx a, cplx b, double* t_out) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = 0.0;
  if (len2 > 0.0)
    t = std::clamp(((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) /
                       len2,
                   0.0, 1.0);
  *t_out = t;
  const cplx closest = a + t * ab;
  return std::norm(p - closest);
}

}  // namespace

PointLocator::PointLocator(MeshPtr mesh, VertexField<cplx> coords,
                           int skip_vertex)
    : mesh_(std::move(mesh)), coords_(std::move(coords)) {
  if (coords_.size() != static_cast<size_t>(mesh_->vertex_count()))
    fail(ErrorCode::Validation, "locator coordinates size mismatch");

  for (int f = 0; f < mesh_->face_count(); ++f) {
    const auto& t = mesh_->faces[f];
    if (skip_vertex >= 0 && (t[0] == skip_vertex || t[1] == skip_vertex ||
                             t[2] == skip_vertex))
      continue;
    active_faces_.push_back(f);
  }
  if (active_faces_.empty())
    fail(ErrorCode::Validation, "locator has no usable faces");

  double x1 = std::numeric_limits<double>::lowest(), y1 = x1;
  x0_ = std::numeric_limits<double>::max();
  y0_ = x0_;
  for (int f : active_faces_)
    for (int c = 0; c < 3; ++c) {
      const cplx p = coords_[mesh_->faces[f][c]];
      x0_ = std::min(x0_, p.real());
      y0_ = std::min(y0_, p.imag());
      x1 = std::max(x1, p.real());
      y1 = std::max(y1, p.imag());
    }
  const double pad = 1e-12 + 1e-9 * std::max(x1 - x0_, y1 - y0_);
  x0_ -= pad;
  y0_ -= pad;
  x1 += pad;
  y1 += pad;

  const int target = static_cast<int>(
      std::clamp(std::sqrt(static_cast<double>(active_faces_.size())), 1.0,
                 512.0));
  nx_ = ny_ = target;
  cell_w_ = (x1 - x0_) / nx_;
  cell_h_ = (y1 - y0_) / ny_;
  cells_.assign(static_cast<size_t>(nx_) * ny_, {});

  auto cell_of = [&](double x, double y, int* cx, int* cy) {
    *cx = std::clamp(static_cast<int>((x - x0_) / cell_w_), 0, nx_ - 1);
    *cy = std::clamp(static_cast<int>((y - y0_) / cell_h_), 0, ny_ - 1);
  };

  for (int f : active_faces_) {
    const auto& t = mesh_->faces[f];
    double fx0 = std::numeric_limits<double>::max(), fy0 = fx0;
    double fx1 = std::numeric_limits<double>::lowest(), fy1 = fx1;
    for (int c = 0; c < 3; ++c) {
      const cplx p = coords_[t[c]];
      fx0 = std::min(fx0, p.real());
      fy0 = std::min(fy0, p.imag());
      fx1 = std::max(fx1, p.real());
      fy1 = std::max(fy1, p.imag());
    }
    int cx0, cy0, cx1, cy1;
    cell_of(fx0, fy0, &cx0, &cy0);
    cell_of(fx1, fy1, &cx1, &cy1);
    for (int cy = cy0; cy <= cy1; ++cy)
      for (int cx = cx0; cx <= cx1; ++cx)
        cells_[static_cast<size_t>(cy) * nx_ + cx].push_back(f);
  }
}

std::span<const int> PointLocator::cell_faces(int cx, int cy) const {
  if (cx < 0 || cy < 0 || cx >= nx_ || cy >= ny_) return {};
  return cells_[static_cast<size_t>(cy) * nx_ + cx];
}

std::optional<PointLocation> PointLocator::scan_faces(
    cplx query, std::span<const int> faces, double* best_dist,
    PointLocation* best) const {
  for (int f : faces) {
    const auto& t = mesh_->faces[f];
    std::array<double, 3> bary;
    if (!barycentric(coords_[t[0]], coords_[t[1]], coords_[t[2]], query,
                     &bary))
      continue;
    if (bary[0] >= -kBaryTol && bary[1] >= -kBaryTol && bary[2] >= -kBaryTol) {
      clamp_and_normalize(&bary);
      return PointLocation{f, bary};
    }
    // Track nearest boundary point for snapping.
    for (int c = 0; c < 3; ++c) {
      double t01;
      const double d2 = point_segment_dist2(query, coords_[t[c]],
                                            coords_[t[(c + 1) % 3]], &t01);
      if (d2 < *best_dist) {
        *best_dist = d2;
        std::array<double, 3> snap{0.0, 0.0, 0.0};
        snap[c] = 1.0 - t01;
        snap[(c + 1) % 3] = t01;
        *best = PointLocation{f, snap};
      }
    }
  }
  return std::nullopt;
}

std::optional<PointLocation> PointLocator::try_locate(cplx query,
                                                      double snap_tol) const {
  double best_dist = std::numeric_limits<double>::max();
  PointLocation best;

  const int cx = std::clamp(static_cast<int>((query.real() - x0_) / cell_w_),
                            0, nx_ - 1);
  const int cy = std::clamp(static_cast<int>((query.imag() - y0_) / cell_h_),
                            0, ny_ - 1);

  // Expanding rings around the home cell; stop once a ring lies entirely
  // farther than the best snap candidate.
  const int max_ring = std::max(nx_, ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    bool any = false;
    for (int dy = -ring; dy <= ring; ++dy)
      for (int dx = -ring; dx <= ring; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
        const auto faces = cell_faces(cx + dx, cy + dy);
        if (faces.empty()) continue;
        any = true;
        if (auto hit = scan_faces(query, faces, &best_dist, &best)) return hit;
      }
    if (ring > 0) {
      const double ring_dist =
          (ring - 1) * std::min(cell_w_, cell_h_);
      if (best_dist < ring_dist * ring_dist && best.face >= 0) break;
    }
    (void)any;
  }

  if (best.face >= 0 && best_dist <= snap_tol * snap_tol) return best;
  return std::nullopt;
}

PointLocation PointLocator::locate(cplx query, double snap_tol) const {
  if (auto loc = try_locate(query, snap_tol)) return *loc;
  fail(ErrorCode::OutsideDomain,
       "query (" + std::to_string(query.real()) + ", " +
           std::to_string(query.imag()) + ") lies outside the triangulation");
}

PointLocation PointLocator::locate_clamped(cplx query) const {
  if (auto loc = try_locate(query, std::numeric_limits<double>::max()))
    return *loc;
  // Unreachable for non-empty locators, but keep a defined result.
  return PointLocation{active_faces_.front(), {1.0, 0.0, 0.0}};
}

}  // namespace bhflow
