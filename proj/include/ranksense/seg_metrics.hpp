#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ranksense/error.hpp"
#include "ranksense/label_mask.hpp"
#include "ranksense/percentile.hpp"

namespace ranksense {

inline constexpr const char* kDsc = "DSC";
inline constexpr const char* kHd = "HD";
inline constexpr const char* kHd95 = "HD95";

struct MetricValue {
  std::string metric_id;
  double value = 0.0;
  bool defined = true;
  /// DSC of two empty masks: reported as 1.0, flagged as degenerate agreement.
  bool degenerate = false;
};

/// Point set used by the distance metrics.
enum class SurfaceMode { boundary, foreground };

/// Squared physical distance between voxel centres. Coordinate differences
/// are taken in integers, then scaled; summation order is x, y, z.
inline double squared_distance(const Voxel& a, const Voxel& b, const Spacing& s) noexcept {
  const double dx = static_cast<double>(a.x - b.x) * s.sx;
  const double dy = static_cast<double>(a.y - b.y) * s.sy;
  const double dz = static_cast<double>(a.z - b.z) * s.sz;
  return (dx * dx + dy * dy) + dz * dz;
}

namespace detail {

inline void require_same_grid(const LabelMask& a, const LabelMask& b, bool check_spacing) {
  if (!(a.dims() == b.dims())) throw InputError("mask dimensions differ");
  if (check_spacing && !(a.spacing() == b.spacing())) throw InputError("mask spacings differ");
}

/// Destination points bucketed into (y, z) rows of sorted x coordinates.
/// A query scans rows outward from its own (y, z) and only evaluates the
/// nearest x in each row, pruning rows whose y/z offset alone already
/// reaches the best candidate. The minimum is identical to a full scan:
/// within a row the rounded distance is monotone in |dx|, and the pruning
/// bound never exceeds any distance it rules out.
class RowIndex {
 public:
  RowIndex(std::span<const Voxel> points, const Spacing& spacing) : spacing_(spacing) {
    lo_ = hi_ = points.front();
    for (const auto& p : points) {
      lo_.y = std::min(lo_.y, p.y);
      lo_.z = std::min(lo_.z, p.z);
      hi_.y = std::max(hi_.y, p.y);
      hi_.z = std::max(hi_.z, p.z);
    }
    ny_ = static_cast<std::size_t>(hi_.y - lo_.y + 1);
    rows_.resize(ny_ * static_cast<std::size_t>(hi_.z - lo_.z + 1));
    for (const auto& p : points) rows_[row(p.y, p.z)].push_back(p.x);
    for (auto& r : rows_) std::sort(r.begin(), r.end());
  }

  [[nodiscard]] double nearest_squared(const Voxel& q) const {
    double best = std::numeric_limits<double>::infinity();
    const auto scan_z = [&](std::int32_t z) {
      const double dz = static_cast<double>(q.z - z) * spacing_.sz;
      const double bound_z = (0.0 + 0.0) + dz * dz;
      if (bound_z >= best) return false;
      const auto scan_y = [&](std::int32_t y) {
        const double dy = static_cast<double>(q.y - y) * spacing_.sy;
        const double bound = (0.0 + dy * dy) + dz * dz;
        if (bound >= best) return false;
        const auto& xs = rows_[row(y, z)];
        if (xs.empty()) return true;
        const auto it = std::lower_bound(xs.begin(), xs.end(), q.x);
        if (it != xs.end()) best = std::min(best, squared_distance(q, {*it, y, z}, spacing_));
        if (it != xs.begin()) best = std::min(best, squared_distance(q, {*(it - 1), y, z}, spacing_));
        return true;
      };
      scan_outward(q.y, lo_.y, hi_.y, scan_y);
      return true;
    };
    scan_outward(q.z, lo_.z, hi_.z, scan_z);
    return best;
  }

 private:
  /// Visits c, c+1, c-1, ... within [lo, hi] in each direction until `visit`
  /// returns false for that direction.
  template <typename F>
  static void scan_outward(std::int32_t centre, std::int32_t lo, std::int32_t hi, F&& visit) {
    const std::int32_t start = std::clamp(centre, lo, hi);
    for (std::int32_t c = start; c <= hi; ++c)
      if (!visit(c)) break;
    for (std::int32_t c = start - 1; c >= lo; --c)
      if (!visit(c)) break;
  }

  [[nodiscard]] std::size_t row(std::int32_t y, std::int32_t z) const noexcept {
    return static_cast<std::size_t>(z - lo_.z) * ny_ + static_cast<std::size_t>(y - lo_.y);
  }

  Spacing spacing_;
  Voxel lo_, hi_;
  std::size_t ny_ = 0;
  std::vector<std::vector<std::int32_t>> rows_;
};

}  // namespace detail

/// 2|A∩B| / (|A|+|B|). Both empty → 1.0 with `degenerate` set.
inline MetricValue dsc(const LabelMask& a, const LabelMask& b) {
  detail::require_same_grid(a, b, false);
  const auto av = a.bytes();
  const auto bv = b.bytes();
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    na += av[i];
    nb += bv[i];
    both += av[i] & bv[i];
  }
  if (na + nb == 0) return {kDsc, 1.0, true, true};
  return {kDsc, 2.0 * static_cast<double>(both) / static_cast<double>(na + nb), true, false};
}

/// Foreground voxels with at least one 6-neighbour that is background or
/// outside the grid.
inline LabelMask extract_boundary(const LabelMask& m) {
  LabelMask out(m.dims(), m.spacing());
  static constexpr Voxel kFaces[] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  for (const auto& v : m.foreground()) {
    for (const auto& f : kFaces) {
      if (!m.at({v.x + f.x, v.y + f.y, v.z + f.z})) {
        out.set(v, true);
        break;
      }
    }
  }
  return out;
}

/// For each source point, the distance to its nearest destination point.
inline std::vector<double> directed_distances(std::span<const Voxel> src, std::span<const Voxel> dst,
                                              const Spacing& spacing) {
  if (src.empty() || dst.empty()) throw MetricUndefined("directed distance over an empty point set");
  detail::RowIndex index(dst, spacing);
  std::vector<double> out;
  out.reserve(src.size());
  for (const auto& s : src) out.push_back(std::sqrt(index.nearest_squared(s)));
  return out;
}

namespace detail {

inline std::vector<Voxel> surface_points(const LabelMask& m, SurfaceMode mode) {
  return mode == SurfaceMode::boundary ? extract_boundary(m).foreground() : m.foreground();
}

template <typename Reduce>
MetricValue symmetric_distance(const char* id, const LabelMask& a, const LabelMask& b,
                               SurfaceMode mode, Reduce reduce) {
  require_same_grid(a, b, true);
  const auto pa = surface_points(a, mode);
  const auto pb = surface_points(b, mode);
  if (pa.empty() || pb.empty()) return {id, 0.0, false, false};
  const double ab = reduce(directed_distances(pa, pb, a.spacing()));
  const double ba = reduce(directed_distances(pb, pa, a.spacing()));
  return {id, std::max(ab, ba), true, false};
}

}  // namespace detail

/// max(h(A,B), h(B,A)); undefined when either point set is empty.
inline MetricValue hausdorff(const LabelMask& a, const LabelMask& b,
                             SurfaceMode mode = SurfaceMode::boundary) {
  return detail::symmetric_distance(kHd, a, b, mode, [](const std::vector<double>& d) {
    return *std::max_element(d.begin(), d.end());
  });
}

/// Like hausdorff, with each direction's maximum replaced by its 95th percentile.
inline MetricValue hd95(const LabelMask& a, const LabelMask& b,
                        SurfaceMode mode = SurfaceMode::boundary) {
  return detail::symmetric_distance(kHd95, a, b, mode, [](std::vector<double> d) {
    return quantile(std::move(d), 0.95);
  });
}

}  // namespace ranksense
