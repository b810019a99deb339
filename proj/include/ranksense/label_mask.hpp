#pragma once

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ranksense/error.hpp"

namespace ranksense {

/// Integer voxel coordinate.
struct Voxel {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  friend auto operator<=>(const Voxel&, const Voxel&) = default;
};

/// Grid extent (nx, ny, nz). 2D masks use nz = 1.
struct Dims {
  std::size_t nx = 1;
  std::size_t ny = 1;
  std::size_t nz = 1;

  [[nodiscard]] std::size_t voxel_count() const noexcept { return nx * ny * nz; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Physical voxel size in mm per axis.
struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;

  friend bool operator==(const Spacing&, const Spacing&) = default;
};

inline Spacing operator*(double k, const Spacing& s) { return {k * s.sx, k * s.sy, k * s.sz}; }

/// Binary voxel grid with physical spacing. Storage is dense, x fastest.
class LabelMask {
 public:
  LabelMask(Dims dims, Spacing spacing) : dims_(dims), spacing_(spacing) {
    if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0) {
      throw InputError("mask dims must be >= 1 on every axis");
    }
    for (double s : {spacing.sx, spacing.sy, spacing.sz}) {
      if (!std::isfinite(s) || s <= 0.0) {
        throw InputError("mask spacing must be finite and strictly positive");
      }
    }
    voxels_.assign(dims.voxel_count(), 0);
  }

  LabelMask(Dims dims, Spacing spacing, std::span<const Voxel> foreground)
      : LabelMask(dims, spacing) {
    for (const auto& v : foreground) {
      if (!contains(v)) {
        throw InputError("foreground voxel (" + std::to_string(v.x) + "," + std::to_string(v.y) +
                         "," + std::to_string(v.z) + ") lies outside the grid");
      }
      voxels_[offset(v)] = 1;
    }
  }

  /// Takes raw bytes in x-fastest order; any nonzero byte is foreground.
  LabelMask(Dims dims, Spacing spacing, std::span<const std::uint8_t> raw)
      : LabelMask(dims, spacing) {
    if (raw.size() != voxels_.size()) {
      throw InputError("mask payload has " + std::to_string(raw.size()) + " bytes, expected " +
                       std::to_string(voxels_.size()));
    }
    for (std::size_t i = 0; i < raw.size(); ++i) voxels_[i] = raw[i] != 0 ? 1 : 0;
  }

  [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
  [[nodiscard]] const Spacing& spacing() const noexcept { return spacing_; }
  [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return voxels_; }

  [[nodiscard]] bool contains(const Voxel& v) const noexcept {
    return v.x >= 0 && v.y >= 0 && v.z >= 0 && static_cast<std::size_t>(v.x) < dims_.nx &&
           static_cast<std::size_t>(v.y) < dims_.ny && static_cast<std::size_t>(v.z) < dims_.nz;
  }

  /// Out-of-grid coordinates read as background.
  [[nodiscard]] bool at(const Voxel& v) const noexcept {
    return contains(v) && voxels_[offset(v)] != 0;
  }

  void set(const Voxel& v, bool foreground) {
    if (!contains(v)) throw InputError("voxel outside the grid");
    voxels_[offset(v)] = foreground ? 1 : 0;
  }

  [[nodiscard]] std::size_t count() const noexcept {
    std::size_t n = 0;
    for (auto b : voxels_) n += b;
    return n;
  }

  [[nodiscard]] bool empty() const noexcept { return count() == 0; }

  /// Foreground coordinates in storage order.
  [[nodiscard]] std::vector<Voxel> foreground() const {
    std::vector<Voxel> out;
    for (std::size_t z = 0; z < dims_.nz; ++z)
      for (std::size_t y = 0; y < dims_.ny; ++y)
        for (std::size_t x = 0; x < dims_.nx; ++x)
          if (voxels_[(z * dims_.ny + y) * dims_.nx + x] != 0)
            out.push_back({static_cast<std::int32_t>(x), static_cast<std::int32_t>(y),
                           static_cast<std::int32_t>(z)});
    return out;
  }

  [[nodiscard]] LabelMask with_spacing(Spacing spacing) const {
    LabelMask copy(dims_, spacing);
    copy.voxels_ = voxels_;
    return copy;
  }

  friend bool operator==(const LabelMask&, const LabelMask&) = default;

 private:
  [[nodiscard]] std::size_t offset(const Voxel& v) const noexcept {
    return (static_cast<std::size_t>(v.z) * dims_.ny + static_cast<std::size_t>(v.y)) * dims_.nx +
           static_cast<std::size_t>(v.x);
  }

  Dims dims_;
  Spacing spacing_;
  std::vector<std::uint8_t> voxels_;
};

}  // namespace ranksense
