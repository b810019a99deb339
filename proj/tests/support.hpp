#pragma once

// Independent reference implementations and fixture helpers shared by the
// tests. Nothing here calls into the library's algorithms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <random>
#include <sys/wait.h>
#include <string>
#include <vector>

#include "ranksense/label_mask.hpp"
#include "ranksense/result_table.hpp"

namespace oracle {

using ranksense::Dims;
using ranksense::LabelMask;
using ranksense::Spacing;
using ranksense::Voxel;

inline std::vector<Voxel> points(const LabelMask& m) {
  std::vector<Voxel> out;
  const auto& d = m.dims();
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x) {
        Voxel v{static_cast<std::int32_t>(x), static_cast<std::int32_t>(y), static_cast<std::int32_t>(z)};
        if (m.at(v)) out.push_back(v);
      }
  return out;
}

/// Foreground voxels touching background or the grid edge through a face.
inline std::vector<Voxel> boundary(const LabelMask& m) {
  std::vector<Voxel> out;
  for (const auto& v : points(m)) {
    const std::array<Voxel, 6> nb{{{v.x + 1, v.y, v.z}, {v.x - 1, v.y, v.z}, {v.x, v.y + 1, v.z},
                                   {v.x, v.y - 1, v.z}, {v.x, v.y, v.z + 1}, {v.x, v.y, v.z - 1}}};
    if (std::any_of(nb.begin(), nb.end(), [&](const Voxel& n) { return !m.at(n); })) out.push_back(v);
  }
  return out;
}

inline double dist(const Voxel& a, const Voxel& b, const Spacing& s) {
  const double dx = static_cast<double>(a.x - b.x) * s.sx;
  const double dy = static_cast<double>(a.y - b.y) * s.sy;
  const double dz = static_cast<double>(a.z - b.z) * s.sz;
  return std::sqrt((dx * dx + dy * dy) + dz * dz);
}

/// All nearest-neighbour distances from src to dst by exhaustive search.
inline std::vector<double> directed(const std::vector<Voxel>& src, const std::vector<Voxel>& dst,
                                    const Spacing& s) {
  std::vector<double> out;
  for (const auto& p : src) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : dst) best = std::min(best, dist(p, q, s));
    out.push_back(best);
  }
  return out;
}

inline double percentile95(std::vector<double> d) {
  std::sort(d.begin(), d.end());
  const double h = 0.95 * static_cast<double>(d.size() - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= d.size()) return d[lo];
  return d[lo] + (h - static_cast<double>(lo)) * (d[lo + 1] - d[lo]);
}

struct Distances {
  std::optional<double> hd, hd95;
};

inline Distances distances(const LabelMask& a, const LabelMask& b, bool use_boundary = true) {
  const auto pa = use_boundary ? boundary(a) : points(a);
  const auto pb = use_boundary ? boundary(b) : points(b);
  if (pa.empty() || pb.empty()) return {};
  const auto ab = directed(pa, pb, a.spacing());
  const auto ba = directed(pb, pa, a.spacing());
  return {std::max(*std::max_element(ab.begin(), ab.end()), *std::max_element(ba.begin(), ba.end())),
          std::max(percentile95(ab), percentile95(ba))};
}

/// Intersection and sizes, the integer inputs of the Dice ratio.
struct Overlap {
  std::size_t a = 0, b = 0, both = 0;
};

inline Overlap overlap(const LabelMask& a, const LabelMask& b) {
  Overlap o;
  for (const auto& v : points(a)) {
    ++o.a;
    o.both += b.at(v);
  }
  o.b = points(b).size();
  return o;
}

/// Random mask: a few filled boxes plus salt noise, sometimes empty.
inline LabelMask random_mask(std::mt19937_64& rng, Dims d, Spacing s, double noise = 0.02) {
  LabelMask m(d, s);
  std::uniform_int_distribution<int> boxes(0, 3);
  const int nb = boxes(rng);
  for (int b = 0; b < nb; ++b) {
    auto span = [&](std::size_t n) {
      std::uniform_int_distribution<std::size_t> u(0, n - 1);
      auto lo = u(rng), hi = u(rng);
      if (lo > hi) std::swap(lo, hi);
      return std::pair{lo, hi};
    };
    const auto [x0, x1] = span(d.nx);
    const auto [y0, y1] = span(d.ny);
    const auto [z0, z1] = span(d.nz);
    for (auto z = z0; z <= z1; ++z)
      for (auto y = y0; y <= y1; ++y)
        for (auto x = x0; x <= x1; ++x)
          m.set({static_cast<std::int32_t>(x), static_cast<std::int32_t>(y), static_cast<std::int32_t>(z)},
                true);
  }
  std::bernoulli_distribution salt(noise);
  for (std::size_t z = 0; z < d.nz; ++z)
    for (std::size_t y = 0; y < d.ny; ++y)
      for (std::size_t x = 0; x < d.nx; ++x)
        if (salt(rng))
          m.set({static_cast<std::int32_t>(x), static_cast<std::int32_t>(y), static_cast<std::int32_t>(z)},
                true);
  return m;
}

/// Brute-force Kendall tau-b from concordant/discordant/tie-only pair counts.
inline std::optional<double> tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  long long c = 0, d = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const bool ex = x[i] == x[j], ey = y[i] == y[j];
      if (ex && ey) continue;
      if (ex) {
        ++tx;
      } else if (ey) {
        ++ty;
      } else if ((x[i] < x[j]) == (y[i] < y[j])) {
        ++c;
      } else {
        ++d;
      }
    }
  const double denom = std::sqrt(static_cast<double>(c + d + tx)) * std::sqrt(static_cast<double>(c + d + ty));
  if (denom == 0.0) return std::nullopt;
  return static_cast<double>(c - d) / denom;
}

/// Two-sided signed-rank p-value by enumerating all 2^n sign assignments of
/// the (fractional) ranks of |d|, zeros removed.
inline double wilcoxon_enumerated(std::vector<double> diffs) {
  diffs.erase(std::remove(diffs.begin(), diffs.end(), 0.0), diffs.end());
  const std::size_t n = diffs.size();
  if (n == 0) return 1.0;
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(diffs[j]) < std::abs(diffs[i])) ++less;
      if (std::abs(diffs[j]) == std::abs(diffs[i])) ++equal;
    }
    ranks[i] = less + (equal + 1) / 2;
  }
  double observed = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += ranks[i];
    if (diffs[i] > 0) observed += ranks[i];
  }
  const double centre = total / 2;
  std::size_t extreme = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double w = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) w += ranks[i];
    if (std::abs(w - centre) >= std::abs(observed - centre) - 1e-9) ++extreme;
  }
  return std::min(1.0, static_cast<double>(extreme) / std::ldexp(1.0, static_cast<int>(n)));
}

/// Table builder for a single higher-better metric (DSC by default).
inline ranksense::ResultTable table(const std::vector<std::vector<std::optional<double>>>& rows,
                                    const std::string& metric = "DSC") {
  ranksense::ResultTable::Builder b;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t c = 0; c < rows[a].size(); ++c)
      b.add("A" + std::to_string(a + 1), "c" + std::to_string(c + 1), metric, rows[a][c]);
  return b.build();
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ranksense_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

struct CommandResult {
  int status = 0;
  std::string out;
};

/// Runs a shell command, capturing stdout; stderr is merged when asked.
inline CommandResult run(const std::string& cmd, bool merge_stderr = false) {
  CommandResult r;
  const std::string full = cmd + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(full.c_str(), "r");
  if (!pipe) return {-1, ""};
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace oracle
