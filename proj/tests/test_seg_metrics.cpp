#include <gtest/gtest.h>

#include <random>

#include "ranksense/mask_io.hpp"
#include "ranksense/seg_metrics.hpp"
#include "support.hpp"

using namespace ranksense;

namespace {

LabelMask mask(Dims d, std::initializer_list<Voxel> fg, Spacing s = {}) {
  std::vector<Voxel> v(fg);
  return {d, s, v};
}

LabelMask cube(std::size_t n, Spacing s = {}) {
  LabelMask m({n, n, n}, s);
  for (std::int32_t z = 0; z < static_cast<std::int32_t>(n); ++z)
    for (std::int32_t y = 0; y < static_cast<std::int32_t>(n); ++y)
      for (std::int32_t x = 0; x < static_cast<std::int32_t>(n); ++x) m.set({x, y, z}, true);
  return m;
}

}  // namespace

TEST(LabelMask, RejectsBadGeometry) {
  EXPECT_THROW(LabelMask({0, 1, 1}, {}), InputError);
  EXPECT_THROW(LabelMask({1, 1, 1}, {0.0, 1.0, 1.0}), InputError);
  EXPECT_THROW(LabelMask({1, 1, 1}, {1.0, -2.0, 1.0}), InputError);
  const std::vector<Voxel> outside{{2, 0, 0}};
  EXPECT_THROW(LabelMask({2, 2, 2}, {}, outside), InputError);
  const std::vector<std::uint8_t> short_payload(7, 0);
  EXPECT_THROW(LabelMask({2, 2, 2}, {}, short_payload), InputError);
}

TEST(Dsc, Examples) {
  const auto a = mask({2, 2, 1}, {{0, 0, 0}});
  const auto b = mask({2, 2, 1}, {{0, 0, 0}, {0, 1, 0}});
  EXPECT_DOUBLE_EQ(dsc(a, b).value, 2.0 / 3.0);
  EXPECT_EQ(dsc(b, b).value, 1.0);
  const auto c = mask({2, 2, 1}, {{1, 1, 0}});
  EXPECT_EQ(dsc(a, c).value, 0.0);
  EXPECT_FALSE(dsc(a, c).degenerate);
}

TEST(Dsc, BothEmptyIsDegenerateAgreement) {
  const LabelMask e({3, 3, 3}, {});
  const auto v = dsc(e, e);
  EXPECT_EQ(v.value, 1.0);
  EXPECT_TRUE(v.defined);
  EXPECT_TRUE(v.degenerate);
  const auto one = mask({3, 3, 3}, {{1, 1, 1}});
  EXPECT_EQ(dsc(e, one).value, 0.0);
  EXPECT_FALSE(dsc(e, one).degenerate);
}

TEST(Dsc, DimensionMismatchIsInputError) {
  EXPECT_THROW(dsc(LabelMask({2, 2, 2}, {}), LabelMask({2, 2, 3}, {})), InputError);
}

TEST(Boundary, SolidCubeDropsOnlyTheCentre) {
  const auto b = extract_boundary(cube(3));
  EXPECT_EQ(b.count(), 26u);
  EXPECT_FALSE(b.at({1, 1, 1}));
}

TEST(Boundary, SingleVoxelAndEmpty) {
  const auto one = mask({3, 3, 3}, {{1, 1, 1}});
  EXPECT_EQ(extract_boundary(one), one);
  const LabelMask e({3, 3, 3}, {});
  EXPECT_TRUE(extract_boundary(e).empty());
}

TEST(Boundary, MatchesNeighbourhoodOracle) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto m = oracle::random_mask(rng, {9, 7, 5}, {}, 0.2);
    EXPECT_EQ(extract_boundary(m).foreground(), oracle::boundary(m));
  }
}

TEST(DirectedDistances, Examples) {
  const std::vector<Voxel> src{{0, 0, 0}}, dst{{3, 4, 0}};
  EXPECT_EQ(directed_distances(src, dst, {}), std::vector<double>{5.0});
  const std::vector<Voxel> same{{0, 0, 0}, {2, 1, 0}, {5, 5, 5}};
  EXPECT_EQ(directed_distances(same, same, {}), std::vector<double>(3, 0.0));
  EXPECT_THROW(directed_distances({}, dst, {}), MetricUndefined);
  EXPECT_THROW(directed_distances(src, {}, {}), MetricUndefined);
}

TEST(Hausdorff, Examples) {
  const auto a = mask({4, 5, 1}, {{0, 0, 0}});
  const auto b = mask({4, 5, 1}, {{3, 4, 0}});
  EXPECT_EQ(hausdorff(a, b).value, 5.0);
  EXPECT_EQ(hausdorff(a, a).value, 0.0);
  EXPECT_EQ(hd95(a, a).value, 0.0);

  // Anisotropic: voxel offset (3, 2) with spacing (1, 2) is again 3-4-5.
  const auto c = mask({4, 5, 1}, {{0, 0, 0}}, {1.0, 2.0, 1.0});
  const auto d = mask({4, 5, 1}, {{3, 2, 0}}, {1.0, 2.0, 1.0});
  EXPECT_EQ(hausdorff(c, d).value, 5.0);
}

TEST(Hausdorff, EmptyOperandIsUndefined) {
  const LabelMask e({3, 3, 3}, {});
  const auto one = mask({3, 3, 3}, {{1, 1, 1}});
  for (const auto& v : {hausdorff(e, one), hausdorff(one, e), hd95(e, e)}) {
    EXPECT_FALSE(v.defined);
  }
}

TEST(Hausdorff, GridMismatchIsInputError) {
  const auto a = mask({3, 3, 3}, {{1, 1, 1}});
  const auto b = mask({3, 3, 3}, {{1, 1, 1}}, {1.0, 1.0, 2.0});
  EXPECT_THROW(hausdorff(a, b), InputError);
  EXPECT_THROW(hd95(a, LabelMask({3, 3, 4}, {})), InputError);
}

TEST(Hd95, PercentileInterpolation) {
  // Directed distances 0..19 one way and {0} the other: h = 19 * 0.95 = 18.05.
  LabelMask a({20, 1, 1}, {});
  for (std::int32_t x = 0; x < 20; ++x) a.set({x, 0, 0}, true);
  const auto b = mask({20, 1, 1}, {{0, 0, 0}});
  EXPECT_NEAR(hd95(a, b).value, 18.05, 1e-12);
  EXPECT_EQ(hausdorff(a, b).value, 19.0);
}

TEST(SegMetrics, MatchBruteForceOnRandomPairs) {
  std::mt19937_64 rng(2024);
  const Spacing spacings[] = {{1, 1, 1}, {0.7, 0.7, 2.5}, {1.3, 0.4, 0.9}};
  for (int i = 0; i < 60; ++i) {
    std::uniform_int_distribution<std::size_t> side(1, 10);
    const Dims d{side(rng), side(rng), side(rng)};
    const auto s = spacings[i % 3];
    const auto a = oracle::random_mask(rng, d, s);
    const auto b = oracle::random_mask(rng, d, s);
    for (const bool use_boundary : {true, false}) {
      const auto mode = use_boundary ? SurfaceMode::boundary : SurfaceMode::foreground;
      const auto expect = oracle::distances(a, b, use_boundary);
      const auto hd = hausdorff(a, b, mode);
      const auto h95 = hd95(a, b, mode);
      ASSERT_EQ(hd.defined, expect.hd.has_value());
      ASSERT_EQ(h95.defined, expect.hd95.has_value());
      if (expect.hd) {
        EXPECT_EQ(hd.value, *expect.hd);
        EXPECT_NEAR(h95.value, *expect.hd95, 1e-12 * std::max(1.0, *expect.hd95));
      }
    }
    const auto o = oracle::overlap(a, b);
    const double expect_dsc = o.a + o.b == 0 ? 1.0 : 2.0 * double(o.both) / double(o.a + o.b);
    EXPECT_EQ(dsc(a, b).value, expect_dsc);
  }
}

TEST(SegMetrics, SymmetryIdentityAndOrdering) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    const auto a = oracle::random_mask(rng, {8, 8, 6}, {0.8, 1.1, 2.0});
    const auto b = oracle::random_mask(rng, {8, 8, 6}, {0.8, 1.1, 2.0});
    EXPECT_EQ(dsc(a, b).value, dsc(b, a).value);
    const auto h = hausdorff(a, b), hr = hausdorff(b, a);
    const auto p = hd95(a, b), pr = hd95(b, a);
    ASSERT_EQ(h.defined, hr.defined);
    const auto d = dsc(a, b).value;
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 1.0);
    if (!a.empty()) {
      EXPECT_EQ(dsc(a, a).value, 1.0);
      EXPECT_EQ(hausdorff(a, a).value, 0.0);
      EXPECT_EQ(hd95(a, a).value, 0.0);
    }
    if (!h.defined) continue;
    EXPECT_EQ(h.value, hr.value);
    EXPECT_EQ(p.value, pr.value);
    EXPECT_GE(h.value, 0.0);
    EXPECT_LE(p.value, h.value);
  }
}

TEST(SegMetrics, HausdorffTriangleInequality) {
  std::mt19937_64 rng(99);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    const Spacing s{1.0, 0.5, 1.5};
    const auto a = oracle::random_mask(rng, {7, 7, 7}, s);
    const auto b = oracle::random_mask(rng, {7, 7, 7}, s);
    const auto c = oracle::random_mask(rng, {7, 7, 7}, s);
    const auto ab = hausdorff(a, b), bc = hausdorff(b, c), ac = hausdorff(a, c);
    if (!ab.defined || !bc.defined) continue;
    ++checked;
    EXPECT_LE(ac.value, ab.value + bc.value + 1e-12);
  }
  EXPECT_GT(checked, 20);
}

TEST(SegMetrics, DistancesScaleWithSpacing) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    const Spacing s{0.9, 1.2, 3.0};
    const auto a = oracle::random_mask(rng, {8, 6, 5}, s);
    const auto b = oracle::random_mask(rng, {8, 6, 5}, s);
    const auto base = hausdorff(a, b), base95 = hd95(a, b);
    if (!base.defined) continue;
    for (double k : {2.0, 0.5}) {
      const auto ak = a.with_spacing(k * s), bk = b.with_spacing(k * s);
      EXPECT_EQ(hausdorff(ak, bk).value, k * base.value);
      EXPECT_EQ(hd95(ak, bk).value, k * base95.value);
    }
    const double k = 1.7;
    const auto ak = a.with_spacing(k * s), bk = b.with_spacing(k * s);
    EXPECT_NEAR(hausdorff(ak, bk).value, k * base.value, 1e-12 * k * base.value + 1e-300);
    EXPECT_NEAR(hd95(ak, bk).value, k * base95.value, 1e-12 * k * base95.value + 1e-300);
  }
}

TEST(MaskIo, EmbeddedRoundTrip) {
  std::mt19937_64 rng(3);
  const auto m = oracle::random_mask(rng, {5, 4, 3}, {0.5, 0.75, 2.0}, 0.3);
  const auto text = serialize_mask(m);
  EXPECT_EQ(parse_mask(text), m);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            R"({"dims":[5,4,3],"spacing":[0.5,0.75,2.0],"encoding":"raw8"})");
}

TEST(MaskIo, SiblingPayload) {
  const auto dir = oracle::scratch_dir("mask_sibling");
  const auto m = mask({3, 2, 2}, {{0, 0, 0}, {2, 1, 1}}, {1.0, 1.0, 3.0});
  write_mask_with_sibling(dir / "m.mask", "m.raw", m);
  EXPECT_EQ(read_mask(dir / "m.mask"), m);
  EXPECT_EQ(std::filesystem::file_size(dir / "m.raw"), 12u);
  write_mask(dir / "e.mask", m);
  EXPECT_EQ(read_mask(dir / "e.mask"), m);
}

TEST(MaskIo, MalformedContainers) {
  const std::string no_newline = R"({"dims":[1,1,1],"spacing":[1,1,1],"encoding":"raw8"})";
  EXPECT_THROW(parse_mask(no_newline), ParseError);
  EXPECT_THROW(parse_mask(std::string("{bad json\n\x01")), ParseError);
  EXPECT_THROW(parse_mask(std::string(R"({"dims":[2,1,1],"spacing":[1,1,1],"encoding":"raw8"})") + "\n\x01"),
               InputError);
  EXPECT_THROW(parse_mask(std::string(R"({"dims":[1,1,1],"spacing":[1,1,1],"encoding":"rle"})") + "\n\x01"),
               InputError);
  EXPECT_THROW(parse_mask(std::string(R"({"dims":[0,1,1],"spacing":[1,1,1],"encoding":"raw8"})") + "\n"),
               InputError);
  EXPECT_THROW(parse_mask(std::string(R"({"dims":[1,1],"spacing":[1,1,1],"encoding":"raw8"})") + "\n\x01"),
               ParseError);
}
