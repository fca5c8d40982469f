#include "gradshop/patches.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gradshop;

namespace {

PatchConfig cfg8() { return PatchConfig{}; }

}  // namespace

TEST(PatchIndices, SingleExactFit) {
  const auto o = patch_indices(8, 8, cfg8());
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(o[0], (PatchOrigin{0, 0}));
}

TEST(PatchIndices, AlignedGrid) {
  // floor((12 - 8) / 2) + 1 = 3 origins per axis.
  const auto o = patch_indices(12, 12, cfg8());
  EXPECT_EQ(o.size(), 9u);
  EXPECT_EQ(axis_origins(12, 8, 2, true), (std::vector<Index>{0, 2, 4}));
}

TEST(PatchIndices, ClampAppendsFinalOrigin) {
  EXPECT_EQ(axis_origins(11, 8, 2, true), (std::vector<Index>{0, 2, 3}));
  EXPECT_EQ(axis_origins(11, 8, 2, false), (std::vector<Index>{0, 2}));
  EXPECT_EQ(patch_indices(11, 11, cfg8()).size(), 9u);
}

TEST(PatchIndices, SortedAndUnique) {
  const auto o = patch_indices(21, 17, cfg8());
  for (std::size_t i = 1; i < o.size(); ++i) {
    const bool less = o[i - 1].row < o[i].row ||
                      (o[i - 1].row == o[i].row && o[i - 1].col < o[i].col);
    EXPECT_TRUE(less);
  }
}

TEST(PatchIndices, RejectsSmallGrid) {
  EXPECT_THROW(patch_indices(7, 20, cfg8()), DimensionError);
  EXPECT_THROW(extract_patches(SurfaceGrid(20, 7), cfg8()), DimensionError);
  EXPECT_THROW(coverage_counts(cfg8(), 5, 5), DimensionError);
}

TEST(ExtractPatches, ConstantGrid) {
  const PatchMatrix pm = extract_patches(SurfaceGrid(Matrix::Constant(12, 10, 3.0)), cfg8());
  EXPECT_EQ(pm.data(), Matrix::Constant(64, pm.count(), 3.0));
}

TEST(ExtractPatches, SinglePatchIsVecOfGrid) {
  std::mt19937_64 rng(1);
  const Matrix z = oracle::random_matrix(8, 8, rng);
  const PatchMatrix pm = extract_patches(SurfaceGrid(z), cfg8());
  ASSERT_EQ(pm.count(), 1);
  EXPECT_EQ(pm.data().col(0), oracle::vec(z));
}

TEST(ExtractPatches, MatchesDenseSelection) {
  std::mt19937_64 rng(2);
  const Matrix z = oracle::random_matrix(12, 12, rng);
  const auto origins = patch_indices(12, 12, cfg8());
  const PatchMatrix pm = extract_patches(SurfaceGrid(z), cfg8());
  for (std::size_t j = 0; j < origins.size(); ++j) {
    const Matrix p = oracle::dense_patch_operator(12, 12, origins[j].row,
                                                  origins[j].col, 8, 8);
    EXPECT_EQ(pm.data().col(static_cast<Index>(j)), p * oracle::vec(z));
  }
}

TEST(AccumulatePatches, OnesGiveCoverage) {
  const PatchMatrix pm = extract_patches(SurfaceGrid(Matrix::Ones(15, 13)), cfg8());
  EXPECT_EQ(accumulate_patches(pm, cfg8(), 15, 13).values(),
            coverage_counts(cfg8(), 15, 13).values());
}

TEST(AccumulatePatches, SinglePatchInvertsExtract) {
  std::mt19937_64 rng(3);
  const Matrix z = oracle::random_matrix(8, 8, rng);
  EXPECT_EQ(accumulate_patches(extract_patches(SurfaceGrid(z), cfg8()), cfg8(), 8, 8)
                .values(),
            z);
}

TEST(AccumulatePatches, AdjointOfExtract) {
  std::mt19937_64 rng(4);
  const Matrix z = oracle::random_matrix(12, 12, rng);
  const PatchMatrix pz = extract_patches(SurfaceGrid(z), cfg8());
  const Matrix mat = oracle::random_matrix(64, pz.count(), rng);
  const double lhs = (pz.data().array() * mat.array()).sum();
  const double rhs =
      (z.array() * accumulate_patches(PatchMatrix(mat), cfg8(), 12, 12)
                       .values()
                       .array())
          .sum();
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(lhs));
}

TEST(AccumulatePatches, RejectsInconsistentShape) {
  EXPECT_THROW(accumulate_patches(PatchMatrix(Matrix::Zero(64, 3)), cfg8(), 12, 12),
               DimensionError);
  EXPECT_THROW(accumulate_patches(PatchMatrix(Matrix::Zero(63, 9)), cfg8(), 12, 12),
               DimensionError);
}

TEST(CoverageCounts, InteriorCornerAndTotal) {
  const SurfaceGrid cov = coverage_counts(cfg8(), 40, 40);
  EXPECT_EQ(cov(20, 20), 16.0);  // ceil(8/2)^2
  EXPECT_EQ(cov(0, 0), 1.0);
  const auto count = patch_indices(40, 40, cfg8()).size();
  EXPECT_EQ(cov.values().sum(), 64.0 * static_cast<double>(count));
}

TEST(CoverageCounts, ClampedCoverageIsPositiveForAllShapes) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Index> psize(1, 9), dim(0, 30);
  for (int trial = 0; trial < 300; ++trial) {
    PatchConfig cfg;
    cfg.patch_h = psize(rng);
    cfg.patch_w = psize(rng);
    cfg.stride = std::uniform_int_distribution<Index>(
        1, std::min(cfg.patch_h, cfg.patch_w))(rng);
    const Index rows = cfg.patch_h + dim(rng), cols = cfg.patch_w + dim(rng);
    const SurfaceGrid cov = coverage_counts(cfg, rows, cols);
    EXPECT_GE(cov.values().minCoeff(), 1.0)
        << rows << "x" << cols << " patch " << cfg.patch_h << "x"
        << cfg.patch_w << " stride " << cfg.stride;
  }
}

TEST(DctDictionary, FirstAtomIsConstant) {
  const Dictionary d = dct_dictionary(8, 8, 64);
  EXPECT_LE((d.atom(0) - Vector::Constant(64, 1.0 / 8.0)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(DctDictionary, Orthonormal) {
  const Dictionary d = dct_dictionary(8, 8, 64);
  for (Index i = 0; i < 64; ++i) EXPECT_NEAR(d.atom(i).norm(), 1.0, 1e-12);
  EXPECT_LE((d.atoms().transpose() * d.atoms() - Matrix::Identity(64, 64))
                .cwiseAbs()
                .maxCoeff(),
            1e-10);
}

TEST(DctDictionary, AtomsAreSeparableCosines) {
  // Atom 1 varies along one patch axis only (lowest nonzero frequency).
  const Dictionary d = dct_dictionary(8, 8, 64);
  const Eigen::Map<const Matrix> a1(d.atom(1).data(), 8, 8);
  const bool rows_const = (a1.rowwise() - a1.row(0)).cwiseAbs().maxCoeff() < 1e-14;
  const bool cols_const = (a1.colwise() - a1.col(0)).cwiseAbs().maxCoeff() < 1e-14;
  EXPECT_NE(rows_const, cols_const);
}

TEST(DctDictionary, UndercompleteAndOvercomplete) {
  EXPECT_EQ(dct_dictionary(8, 8, 10).natoms(), 10);
  EXPECT_THROW(dct_dictionary(8, 8, 65), ConfigError);
}

TEST(PatchIndices, IndependentOfContents) {
  const auto a = patch_indices(30, 23, cfg8());
  const auto b = patch_indices(30, 23, cfg8());
  EXPECT_EQ(a, b);
  EXPECT_EQ(extract_patches(SurfaceGrid(30, 23), cfg8()).count(),
            static_cast<Index>(a.size()));
}
