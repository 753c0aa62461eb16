#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sfas/geometry.hpp"

using namespace sfas;

TEST(ArrayConfig, PositionsFollowScaledSpacing) {
    const ArrayConfig ext(32, 1.0, 0.5);
    EXPECT_DOUBLE_EQ(ext.position(1), 0.0);
    EXPECT_DOUBLE_EQ(ext.position(2), 0.5);
    EXPECT_DOUBLE_EQ(ext.position(32), 15.5);
    const ArrayConfig comp(32, 0.1, 0.5);
    EXPECT_NEAR(comp.spacing(), 0.05, 1e-15);
    const auto pos = element_positions(comp);
    ASSERT_EQ(pos.size(), 32u);
    for (int m = 1; m <= 32; ++m) {
        EXPECT_DOUBLE_EQ(pos[m - 1], (m - 1) * 0.1 * 0.5);
    }
}

TEST(ArrayConfig, RejectsInvalidParameters) {
    EXPECT_THROW(ArrayConfig(0, 1.0), InputError);
    EXPECT_THROW(ArrayConfig(8, 0.0), InputError);
    EXPECT_THROW(ArrayConfig(8, 1.0, -0.5), InputError);
    EXPECT_THROW(ArrayConfig(8, 1.0, 0.5, 4), InputError);
    EXPECT_THROW(ArrayConfig(8, 1.0, 0.5, -1), InputError);
}

TEST(ArrayConfig, WithSpacingUsesHalfWavelengthBaseline) {
    const ArrayConfig c = ArrayConfig::with_spacing(44, 0.25, 2);
    EXPECT_DOUBLE_EQ(c.spacing(), 0.25);
    EXPECT_DOUBLE_EQ(c.scaling_factor(), 0.5);
    EXPECT_EQ(c.effective_elements(), 40);
}

TEST(Aperture, ClosedForms) {
    EXPECT_DOUBLE_EQ(aperture(ArrayConfig(32, 1.0, 0.5)), 15.5);
    const double dc = aperture(ArrayConfig(32, 0.1, 0.5));
    EXPECT_NEAR(dc, 1.55, 1e-12);
    EXPECT_NEAR(15.5 / dc, 10.0, 1e-12);
    EXPECT_DOUBLE_EQ(aperture(ArrayConfig(1, 1.0, 0.5)), 0.0);
}

TEST(SelectionMap, KeepsCentralBlock) {
    const SelectionMap f = selection_map(32, 3);
    EXPECT_EQ(f.output_size(), 26);
    EXPECT_EQ(f.first_kept(), 3);
    const Eigen::MatrixXd mat = f.matrix();
    ASSERT_EQ(mat.rows(), 26);
    ASSERT_EQ(mat.cols(), 32);
    for (int i = 0; i < 26; ++i) {
        for (int j = 0; j < 32; ++j) {
            EXPECT_EQ(mat(i, j), j == i + 3 ? 1.0 : 0.0);
        }
    }
    std::vector<int> v(32);
    for (int i = 0; i < 32; ++i) v[i] = i;
    const auto kept = f.apply(std::span<const int>(v));
    ASSERT_EQ(kept.size(), 26u);
    EXPECT_EQ(kept.front(), 3);
    EXPECT_EQ(kept.back(), 28);
}

TEST(SelectionMap, NoRemovalIsIdentity) {
    const Eigen::MatrixXd mat = selection_map(10, 0).matrix();
    EXPECT_TRUE(mat.isApprox(Eigen::MatrixXd::Identity(10, 10)));
}

TEST(SelectionMap, EmptySubarrayRejected) {
    EXPECT_THROW(selection_map(8, 4), InputError);
}

TEST(SelectionMap, MatrixApplyMatchesExplicitProduct) {
    const SelectionMap f(6, 1);
    const CMatrix x = CMatrix::Random(6, 3);
    const CMatrix expected = f.matrix().cast<Complex>() * x;
    EXPECT_TRUE(f.apply(x).isApprox(expected));
}

TEST(FieldRegime, RayleighExamples) {
    const ArrayConfig ext(32, 1.0, 0.5);
    EXPECT_NEAR(rayleigh_distance(ext), 480.5, 1e-12);
    const FieldClassification far = classify_field_regime(1000.0, ext);
    EXPECT_EQ(far.regime, FieldRegime::far);
    EXPECT_NEAR(far.rayleigh_distance, 480.5, 1e-12);

    const ArrayConfig comp(32, 0.1, 0.5);
    EXPECT_NEAR(rayleigh_distance(comp), 4.805, 1e-12);
    EXPECT_EQ(classify_field_regime(10.0, comp).regime, FieldRegime::far);
}

TEST(FieldRegime, BoundariesFallIntoFartherRegime) {
    const ArrayConfig ext(32, 1.0, 0.5);
    const double rayleigh = rayleigh_distance(ext);
    const double fresnel = 0.62 * std::sqrt(std::pow(aperture(ext), 3));
    EXPECT_EQ(classify_field_regime(rayleigh, ext).regime, FieldRegime::far);
    EXPECT_EQ(classify_field_regime(fresnel, ext).regime, FieldRegime::fresnel);
    EXPECT_EQ(classify_field_regime(0.5 * fresnel, ext).regime, FieldRegime::near);
    EXPECT_EQ(classify_field_regime(0.5 * (fresnel + rayleigh), ext).regime, FieldRegime::fresnel);
    EXPECT_NEAR(classify_field_regime(1.0, ext).fresnel_lower, fresnel, 1e-12);
    EXPECT_THROW(classify_field_regime(0.0, ext), InputError);
}

namespace {
std::vector<double> full_grid(double step) {
    std::vector<double> g;
    const int n = static_cast<int>(std::lround(180.0 / step));
    for (int i = 0; i <= n; ++i) g.push_back(-90.0 + i * step);
    g.back() = 90.0;
    return g;
}
}  // namespace

TEST(GratingLobe, TenthWavelengthMargin) {
    const auto grid = full_grid(0.05);
    const GratingLobeReport r = grating_lobe_margin(0.1, grid);
    EXPECT_NEAR(r.grid_max, 0.2 * kPi, 1e-12);
    EXPECT_NEAR(r.endfire_product, 0.2 * kPi, 1e-12);
    EXPECT_NEAR(r.margin_ratio, 10.0, 1e-12);
    EXPECT_TRUE(r.grating_free);
    ASSERT_EQ(r.products.size(), grid.size());
}

TEST(GratingLobe, BroadsideProductIsZero) {
    const std::vector<double> broadside{0.0};
    for (double d : {0.05, 0.5, 1.7}) {
        EXPECT_EQ(grating_lobe_margin(d, broadside).products[0], 0.0);
    }
}

TEST(GratingLobe, SpacingSweepClassification) {
    const auto grid = full_grid(0.5);
    for (int i = 1; i <= 60; ++i) {
        const double d = 0.025 * i;
        const GratingLobeReport r = grating_lobe_margin(d, grid);
        if (d < 0.5) {
            EXPECT_TRUE(r.grating_free) << d;
        }
        if (d > 1.0) {
            EXPECT_FALSE(r.grating_free) << d;
        }
        EXPECT_LE(r.grid_max, r.endfire_product + 1e-15);
    }
}

TEST(GratingLobe, ConfigOverloadUsesSpacing) {
    const auto grid = full_grid(1.0);
    const GratingLobeReport a = grating_lobe_margin(ArrayConfig(32, 0.2, 0.5), grid);
    EXPECT_NEAR(a.spacing, 0.1, 1e-15);
    EXPECT_NEAR(a.grid_max, 0.2 * kPi, 1e-12);
}
