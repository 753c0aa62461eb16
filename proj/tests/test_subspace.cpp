#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sfas/subspace.hpp"
#include "sfas/synth.hpp"

using namespace sfas;

TEST(SampleCovariance, SingleSnapshotOuterProduct) {
    CMatrix y = CMatrix::Zero(4, 1);
    y(0, 0) = 1.0;
    const CMatrix r = sample_covariance(y);
    CMatrix expected = CMatrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    EXPECT_TRUE((r.array() == expected.array()).all());
}

TEST(SampleCovariance, ExactlyHermitian) {
    const CMatrix y = CMatrix::Random(9, 37);
    const CMatrix r = sample_covariance(y);
    EXPECT_TRUE((r.array() == r.adjoint().array()).all());
    EXPECT_TRUE(r.isApprox(y * y.adjoint() / 37.0, 1e-13));
    EXPECT_THROW(sample_covariance(CMatrix(3, 0)), InputError);
}

TEST(TheoreticalCovariance, RankOneClosedForm) {
    const ArrayConfig c(4, 1.0, 0.5);
    const SourceScene scene = SourceScene::far_field({23.0});
    const CMatrix r = theoretical_covariance(ff_manifold(scene, c), scene.powers(), 0.1);
    const CovarianceSpectrum s = eigendecompose(r);
    const double expected[4] = {4.1, 0.1, 0.1, 0.1};
    for (int i = 0; i < 4; ++i) {
        EXPECT_LE(std::abs(s.eigenvalues(i) - expected[i]), 1e-10 * expected[i]);
    }
    EXPECT_DOUBLE_EQ(s.max_eigenvalue(), s.eigenvalues(0));
}

TEST(TheoreticalCovariance, RankKOrthogonalClosedForm) {
    // sin(theta) on the DFT grid k / (M d) gives mutually orthogonal steering
    // vectors, so the eigenvalues are P_k M + sigma^2 exactly.
    const int m = 16;
    const ArrayConfig c(m, 1.0, 0.5);
    std::vector<double> angles, powers;
    for (int k : {-5, -1, 2, 6}) {
        angles.push_back(rad_to_deg(std::asin(k / (m * 0.5))));
        powers.push_back(0.5 + 0.25 * (k + 5));
    }
    const SourceScene scene = SourceScene::far_field(angles, powers);
    const double sigma2 = 0.03;
    const CovarianceSpectrum s =
        eigendecompose(theoretical_covariance(ff_manifold(scene, c), powers, sigma2));
    std::vector<double> expected;
    for (double p : powers) expected.push_back(p * m + sigma2);
    std::sort(expected.rbegin(), expected.rend());
    for (int i = 0; i < m; ++i) {
        const double want = i < 4 ? expected[i] : sigma2;
        EXPECT_LE(std::abs(s.eigenvalues(i) - want), 1e-10 * want) << i;
    }
}

TEST(TheoreticalCovariance, NoSourcesIsScaledIdentity) {
    const CMatrix r = theoretical_covariance(CMatrix(5, 0), {}, 0.4);
    EXPECT_TRUE(r.isApprox(0.4 * CMatrix::Identity(5, 5)));
    EXPECT_THROW(theoretical_covariance(CMatrix::Ones(5, 2), std::vector<double>{1.0}, 0.4),
                 InputError);
}

TEST(Eigendecompose, TrivialSpectra) {
    const CovarianceSpectrum id = eigendecompose(CMatrix::Identity(6, 6));
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(id.eigenvalues(i), 1.0, 1e-15);
    const CMatrix u = id.eigenvectors;
    EXPECT_TRUE((u.adjoint() * u).isApprox(CMatrix::Identity(6, 6), 1e-12));

    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 3.0;
    d(2, 2) = 2.0;
    const CovarianceSpectrum s = eigendecompose(d);
    EXPECT_DOUBLE_EQ(s.eigenvalues(0), 3.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues(1), 2.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues(2), 1.0);
    EXPECT_NEAR(std::abs(s.eigenvectors(1, 0)), 1.0, 1e-15);
}

TEST(Eigendecompose, RejectsNonHermitian) {
    CMatrix r = CMatrix::Identity(3, 3);
    r(0, 1) = Complex(0.5, 0.0);
    EXPECT_THROW(eigendecompose(r), InputError);
    EXPECT_THROW(eigendecompose(CMatrix::Identity(3, 2)), InputError);
}

TEST(Eigendecompose, ClampsOnlyRoundingNegatives) {
    CMatrix r = CMatrix::Zero(3, 3);
    r(0, 0) = 1.0;
    r(1, 1) = -1e-12;
    r(2, 2) = -0.5;
    const CovarianceSpectrum s = eigendecompose(r);
    EXPECT_EQ(s.eigenvalues(1), 0.0);
    EXPECT_DOUBLE_EQ(s.eigenvalues(2), -0.5);
}

TEST(Eigendecompose, ReconstructsAndSortsRandomHermitian) {
    for (int seed = 0; seed < 10; ++seed) {
        std::srand(seed + 1);
        const CMatrix x = CMatrix::Random(7, 7);
        const CMatrix r = 0.5 * (x + x.adjoint());
        const CovarianceSpectrum s = eigendecompose(r);
        for (int i = 1; i < 7; ++i) EXPECT_GE(s.eigenvalues(i - 1), s.eigenvalues(i));
        const CMatrix back = s.eigenvectors * s.eigenvalues.cast<Complex>().asDiagonal() *
                             s.eigenvectors.adjoint();
        EXPECT_TRUE(back.isApprox(r, 1e-12));
    }
}

TEST(SplitSubspaces, OrthogonalityOracle) {
    const ArrayConfig c(8, 1.0, 0.5);
    const SourceScene scene = SourceScene::far_field({-31.0, 4.0, 27.0});
    const Manifold man = ff_manifold(scene, c);
    const CovarianceSpectrum s = eigendecompose(theoretical_covariance(man, scene.powers(), 0.2));
    const SubspaceSplit split = split_subspaces(s, 3);
    EXPECT_EQ(split.noise_dimension(), 5);
    const CMatrix proj = man.matrix.adjoint() * split.noise;
    EXPECT_LT(proj.colwise().norm().maxCoeff(), 1e-8);
}

TEST(SplitSubspaces, Extremes) {
    const CovarianceSpectrum s = eigendecompose(CMatrix::Identity(4, 4));
    EXPECT_EQ(split_subspaces(s, 4).noise_dimension(), 0);
    EXPECT_EQ(split_subspaces(s, 0).noise_dimension(), 4);
    EXPECT_THROW(split_subspaces(s, 5), InputError);
    EXPECT_THROW(split_subspaces(s, -1), InputError);
}

namespace {
int mdl_trial(const SourceScene& scene, int m, int n, double snr, std::uint64_t seed) {
    SimulationParams p;
    p.snapshots = n;
    p.snr_db = snr;
    p.seed = seed;
    const SnapshotSet y =
        generate_snapshots(ff_manifold(scene, ArrayConfig(m, 1.0)), generate_sources(scene, p), p);
    return mdl_enumerate(eigendecompose(sample_covariance(y)).values(), n);
}
}  // namespace

TEST(Mdl, PureNoiseEnumeratesZero) {
    int hits = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        hits += mdl_trial(SourceScene{}, 32, 1000, 10.0, derive_seed(1, {t})) == 0 ? 1 : 0;
    }
    EXPECT_GE(hits, 190);
}

TEST(Mdl, FiveSeparatedSources) {
    const SourceScene scene = SourceScene::far_field({-50.0, -20.0, 0.0, 25.0, 55.0});
    int hits = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        hits += mdl_trial(scene, 32, 1000, 20.0, derive_seed(2, {t})) == 5 ? 1 : 0;
    }
    EXPECT_GE(hits, 190);
}

TEST(Mdl, ScaleInvariance) {
    for (std::uint64_t t = 0; t < 30; ++t) {
        const SourceScene scene = SourceScene::far_field({-40.0, -5.0, 18.0});
        SimulationParams p;
        p.snapshots = 100;
        p.snr_db = -2.0 + 0.5 * t;
        p.seed = derive_seed(3, {t});
        const SnapshotSet y = generate_snapshots(ff_manifold(scene, ArrayConfig(12, 1.0)),
                                                 generate_sources(scene, p), p);
        const CovarianceSpectrum s = eigendecompose(sample_covariance(y));
        const std::vector<double> base = mdl_scores(s.values(), 100);
        for (double scale : {1e-6, 0.37, 4.0, 1e5}) {
            std::vector<double> scaled(s.values().begin(), s.values().end());
            for (double& v : scaled) v *= scale;
            EXPECT_EQ(mdl_enumerate(scaled, 100), mdl_enumerate(s.values(), 100));
            const std::vector<double> sc = mdl_scores(scaled, 100);
            for (std::size_t k = 0; k < sc.size(); ++k) {
                EXPECT_NEAR(sc[k], base[k], 1e-9 * (1.0 + std::abs(base[k])));
            }
        }
    }
}

TEST(Mdl, HandComputedScores) {
    const std::vector<double> lambda{4.0, 1.0, 1.0};
    const std::vector<double> scores = mdl_scores(lambda, 10);
    const double a0 = 2.0;
    const double g0 = std::cbrt(4.0);
    EXPECT_NEAR(scores[0], -10.0 * 3.0 * std::log(g0 / a0), 1e-12);
    EXPECT_NEAR(scores[1], 0.5 * 1 * 5 * std::log(10.0), 1e-12);
    EXPECT_NEAR(scores[2], 0.5 * 2 * 4 * std::log(10.0), 1e-12);
    EXPECT_THROW(mdl_scores(std::vector<double>{}, 10), InputError);
}

TEST(EigenvalueCsv, RowFormat) {
    std::ostringstream out;
    const std::vector<double> v{2.5, 0.125};
    write_eigenvalues_csv_row(out, 3, v);
    EXPECT_EQ(out.str(), "3,2.5,0.125\n");
}
