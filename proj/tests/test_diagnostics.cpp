#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "sfas/diagnostics.hpp"

using namespace sfas;

namespace {

std::vector<double> spread_angles(int k) {
    std::vector<double> out;
    for (int i = 0; i < k; ++i) out.push_back(k == 1 ? 0.0 : -60.0 + 120.0 * i / (k - 1));
    return out;
}

CovarianceSpectrum theory_spectrum(const ArrayConfig& c, int k, double noise) {
    const SourceScene scene = SourceScene::far_field(spread_angles(k));
    const CMatrix a = k > 0 ? ff_manifold(scene, c).matrix : CMatrix(c.total_elements(), 0);
    return eigendecompose(theoretical_covariance(a, scene.powers(), noise));
}

}  // namespace

TEST(Bounds, ReferenceArray) {
    const BoundsReport r = identifiability_bounds(32, 3);
    EXPECT_EQ(r.k_max_fundamental, 31);
    EXPECT_EQ(r.k_max_compressed, 25);
    EXPECT_EQ(r.k_max_extended_ff, 31);
    EXPECT_EQ(r.k_max_extended_mf, 31);
    EXPECT_EQ(r.k_seq, 25);
    EXPECT_EQ(r.k_max_joint, 57);
    EXPECT_NEAR(r.capacity_gain, 57.0 / 31.0, 1e-15);
}

TEST(Bounds, EdgeRemovalSweep) {
    for (int p = 0; p <= 6; ++p) {
        EXPECT_EQ(identifiability_bounds(32, p).k_max_compressed, 31 - 2 * p);
    }
}

TEST(Bounds, IdentitiesAcrossSizes) {
    for (int m = 2; m <= 64; ++m) {
        for (int p = 0; 2 * p < m; ++p) {
            const BoundsReport r = identifiability_bounds(m, p);
            EXPECT_EQ(r.k_max_joint, r.k_max_compressed + r.k_max_extended_ff + 1);
            EXPECT_EQ(r.k_seq, std::min(r.k_max_compressed, r.k_max_extended_mf));
            EXPECT_LE(r.k_max_compressed, r.k_max_extended_ff);
            EXPECT_GT(r.k_max_joint, r.k_max_extended_ff);
        }
    }
    EXPECT_THROW(identifiability_bounds(4, 2), InputError);
    EXPECT_THROW(identifiability_bounds(0, 0), InputError);
    EXPECT_THROW(identifiability_bounds(8, -1), InputError);
}

TEST(Bounds, TextAndCsv) {
    std::ostringstream text;
    write_bounds_text(text, identifiability_bounds(32, 3));
    EXPECT_NE(text.str().find("57"), std::string::npos);
    std::ostringstream csv;
    const std::vector<BoundsReport> rows{identifiability_bounds(32, 0)};
    write_bounds_csv(csv, rows);
    EXPECT_NE(csv.str().find("\n32,0,31,31,31,31,31,63,"), std::string::npos) << csv.str();
}

TEST(Entropy, BoundaryConventions) {
    const ArrayConfig c(8, 1.0, 0.5);
    const EntropyDecomposition none = entropy_decomposition(theory_spectrum(c, 0, 0.1), 0, 0.1);
    EXPECT_EQ(none.rho_n, 1.0);
    EXPECT_EQ(none.hbar_n, 1.0);
    EXPECT_EQ(none.h_signal, 0.0);
    EXPECT_NEAR(none.h_noise, 8 * std::log(0.1), 1e-12);
    const EntropyDecomposition full = entropy_decomposition(theory_spectrum(c, 8, 0.1), 8, 0.1);
    EXPECT_EQ(full.rho_n, 0.0);
    EXPECT_EQ(full.hbar_n, 0.0);
    EXPECT_EQ(full.h_noise, 0.0);
    EXPECT_EQ(full.noise_dimension(), 0);
}

TEST(Entropy, TheoreticalRatioDecreasesToZeroAtCapacity) {
    for (int m : {26, 32}) {
        const ArrayConfig c(m, 1.0, 0.5);
        double previous = 2.0;
        for (int k = 0; k <= m; ++k) {
            const EntropyDecomposition e = entropy_decomposition(theory_spectrum(c, k, 0.1), k, 0.1);
            EXPECT_LT(e.rho_n, previous) << "M=" << m << " K=" << k;
            EXPECT_DOUBLE_EQ(e.hbar_n, static_cast<double>(m - k) / m);
            previous = e.rho_n;
        }
        EXPECT_EQ(previous, 0.0);
    }
}

TEST(Entropy, NoiseEntropyHierarchyAndZeroCrossings) {
    // Normalized noise entropy of compressed (26), extended (32) and joint (58) arms.
    const std::vector<int> dims{26, 32, 58};
    for (int k = 0; k <= 58; ++k) {
        std::vector<double> h;
        for (int m : dims) h.push_back(k <= m ? static_cast<double>(m - k) / m : 0.0);
        EXPECT_GE(h[2], h[1]);
        EXPECT_GE(h[1], h[0]);
    }
    for (int m : dims) {
        const ArrayConfig c(m, 1.0, 0.5);
        const double noise = 0.01;
        EXPECT_GT(entropy_decomposition(theory_spectrum(c, m - 1, noise), m - 1, noise).hbar_n, 0.0);
        EXPECT_EQ(entropy_decomposition(theory_spectrum(c, m, noise), m, noise).hbar_n, 0.0);
    }
}

TEST(Entropy, EmpiricalFloorUsesTailMean) {
    const std::vector<double> ev{10.0, 5.0, 0.2, 0.1, 0.3};
    const EntropyDecomposition e = entropy_decomposition(ev, 2, 0.1, NoiseFloor::empirical);
    EXPECT_NEAR(e.noise_floor, 0.2, 1e-15);
    EXPECT_NEAR(e.h_signal, std::log(50.0), 1e-12);
    EXPECT_NEAR(e.h_noise, 3 * std::log(0.2), 1e-12);
    EXPECT_NEAR(e.hbar_n, 3 * std::log(0.2) / (5 * std::log(0.1)), 1e-12);
    EXPECT_NEAR(e.observation_variance, 15.6 / 5, 1e-12);
    EXPECT_FALSE(e.nonnegative_noise_log);
    EXPECT_TRUE(entropy_decomposition(ev, 2, 2.0).nonnegative_noise_log);
    EXPECT_THROW(entropy_decomposition(ev, 6, 0.1), InputError);
    EXPECT_THROW(entropy_decomposition(ev, 1, 0.0), InputError);
}

TEST(MutualInformation, Examples) {
    EXPECT_EQ(mutual_information_bound(32, 0.0), 0.0);
    EXPECT_NEAR(mutual_information_bound(32, 10.0), 32 * std::log(11.0), 1e-12);
    EXPECT_NEAR(mutual_information_bound(26, 10.0) / mutual_information_bound(32, 10.0),
                26.0 / 32.0, 1e-15);
    EXPECT_THROW(mutual_information_bound(-1, 1.0), InputError);
}

TEST(NoiseDimension, TrueAndMdl) {
    const ArrayConfig c(16, 1.0, 0.5);
    const CovarianceSpectrum s = theory_spectrum(c, 5, 0.1);
    EXPECT_EQ(measured_noise_dim(s, TrueK{5}), 11);
    EXPECT_EQ(measured_noise_dim(s, TrueK{20}), 0);
    std::vector<double> ev{50, 40, 30, 1, 1, 1, 1, 1};
    CovarianceSpectrum step;
    step.eigenvalues = Eigen::Map<RVector>(ev.data(), 8);
    EXPECT_EQ(measured_noise_dim(step, MdlK{1000}), 5);
}

TEST(Entropy, CsvFormat) {
    std::vector<EntropyDecomposition> curve(1);
    curve[0].sources = 2;
    curve[0].rho_n = 0.5;
    curve[0].hbar_n = 0.25;
    curve[0].h_signal = 1;
    curve[0].h_noise = -1;
    std::ostringstream out;
    write_entropy_csv(out, curve);
    EXPECT_EQ(out.str(), "K,rho_n,hbar_n,h_signal,h_noise\n2,0.5,0.25,1,-1\n");
}
