#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "sfas/diagnostics.hpp"
#include "sfas/geometry.hpp"
#include "sfas/manifold.hpp"
#include "sfas/subspace.hpp"

namespace sfas::detail {

namespace {

using Row = std::vector<Cell>;

Cell num(double v) { return v; }
Cell num(int v) { return static_cast<std::int64_t>(v); }
Cell num(std::size_t v) { return static_cast<std::int64_t>(v); }

class Stats {
public:
    void add(double v) {
        ++n_;
        const double delta = v - mean_;
        mean_ += delta / n_;
        m2_ += delta * (v - mean_);
        max_ = std::max(max_, v);
    }
    double mean() const { return n_ > 0 ? mean_ : std::numeric_limits<double>::quiet_NaN(); }
    double stddev() const { return n_ > 1 ? std::sqrt(m2_ / (n_ - 1)) : 0.0; }
    double max() const { return n_ > 0 ? max_ : std::numeric_limits<double>::quiet_NaN(); }
    int count() const { return n_; }

private:
    int n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double max_ = -std::numeric_limits<double>::infinity();
};

double noise_power_of(double snr_db) {
    SimulationParams params;
    params.snr_db = snr_db;
    return params.noise_power();
}

// Observation chain of one array: far-field, coupled-and-selected, or
// exact-geometry when the scene carries ranges.
struct Arm {
    ArrayConfig config;
    CouplingModel coupling;
    bool selected = false;

    int dimension() const {
        return selected ? config.effective_elements() : config.total_elements();
    }

    Manifold manifold(const SourceScene& scene) const {
        if (scene.has_ranges()) {
            if (selected) {
                throw InputError("mixed-field scenes are modelled on uncoupled full arrays only");
            }
            return esg_manifold(scene, config);
        }
        return selected ? compressed_manifold(scene, config, coupling) : ff_manifold(scene, config);
    }

    SteeringModel steering() const {
        return selected ? SteeringModel::coupled_selected(config, coupling)
                        : SteeringModel::far_field(config);
    }
};

CouplingModel coupling_of(const ExperimentConfig& c) {
    if (c.c1 > 0.0) {
        return CouplingModel::from_adjacent_magnitude(c.c1, c.spacing(), c.effective_band_limit(),
                                                      c.coupling_phase);
    }
    return CouplingModel::none();
}

Arm primary_arm(const ExperimentConfig& c, int p) {
    ArrayConfig config(c.m, c.alpha, c.d0_wavelengths, p);
    return Arm{config, coupling_of(c), p > 0 || c.c1 > 0.0};
}

Arm primary_arm(const ExperimentConfig& c) { return primary_arm(c, c.p); }

Arm extended_arm(const ExperimentConfig& c) {
    return Arm{ArrayConfig(c.m_e, c.alpha_e, c.d0_wavelengths, 0), CouplingModel::none(), false};
}

SearchGrid search_grid(const ExperimentConfig& c) {
    return SearchGrid{-90.0 + c.grid_step, 90.0 - c.grid_step, c.grid_step};
}

// K angles evenly spaced over [angle_min, angle_max]; mixed-field ranges
// log-spaced over [range_min, range_max] in the same order.
SourceScene sweep_scene(int k, const ExperimentConfig& c, bool mixed) {
    std::vector<double> angles;
    std::vector<double> ranges;
    for (int i = 0; i < k; ++i) {
        const double t = k == 1 ? 0.5 : static_cast<double>(i) / (k - 1);
        angles.push_back(c.angle_min + t * (c.angle_max - c.angle_min));
        ranges.push_back(c.range_min * std::pow(c.range_max / c.range_min, t));
    }
    return mixed ? SourceScene::mixed_field(std::move(angles), std::move(ranges))
                 : SourceScene::far_field(std::move(angles));
}

// K sources separation_deg apart around a centre drawn from
// U(-center_jitter_deg, center_jitter_deg), so truth sits off the grid.
SourceScene cluster_scene(int k, const ExperimentConfig& c, std::uint64_t seed) {
    Rng rng(derive_seed(seed, Stream::scene));
    std::uniform_real_distribution<double> jitter(-c.center_jitter_deg, c.center_jitter_deg);
    const double center = c.center_jitter_deg > 0.0 ? jitter(rng) : 0.0;
    std::vector<double> angles;
    for (int i = 0; i < k; ++i) {
        angles.push_back(center + (i - 0.5 * (k - 1)) * c.separation_deg);
    }
    return SourceScene::far_field(std::move(angles));
}

SimulationParams params_of(int snapshots, double snr_db, std::uint64_t seed) {
    SimulationParams p;
    p.snapshots = snapshots;
    p.snr_db = snr_db;
    p.seed = seed;
    return p;
}

CMatrix stacked_matrix(const CMatrix& upper, const CMatrix& lower) {
    CMatrix out(upper.rows() + lower.rows(), upper.cols());
    out.topRows(upper.rows()) = upper;
    out.bottomRows(lower.rows()) = lower;
    return out;
}

CovarianceSpectrum theory_spectrum(const CMatrix& manifold, const SourceScene& scene,
                                   double noise_power) {
    return eigendecompose(theoretical_covariance(manifold, scene.powers(), noise_power));
}

// Number of truth sources paired with an estimate within the threshold when
// estimates and truth may differ in count.
int recovered_sources(std::span<const double> estimates, std::span<const double> truth,
                      double threshold) {
    const std::size_t n = std::max(estimates.size(), truth.size());
    if (n == 0 || estimates.empty()) {
        return 0;
    }
    constexpr double kUnpaired = 1e6;
    Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(n), kUnpaired);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (std::size_t j = 0; j < estimates.size(); ++j) {
            cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::abs(estimates[j] - truth[i]);
        }
    }
    const std::vector<std::size_t> assignment = solve_assignment(cost);
    int hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::size_t j = assignment[i];
        if (j < estimates.size() && std::abs(estimates[j] - truth[i]) <= threshold) {
            ++hits;
        }
    }
    return hits;
}

bool is_mixed(const std::string& scene) { return scene == "mixed_field"; }

// ---------------------------------------------------------------- algebraic

void run_algebraic(const ExperimentConfig& c, ExperimentResult& result, const Arm& arm,
                   const std::string& label) {
    Table table(c.experiment,
                {"configuration", "scene", "snr_db", "snapshots", "K", "m_eff", "noise_dim_theory",
                 "noise_dim_true_k_mean", "noise_dim_mdl_mean", "noise_dim_mdl_std", "k_mdl_mean",
                 "k_mdl_max", "mdl_exact_rate", "trials"});
    const int m_eff = arm.dimension();
    std::uint64_t sweep = 0;
    for (const std::string& scene_kind : c.scenes) {
        for (double snr : c.snr_db) {
            for (int n : c.snapshots) {
                for (int k : c.k) {
                    const SourceScene scene = sweep_scene(k, c, is_mixed(scene_kind));
                    const Manifold man = arm.manifold(scene);
                    struct Trial {
                        int nd_true = 0;
                        int k_mdl = 0;
                    };
                    const auto trials = parallel_trials<Trial>(
                        static_cast<std::size_t>(c.trials), c.threads, [&](std::size_t t) {
                            const auto params =
                                params_of(n, snr, trial_seed(c.seed, c.experiment, sweep, t));
                            const SnapshotSet y =
                                generate_snapshots(man, generate_sources(scene, params), params);
                            const CovarianceSpectrum spec = eigendecompose(sample_covariance(y));
                            return Trial{measured_noise_dim(spec, TrueK{k}),
                                         mdl_enumerate(spec.values(), n)};
                        });
                    Stats nd_true, nd_mdl, k_mdl;
                    int exact = 0;
                    for (const Trial& t : trials) {
                        nd_true.add(t.nd_true);
                        nd_mdl.add(std::max(0, m_eff - t.k_mdl));
                        k_mdl.add(t.k_mdl);
                        exact += t.k_mdl == k ? 1 : 0;
                    }
                    const double rate = trials.empty() ? 0.0 : double(exact) / trials.size();
                    table.add_row({label, scene_kind, num(snr), num(n), num(k), num(m_eff),
                                   num(std::max(0, m_eff - k)), num(nd_true.mean()),
                                   num(nd_mdl.mean()), num(nd_mdl.stddev()), num(k_mdl.mean()),
                                   num(k_mdl.max()), num(rate), num(trials.size())});
                    ++sweep;
                }
            }
        }
    }
    result.tables.push_back(std::move(table));
}

// ------------------------------------------------------------------ entropy

struct EntropyRowStats {
    Stats rho, hbar, h_signal, h_noise;
    int nonnegative = 0;
};

Row entropy_row(const std::string& label, const std::string& scene, double snr, int n, int k,
                int m_eff, const EntropyDecomposition& theory, const EntropyRowStats& s) {
    return {label,
            scene,
            num(snr),
            num(n),
            num(k),
            num(m_eff),
            num(theory.rho_n),
            num(theory.hbar_n),
            num(theory.h_signal),
            num(theory.h_noise),
            num(s.rho.mean()),
            num(s.rho.stddev()),
            num(s.hbar.mean()),
            num(s.hbar.stddev()),
            num(s.h_signal.mean()),
            num(s.h_noise.mean()),
            num(s.nonnegative),
            num(s.rho.count())};
}

Table entropy_table(const std::string& name) {
    return Table(name, {"configuration", "scene", "snr_db", "snapshots", "K", "m_eff",
                        "rho_n_theory", "hbar_n_theory", "h_signal_theory", "h_noise_theory",
                        "rho_n_mean", "rho_n_std", "hbar_n_mean", "hbar_n_std", "h_signal_mean",
                        "h_noise_mean", "nonnegative_noise_log_trials", "trials"});
}

void run_entropy_single(const ExperimentConfig& c, ExperimentResult& result, const Arm& arm,
                        const std::string& label) {
    Table table = entropy_table(c.experiment);
    const int m_eff = arm.dimension();
    std::uint64_t sweep = 0;
    for (const std::string& scene_kind : c.scenes) {
        for (double snr : c.snr_db) {
            const double sigma2 = noise_power_of(snr);
            for (int n : c.snapshots) {
                for (int k : c.k) {
                    const SourceScene scene = sweep_scene(k, c, is_mixed(scene_kind));
                    const Manifold man = arm.manifold(scene);
                    const int kk = std::min(k, m_eff);
                    const EntropyDecomposition theory = entropy_decomposition(
                        theory_spectrum(man.matrix, scene, sigma2), kk, sigma2,
                        NoiseFloor::theoretical);
                    const auto trials = parallel_trials<EntropyDecomposition>(
                        static_cast<std::size_t>(c.trials), c.threads, [&](std::size_t t) {
                            const auto params =
                                params_of(n, snr, trial_seed(c.seed, c.experiment, sweep, t));
                            const SnapshotSet y =
                                generate_snapshots(man, generate_sources(scene, params), params);
                            return entropy_decomposition(eigendecompose(sample_covariance(y)), kk,
                                                         sigma2, NoiseFloor::empirical);
                        });
                    EntropyRowStats s;
                    for (const auto& e : trials) {
                        s.rho.add(e.rho_n);
                        s.hbar.add(e.hbar_n);
                        s.h_signal.add(e.h_signal);
                        s.h_noise.add(e.h_noise);
                        s.nonnegative += e.nonnegative_noise_log ? 1 : 0;
                    }
                    table.add_row(entropy_row(label, scene_kind, snr, n, k, m_eff, theory, s));
                    ++sweep;
                }
            }
        }
    }
    result.tables.push_back(std::move(table));
}

// Compressed, extended, joint and sequential (min of the two stages) curves.
void run_entropy_dual(const ExperimentConfig& c, ExperimentResult& result) {
    const Arm comp = primary_arm(c);
    const Arm ext = extended_arm(c);
    const int mc = comp.dimension();
    const int me = ext.dimension();
    const int mj = mc + me;
    Table table = entropy_table(c.experiment);
    std::uint64_t sweep = 0;
    for (double snr : c.snr_db) {
        const double sigma2 = noise_power_of(snr);
        for (int n : c.snapshots) {
            for (int k : c.k) {
                const SourceScene scene = sweep_scene(k, c, false);
                const Manifold man_c = comp.manifold(scene);
                const Manifold man_e = ext.manifold(scene);
                const CMatrix a_j = stacked_matrix(man_c.matrix, man_e.matrix);
                const int kc = std::min(k, mc);
                const int ke = std::min(k, me);
                const int kj = std::min(k, mj);
                const auto th = [&](const CMatrix& a, int kk) {
                    return entropy_decomposition(theory_spectrum(a, scene, sigma2), kk, sigma2,
                                                 NoiseFloor::theoretical);
                };
                const EntropyDecomposition th_c = th(man_c.matrix, kc);
                const EntropyDecomposition th_e = th(man_e.matrix, ke);
                const EntropyDecomposition th_j = th(a_j, kj);
                EntropyDecomposition th_s = th_c;
                th_s.rho_n = std::min(th_c.rho_n, th_e.rho_n);
                th_s.hbar_n = std::min(th_c.hbar_n, th_e.hbar_n);

                struct Trial {
                    EntropyDecomposition c, e, j;
                };
                const auto trials = parallel_trials<Trial>(
                    static_cast<std::size_t>(c.trials), c.threads, [&](std::size_t t) {
                        const auto params =
                            params_of(n, snr, trial_seed(c.seed, c.experiment, sweep, t));
                        const CMatrix s = generate_sources(scene, params);
                        const SnapshotSet yc =
                            generate_snapshots(man_c, s, params, Stream::compressed_noise);
                        const SnapshotSet ye =
                            generate_snapshots(man_e, s, params, Stream::extended_noise);
                        const auto emp = [&](const CMatrix& r, int kk) {
                            return entropy_decomposition(eigendecompose(r), kk, sigma2,
                                                         NoiseFloor::empirical);
                        };
                        return Trial{emp(sample_covariance(yc), kc), emp(sample_covariance(ye), ke),
                                     emp(sample_covariance(stack_joint(yc, ye)), kj)};
                    });
                EntropyRowStats sc, se, sj, ss;
                const auto add = [](EntropyRowStats& s, const EntropyDecomposition& e) {
                    s.rho.add(e.rho_n);
                    s.hbar.add(e.hbar_n);
                    s.h_signal.add(e.h_signal);
                    s.h_noise.add(e.h_noise);
                    s.nonnegative += e.nonnegative_noise_log ? 1 : 0;
                };
                for (const Trial& t : trials) {
                    add(sc, t.c);
                    add(se, t.e);
                    add(sj, t.j);
                    EntropyDecomposition seq = t.c;
                    seq.rho_n = std::min(t.c.rho_n, t.e.rho_n);
                    seq.hbar_n = std::min(t.c.hbar_n, t.e.hbar_n);
                    add(ss, seq);
                }
                table.add_row(entropy_row("compressed", "far_field", snr, n, k, mc, th_c, sc));
                table.add_row(entropy_row("extended", "far_field", snr, n, k, me, th_e, se));
                table.add_row(entropy_row("joint", "far_field", snr, n, k, mj, th_j, sj));
                table.add_row(entropy_row("sequential", "far_field", snr, n, k, mc, th_s, ss));
                ++sweep;
            }
        }
    }
    result.tables.push_back(std::move(table));
}

// ------------------------------------------------------- sequential / joint

void run_dual_algebraic(const ExperimentConfig& c, ExperimentResult& result, bool stage2) {
    const Arm comp = primary_arm(c);
    const Arm ext = extended_arm(c);
    const int mc = comp.dimension();
    const int me = ext.dimension();
    const int mj = mc + me;
    const BoundsReport bounds = identifiability_bounds(c.m, c.p);
    std::optional<SteeringTable> ext_table;
    if (stage2) {
        ext_table.emplace(ext.steering(), search_grid(c));
    }
    Table table(c.experiment,
                {"snr_db", "snapshots", "K", "k_seq_bound", "k_joint_bound", "k_mdl_compressed_mean",
                 "k_mdl_extended_mean", "k_mdl_joint_mean", "k_mdl_compressed_max",
                 "k_mdl_joint_max", "stage1_under_rate", "extended_exact_rate",
                 "joint_exact_rate", "noise_dim_compressed_mean", "noise_dim_extended_mean",
                 "noise_dim_seq_mean", "noise_dim_joint_mean", "noise_dim_joint_true_k",
                 "seq_recovered_mean", "seq_unreported_mean", "trials"});
    Stats sat_c, sat_e, sat_j;
    double max_seq = 0.0;
    double max_joint = 0.0;
    std::uint64_t sweep = 0;
    for (double snr : c.snr_db) {
        for (int n : c.snapshots) {
            for (int k : c.k) {
                const SourceScene scene = sweep_scene(k, c, false);
                const Manifold man_c = comp.manifold(scene);
                const Manifold man_e = ext.manifold(scene);
                struct Trial {
                    int kc = 0, ke = 0, kj = 0, recovered = 0;
                };
                const auto trials = parallel_trials<Trial>(
                    static_cast<std::size_t>(c.trials), c.threads, [&](std::size_t t) {
                        const auto params =
                            params_of(n, snr, trial_seed(c.seed, c.experiment, sweep, t));
                        const CMatrix s = generate_sources(scene, params);
                        const SnapshotSet yc =
                            generate_snapshots(man_c, s, params, Stream::compressed_noise);
                        const SnapshotSet ye =
                            generate_snapshots(man_e, s, params, Stream::extended_noise);
                        Trial out;
                        if (stage2) {
                            const SequentialOutcome seq = sequential_pipeline(yc, ye, *ext_table);
                            out.kc = seq.k_stage1;
                            out.recovered = recovered_sources(seq.estimates.angles_deg,
                                                              scene.angles_deg(),
                                                              c.failure_threshold_deg);
                        } else {
                            out.kc = mdl_enumerate(
                                eigendecompose(sample_covariance(yc)).values(), n);
                        }
                        out.ke = mdl_enumerate(eigendecompose(sample_covariance(ye)).values(), n);
                        out.kj = mdl_enumerate(
                            eigendecompose(sample_covariance(stack_joint(yc, ye))).values(), n);
                        return out;
                    });
                Stats kc, ke, kj, nd_c, nd_e, nd_s, nd_j, rec, unrep;
                int under = 0, ext_exact = 0, joint_exact = 0;
                for (const Trial& t : trials) {
                    kc.add(t.kc);
                    ke.add(t.ke);
                    kj.add(t.kj);
                    nd_c.add(std::max(0, mc - t.kc));
                    nd_e.add(std::max(0, me - t.ke));
                    nd_s.add(std::max(0, me - std::min(t.kc, me - 1)));
                    nd_j.add(std::max(0, mj - t.kj));
                    rec.add(t.recovered);
                    unrep.add(std::max(0, k - t.kc));
                    under += t.kc < k ? 1 : 0;
                    ext_exact += t.ke == k ? 1 : 0;
                    joint_exact += t.kj == k ? 1 : 0;
                    max_seq = std::max(max_seq, double(t.kc));
                    max_joint = std::max(max_joint, double(t.kj));
                }
                const double count = std::max<double>(1.0, static_cast<double>(trials.size()));
                sat_c.add(kc.mean());
                sat_e.add(ke.mean());
                sat_j.add(kj.mean());
                table.add_row({num(snr), num(n), num(k), num(bounds.k_seq),
                               num(bounds.k_max_joint), num(kc.mean()), num(ke.mean()),
                               num(kj.mean()), num(kc.max()), num(kj.max()), num(under / count),
                               num(ext_exact / count), num(joint_exact / count), num(nd_c.mean()),
                               num(nd_e.mean()), num(nd_s.mean()), num(nd_j.mean()),
                               num(std::max(0, mj - k)),
                               stage2 ? num(rec.mean())
                                      : num(std::numeric_limits<double>::quiet_NaN()),
                               num(unrep.mean()), num(trials.size())});
                ++sweep;
            }
        }
    }
    Table summary(c.experiment + "_summary",
                  {"saturation_k_compressed", "saturation_k_extended", "saturation_k_joint",
                   "max_k_seq", "max_k_joint", "k_seq_bound", "k_joint_bound"});
    summary.add_row({num(sat_c.max()), num(sat_e.max()), num(sat_j.max()), num(max_seq),
                     num(max_joint), num(bounds.k_seq), num(bounds.k_max_joint)});
    result.tables.push_back(std::move(table));
    result.tables.push_back(std::move(summary));
}

// --------------------------------------------------------------------- RMSE

void run_rmse(const ExperimentConfig& c, ExperimentResult& result) {
    const Arm comp = primary_arm(c);
    const Arm ext = extended_arm(c);
    const SearchGrid grid = search_grid(c);
    const SteeringModel steer_c = comp.steering();
    const SteeringModel steer_e = ext.steering();
    const SteeringModel steer_j = SteeringModel::stacked(steer_c, steer_e);
    const SteeringTable table_c(steer_c, grid);
    const SteeringTable table_e(steer_e, grid);
    const SteeringTable table_j(steer_j, grid);
    Table table(c.experiment,
                {"snr_db", "snapshots", "K", "rmse_c", "rmse_e", "rmse_j", "crb_c", "crb_e",
                 "crb_j", "failures_c", "failures_e", "failures_j", "degenerate_c",
                 "degenerate_e", "degenerate_j", "j_vs_e_reduction", "trials"});
    std::uint64_t sweep = 0;
    for (double snr : c.snr_db) {
        const double sigma2 = noise_power_of(snr);
        for (int n : c.snapshots) {
            for (int k : c.k) {
                struct Method {
                    double mse = 0.0, crb2 = 0.0;
                    bool failed = false, degenerate = false;
                };
                struct Trial {
                    Method m[3];
                };
                const auto trials = parallel_trials<Trial>(
                    static_cast<std::size_t>(c.trials), c.threads, [&](std::size_t t) {
                        const std::uint64_t seed = trial_seed(c.seed, c.experiment, sweep, t);
                        const SourceScene scene = cluster_scene(k, c, seed);
                        const auto params = params_of(n, snr, seed);
                        const CMatrix s = generate_sources(scene, params);
                        const SnapshotSet yc = generate_snapshots(comp.manifold(scene), s, params,
                                                                  Stream::compressed_noise);
                        const SnapshotSet ye = generate_snapshots(ext.manifold(scene), s, params,
                                                                  Stream::extended_noise);
                        const EstimateSet est[3] = {music(yc, k, table_c), music(ye, k, table_e),
                                                    jmusic(yc, ye, k, table_j)};
                        const SteeringModel* models[3] = {&steer_c, &steer_e, &steer_j};
                        Trial out;
                        for (int i = 0; i < 3; ++i) {
                            const Matching match = match_and_rmse(est[i], scene);
                            out.m[i].mse = match.rmse_deg * match.rmse_deg;
                            out.m[i].failed = match.max_error_deg > c.failure_threshold_deg;
                            out.m[i].degenerate = est[i].degenerate;
                            double crb2 = 0.0;
                            for (double sd : crb_doa(scene, *models[i], sigma2, n)) {
                                crb2 += sd * sd;
                            }
                            out.m[i].crb2 = crb2 / k;
                        }
                        return out;
                    });
                double mse[3] = {0, 0, 0}, crb2[3] = {0, 0, 0};
                int failures[3] = {0, 0, 0}, degenerate[3] = {0, 0, 0};
                for (const Trial& t : trials) {
                    for (int i = 0; i < 3; ++i) {
                        mse[i] += t.m[i].mse;
                        crb2[i] += t.m[i].crb2;
                        failures[i] += t.m[i].failed ? 1 : 0;
                        degenerate[i] += t.m[i].degenerate ? 1 : 0;
                    }
                }
                const double count = std::max<double>(1.0, static_cast<double>(trials.size()));
                double rmse[3], crb[3];
                for (int i = 0; i < 3; ++i) {
                    rmse[i] = std::sqrt(mse[i] / count);
                    crb[i] = std::sqrt(crb2[i] / count);
                }
                table.add_row({num(snr), num(n), num(k), num(rmse[0]), num(rmse[1]),
                               num(rmse[2]), num(crb[0]), num(crb[1]), num(crb[2]),
                               num(failures[0]), num(failures[1]), num(failures[2]),
                               num(degenerate[0]), num(degenerate[1]), num(degenerate[2]),
                               num(rmse[1] > 0.0 ? 1.0 - rmse[2] / rmse[1] : 0.0),
                               num(trials.size())});
                ++sweep;
            }
        }
    }
    result.tables.push_back(std::move(table));
}

// ---------------------------------------------------------- analytic sweeps

void run_dof_reduction(const ExperimentConfig& c, ExperimentResult& result) {
    Table table(c.experiment, {"p", "m_eff", "kmax_theory", "kmax_rank", "kmax_mdl"});
    Table sweep_table(c.experiment + "_sweep",
                      {"p", "K", "noise_dim_theory", "noise_dim_rank", "mdl_exact_rate",
                       "k_mdl_mean", "trials"});
    const double snr = c.snr_db.front();
    const int n = c.snapshots.front();
    const double sigma2 = noise_power_of(snr);
    std::uint64_t sweep = 0;
    for (int p : c.p_list) {
        const Arm arm = primary_arm(c, p);
        const int m_eff = arm.dimension();
        int kmax_rank = 0;
        int kmax_mdl = 0;
        for (int k = 1; k <= m_eff; ++k) {
            const SourceScene scene = sweep_scene(k, c, false);
            const Manifold man = arm.manifold(scene);
            // Lemma-1 rank check: eigenvalues at the noise floor span the noise subspace.
            const CovarianceSpectrum th = theory_spectrum(man.matrix, scene, sigma2);
            int rank_nd = 0;
            for (double v : th.values()) {
                rank_nd += v <= sigma2 * (1.0 + 1e-8) ? 1 : 0;
            }
            if (rank_nd == m_eff - k && rank_nd >= 1) {
                kmax_rank = std::max(kmax_rank, k);
            }
            double rate = std::numeric_limits<double>::quiet_NaN();
            Stats k_mdl;
            if (k < m_eff) {
                const auto trials = parallel_trials<int>(
                    static_cast<std::size_t>(c.trials), c.threads, [&](std::size_t t) {
                        const auto params =
                            params_of(n, snr, trial_seed(c.seed, c.experiment, sweep, t));
                        const SnapshotSet y =
                            generate_snapshots(man, generate_sources(scene, params), params);
                        return mdl_enumerate(eigendecompose(sample_covariance(y)).values(), n);
                    });
                int exact = 0;
                for (int v : trials) {
                    k_mdl.add(v);
                    exact += v == k ? 1 : 0;
                }
                rate = trials.empty() ? 0.0 : double(exact) / trials.size();
                if (rate >= 0.5) {
                    kmax_mdl = std::max(kmax_mdl, k);
                }
            }
            sweep_table.add_row({num(p), num(k), num(m_eff - k), num(rank_nd), num(rate),
                                 num(k_mdl.mean()), num(k < m_eff ? c.trials : 0)});
            ++sweep;
        }
        table.add_row({num(p), num(m_eff), num(m_eff - 1), num(kmax_rank), num(kmax_mdl)});
    }
    result.tables.push_back(std::move(table));
    result.tables.push_back(std::move(sweep_table));
}

void run_grating_lobe(const ExperimentConfig& c, ExperimentResult& result) {
    std::vector<double> grid;
    const auto steps = static_cast<long>(std::llround(180.0 / c.grid_step));
    for (long i = 0; i <= steps; ++i) {
        grid.push_back(std::clamp(-90.0 + static_cast<double>(i) * c.grid_step, -90.0, 90.0));
    }
    const std::vector<std::string> columns = {"spacing", "max_product_rad", "endfire_product_rad",
                                              "threshold_rad", "margin_ratio", "grating_free"};
    const auto row = [](const GratingLobeReport& r) -> Row {
        return {num(r.spacing), num(r.grid_max), num(r.endfire_product), num(r.threshold),
                num(r.margin_ratio), num(r.grating_free ? 1 : 0)};
    };
    const GratingLobeReport main = grating_lobe_margin(c.spacing(), grid);
    Table table(c.experiment, columns);
    table.add_row(row(main));
    Table sweep(c.experiment + "_sweep", columns);
    for (double d : c.spacing_list) {
        sweep.add_row(row(grating_lobe_margin(d, grid)));
    }
    Table profile(c.experiment + "_profile", {"theta_deg", "product_rad"});
    for (std::size_t i = 0; i < main.angles_deg.size(); ++i) {
        profile.add_row({num(main.angles_deg[i]), num(main.products[i])});
    }
    result.tables.push_back(std::move(table));
    result.tables.push_back(std::move(sweep));
    result.tables.push_back(std::move(profile));
}

// ----------------------------------------------------------------- defaults

void ideal_defaults(ExperimentConfig& c) {
    c.m = 32;
    c.p = 0;
    c.alpha = 1.0;
    c.d0_wavelengths = 0.5;
    c.c1 = 0.0;
}

void compressed_defaults(ExperimentConfig& c) {
    c.m = 32;
    c.p = 3;
    c.alpha = 0.5;
    c.d0_wavelengths = 0.5;
    c.c1 = 0.17;
    c.band_limit = -1;
    c.m_e = 32;
    c.alpha_e = 1.0;
}

void rmse_defaults(ExperimentConfig& c) {
    compressed_defaults(c);
    c.m = 48;
    c.p = 2;
    c.k = {3};
    c.snapshots = {50};
    c.snr_db = {0.0};
}

const std::vector<ExperimentEntry>& entries() {
    static const std::vector<ExperimentEntry> table = {
        {{"prop1-algebraic", "Fig. 1", "noise-subspace dimension vs K, M_eff=32"},
         [](ExperimentConfig& c) {
             ideal_defaults(c);
             c.snr_db = {10.0};
             c.snapshots = {500};
             c.k = parse_int_list("2:2:34");
         },
         [](const ExperimentConfig& c, ExperimentResult& r) {
             run_algebraic(c, r, primary_arm(c), "array");
         },
         {{"prop1-algebraic", "K", {"noise_dim_theory", "noise_dim_true_k_mean", "noise_dim_mdl_mean"},
           "noise subspace dimension"}}},
        {{"prop1-entropy", "Fig. 2", "noise entropy ratio vs K at 0/10/15 dB"},
         [](ExperimentConfig& c) {
             ideal_defaults(c);
             c.snr_db = {0.0, 10.0, 15.0};
             c.snapshots = {500};
             c.k = parse_int_list("0:32");
         },
         [](const ExperimentConfig& c, ExperimentResult& r) {
             run_entropy_single(c, r, primary_arm(c), "array");
         },
         {{"prop1-entropy", "K", {"rho_n_theory", "rho_n_mean"}, "rho_n"}}},
        {{"dof-reduction", "Fig. 3", "K_max vs edge removal p on an ideal ULA"},
         [](ExperimentConfig& c) {
             ideal_defaults(c);
             c.snr_db = {10.0};
             c.snapshots = {200};
             c.p_list = parse_int_list("0:6");
         },
         run_dof_reduction,
         {{"dof-reduction", "p", {"kmax_theory", "kmax_rank", "kmax_mdl"}, "K_max"}}},
        {{"thm1-algebraic", "Fig. 4", "compressed noise dimension, M=32, p=3, d=0.25"},
         [](ExperimentConfig& c) {
             compressed_defaults(c);
             c.snr_db = {20.0};
             c.snapshots = {1000};
             c.k = parse_int_list("2:2:30");
         },
         [](const ExperimentConfig& c, ExperimentResult& r) {
             run_algebraic(c, r, primary_arm(c), "compressed");
         },
         {{"thm1-algebraic", "K", {"noise_dim_theory", "noise_dim_true_k_mean", "noise_dim_mdl_mean"},
           "noise subspace dimension"}}},
        {{"grating-lobe", "Fig. 5", "|k_x d| over the angle grid, d=0.1"},
         [](ExperimentConfig& c) {
             ideal_defaults(c);
             c.alpha = 0.2;
             c.trials = 0;
             c.spacing_list = parse_double_list("0.05:0.05:1.5");
         },
         run_grating_lobe,
         {{"grating-lobe_profile", "theta_deg", {"product_rad"}, "|k_x d| (rad)"},
          {"grating-lobe_sweep", "spacing", {"max_product_rad", "threshold_rad"}, "rad"}}},
        {{"compressed-entropy", "Fig. 6", "compressed noise entropy ratio vs K"},
         [](ExperimentConfig& c) {
             compressed_defaults(c);
             c.snr_db = {20.0};
             c.snapshots = {1000};
             c.k = parse_int_list("0:30");
         },
         [](const ExperimentConfig& c, ExperimentResult& r) {
             run_entropy_single(c, r, primary_arm(c), "compressed");
         },
         {{"compressed-entropy", "K", {"rho_n_theory", "rho_n_mean"}, "rho_n"}}},
        {{"extended-algebraic", "Fig. 7", "extended noise dimension, far-field vs ESG scenes"},
         [](ExperimentConfig& c) {
             ideal_defaults(c);
             c.snr_db = {20.0};
             c.snapshots = {1000};
             c.k = parse_int_list("2:2:34");
             c.scenes = {"far_field", "mixed_field"};
         },
         [](const ExperimentConfig& c, ExperimentResult& r) {
             run_algebraic(c, r, primary_arm(c), "extended");
         },
         {{"extended-algebraic", "K", {"noise_dim_theory", "noise_dim_mdl_mean"},
           "noise subspace dimension"}}},
        {{"extended-entropy", "Fig. 8", "extended noise entropy ratio, far-field vs ESG scenes"},
         [](ExperimentConfig& c) {
             ideal_defaults(c);
             c.snr_db = {20.0};
             c.snapshots = {1000};
             c.k = parse_int_list("0:32");
             c.scenes = {"far_field", "mixed_field"};
         },
         [](const ExperimentConfig& c, ExperimentResult& r) {
             run_entropy_single(c, r, primary_arm(c), "extended");
         },
         {{"extended-entropy", "K", {"rho_n_theory", "rho_n_mean"}, "rho_n"}}},
        {{"sequential-algebraic", "Fig. 9 (Sec. V Fig. 7)",
          "two-stage pipeline: compressed MDL then extended MUSIC"},
         [](ExperimentConfig& c) {
             compressed_defaults(c);
             c.snr_db = {30.0};
             c.snapshots = {1000};
             c.k = parse_int_list("2:2:24, 25:32");
         },
         [](const ExperimentConfig& c, ExperimentResult& r) { run_dual_algebraic(c, r, true); },
         {{"sequential-algebraic", "K",
           {"noise_dim_compressed_mean", "noise_dim_seq_mean", "noise_dim_extended_mean"},
           "noise subspace dimension"}}},
        {{"sequential-entropy", "Sec. V", "sequential vs joint entropy ratios at 40 dB"},
         [](ExperimentConfig& c) {
             compressed_defaults(c);
             c.snr_db = {40.0};
             c.snapshots = {1000};
             c.k = parse_int_list("0:32");
         },
         run_entropy_dual,
         {{"sequential-entropy", "K", {"rho_n_theory", "rho_n_mean"}, "rho_n"}}},
        {{"joint-algebraic", "Fig. 9", "joint MDL enumeration up to K=57 at 40 dB, N=8000"},
         [](ExperimentConfig& c) {
             compressed_defaults(c);
             c.snr_db = {40.0};
             c.snapshots = {8000};
             c.k = parse_int_list("2:2:30, 31:40, 42:2:56, 57");
         },
         [](const ExperimentConfig& c, ExperimentResult& r) { run_dual_algebraic(c, r, false); },
         {{"joint-algebraic", "K",
           {"k_mdl_compressed_mean", "k_mdl_extended_mean", "k_mdl_joint_mean"},
           "enumerated K"}}},
        {{"joint-entropy", "Fig. 10", "normalized noise entropy hierarchy, joint vs single"},
         [](ExperimentConfig& c) {
             compressed_defaults(c);
             c.snr_db = {20.0};
             c.snapshots = {1000};
             c.k = parse_int_list("0:58");
         },
         run_entropy_dual,
         {{"joint-entropy", "K", {"hbar_n_theory", "hbar_n_mean"}, "normalized noise entropy"}}},
        {{"rmse-vs-snr", "Fig. 13", "MUSIC-C, MUSIC-E and J-MUSIC RMSE vs SNR"},
         [](ExperimentConfig& c) {
             rmse_defaults(c);
             c.snr_db = parse_double_list("-10:2:10");
         },
         run_rmse,
         {{"rmse-vs-snr", "snr_db", {"rmse_c", "rmse_e", "rmse_j", "crb_j"}, "RMSE (deg)"}}},
        {{"rmse-vs-k", "Fig. 14", "RMSE vs source count at 5 dB"},
         [](ExperimentConfig& c) {
             rmse_defaults(c);
             c.snr_db = {5.0};
             c.k = parse_int_list("3:20");
         },
         run_rmse,
         {{"rmse-vs-k", "K", {"rmse_c", "rmse_e", "rmse_j", "crb_j"}, "RMSE (deg)"}}},
        {{"rmse-vs-n", "Fig. 15", "RMSE vs snapshot count at 0 dB"},
         [](ExperimentConfig& c) {
             rmse_defaults(c);
             c.snr_db = {0.0};
             c.snapshots = {10, 20, 50, 100, 200, 500, 1000};
         },
         run_rmse,
         {{"rmse-vs-n", "snapshots", {"rmse_c", "rmse_e", "rmse_j", "crb_j"}, "RMSE (deg)"}}},
    };
    return table;
}

}  // namespace

const std::vector<ExperimentEntry>& experiment_entries() { return entries(); }

const ExperimentEntry& find_entry(const std::string& name) {
    for (const ExperimentEntry& e : entries()) {
        if (e.info.name == name) {
            return e;
        }
    }
    throw ConfigError("unknown experiment '" + name + "' (run 'sfas list')");
}

}  // namespace sfas::detail
