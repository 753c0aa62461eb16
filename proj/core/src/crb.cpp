#include <cmath>
#include <sstream>
#include <string>

#include "sfas/estimators.hpp"

namespace sfas {

namespace {

// Most collinear source pair of a K x K Gram-like matrix, for error messages.
std::string worst_pair(const SourceScene& scene, const CMatrix& gram) {
    double worst = -1.0;
    Eigen::Index wi = 0;
    Eigen::Index wj = 1;
    for (Eigen::Index i = 0; i < gram.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < gram.cols(); ++j) {
            const double denom = std::sqrt(std::abs(gram(i, i)) * std::abs(gram(j, j)));
            const double c = denom > 0.0 ? std::abs(gram(i, j)) / denom : 1.0;
            if (c > worst) {
                worst = c;
                wi = i;
                wj = j;
            }
        }
    }
    std::ostringstream msg;
    if (worst < 0.0) {
        msg << "source 0 at " << scene.angles_deg()[0] << " deg";
    } else {
        msg << "sources " << wi << " and " << wj << " at "
            << scene.angles_deg()[static_cast<std::size_t>(wi)] << " and "
            << scene.angles_deg()[static_cast<std::size_t>(wj)]
            << " deg (normalized correlation " << worst << ")";
    }
    return msg.str();
}

}  // namespace

std::vector<double> crb_doa(const SourceScene& scene, const SteeringModel& steering,
                            double noise_power, int snapshots) {
    const auto k = static_cast<Eigen::Index>(scene.count());
    const Eigen::Index m = steering.dimension();
    if (k < 1) {
        throw InputError("crb_doa: empty scene");
    }
    if (snapshots < 1) {
        throw InputError("crb_doa: snapshot count must be positive");
    }
    if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
        throw InputError("crb_doa: noise power must be positive and finite");
    }
    if (k >= m) {
        throw CapacityError("crb_doa: K=" + std::to_string(k) +
                            " is not identifiable with M_eff=" + std::to_string(m));
    }
    const CMatrix a = steering.matrix(scene.angles_deg());
    const CMatrix d = steering.derivative_matrix(scene.angles_deg());
    const RVector powers = Eigen::Map<const RVector>(scene.powers().data(), k);

    const CMatrix gram = a.adjoint() * a;
    Eigen::FullPivLU<CMatrix> gram_lu(gram);
    gram_lu.setThreshold(1e-12);
    if (gram_lu.rank() < k) {
        throw NumericalError("crb_doa: steering matrix is rank deficient; " +
                             worst_pair(scene, gram));
    }
    const CMatrix projector =
        CMatrix::Identity(m, m) - a * gram_lu.solve(a.adjoint());

    CMatrix r = a * powers.asDiagonal() * a.adjoint();
    r += noise_power * CMatrix::Identity(m, m);
    const Eigen::LDLT<CMatrix> r_ldlt(r);
    const CMatrix r_inv_a = r_ldlt.solve(a);
    const CMatrix g = powers.asDiagonal() * (a.adjoint() * r_inv_a) * powers.asDiagonal();
    const CMatrix h = d.adjoint() * projector * d;

    const Eigen::MatrixXd fim = h.cwiseProduct(g.transpose()).real();
    const Eigen::LLT<Eigen::MatrixXd> fim_llt(0.5 * (fim + fim.transpose()));
    if (fim_llt.info() != Eigen::Success) {
        throw NumericalError("crb_doa: Fisher information is singular; " +
                             worst_pair(scene, fim.cast<Complex>()));
    }
    const Eigen::MatrixXd crb =
        fim_llt.solve(Eigen::MatrixXd::Identity(k, k)) * (noise_power / (2.0 * snapshots));
    std::vector<double> out(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
        if (!(crb(i, i) > 0.0) || !std::isfinite(crb(i, i))) {
            throw NumericalError("crb_doa: non-positive bound for source " + std::to_string(i));
        }
        out[static_cast<std::size_t>(i)] = rad_to_deg(std::sqrt(crb(i, i)));
    }
    return out;
}

}  // namespace sfas
