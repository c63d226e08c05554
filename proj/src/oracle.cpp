#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cohmath.hpp"
#include "model.hpp"

namespace dit {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

} // namespace

int choose_truncation(complexd amplitude) {
    if (!std::isfinite(amplitude.real()) || !std::isfinite(amplitude.imag()))
        throw ValidationError("amplitude: must be finite");
    const double lambda = abs2(amplitude);
    // Walk the Poisson weights until the remaining tail drops below 1e-12.
    double term = std::exp(-lambda);
    double cumulative = term;
    int n = 0;
    while (1.0 - cumulative >= 1e-12 && n < 4096) {
        ++n;
        term *= lambda / n;
        cumulative += term;
    }
    return std::max(n, 8);
}

TruncatedCoherentState truncate_coherent(complexd amplitude, int n_max) {
    if (n_max < 1)
        throw ValidationError("n_max: truncation must be >= 1");
    if (n_max < choose_truncation(amplitude))
        throw ValidationError("n_max: Poisson tail beyond the truncation exceeds 1e-12");

    TruncatedCoherentState st;
    st.amplitude = amplitude;
    st.n_max = n_max;
    // <n|amp> = exp(-|amp|^2/2) amp^n / sqrt(n!), built by recursion so no
    // factorial overflows.
    st.coefficients.resize(static_cast<size_t>(n_max) + 1);
    st.coefficients[0] = std::exp(-0.5 * abs2(amplitude));
    for (int n = 1; n <= n_max; ++n)
        st.coefficients[static_cast<size_t>(n)] =
            st.coefficients[static_cast<size_t>(n) - 1] * amplitude /
            std::sqrt(static_cast<double>(n));
    return st;
}

JointState evolve(const SystemPair& pair) {
    validate(pair, "pair");
    return evolve(pair, scatter_set(pair));
}

JointState evolve(const SystemPair& pair, const ScatterSet& s) {
    JointState st;
    for (int b = 0; b < 4; ++b) {
        // Cavity map: a_in -> r a_out + t b_out per arm, conditioned on the
        // branch's dipole states; then the 50/50 beamsplitter
        // a_out -> (d1 + d2)/sqrt(2), c_out -> (d1 - d2)/sqrt(2).
        const complexd refl1 = pair.alpha * s.r(1, branch_state1(b));
        const complexd refl2 = pair.beta * s.r(2, branch_state2(b));
        st.d1[b] = (refl1 + refl2) * kInvSqrt2;
        st.d2[b] = (refl1 - refl2) * kInvSqrt2;
        st.b_out[b] = pair.alpha * s.t(1, branch_state1(b));
        st.d_out[b] = pair.beta * s.t(2, branch_state2(b));
    }
    return st;
}

OracleResult measure(const JointState& state, int n_max) {
    // Fock expansion of each branch's d2 mode with the vacuum component
    // removed: M|mu> = |mu> - <0|mu>|0>.
    std::array<std::vector<complexd>, 4> detected;
    for (int b = 0; b < 4; ++b) {
        detected[b] = truncate_coherent(state.d2[b], n_max).coefficients;
        detected[b][0] = 0.0;
    }

    std::array<std::array<complexd, 4>, 4> rho_raw{};
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            complexd d2_sum = 0.0;
            for (int n = 1; n <= n_max; ++n)
                d2_sum += std::conj(detected[b][n]) * detected[a][n];
            const complexd traced = coherent_overlap(state.d1[b], state.d1[a]) *
                                    coherent_overlap(state.b_out[b], state.b_out[a]) *
                                    coherent_overlap(state.d_out[b], state.d_out[a]);
            rho_raw[a][b] = 0.25 * traced * d2_sum;
        }
    }

    double eta = 0.0;
    for (int a = 0; a < 4; ++a)
        eta += rho_raw[a][a].real();
    if (eta <= 0.0)
        throw ComputeError("no detection possible: all detector-2 amplitudes vanish");

    OracleResult res;
    res.efficiency = eta;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            res.rho[a][b] = rho_raw[a][b] / eta;

    // F = <Psi_-|rho|Psi_-> on the {gm, mg} block.
    const complexd f = 0.5 * (res.rho[kGM][kGM] + res.rho[kMG][kMG] -
                              res.rho[kGM][kMG] - res.rho[kMG][kGM]);
    res.fidelity = f.real();
    return res;
}

std::array<double, 4> hermitian_eigenvalues(const std::array<std::array<complexd, 4>, 4>& m) {
    // Real-symmetric embedding: eigenvalues of X + iY equal those of
    // [[X, -Y], [Y, X]], each appearing twice.
    double a[8][8];
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            // Hermitize first so roundoff asymmetry cannot skew the rotations.
            const complexd h = 0.5 * (m[i][j] + std::conj(m[j][i]));
            const double x = h.real();
            const double y = h.imag();
            a[i][j] = x;
            a[i][j + 4] = -y;
            a[i + 4][j] = y;
            a[i + 4][j + 4] = x;
        }
    }

    auto off_norm = [&a]() {
        double s = 0.0;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j)
                if (i != j) s += a[i][j] * a[i][j];
        return s;
    };

    for (int sweep = 0; sweep < 128 && off_norm() > 1e-30; ++sweep) {
        for (int p = 0; p < 8; ++p) {
            for (int q = p + 1; q < 8; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                for (int k = 0; k < 8; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 8; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }

    std::array<double, 8> all{};
    for (int i = 0; i < 8; ++i) all[i] = a[i][i];
    std::sort(all.begin(), all.end());
    return {all[0], all[2], all[4], all[6]};
}

} // namespace dit
