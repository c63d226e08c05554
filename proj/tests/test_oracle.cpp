#include "doctest.h"

#include <cmath>

#include "cohmath.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "protocol.hpp"
#include "rng.hpp"
#include "sweeps.hpp"

using namespace dit;

namespace {

ArmConfig section3_arm(double delta) {
    ArmConfig arm;
    arm.cavity = CavityPort{0.0, 50.0, 50.0, 0.0};
    arm.g_transition = DipoleTransition{20.0, delta, 0.125};
    arm.m_transition = DipoleTransition{0.0, 0.0, 0.125};
    return arm;
}

SystemPair matched_section3(double amp2) {
    SystemPair pair;
    pair.arm1 = section3_arm(0.0);
    pair.arm2 = section3_arm(0.0);
    pair.omega = 0.0;
    const ScatterSet s = scatter_set(pair);
    pair.alpha = complexd{std::sqrt(amp2) / std::abs(s.r1g), 0.0};
    pair.beta = matching_amplitudes(s, pair.alpha);
    return pair;
}

// Poisson tail beyond n for mean lambda, summed independently of the library.
double poisson_tail(double lambda, int n) {
    double term = std::exp(-lambda);
    double cumulative = term;
    for (int k = 1; k <= n; ++k) {
        term *= lambda / k;
        cumulative += term;
    }
    return 1.0 - cumulative;
}

} // namespace

TEST_CASE("choose_truncation") {
    SUBCASE("floor at zero amplitude") { CHECK(choose_truncation(complexd{0.0, 0.0}) == 8); }

    SUBCASE("smallest n meeting the 1e-12 tail bound at |a|^2 = 1") {
        const int n = choose_truncation(complexd{1.0, 0.0});
        CHECK(poisson_tail(1.0, n) < 1e-12);
        CHECK(poisson_tail(1.0, n - 1) >= 1e-12);
    }

    SUBCASE("monotone in the amplitude") {
        CHECK(choose_truncation(complexd{2.0, 0.0}) > choose_truncation(complexd{1.0, 0.0}));
    }

    SUBCASE("phase-independent") {
        CHECK(choose_truncation(std::polar(1.3, 2.1)) ==
              choose_truncation(complexd{1.3, 0.0}));
    }
}

TEST_CASE("truncated coherent state") {
    const TruncatedCoherentState st = truncate_coherent(complexd{1.0, 0.0}, 20);
    REQUIRE(st.coefficients.size() == 21);
    double norm = 0.0;
    for (const complexd& c : st.coefficients) norm += abs2(c);
    CHECK(std::abs(norm - 1.0) < 1e-12);

    // Insufficient truncations violate the tail invariant and are rejected.
    CHECK_THROWS_AS((void)truncate_coherent(complexd{2.0, 0.0}, 8), ValidationError);
    CHECK_THROWS_AS((void)truncate_coherent(complexd{0.0, 0.0}, 0), ValidationError);
}

TEST_CASE("evolve") {
    SUBCASE("vacuum inputs give vanishing mode amplitudes") {
        SystemPair pair;
        pair.arm1 = section3_arm(0.0);
        pair.arm2 = section3_arm(0.0);
        pair.alpha = pair.beta = complexd{0.0, 0.0};
        const JointState st = evolve(pair);
        for (int b = 0; b < 4; ++b) {
            CHECK(std::abs(st.d1[b]) == 0.0);
            CHECK(std::abs(st.d2[b]) == 0.0);
            CHECK(std::abs(st.b_out[b]) == 0.0);
            CHECK(std::abs(st.d_out[b]) == 0.0);
        }
    }

    SUBCASE("matching darkens the gg branch at detector 2") {
        const SystemPair pair = matched_section3(0.01);
        const JointState st = evolve(pair);
        CHECK(std::abs(st.d2[kGG]) < 1e-15);
    }
}

TEST_CASE("measure reproduces the ideal limits") {
    SUBCASE("weak field collapses onto the singlet") {
        const SystemPair pair = matched_section3(1e-8);
        const JointState st = evolve(pair);
        const OracleResult res = measure(st, 8);
        CHECK(res.fidelity >= 1.0 - 1e-6);
        CHECK(std::abs(res.rho[kGM][kGM].real() - 0.5) < 1e-6);
        CHECK(std::abs(res.rho[kMG][kMG].real() - 0.5) < 1e-6);
        CHECK(std::abs(res.rho[kGM][kMG].real() + 0.5) < 1e-6);
    }

    SUBCASE("strong field decoheres to one half") {
        const SystemPair pair = matched_section3(100.0);
        const JointState st = evolve(pair);
        int n_max = 8;
        for (int b = 0; b < 4; ++b) n_max = std::max(n_max, choose_truncation(st.d2[b]));
        const OracleResult res = measure(st, n_max);
        CHECK(std::abs(res.fidelity - 0.5) < 0.01);
    }

    SUBCASE("no detection when every branch is dark") {
        SystemPair pair;
        pair.arm1 = section3_arm(0.0);
        pair.arm2 = section3_arm(0.0);
        pair.alpha = pair.beta = complexd{0.0, 0.0};
        CHECK_THROWS_AS((void)measure(evolve(pair), 8), ComputeError);
    }
}

TEST_CASE("oracle equivalence against the closed form") {
    const OracleCheckReport rep = oracle_check(25, 90125, 1e-8);
    CHECK(rep.pass);
    CHECK(rep.max_fidelity_dev < 1e-8);
    CHECK(rep.max_efficiency_dev < 1e-8);
    CHECK(rep.min_eigenvalue > -1e-12);
    CHECK(rep.max_trace_dev < 1e-12);
}

TEST_CASE("truncation convergence: doubling n_max moves F by less than 1e-10") {
    SplitMix64 rng(515);
    for (int trial = 0; trial < 10; ++trial) {
        SystemPair pair;
        pair.arm1 = section3_arm(rng.uniform(-60.0, 60.0));
        pair.arm2 = section3_arm(rng.uniform(-60.0, 60.0));
        pair.omega = 0.0;
        pair.alpha = std::polar(rng.uniform(0.05, 0.7), rng.uniform(0.0, 2.0 * M_PI));
        pair.beta = std::polar(rng.uniform(0.05, 0.7), rng.uniform(0.0, 2.0 * M_PI));
        const JointState st = evolve(pair);
        int n_max = 8;
        for (int b = 0; b < 4; ++b) n_max = std::max(n_max, choose_truncation(st.d2[b]));
        const OracleResult coarse = measure(st, n_max);
        const OracleResult fine = measure(st, 2 * n_max);
        CHECK(std::abs(coarse.fidelity - fine.fidelity) < 1e-10);
        CHECK(std::abs(coarse.efficiency - fine.efficiency) < 1e-10);
    }
}

TEST_CASE("post-detection density matrix is hermitian, PSD, trace one") {
    SplitMix64 rng(626);
    for (int trial = 0; trial < 10; ++trial) {
        SystemPair pair;
        pair.arm1 = section3_arm(rng.uniform(-60.0, 60.0));
        pair.arm2 = section3_arm(rng.uniform(-60.0, 60.0));
        pair.alpha = std::polar(rng.uniform(0.05, 0.7), rng.uniform(0.0, 2.0 * M_PI));
        pair.beta = std::polar(rng.uniform(0.05, 0.7), rng.uniform(0.0, 2.0 * M_PI));
        const JointState st = evolve(pair);
        const OracleResult res = measure(st, 24);

        complexd trace = 0.0;
        for (int a = 0; a < 4; ++a) {
            trace += res.rho[a][a];
            for (int b = 0; b < 4; ++b)
                CHECK(std::abs(res.rho[a][b] - std::conj(res.rho[b][a])) < 1e-12);
        }
        CHECK(std::abs(trace - 1.0) < 1e-12);

        const auto ev = hermitian_eigenvalues(res.rho);
        CHECK(ev[0] > -1e-12);
    }
}

TEST_CASE("hermitian eigensolver on a known matrix") {
    // diag(1, 2, 3, 4) conjugated by a phase rotation keeps its spectrum.
    std::array<std::array<complexd, 4>, 4> m{};
    m[0][0] = 2.0;
    m[1][1] = 2.0;
    m[0][1] = complexd{0.0, 1.0};
    m[1][0] = complexd{0.0, -1.0};  // eigenvalues 1 and 3 on this block
    m[2][2] = 5.0;
    m[3][3] = -1.0;
    const auto ev = hermitian_eigenvalues(m);
    CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ev[3] == doctest::Approx(5.0).epsilon(1e-12));
}
