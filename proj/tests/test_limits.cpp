#include "doctest.h"

#include <cmath>

#include "cohmath.hpp"
#include "limits.hpp"
#include "model.hpp"
#include "protocol.hpp"
#include "rng.hpp"

using namespace dit;

namespace {

ArmConfig make_arm(double g, double delta, double gamma, double kappa_r) {
    ArmConfig arm;
    arm.cavity = CavityPort{0.0, kappa_r, kappa_r, 0.0};
    arm.g_transition = DipoleTransition{g, delta, gamma};
    arm.m_transition = DipoleTransition{0.0, 0.0, gamma};
    return arm;
}

BiexcitonScenario reference_scenario() {
    return BiexcitonScenario{20.0, 20.0, 0.125, 250.0, 2.0, 50.0, 0.0, 0.0};
}

} // namespace

TEST_CASE("excitation probability") {
    const ArmConfig arm = make_arm(20.0, 0.0, 0.125, 50.0);  // kappa_total = 100

    SUBCASE("zero flux") { CHECK(excitation_probability(arm, 0.0).probability == 0.0); }

    SUBCASE("on resonance reduces to flux * kappa / g^2") {
        const auto est = excitation_probability(arm, 0.5);
        CHECK(est.probability == doctest::Approx(0.5 * 100.0 / 400.0).epsilon(1e-14));
        CHECK(est.formula_valid);
    }

    SUBCASE("detuned value by direct substitution") {
        ArmConfig detuned = arm;
        detuned.g_transition.delta = 50.0;
        const auto est = excitation_probability(detuned, 1.0);
        // g^2 kappa / (g^4 + delta^2 kappa^2 / 4) = 40000 / (160000 + 6250000)
        CHECK(est.probability == doctest::Approx(40000.0 / 6410000.0).epsilon(1e-14));
    }

    SUBCASE("flagged outside the cooperativity > 1 regime") {
        ArmConfig weak = make_arm(1.0, 0.0, 0.5, 50.0);  // C = 1/(0.5*100) = 0.02
        CHECK_FALSE(excitation_probability(weak, 1.0).formula_valid);
    }
}

TEST_CASE("weak limit flux bound") {
    SUBCASE("resonant bound g^2/kappa") {
        const ArmConfig arm = make_arm(20.0, 0.0, 0.125, 25.0);  // kappa_total = 50
        CHECK(weak_limit_flux(arm) == doctest::Approx(8.0).epsilon(1e-14));
    }

    SUBCASE("detuned bound by substitution") {
        const ArmConfig arm = make_arm(20.0, 20.0, 0.125, 50.0);  // kappa_total = 100
        CHECK(weak_limit_flux(arm) == doctest::Approx(104.0).epsilon(1e-14));
    }

    SUBCASE("dominated by the detuning term at large delta") {
        const ArmConfig arm = make_arm(20.0, 2000.0, 0.125, 50.0);
        const double bound = weak_limit_flux(arm);
        const double detuning_term = 100.0 * 2000.0 * 2000.0 / 400.0;
        CHECK(bound / detuning_term == doctest::Approx(1.0).epsilon(1e-3));
    }

    SUBCASE("monotone in |delta|") {
        double previous = 0.0;
        for (double delta = 0.0; delta <= 300.0; delta += 10.0) {
            const double bound = weak_limit_flux(make_arm(20.0, delta, 0.125, 50.0));
            CHECK(bound >= previous);
            previous = bound;
        }
    }
}

TEST_CASE("flux bound brackets the exact inversion within the structural factor") {
    // Eq-9-style two-term bound vs the exact steady-state inversion
    // (g^4 + delta^2 kappa^2/4)/(g^2 kappa): equal on resonance, up to 4x
    // apart at large detuning (the bound's second term carries no 1/4).
    const double g = 20.0, kappa = 100.0;
    for (double delta = 0.0; delta <= 5.0 * kappa; delta += 2.5) {
        const ArmConfig arm = make_arm(g, delta, 0.125, 50.0);
        const double bound = weak_limit_flux(arm);
        const double exact =
            (g * g * g * g + 0.25 * delta * delta * kappa * kappa) / (g * g * kappa);
        const double ratio = bound / exact;
        CHECK(ratio >= 1.0 - 1e-12);
        CHECK(ratio <= 4.0 + 1e-12);
        if (delta == 0.0) CHECK(ratio == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("weak excitation check") {
    const ArmConfig arm = make_arm(20.0, 0.0, 0.125, 25.0);  // bound = 8 /ns
    PulseContext pulse{10.0, 1.0, 10.0};                     // flux 0.1, margin 10
    const auto chk = weak_excitation_check(arm, pulse);
    CHECK(chk.bound == doctest::Approx(8.0));
    CHECK(chk.flux == doctest::Approx(0.1));
    CHECK(chk.pass);

    pulse.photon_number = 100.0;  // flux 10, 10*10 > 8
    CHECK_FALSE(weak_excitation_check(arm, pulse).pass);

    pulse.tau_p = 0.0;
    CHECK_THROWS_AS((void)weak_excitation_check(arm, pulse), ValidationError);
}

TEST_CASE("matched pair limit") {
    SUBCASE("symmetric pair has equal bounds") {
        SystemPair pair;
        pair.arm1 = make_arm(20.0, 15.0, 0.125, 50.0);
        pair.arm2 = pair.arm1;
        pair.alpha = complexd{0.1, 0.0};
        const ScatterSet s = scatter_set(pair);
        pair.beta = matching_amplitudes(s, pair.alpha);
        const auto rep = matched_pair_limit(pair, s, PulseContext{10.0, 0.01, 10.0});
        CHECK(rep.bound1 == rep.bound2);
        CHECK(rep.pass_alpha == rep.pass_beta);
    }

    SUBCASE("reflected rate example") {
        // |alpha r1g|^2 = 0.1 over tau_p = 10/(g^2/kappa) gives R = 0.01 g^2/kappa,
        // which passes at margin 10.
        SystemPair pair;
        pair.arm1 = make_arm(20.0, 0.0, 0.125, 50.0);
        pair.arm2 = pair.arm1;
        const ScatterSet s = scatter_set(pair);
        const double g2_over_kappa = 4.0;
        const double tau_p = 10.0 / g2_over_kappa;
        pair.alpha = complexd{std::sqrt(0.1) / std::abs(s.r1g), 0.0};
        pair.beta = matching_amplitudes(s, pair.alpha);
        const auto rep =
            matched_pair_limit(pair, s, PulseContext{tau_p, abs2(pair.alpha), 10.0});
        CHECK(rep.reflected_rate == doctest::Approx(0.01 * g2_over_kappa).epsilon(1e-12));
        CHECK(rep.reflected_bound == doctest::Approx(g2_over_kappa).epsilon(1e-12));
        CHECK(rep.pass_reflected);
    }

    SUBCASE("pass/fail equivalence between the matched arms") {
        // Shared (g, kappa) as in the published parameter sets; fluxes placed
        // a clear decade away from arm 1's boundary ("much less than" reads
        // as an order-of-magnitude statement, and the structural slack
        // between the two arms' bounds is below a factor of 4).
        SplitMix64 rng(808);
        int checked = 0;
        for (int trial = 0; trial < 80; ++trial) {
            const double g = rng.uniform(10.0, 30.0);
            const double kappa_r = rng.uniform(20.0, 80.0);
            const double lfrac = rng.uniform(0.0, 0.5);
            SystemPair pair;
            pair.arm1.cavity =
                CavityPort{0.0, kappa_r, kappa_r * (1.0 - lfrac), kappa_r * lfrac};
            pair.arm2.cavity = pair.arm1.cavity;
            pair.arm1.g_transition =
                DipoleTransition{g, rng.uniform(-100.0, 100.0), rng.uniform(0.05, 0.5)};
            pair.arm2.g_transition =
                DipoleTransition{g, rng.uniform(-100.0, 100.0), rng.uniform(0.05, 0.5)};
            pair.arm1.m_transition = DipoleTransition{0.0, 0.0, 0.125};
            pair.arm2.m_transition = pair.arm1.m_transition;
            pair.omega = 0.0;

            const ScatterSet s = scatter_set(pair);
            if (std::abs(s.r2g) < 1e-6) continue;

            PulseContext pulse{1.0, 0.0, 10.0};
            const int decades[] = {-3, -2, -1, 1, 2, 3};
            const int decade = decades[rng.next() % 6];
            const double flux = weak_limit_flux(pair.arm1) / pulse.margin *
                                std::pow(10.0, decade);
            pair.alpha = complexd{std::sqrt(flux * pulse.tau_p), 0.0};
            pair.beta = matching_amplitudes(s, pair.alpha);
            pulse.photon_number = abs2(pair.alpha);

            const auto rep = matched_pair_limit(pair, s, pulse);
            CHECK(rep.pass_alpha == rep.pass_beta);
            ++checked;
        }
        CHECK(checked >= 50);
    }
}

TEST_CASE("coherence figures of merit") {
    const BiexcitonScenario s = reference_scenario();
    const CoherenceFigures fig = coherence_figures(s);

    // Gamma_X = 400*50/(250^2+50^2) + 0.125 + 0.5
    CHECK(fig.Gamma_X == doctest::Approx(20000.0 / 65000.0 + 0.625).epsilon(1e-14));
    CHECK(std::abs(fig.Gamma_X - 0.93) < 0.005);
    CHECK(std::abs(fig.N_ent - 8.6) < 0.1);
    CHECK(fig.N_ent > 1.0);

    SUBCASE("saturates at gamma_X + 1/T2 for far-detuned excitons") {
        BiexcitonScenario far = s;
        far.delta_X = 1e9;
        CHECK(coherence_figures(far).Gamma_X ==
              doctest::Approx(0.125 + 0.5).epsilon(1e-9));
    }
}

TEST_CASE("biexciton pair construction") {
    const BiexcitonScenario s = reference_scenario();
    const SystemPair pair = biexciton_pair(s);
    CHECK(pair.arm1.cavity.kappa_total() == 50.0);
    CHECK(critical_coupling_check(pair.arm1.cavity) == 0.0);
    CHECK(pair.arm1.g_transition.g == 20.0);
    CHECK(pair.arm1.m_transition.delta == 250.0);
    // The X line still couples: the m reflection is finite on resonance.
    const ScatterSet sc = scatter_set(pair);
    CHECK(std::abs(sc.r1m) > 0.05);
}

TEST_CASE("scenario validation") {
    BiexcitonScenario s = reference_scenario();
    s.T2 = 0.0;
    CHECK_THROWS_AS((void)coherence_figures(s), ValidationError);
    s = reference_scenario();
    s.kappa = -1.0;
    CHECK_THROWS_AS((void)coherence_figures(s), ValidationError);
}
