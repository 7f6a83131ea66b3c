#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lgt/compilers.hpp"
#include "lgt/mitigation.hpp"
#include "lgt/noise.hpp"
#include "lgt/random.hpp"

using namespace lgt;

TEST_CASE("ancilla post-selection keeps everything on a noiseless run") {
    Lattice l({2, 2});
    TrotterSpec spec;
    spec.params = {1.0, 1.0, 0.7, 0.3, {}};
    spec.dt = 0.3;
    spec.mode = TrotterMode::GateLevel;
    Circuit step = build_trotter_step(l, spec);
    Circuit circ(step.n_qubits());
    circ.extend(build_wala(l, 1.0, WalaMode::AncillaFree, 1));
    circ.extend(step);
    for (int a : step.ancillas()) circ.declare_ancilla(a);

    NoiseModel quiet;
    quiet.p2 = 0;
    quiet.master_seed = 5;
    StateVector in(circ.n_qubits());
    ShotTable t = run_trajectories(circ, in, quiet, 2, 200);
    auto res = postselect(t, {.ancilla_zero = true}, &l);
    CHECK(res.retention() == doctest::Approx(1.0));
    CHECK(res.kept == t.rows.size());
}

TEST_CASE("charge-sector retention on the maximally mixed table") {
    // Uniform random 17-bit strings on 3x4: the parity map is a balanced
    // surjection onto the 2^11 even patterns, 66 of which have weight 2.
    Lattice l({3, 4});
    RandomSource rng(31);
    ShotTable t;
    t.n_qubits = l.n_links();
    const int n = 200000;
    t.rows.resize(n);
    for (int i = 0; i < n; ++i) t.rows[i].bits = rng.next_u64() & ((1u << 17) - 1);

    auto res = postselect(t, {.ancilla_zero = false, .charge_count = 2}, &l);
    double expect = 66.0 / 2048.0;
    double sigma = std::sqrt(expect * (1 - expect) / n);
    CHECK(std::abs(res.retention() - expect) < 3 * sigma);

    SUBCASE("row subset property") {
        // Every kept row appears verbatim in the source table, in order.
        size_t src = 0;
        for (const auto& row : res.table.rows) {
            while (src < t.rows.size() && t.rows[src].bits != row.bits) ++src;
            CHECK(src < t.rows.size());
            ++src;
        }
    }

    SUBCASE("empty result is a condition, not an error") {
        auto none = postselect(t, {.ancilla_zero = false, .charge_count = 1}, &l);
        CHECK(none.kept == 0); // odd sectors are impossible without pins
        CHECK(none.retention() == 0.0);
    }

    CHECK_THROWS_AS(postselect(t, {.ancilla_zero = false, .charge_count = 2}, nullptr),
                    std::invalid_argument);
    CHECK_THROWS_AS(postselect(t, {.ancilla_zero = true}, &l), std::invalid_argument);
}

TEST_CASE("readout inversion") {
    SUBCASE("identity without errors") {
        std::vector<double> p{0.1, 0.2, 0.3, 0.4};
        ReadoutModel zero = ReadoutModel::uniform(2, 0.0, 0.0);
        std::vector<int> qs{0, 1};
        auto out = invert_readout(p, qs, zero);
        for (size_t i = 0; i < p.size(); ++i) CHECK(out[i] == doctest::Approx(p[i]));
    }

    SUBCASE("exact inverse of forward corruption") {
        RandomSource rng(77);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 3;
            std::vector<double> truth(1 << n);
            double norm = 0;
            for (double& x : truth) {
                x = rng.next_double();
                norm += x;
            }
            for (double& x : truth) x /= norm;

            ReadoutModel model;
            for (int q = 0; q < n; ++q)
                model.per_qubit.push_back({0.3 * rng.next_double(), 0.3 * rng.next_double()});

            // Forward corruption: p_meas = (R_2 x R_1 x R_0) p_true.
            std::vector<double> meas(truth.size(), 0.0);
            for (size_t m = 0; m < meas.size(); ++m)
                for (size_t s = 0; s < truth.size(); ++s) {
                    double w = 1;
                    for (int q = 0; q < n; ++q) {
                        bool mb = m >> q & 1, sb = s >> q & 1;
                        const auto& e = model.per_qubit[q];
                        w *= sb ? (mb ? 1 - e.eps1 : e.eps1) : (mb ? e.eps0 : 1 - e.eps0);
                    }
                    meas[m] += w * truth[s];
                }

            std::vector<int> qs{0, 1, 2};
            auto rec = invert_readout(meas, qs, model);
            for (size_t i = 0; i < truth.size(); ++i)
                CHECK(std::abs(rec[i] - truth[i]) < 1e-12);
        }
    }

    SUBCASE("sampled pipeline recovers the expectation") {
        // |+>-ish single qubit measured through noisy readout.
        StateVector s(1);
        apply_gate(s, Gate::ry(0, 0.8));
        double z_true = expectation(s, PauliString::single('Z', 0));

        ReadoutModel model = ReadoutModel::uniform(1, 0.006, 0.02);
        RandomSource rng(3);
        const int n = 100000;
        ShotTable t = sample(s, n, 11);
        for (auto& row : t.rows) row.bits = apply_readout_noise(row.bits, 1, model, rng);

        std::vector<int> qs{0};
        auto probs = probability_vector(t, qs);
        auto fixed = invert_readout(probs, qs, model);
        double z_rec = z_parity_expectation(fixed, 1);
        CHECK(std::abs(z_rec - z_true) < 3.0 / std::sqrt(static_cast<double>(n)));
    }

    SUBCASE("negative quasi-probabilities kept unless clipped") {
        std::vector<double> p{0.999, 0.001};
        ReadoutModel model = ReadoutModel::uniform(1, 0.05, 0.05);
        std::vector<int> qs{0};
        auto raw = invert_readout(p, qs, model);
        CHECK(raw[1] < 0);
        auto clipped = invert_readout(p, qs, model, /*clip=*/true);
        CHECK(clipped[1] == 0.0);
        CHECK(clipped[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("global depolarization algebra") {
    CHECK(effective_depol(1.0, 1.0, 7.0 / 3.0).value == doctest::Approx(0.0));
    CHECK(effective_depol(7.0 / 3.0, 1.0, 7.0 / 3.0).value == doctest::Approx(1.0));
    CHECK(effective_depol(1.5, 1.0, 7.0 / 3.0).value == doctest::Approx(0.375));
    CHECK_THROWS_AS(effective_depol(0.5, 1.0, 1.0), std::invalid_argument);

    PEff outside = effective_depol(0.5, 1.0, 7.0 / 3.0);
    CHECK_FALSE(outside.in_range);

    CHECK(rescale(0.42, 0.0, 7.0 / 3.0) == doctest::Approx(0.42));
    CHECK(rescale(1.5, 0.375, 7.0 / 3.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(rescale(0.5, 1.0, 0.0), std::invalid_argument);

    SUBCASE("equations are exact inverses on the synthetic channel") {
        RandomSource rng(8);
        for (int trial = 0; trial < 50; ++trial) {
            double x = 4 * rng.next_double() - 2;
            double x0 = 4 * rng.next_double() - 2;
            double xdep = 4 * rng.next_double() - 2;
            if (std::abs(xdep - x0) < 1e-3) continue;
            double p = rng.next_double();
            double mixed = (1 - p) * x + p * xdep;
            // p recovered from the stationary observable, then unmixed.
            double p_eff = (mixed - x) / (xdep - x); // would be measured on x itself
            (void)p_eff;
            PEff est = effective_depol((1 - p) * x0 + p * xdep, x0, xdep);
            CHECK(std::abs(est.value - p) < 1e-12);
            CHECK(std::abs(rescale(mixed, est.value, xdep) - x) < 1e-12);
        }
    }
}

TEST_CASE("loschmidt relation") {
    CHECK(loschmidt_p_eff(-18.0, -18.0).value == doctest::Approx(0.0));
    CHECK(loschmidt_p_eff(0.0, -18.0).value == doctest::Approx(1.0));
    CHECK_THROWS_AS(loschmidt_p_eff(1.0, 0.0), std::invalid_argument);

    // Synthetic chain: global depolarization p on the echoed state scales the
    // echo energy by (1 - p), so p_Loschmidt = p and p_eff = sqrt(p).
    RandomSource rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        double p = rng.next_double() * 0.9;
        double e_exact = -25.0;
        double e_measured = (1 - p) * e_exact; // traceless observable sum
        LoschmidtPEff est = loschmidt_p_eff(e_measured, e_exact);
        CHECK(est.valid);
        CHECK(std::abs(est.value - std::sqrt(p)) < 1e-12);
    }

    LoschmidtPEff bad = loschmidt_p_eff(-20.0, -18.0);
    CHECK_FALSE(bad.valid);
}
