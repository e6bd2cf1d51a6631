#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pnrdisc/photostats.hpp"
#include "pnrdisc/rng.hpp"

using namespace pnrdisc;

namespace {

ReceiverConfig make_config(const Alphabet& alphabet, double beta, int m, const NoiseModel& noise) {
    ReceiverConfig config;
    config.alphabet = alphabet;
    config.beta = beta;
    config.resolution = PnrResolution(m);
    config.noise = noise;
    config.priors = Priors(0.5);
    return config;
}

}  // namespace

TEST_CASE("displaced mean follows the interference formula") {
    CHECK(displaced_mean(Alphabet::bpsk(1.0), Hypothesis::H1, 1.0, 1.0) == doctest::Approx(4.0));
    CHECK(displaced_mean(Alphabet::bpsk(1.0), Hypothesis::H0, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(displaced_mean(Alphabet::bpsk(1.0), Hypothesis::H0, 1.0, 0.998) ==
          doctest::Approx(0.004).epsilon(1e-10));
    // OOK nulling convention; beta = 0 is direct detection.
    CHECK(displaced_mean(Alphabet::ook_peak(1.3), Hypothesis::H1, 0.0, 0.998) ==
          doctest::Approx(1.69));
    CHECK(displaced_mean(Alphabet::ook_peak(1.0), Hypothesis::H1, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(displaced_mean(Alphabet::ook_avg(1.0), Hypothesis::H1, 0.0, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(displaced_mean(Alphabet::bpsk(1.0), Hypothesis::H0, -0.1, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(displaced_mean(Alphabet::bpsk(1.0), Hypothesis::H0, 1.0, 1.2),
                    std::invalid_argument);
}

TEST_CASE("efficiency and dark composition") {
    CHECK(apply_efficiency_and_darks(4.0, NoiseModel(1.0, 1.0, 0.0, 0.0)) == doctest::Approx(4.0));
    CHECK(apply_efficiency_and_darks(4.0, NoiseModel(1.0, 0.72, 3.6e-3, 0.0)) ==
          doctest::Approx(2.8836).epsilon(1e-12));
    CHECK(apply_efficiency_and_darks(0.0, NoiseModel(1.0, 0.72, 3.6e-3, 0.0)) ==
          doctest::Approx(3.6e-3).epsilon(1e-12));
}

TEST_CASE("detected means cover both hypotheses") {
    const auto config = make_config(Alphabet::bpsk(1.0), 1.0, 1, NoiseModel(1.0, 0.72, 3.6e-3, 0.0));
    const MeanPhotonPair pair = detected_means(config);
    CHECK(pair.n_h0 == doctest::Approx(3.6e-3).epsilon(1e-12));
    CHECK(pair.n_h1 == doctest::Approx(2.8836).epsilon(1e-12));
}

TEST_CASE("poisson pmf values and stability") {
    const auto vac = untruncated_pmf(0.0, 3);
    CHECK(vac[0] == 1.0);
    CHECK(vac[1] == 0.0);
    CHECK(vac[3] == 0.0);

    const auto one = untruncated_pmf(1.0, 1);
    CHECK(one[0] == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(one[1] == doctest::Approx(0.36787944117144233).epsilon(1e-14));

    const auto two = untruncated_pmf(2.0, 2);
    CHECK(two[0] == doctest::Approx(0.1353352832366127).epsilon(1e-14));
    CHECK(two[1] == doctest::Approx(0.2706705664732254).epsilon(1e-14));
    CHECK(two[2] == doctest::Approx(0.2706705664732254).epsilon(1e-14));

    // mean = 100, k = 100: no overflow, matches the log-domain definition.
    const auto big = untruncated_pmf(100.0, 100);
    CHECK(std::isfinite(big[100]));
    CHECK(big[100] == doctest::Approx(oracles::poisson_pmf(100.0, 100)).epsilon(1e-10));
    // far larger mean goes through the log-domain branch
    const auto huge = untruncated_pmf(800.0, 50);
    CHECK(huge[50] == doctest::Approx(oracles::poisson_pmf(800.0, 50)).epsilon(1e-9));
}

TEST_CASE("afterpulse transform is the identity at p_ap = 0") {
    const std::vector<double> pmf = untruncated_pmf(1.7, 20);
    std::vector<double> norm = pmf;
    double sum = 0.0;
    for (double p : norm) sum += p;
    for (double& p : norm) p /= sum;
    for (auto model : {AfterpulseModel::Order2, AfterpulseModel::Cascade}) {
        const auto out = afterpulse_transform(norm, 0.0, model);
        CHECK(out == norm);
    }
}

TEST_CASE("cascade transform matches the geometric chain example") {
    std::vector<double> single(10, 0.0);
    single[1] = 1.0;
    const auto out = afterpulse_transform(single, 0.01, AfterpulseModel::Cascade);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == doctest::Approx(0.99).epsilon(1e-14));
    CHECK(out[2] == doctest::Approx(0.0099).epsilon(1e-14));
    CHECK(out[3] == doctest::Approx(9.9e-5).epsilon(1e-12));
    double sum = 0.0;
    for (double p : out) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("order-2 transform gain structure") {
    std::vector<double> single(10, 0.0);
    single[1] = 1.0;
    const auto out = afterpulse_transform(single, 0.01, AfterpulseModel::Order2);
    CHECK(out[2] == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(out[3] == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(1.0 - 0.01 - 1e-4).epsilon(1e-14));

    // P3 gains 2 P_AP P2 + P_AP^2 P1.
    std::vector<double> two(10, 0.0);
    two[2] = 1.0;
    const auto out2 = afterpulse_transform(two, 0.01, AfterpulseModel::Order2);
    CHECK(out2[3] == doctest::Approx(2.0 * 0.01).epsilon(1e-13));
}

TEST_CASE("cascade transform agrees with the convolution oracle") {
    Xoshiro256StarStar rng(20240817);
    for (double mean : {0.2, 1.0, 3.5}) {
        for (double p_ap : {0.011, 0.1, 0.3}) {
            std::vector<double> pmf = untruncated_pmf(mean, 39);
            double sum = 0.0;
            for (double p : pmf) sum += p;
            for (double& p : pmf) p /= sum;
            const auto ours = afterpulse_transform(pmf, p_ap, AfterpulseModel::Cascade);
            const auto theirs = oracles::cascade_by_convolution(pmf, p_ap, 40);
            for (size_t k = 0; k + 1 < ours.size(); ++k)
                CHECK(ours[k] == doctest::Approx(theirs[k]).epsilon(1e-10).scale(1.0));
        }
    }
    (void)rng;
}

TEST_CASE("extreme afterpulse probability keeps the transform normalized") {
    // p_ap near 1 pushes nearly all chain mass past any finite window; it
    // must land in the absorbing last bin, not vanish.
    std::vector<double> pmf = untruncated_pmf(3.0, 50);
    double sum = 0.0;
    for (double p : pmf) sum += p;
    for (double& p : pmf) p /= sum;
    const auto out = afterpulse_transform(pmf, 0.999, AfterpulseModel::Cascade);
    double total = 0.0;
    for (double p : out) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out.back() > 0.9);  // almost everything cascades past the window
    CHECK(out[0] == doctest::Approx(pmf[0]).epsilon(1e-15));
}

TEST_CASE("afterpulse transform rejects bad input") {
    std::vector<double> not_normalized{0.5, 0.4};
    CHECK_THROWS_AS(afterpulse_transform(not_normalized, 0.01, AfterpulseModel::Cascade),
                    std::invalid_argument);
    std::vector<double> ok{0.5, 0.5};
    CHECK_THROWS_AS(afterpulse_transform(ok, 1.0, AfterpulseModel::Cascade), std::invalid_argument);
    CHECK_THROWS_AS(afterpulse_transform(ok, -0.1, AfterpulseModel::Cascade), std::invalid_argument);
}

TEST_CASE("count distribution worked examples") {
    const auto nulled = count_distribution(
        make_config(Alphabet::bpsk(1.0), 1.0, 1, NoiseModel()), Hypothesis::H0);
    CHECK(nulled.probs[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(nulled.probs[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

    const auto bright = count_distribution(
        make_config(Alphabet::bpsk(1.0), 1.0, 1, NoiseModel()), Hypothesis::H1);
    CHECK(bright.probs[0] == doctest::Approx(std::exp(-4.0)).epsilon(1e-13));
    CHECK(bright.probs[1] == doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-13));

    // mean 1 after imperfections with m = 2: [e^-1, e^-1, 1 - 2 e^-1]
    const auto mean_one = count_distribution(
        make_config(Alphabet::ook_peak(1.0), 0.0, 2, NoiseModel()), Hypothesis::H1);
    CHECK(mean_one.probs[0] == doctest::Approx(0.36787944117144233).epsilon(1e-13));
    CHECK(mean_one.probs[1] == doctest::Approx(0.36787944117144233).epsilon(1e-13));
    CHECK(mean_one.probs[2] == doctest::Approx(0.26424111765711533).epsilon(1e-13));
}

TEST_CASE("count distribution normalization over random configs") {
    Xoshiro256StarStar rng(123456789);
    const AlphabetKind kinds[] = {AlphabetKind::Bpsk, AlphabetKind::OokPeak, AlphabetKind::OokAvg};
    for (int i = 0; i < 10000; ++i) {
        const double alpha = 5.0 * rng.uniform();
        const Alphabet alphabet(kinds[static_cast<size_t>(3.0 * rng.uniform())], alpha);
        const double beta = (alpha + 3.0) * rng.uniform();
        const int m = 1 + static_cast<int>(8.0 * rng.uniform());
        NoiseModel noise;
        noise.xi = 0.9 + 0.1 * rng.uniform();
        noise.eta = 0.3 + 0.7 * rng.uniform();
        noise.nu = 0.05 * rng.uniform();
        noise.p_ap = 0.05 * rng.uniform();
        CountOptions options;
        options.ap_model = rng.uniform() < 0.5 ? AfterpulseModel::Cascade : AfterpulseModel::Order2;
        const auto dist = count_distribution(make_config(alphabet, beta, m, noise),
                                             rng.uniform() < 0.5 ? Hypothesis::H0 : Hypothesis::H1,
                                             options);
        double sum = 0.0;
        for (double p : dist.probs) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("tail bin is nonincreasing in the resolution") {
    NoiseModel noise(0.998, 0.72, 3.6e-3, 1.1e-2);
    for (double alpha_sq : {0.5, 2.0, 8.0}) {
        double prev = 1.0;
        for (int m = 1; m <= 10; ++m) {
            const auto dist = count_distribution(
                make_config(Alphabet::bpsk_mean(alpha_sq), std::sqrt(alpha_sq), m, noise),
                Hypothesis::H1);
            const double tail = dist.probs.back();
            CHECK(tail <= prev + 1e-12);
            prev = tail;
        }
    }
}

TEST_CASE("cascade and order-2 agree to O(p_ap^2)") {
    // The untruncated max-norm difference grows roughly linearly with the
    // mean; 5 p_ap^2 holds up to detected means of about 16. Beyond that the
    // receiver-truncated distributions still agree (see the next case).
    for (double mean : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 14.0, 16.0}) {
        for (double p_ap : {0.005, 0.01, 0.02}) {
            std::vector<double> pmf = untruncated_pmf(mean, 80);
            double sum = 0.0;
            for (double p : pmf) sum += p;
            for (double& p : pmf) p /= sum;
            const auto a = afterpulse_transform(pmf, p_ap, AfterpulseModel::Cascade);
            const auto b = afterpulse_transform(pmf, p_ap, AfterpulseModel::Order2);
            double max_diff = 0.0;
            for (size_t k = 0; k < a.size(); ++k) max_diff = std::max(max_diff, std::abs(a[k] - b[k]));
            CHECK(max_diff <= 5.0 * p_ap * p_ap);
        }
    }
}

TEST_CASE("receiver-level afterpulse models agree across the experiment regime") {
    for (double alpha_sq : {1.0, 4.0, 8.0, 10.0}) {
        for (int m : {1, 2, 3, 4}) {
            for (double p_ap : {0.011, 0.02}) {
                const auto config = make_config(Alphabet::bpsk_mean(alpha_sq), std::sqrt(alpha_sq), m,
                                                NoiseModel(0.998, 0.72, 3.6e-3, p_ap));
                for (auto h : {Hypothesis::H0, Hypothesis::H1}) {
                    const auto a = count_distribution(config, h, {AfterpulseModel::Cascade, 40});
                    const auto b = count_distribution(config, h, {AfterpulseModel::Order2, 40});
                    for (int k = 0; k <= m; ++k)
                        CHECK(std::abs(a.at(k) - b.at(k)) <= 5.0 * p_ap * p_ap);
                }
            }
        }
    }
}

TEST_CASE("afterpulsing never changes the no-click probability") {
    std::vector<double> pmf = untruncated_pmf(2.3, 40);
    double sum = 0.0;
    for (double p : pmf) sum += p;
    for (double& p : pmf) p /= sum;
    for (auto model : {AfterpulseModel::Cascade, AfterpulseModel::Order2}) {
        const auto out = afterpulse_transform(pmf, 0.2, model);
        CHECK(out[0] == doctest::Approx(pmf[0]).epsilon(1e-15));
    }
}

TEST_CASE("nulled mean grows as visibility degrades") {
    const Alphabet alphabet = Alphabet::bpsk(1.3);
    double prev = -1.0;
    for (double xi : {1.0, 0.999, 0.99, 0.9, 0.5}) {
        const double mean = displaced_mean(alphabet, Hypothesis::H0, 1.3, xi);
        CHECK(mean >= prev);
        prev = mean;
    }
}

TEST_CASE("efficiency and darks equal a pre-scaled ideal detector") {
    const NoiseModel noise(0.998, 0.72, 3.6e-3, 0.0);
    const auto config = make_config(Alphabet::bpsk(1.4), 1.2, 3, noise);
    for (auto h : {Hypothesis::H0, Hypothesis::H1}) {
        const double scaled = detected_mean(config, h);
        // Identity-noise receiver fed the pre-scaled mean via an OOK state.
        const auto equivalent =
            make_config(Alphabet::ook_peak(std::sqrt(scaled)), 0.0, 3, NoiseModel());
        const auto lhs = count_distribution(config, h);
        const auto rhs = count_distribution(equivalent, Hypothesis::H1);
        for (int k = 0; k <= 3; ++k)
            CHECK(lhs.at(k) == doctest::Approx(rhs.at(k)).epsilon(1e-12));
    }
}

TEST_CASE("tiny tails keep relative precision") {
    // Small mean, m = 10: the m+ bin must be a real tail, not 1 - sum noise.
    const auto small = count_distribution(
        make_config(Alphabet::ook_peak(std::sqrt(0.0357)), 0.0, 10, NoiseModel()), Hypothesis::H1);
    const double expected = oracles::poisson_upper_tail(0.0357, 10);
    CHECK(expected < 1e-18);  // the regime where 1 - sum would be pure noise
    CHECK(small.probs[10] == doctest::Approx(expected).epsilon(1e-9));

    // Large mean, m = 10: the resolved bins must keep relative precision.
    const auto large = count_distribution(
        make_config(Alphabet::ook_peak(std::sqrt(86.0)), 0.0, 10, NoiseModel()), Hypothesis::H1);
    for (int k = 0; k < 10; ++k)
        CHECK(large.at(k) == doctest::Approx(oracles::poisson_pmf(86.0, k)).epsilon(1e-9));
    CHECK(large.probs[10] == doctest::Approx(1.0).epsilon(1e-12));
}
