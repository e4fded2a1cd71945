#include "doctest.h"
#include "oracles.hpp"

#include "levy_emm/approximation.hpp"
#include "levy_emm/errors.hpp"
#include "levy_emm/esscher.hpp"
#include "levy_emm/mc_oracle.hpp"

#include <cmath>
#include <map>
#include <vector>

using namespace levy_emm;

namespace {

SimConfig config(long long n, std::uint64_t seed, bool records = false) {
    SimConfig c;
    c.n_samples = n;
    c.seed = seed;
    c.record_jumps = records;
    return c;
}

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_se(const std::vector<double>& v) {
    const double m = sample_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (v.size() - 1.0) / v.size());
}

const LevyTriplet kBrownian{0.05, 0.09, LevyMeasure::none()};
const LevyTriplet kKou{0.3, 0.04, LevyMeasure::double_exponential_jumps(2.0, 0.3, 4.0, 3.0)};

} // namespace

TEST_SUITE("sampling") {
    TEST_CASE("brownian mean") {
        const SamplePack p = sample_terminal(kBrownian, config(100000, 1));
        CHECK(std::abs(sample_mean(p.values) - 0.05) < 4.0 * sample_se(p.values));
        CHECK(p.jump_threshold == 0.0);
    }

    TEST_CASE("atom jump counts are Poisson") {
        // b = 1 cancels the compensator of 2 jumps of size 0.5, so L_T = N_T / 2
        const LevyTriplet t{1.0, 0.0, LevyMeasure::atoms({{0.5, 2.0}})};
        const SamplePack p = sample_terminal(t, config(100000, 7, true));
        std::map<long long, long long> hist;
        for (std::size_t i = 0; i < p.values.size(); ++i) {
            const long long k = std::llround(2.0 * p.values[i]);
            CHECK_EQ(static_cast<std::size_t>(k), (*p.jump_records)[i].size());
            ++hist[std::min<long long>(k, 8)];
        }
        const double N = 100000.0;
        double chi2 = 0.0, cdf = 0.0, pk = std::exp(-2.0);
        for (long long k = 0; k <= 8; ++k) {
            const double prob = k < 8 ? pk : 1.0 - cdf;
            cdf += pk;
            pk *= 2.0 / (k + 1);
            const double expect = N * prob;
            chi2 += (hist[k] - expect) * (hist[k] - expect) / expect;
        }
        CHECK(chi2 < 26.12); // 0.999 quantile of chi-square with 8 degrees of freedom
    }

    TEST_CASE("double exponential exponential moment") {
        const double k = 0.5;
        const SamplePack p = sample_terminal(kKou, config(200000, 3));
        std::vector<double> e;
        for (double x : p.values) e.push_back(std::exp(k * x));
        const double want = std::exp(oracle::kou_cumulant(0.3, 0.04, 2.0, 0.3, 4.0, 3.0, k));
        CHECK(std::abs(sample_mean(e) - want) < 4.0 * sample_se(e));
    }

    TEST_CASE("same seed gives identical samples for any thread count") {
        const LevyTriplet t{0.1, 0.0, LevyMeasure::cgmy(1.0, 2.0, 3.0, 0.7)};
        SimConfig a = config(20000, 11, true), b = a;
        a.threads = 1;
        b.threads = 5;
        const SamplePack pa = sample_terminal(t, a);
        const SamplePack pb = sample_terminal(t, b);
        CHECK(pa.values == pb.values);
        REQUIRE(pa.jump_records->size() == pb.jump_records->size());
        for (std::size_t i = 0; i < pa.jump_records->size(); ++i) {
            const auto& ra = (*pa.jump_records)[i];
            const auto& rb = (*pb.jump_records)[i];
            REQUIRE(ra.size() == rb.size());
            for (std::size_t j = 0; j < ra.size(); ++j) CHECK(ra[j].size == rb[j].size);
        }
        CHECK(sample_terminal(t, config(20000, 12)).values != pa.values);
    }

    TEST_CASE("invalid configurations and measures") {
        SimConfig c = config(10, 1);
        c.epsilon = 2.0;
        CHECK_THROWS_AS(sample_terminal(kBrownian, c), InvalidArgument);
        c = config(0, 1);
        CHECK_THROWS_AS(sample_terminal(kBrownian, c), InvalidArgument);
        GenericDensity g;
        g.density = [](double x) { return std::exp(-std::abs(x)); };
        g.left = g.right = TailHint::exponential(1.0);
        g.activity_index = -1.0;
        CHECK_THROWS_AS(sample_terminal(LevyTriplet{0.0, 0.0, LevyMeasure::generic(g)}, config(10, 1)),
                        UnsupportedMeasure);
    }
}

TEST_SUITE("cumulant fidelity") {
    void check_cumulant(const LevyTriplet& t, const std::vector<double>& ks,
                        SmallJumpMode mode = SmallJumpMode::GaussianApprox, double eps = 0.01) {
        SimConfig c = config(400000, 21);
        c.small_jump_mode = mode;
        c.epsilon = eps;
        const SamplePack p = sample_terminal(t, c);
        for (double k : ks) {
            const Estimate e = cumulant_estimate(p, k);
            const double want = cumulant(t, k).value();
            CHECK_MESSAGE(std::abs(e.value - want) < 5.0 * e.std_error, "k = " << k << " est " << e.value
                                                                              << " want " << want << " se " << e.std_error);
        }
    }

    TEST_CASE("merton") { check_cumulant({0.02, 0.04, LevyMeasure::gaussian_jumps(1.0, -0.1, 0.2)}, {-1.0, 0.5, 1.5}); }
    TEST_CASE("variance gamma") { check_cumulant({-0.2, 0.0, LevyMeasure::variance_gamma(1.0, 3.0, 2.0)}, {-1.0, 0.4, 1.0}); }
    TEST_CASE("cgmy with small jumps") { check_cumulant({0.5, 0.0, LevyMeasure::cgmy(1.0, 2.0, 3.0, 1.5)}, {-0.8, 0.3, 1.2},
                                                    SmallJumpMode::GaussianApprox, 0.1); }

    TEST_CASE("tempered stable with dropped small jumps") {
        TemperingWeight w;
        w.penalty = TemperingWeight::Penalty{PenaltyFamily::default_quadratic(), 1};
        check_cumulant({0.0, 0.0, LevyMeasure::tempered(LevyMeasure::symmetric_stable(0.8), w)}, {-1.0, 0.5, 1.0},
                       SmallJumpMode::Drop);
    }

    TEST_CASE("stochastic logarithm of a jump diffusion") {
        const LevyTriplet tL = geometric_to_linear({0.05, 0.04, LevyMeasure::double_exponential_jumps(1.0, 0.4, 5.0, 4.0)});
        check_cumulant(tL, {-2.0, -1.0, -0.3});
    }
}

TEST_SUITE("esscher estimators") {
    TEST_CASE("symmetric model at zero") {
        const SamplePack p = sample_terminal({0.0, 0.01, LevyMeasure::variance_gamma(1.0, 2.0, 2.0)}, config(100000, 5));
        const Estimate e = martingale_defect(p, 0.0);
        CHECK(std::abs(e.value) < 4.0 * e.std_error);
        CHECK(e.ess == doctest::Approx(100000.0));
    }

    TEST_CASE("brownian defect at the closed-form parameter") {
        const SamplePack p = sample_terminal(kBrownian, config(1000000, 9));
        const Estimate at_root = martingale_defect(p, -5.0 / 9.0);
        CHECK(std::abs(at_root.value) < 4.0 * at_root.std_error);
        const Estimate at_zero = martingale_defect(p, 0.0);
        CHECK(std::abs(at_zero.value - 0.05) < 4.0 * at_zero.std_error);
        CHECK(at_zero.value / at_zero.std_error > 4.0);
    }

    TEST_CASE("entropy at zero is exactly zero") {
        const SamplePack p = sample_terminal(kKou, config(1000, 2));
        const Estimate e = entropy_estimate(p, 0.0, kKou, 1.0);
        CHECK(e.value == 0.0);
        CHECK(e.std_error == 0.0);
    }

    TEST_CASE("brownian entropy") {
        const SamplePack p = sample_terminal(kBrownian, config(400000, 13));
        const Estimate e = entropy_estimate(p, -5.0 / 9.0, kBrownian, 1.0);
        CHECK(std::abs(e.value - 0.05 * 0.05 / (2 * 0.09)) < 4.0 * e.std_error);
    }

    TEST_CASE("double exponential entropy against the analytic value") {
        const SamplePack p = sample_terminal(kKou, config(400000, 17));
        for (double k : {-1.0, 0.5}) {
            const Estimate e = entropy_estimate(p, k, kKou, 1.0);
            CHECK(std::abs(e.value - esscher_entropy(kKou, 1.0, k)) < 4.0 * e.std_error);
        }
        CHECK_THROWS_AS(entropy_estimate(p, 5.0, kKou, 1.0), KappaOutsideI);
    }

    TEST_CASE("degenerate weights") {
        const SamplePack p = sample_terminal(kBrownian, config(50, 1));
        CHECK_THROWS_AS(martingale_defect(p, 200.0), DegenerateWeights);
    }
}

TEST_SUITE("pathwise density process") {
    const PenaltyFamily quad = PenaltyFamily::default_quadratic();

    TEST_CASE("jumps inside the unit interval") {
        const LevyTriplet t{0.0, 0.04, LevyMeasure::atoms({{0.5, 1.0}, {-0.9, 2.0}})};
        const SamplePack p = sample_terminal(t, config(5000, 3, true));
        const PathwiseZn z = pathwise_log_zn(p, quad, 4, t.nu, 1.0);
        for (double v : z.log_zn) CHECK(v == 0.0);
        CHECK(z.mean_zn == 1.0);
    }

    TEST_CASE("unit mean and uniform bound for an atom at two") {
        const LevyTriplet t{0.0, 0.01, LevyMeasure::atoms({{2.0, 0.5}})};
        const SamplePack p = sample_terminal(t, config(100000, 4, true));
        for (int n : {1, 4, 16}) {
            const PathwiseZn z = pathwise_log_zn(p, quad, n, t.nu, 1.0);
            CHECK(std::abs(z.mean_zn - 1.0) < 4.0 * z.se_zn);
            CHECK(z.bound_holds);
            CHECK(z.bound == doctest::Approx(std::exp(0.5 * -std::expm1(-4.0))).epsilon(1e-14));
        }
    }

    TEST_CASE("records are required") {
        const LevyTriplet t{0.0, 0.01, LevyMeasure::atoms({{2.0, 0.5}})};
        const SamplePack p = sample_terminal(t, config(100, 4));
        CHECK_THROWS_AS(pathwise_log_zn(p, quad, 1, t.nu, 1.0), MissingJumpRecords);
    }
}
