#include "doctest.h"
#include "oracles.hpp"

#include "levy_emm/errors.hpp"
#include "levy_emm/mgf_analysis.hpp"

#include <cmath>
#include <vector>

using namespace levy_emm;

namespace {

// Finite-activity density with tails e^{-r x} (1+x)^{-p} on each side;
// p = 0 keeps the endpoint out of I, p = 3 puts it in E.
LevyMeasure exp_tails(double r_right, double p_right, double r_left, double p_left) {
    GenericDensity g;
    g.density = [=](double x) {
        return x > 0 ? std::exp(-r_right * x) * std::pow(1.0 + x, -p_right)
                     : std::exp(r_left * x) * std::pow(1.0 - x, -p_left);
    };
    g.log_density = [=](double x) {
        return x > 0 ? -r_right * x - p_right * std::log1p(x) : r_left * x - p_left * std::log1p(-x);
    };
    g.right = TailHint::exponential(r_right, p_right);
    g.left = TailHint::exponential(r_left, p_left);
    g.activity_index = -1.0;
    g.label = "exp_tails";
    return LevyMeasure::generic(g);
}

double m_value(const LevyTriplet& t, double k) { return cumulant_derivative(t, k).value(); }

} // namespace

TEST_SUITE("exponential moment interval") {
    TEST_CASE("no jumps") {
        const auto I = exp_moment_interval({0.0, 1.0, LevyMeasure::none()});
        CHECK(I.a == ExtendedReal::neg_inf());
        CHECK(I.b == ExtendedReal::pos_inf());
        CHECK(I.contains(123.0));
    }

    TEST_CASE("stable laws collapse I to the origin") {
        for (double alpha : {0.3, 0.8, 1.0, 1.5, 1.9}) {
            const auto I = exp_moment_interval({0.0, 0.0, LevyMeasure::symmetric_stable(alpha, 1.0)});
            CHECK(I.degenerate());
            CHECK(I.a_in_I);
            CHECK(I.a_in_E == (alpha > 1.0));
        }
    }

    TEST_CASE("double exponential is open at both ends") {
        const auto I = exp_moment_interval({0.0, 0.0, LevyMeasure::double_exponential_jumps(1.0, 0.5, 3.0, 2.0)});
        CHECK(I.a == ExtendedReal(-2.0));
        CHECK(I.b == ExtendedReal(3.0));
        CHECK_FALSE(I.a_in_I);
        CHECK_FALSE(I.b_in_I);
    }

    TEST_CASE("cgmy is closed in I, and in E only when Y > 1") {
        const auto lo = exp_moment_interval({0.0, 0.0, LevyMeasure::cgmy(1.0, 2.0, 3.0, 0.5)});
        CHECK(lo.a == ExtendedReal(-2.0));
        CHECK(lo.b == ExtendedReal(3.0));
        CHECK(lo.a_in_I);
        CHECK(lo.b_in_I);
        CHECK_FALSE(lo.a_in_E);
        CHECK_FALSE(lo.b_in_E);
        const auto hi = exp_moment_interval({0.0, 0.0, LevyMeasure::cgmy(1.0, 2.0, 3.0, 1.5)});
        CHECK(hi.a_in_E);
        CHECK(hi.b_in_E);
    }

    TEST_CASE("gaussian jumps and atoms have all exponential moments") {
        for (const auto& nu : {LevyMeasure::gaussian_jumps(1.0, 0.0, 1.0), LevyMeasure::atoms({{5.0, 1.0}})}) {
            const auto I = exp_moment_interval({0.0, 0.0, nu});
            CHECK(I.a == ExtendedReal::neg_inf());
            CHECK(I.b == ExtendedReal::pos_inf());
        }
    }

    TEST_CASE("quadratic tempering restores all exponential moments") {
        TemperingWeight w;
        w.penalty = TemperingWeight::Penalty{PenaltyFamily::default_quadratic(), 4};
        const auto I = exp_moment_interval({0.0, 0.0, LevyMeasure::tempered(LevyMeasure::symmetric_stable(0.8), w)});
        CHECK(I.a == ExtendedReal::neg_inf());
        CHECK(I.b == ExtendedReal::pos_inf());
    }

    TEST_CASE("generic tails decide closure") {
        const auto I = exp_moment_interval({0.0, 0.0, exp_tails(3.0, 3.0, 2.0, 0.0)});
        CHECK(I.a == ExtendedReal(-2.0));
        CHECK(I.b == ExtendedReal(3.0));
        CHECK_FALSE(I.a_in_I);
        CHECK(I.b_in_I);
        CHECK(I.b_in_E);
    }
}

TEST_SUITE("minimum of the mgf") {
    TEST_CASE("brownian root") {
        const auto mp = minimize_mgf({0.05, 0.09, LevyMeasure::none()}, 1.0);
        CHECK(mp.kind == MinimumCase::InteriorRoot);
        CHECK(mp.kappa0 == doctest::Approx(-5.0 / 9.0).epsilon(1e-12));
        CHECK(mp.phi_at_min == doctest::Approx(std::exp(-0.05 * 0.05 / (2 * 0.09))).epsilon(1e-12));
    }

    TEST_CASE("stable laws minimise at zero") {
        for (double alpha : {0.8, 1.5}) {
            const auto mp = minimize_mgf({0.0, 0.0, LevyMeasure::symmetric_stable(alpha, 1.0)}, 1.0);
            CHECK(mp.kind == MinimumCase::DegenerateZero);
            CHECK(mp.kappa0 == 0.0);
            CHECK(mp.phi_at_min == 1.0);
        }
    }

    TEST_CASE("two atoms with drift") {
        const LevyTriplet t{0.1, 0.0, LevyMeasure::atoms({{0.5, 1.0}, {-0.5, 1.0}})};
        const auto mp = minimize_mgf(t, 1.0);
        const double oracle_root = oracle::bisect([](double k) { return 0.1 + std::sinh(0.5 * k); }, -5.0, 5.0);
        CHECK(mp.kind == MinimumCase::InteriorRoot);
        CHECK(mp.kappa0 == doctest::Approx(oracle_root).epsilon(1e-11));
        CHECK(mp.kappa0 == doctest::Approx(2.0 * std::asinh(-0.1)).epsilon(1e-11));
        CHECK(mp.kappa0 == doctest::Approx(-0.1996680).epsilon(1e-6));
    }

    TEST_CASE("monotone market is rejected") {
        CHECK_THROWS_AS(minimize_mgf({1.0, 0.0, LevyMeasure::atoms({{2.0, 3.0}})}, 1.0), ArbitrageMarket);
    }

    TEST_CASE("endpoint minima") {
        // ψ(3) < 0: the minimum sits on the closed right end of I
        const LevyTriplet t{-50.0, 0.0, exp_tails(3.0, 3.0, 2.0, 0.0)};
        const auto mp = minimize_mgf(t, 1.0);
        CHECK(mp.kind == MinimumCase::RightEndpoint);
        CHECK(mp.kappa0 == 3.0);
        CHECK(m_value(t, 3.0) < 0.0);

        const LevyTriplet u{50.0, 0.0, exp_tails(2.0, 0.0, 3.0, 3.0)};
        const auto mq = minimize_mgf(u, 1.0);
        CHECK(mq.kind == MinimumCase::LeftEndpoint);
        CHECK(mq.kappa0 == -3.0);
    }

    TEST_CASE("kou root against bisection on the analytic derivative") {
        const LevyTriplet t{0.3, 0.04, LevyMeasure::double_exponential_jumps(2.0, 0.3, 4.0, 3.0)};
        const auto mp = minimize_mgf(t, 2.0);
        const double k = oracle::bisect(
            [](double x) { return oracle::kou_cumulant_derivative(0.3, 0.04, 2.0, 0.3, 4.0, 3.0, x); }, -2.999, 3.999);
        CHECK(mp.kappa0 == doctest::Approx(k).epsilon(1e-10));
    }
}

TEST_SUITE("esscher parameter classification") {
    TEST_CASE("driftless brownian") {
        const auto st = classify_esscher_parameter({0.0, 1.0, LevyMeasure::none()}, 1.0);
        CHECK(st.exists);
        CHECK(st.kind == EsscherCase::IntervalInterior);
        REQUIRE(st.kappa0);
        CHECK(*st.kappa0 == doctest::Approx(0.0));
    }

    TEST_CASE("stable alpha 1.5 is already a martingale") {
        const auto st = classify_esscher_parameter({0.0, 0.0, LevyMeasure::symmetric_stable(1.5, 1.0)}, 1.0);
        CHECK(st.exists);
        CHECK(st.kind == EsscherCase::DegenerateZeroMean);
        CHECK(*st.kappa0 == 0.0);
    }

    TEST_CASE("stable alpha 0.8 has no esscher parameter") {
        const auto st = classify_esscher_parameter({0.0, 0.0, LevyMeasure::symmetric_stable(0.8, 1.0)}, 1.0);
        CHECK_FALSE(st.exists);
        CHECK(st.kind == EsscherCase::None);
        CHECK_FALSE(st.diagnostic.empty());
    }

    TEST_CASE("stable with nonzero drift has none") {
        const auto st = classify_esscher_parameter({0.2, 0.0, LevyMeasure::symmetric_stable(1.5, 1.0)}, 1.0);
        CHECK_FALSE(st.exists);
    }

    TEST_CASE("closed endpoints") {
        const auto r = classify_esscher_parameter({0.0, 0.0, exp_tails(3.0, 3.0, 2.0, 0.0)}, 1.0);
        CHECK(r.kind == EsscherCase::RightEndpointClosed);
        const auto rn = classify_esscher_parameter({-50.0, 0.0, exp_tails(3.0, 3.0, 2.0, 0.0)}, 1.0);
        CHECK(rn.kind == EsscherCase::None);
        const auto l = classify_esscher_parameter({0.0, 0.0, exp_tails(2.0, 0.0, 3.0, 3.0)}, 1.0);
        CHECK(l.kind == EsscherCase::LeftEndpointClosed);
        const auto b = classify_esscher_parameter({0.0, 0.0, exp_tails(2.0, 3.0, 3.0, 3.0)}, 1.0);
        CHECK(b.kind == EsscherCase::BothEndpoints);
        const auto bn = classify_esscher_parameter({50.0, 0.0, exp_tails(2.0, 3.0, 3.0, 3.0)}, 1.0);
        CHECK(bn.kind == EsscherCase::None);
    }

    TEST_CASE("monotone markets have no parameter") {
        const auto st = classify_esscher_parameter({1.0, 0.0, LevyMeasure::atoms({{2.0, 3.0}})}, 1.0);
        CHECK_FALSE(st.exists);
    }
}

TEST_SUITE("mgf properties") {
    const std::vector<LevyTriplet> markets = {
        {0.05, 0.09, LevyMeasure::none()},
        {0.1, 0.0, LevyMeasure::atoms({{0.5, 1.0}, {-0.5, 1.0}})},
        {0.3, 0.04, LevyMeasure::double_exponential_jumps(2.0, 0.3, 4.0, 3.0)},
        {-0.2, 0.0, LevyMeasure::variance_gamma(1.0, 3.0, 2.0)},
        {0.5, 0.0, LevyMeasure::cgmy(1.0, 2.0, 3.0, 1.5)},
        {0.0, 0.0, exp_tails(3.0, 3.0, 2.0, 0.0)},
        {0.1, 0.01, LevyMeasure::gaussian_jumps(1.0, -0.2, 0.3)},
    };

    TEST_CASE("minimiser property on a grid") {
        for (const auto& t : markets) {
            CAPTURE(t.nu.describe());
            const auto mp = minimize_mgf(t, 1.0);
            const auto I = exp_moment_interval(t);
            for (double k = mp.kappa0 - 5.0; k <= mp.kappa0 + 5.0; k += 0.125) {
                if (!I.contains(k)) continue;
                CHECK(mp.phi_at_min <= mgf(t, 1.0, k).value() * (1 + 1e-12));
            }
        }
    }

    TEST_CASE("psi is nondecreasing inside E") {
        for (const auto& t : markets) {
            CAPTURE(t.nu.describe());
            const auto I = exp_moment_interval(t);
            const double lo = I.a.is_finite() ? I.a.value() : -6.0, hi = I.b.is_finite() ? I.b.value() : 6.0;
            double prev = -INFINITY;
            for (int i = 1; i < 40; ++i) {
                const double k = lo + (hi - lo) * i / 40.0;
                const double psi = mgf_derivative(t, 1.0, k).value();
                CHECK(psi >= prev - 1e-10);
                prev = psi;
            }
        }
    }

    TEST_CASE("interior roots are roots and the mgf is strictly convex there") {
        for (const auto& t : markets) {
            CAPTURE(t.nu.describe());
            const auto st = classify_esscher_parameter(t, 1.0);
            REQUIRE(st.exists);
            const double k0 = *st.kappa0;
            CHECK(std::abs(m_value(t, k0)) <= 1e-10);
            const double h = 1e-3;
            const double d2 = mgf(t, 1.0, k0 + h).value() - 2 * mgf(t, 1.0, k0).value() + mgf(t, 1.0, k0 - h).value();
            CHECK(d2 > 0.0);
        }
    }

    TEST_CASE("the minimiser does not depend on T") {
        for (const auto& t : markets) {
            CAPTURE(t.nu.describe());
            const double k1 = minimize_mgf(t, 1.0).kappa0;
            for (double T : {0.25, 3.0, 10.0}) CHECK(minimize_mgf(t, T).kappa0 == doctest::Approx(k1).epsilon(1e-12));
        }
    }

    TEST_CASE("classification is exclusive and consistent with the minimiser") {
        std::vector<LevyTriplet> all = markets;
        all.push_back({0.0, 0.0, LevyMeasure::symmetric_stable(0.8, 1.0)});
        all.push_back({0.0, 0.0, LevyMeasure::symmetric_stable(1.5, 1.0)});
        all.push_back({-50.0, 0.0, exp_tails(3.0, 3.0, 2.0, 0.0)});
        all.push_back({-1.0, 0.0, LevyMeasure::cgmy(1.0, 2.0, 3.0, 0.5)});
        for (const auto& t : all) {
            CAPTURE(t.nu.describe());
            const auto st = classify_esscher_parameter(t, 1.0);
            CHECK(st.exists == (st.kind != EsscherCase::None));
            CHECK(st.kappa0.has_value() == st.exists);
            if (st.exists) CHECK(*st.kappa0 == doctest::Approx(minimize_mgf(t, 1.0).kappa0).epsilon(1e-12));
        }
    }
}
