#include "doctest.h"

#include "spec_io.hpp"

#include "levy_emm/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace levy_emm;
using io::Json;

namespace {

Json base_spec(Json nu) {
    return Json{{"version", 1}, {"name", "m"}, {"market", "linear"}, {"b", 0.25},
                {"sigma2", 0.04}, {"T", 2.0}, {"nu", std::move(nu)}};
}

const std::vector<Json> kMeasures = {
    Json{{"type", "none"}},
    Json{{"type", "atoms"}, {"atoms", Json::array({Json{{"x", 0.5}, {"mass", 1.5}}, Json{{"x", -2.0}, {"mass", 0.125}}})}},
    Json{{"type", "gaussian_jumps"}, {"intensity", 1.0}, {"mean", -0.1}, {"stddev", 0.2}},
    Json{{"type", "double_exponential"}, {"intensity", 2.0}, {"p", 0.3}, {"eta_plus", 4.0}, {"eta_minus", 3.0}},
    Json{{"type", "variance_gamma"}, {"C", 1.0}, {"G", 3.0}, {"M", 2.0}},
    Json{{"type", "cgmy"}, {"C", 1.0}, {"G", 2.0}, {"M", 3.0}, {"Y", 1.5}},
    Json{{"type", "symmetric_stable"}, {"alpha", 0.8}, {"scale", 1.0}},
    Json{{"type", "tempered"},
         {"base", Json{{"type", "symmetric_stable"}, {"alpha", 1.5}, {"scale", 0.7}}},
         {"tilt", 0.0},
         {"penalty", Json{{"family", Json{{"family", "default_quadratic"}}}, {"n", 8}}}},
    Json{{"type", "tempered"},
         {"base", Json{{"type", "variance_gamma"}, {"C", 1.0}, {"G", 3.0}, {"M", 2.0}}},
         {"tilt", -0.5},
         {"penalty", Json{{"family", Json{{"family", "power"}, {"exponent", 3.0}}}, {"n", 2}}}},
    Json{{"type", "pushforward"},
         {"base", Json{{"type", "double_exponential"}, {"intensity", 1.0}, {"p", 0.4}, {"eta_plus", 5.0}, {"eta_minus", 4.0}}},
         {"map", "exp_minus_one"}},
};

} // namespace

TEST_SUITE("spec files") {
    TEST_CASE("serialize after parse reproduces every measure type") {
        for (const Json& nu : kMeasures) {
            const Json j = base_spec(nu);
            const Json out = io::spec_to_json(io::parse_spec(j));
            CHECK_MESSAGE(out == j, j.dump());
            CHECK(io::spec_to_json(io::parse_spec(out)).dump() == out.dump());
        }
    }

    TEST_CASE("geometric spec keeps S0") {
        Json j = base_spec(kMeasures[3]);
        j["market"] = "geometric";
        j["S0"] = 100.0;
        const io::ModelSpec s = io::parse_spec(j);
        CHECK(s.market == MarketKind::Geometric);
        CHECK(s.S0 == 100.0);
        Json canonical = io::spec_to_json(s);
        CHECK(canonical["S0"] == 100.0);
        CHECK(io::spec_to_json(io::parse_spec(canonical)) == canonical);
    }

    TEST_CASE("decimal strings are parsed as binary doubles") {
        Json j = base_spec(Json{{"type", "gaussian_jumps"}, {"intensity", "1"}, {"mean", "-0.1"}, {"stddev", "0.2"}});
        j["b"] = "0.1";
        const io::ModelSpec s = io::parse_spec(j);
        CHECK(s.triplet.b == 0.1);
        const Json out = io::spec_to_json(s);
        CHECK(out["b"].is_number_float());
        CHECK(out["nu"]["mean"] == -0.1);
    }

    TEST_CASE("malformed specs are validation errors") {
        auto rejects = [](Json j) {
            try {
                io::parse_spec(j);
            } catch (const LevyError& e) {
                return e.category() == ErrorCategory::Validation;
            }
            return false;
        };
        Json j = base_spec(kMeasures[0]);
        j["extra"] = 1;
        CHECK(rejects(j));
        j = base_spec(kMeasures[0]);
        j.erase("T");
        CHECK(rejects(j));
        j = base_spec(kMeasures[0]);
        j["version"] = 2;
        CHECK(rejects(j));
        j = base_spec(kMeasures[0]);
        j["S0"] = 1.0;
        CHECK(rejects(j));
        j = base_spec(kMeasures[0]);
        j["market"] = "geometric";
        CHECK(rejects(j));
        j = base_spec(kMeasures[0]);
        j["sigma2"] = -1.0;
        CHECK(rejects(j));
        j = base_spec(kMeasures[0]);
        j["T"] = 0.0;
        CHECK(rejects(j));
        j = base_spec(kMeasures[0]);
        j["b"] = "abc";
        CHECK(rejects(j));
        CHECK(rejects(base_spec(Json{{"type", "atoms"}, {"atoms", Json::array()}})));
        CHECK(rejects(base_spec(Json{{"type", "symmetric_stable"}, {"alpha", 2.5}, {"scale", 1.0}})));
        CHECK(rejects(base_spec(Json{{"type", "cgmy"}, {"C", 1.0}, {"G", 2.0}, {"M", 3.0}})));
        CHECK(rejects(base_spec(Json{{"type", "bogus"}})));
        CHECK(rejects(base_spec(Json{{"type", "none"}, {"x", 1}})));
        CHECK(rejects(base_spec(Json{{"type", "pushforward"}, {"base", kMeasures[3]}, {"map", "sqrt"}})));
        CHECK(rejects(Json::array()));
    }

    TEST_CASE("penalty flags") {
        CHECK(io::penalty_to_string(io::parse_penalty("default_quadratic")) == "default_quadratic");
        CHECK(io::penalty_to_string(io::parse_penalty("power:3")) == "power:3");
        CHECK_THROWS_AS(io::parse_penalty("cubic"), InvalidArgument);
        CHECK_THROWS_AS(io::parse_penalty("power:x"), InvalidArgument);
    }

    TEST_CASE("extended reals in reports") {
        CHECK(io::number(INFINITY) == "inf");
        CHECK(io::number(-INFINITY) == "-inf");
        CHECK(io::number(NAN).is_null());
        CHECK(io::number(-0.0).dump() == "0.0");
        CHECK(io::number(ExtendedReal::undefined()).is_null());
    }
}
