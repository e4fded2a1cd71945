#include "spec_io.hpp"

#include "levy_emm/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace levy_emm::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw InvalidArgument(where + ": " + what);
}

// Object reader that tracks which keys were consumed so that unknown
// fields can be reported.
class Obj {
public:
    Obj(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) bad(where_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& at(const std::string& key) {
        if (!j_.contains(key)) bad(where_, "missing field '" + key + "'");
        seen_.insert(key);
        return j_.at(key);
    }

    double num(const std::string& key) { return to_double(at(key), where_ + "." + key); }

    int integer(const std::string& key) {
        const Json& v = at(key);
        if (v.is_number_integer()) return v.get<int>();
        const double d = to_double(v, where_ + "." + key);
        if (d != std::floor(d) || std::abs(d) > 2e9) bad(where_ + "." + key, "expected an integer");
        return static_cast<int>(d);
    }

    std::string str(const std::string& key) {
        const Json& v = at(key);
        if (!v.is_string()) bad(where_ + "." + key, "expected a string");
        return v.get<std::string>();
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) bad(where_, "unknown field '" + it.key() + "'");
    }

    static double to_double(const Json& v, const std::string& where) {
        double d;
        if (v.is_number()) {
            d = v.get<double>();
        } else if (v.is_string()) {
            const std::string s = v.get<std::string>();
            char* end = nullptr;
            errno = 0;
            d = std::strtod(s.c_str(), &end);
            if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) bad(where, "'" + s + "' is not a decimal number");
        } else {
            bad(where, "expected a number");
        }
        if (!std::isfinite(d)) bad(where, "expected a finite number");
        return d;
    }

private:
    const Json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

Json penalty_to_json(const PenaltyFamily& p) {
    if (p.kind() == PenaltyFamily::Kind::DefaultQuadratic) return Json{{"family", "default_quadratic"}};
    if (auto e = p.power_exponent()) return Json{{"family", "power"}, {"exponent", *e}};
    throw UnsupportedMeasure("custom penalty '" + p.name() + "' cannot be serialized");
}

PenaltyFamily penalty_from_json(const Json& j, const std::string& where) {
    Obj o(j, where);
    const std::string fam = o.str("family");
    PenaltyFamily p = PenaltyFamily::default_quadratic();
    if (fam == "power") p = PenaltyFamily::power(o.num("exponent"));
    else if (fam != "default_quadratic") bad(where + ".family", "unknown penalty family '" + fam + "'");
    o.finish();
    return p;
}

LevyMeasure measure_from(const Json& j, const std::string& where) {
    Obj o(j, where);
    const std::string type = o.str("type");
    LevyMeasure out;
    if (type == "none") {
        out = LevyMeasure::none();
    } else if (type == "atoms") {
        const Json& arr = o.at("atoms");
        if (!arr.is_array() || arr.empty()) bad(where + ".atoms", "expected a non-empty array (use type 'none' for no jumps)");
        std::vector<Atom> atoms;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Obj a(arr[i], where + ".atoms[" + std::to_string(i) + "]");
            atoms.push_back({a.num("x"), a.num("mass")});
            a.finish();
        }
        out = LevyMeasure::atoms(std::move(atoms));
    } else if (type == "gaussian_jumps") {
        out = LevyMeasure::gaussian_jumps(o.num("intensity"), o.num("mean"), o.num("stddev"));
    } else if (type == "double_exponential") {
        out = LevyMeasure::double_exponential_jumps(o.num("intensity"), o.num("p"), o.num("eta_plus"),
                                                    o.num("eta_minus"));
    } else if (type == "variance_gamma") {
        out = LevyMeasure::variance_gamma(o.num("C"), o.num("G"), o.num("M"));
    } else if (type == "cgmy") {
        out = LevyMeasure::cgmy(o.num("C"), o.num("G"), o.num("M"), o.num("Y"));
    } else if (type == "symmetric_stable") {
        out = LevyMeasure::symmetric_stable(o.num("alpha"), o.num("scale"));
    } else if (type == "tempered") {
        const LevyMeasure base = measure_from(o.at("base"), where + ".base");
        TemperingWeight w;
        w.tilt = o.num("tilt");
        if (o.has("penalty")) {
            Obj pen(o.at("penalty"), where + ".penalty");
            const int n = pen.integer("n");
            if (n < 1) bad(where + ".penalty.n", "must be >= 1");
            const PenaltyFamily fam = penalty_from_json(pen.at("family"), where + ".penalty.family");
            pen.finish();
            w.penalty = TemperingWeight::Penalty{fam, n};
        }
        out = LevyMeasure(Tempered{std::make_shared<const LevyMeasure>(base), w});
    } else if (type == "pushforward") {
        const LevyMeasure base = measure_from(o.at("base"), where + ".base");
        const std::string map = o.str("map");
        PushforwardMap m;
        if (map == "exp_minus_one") m = PushforwardMap::ExpMinusOne;
        else if (map == "log_one_plus") m = PushforwardMap::LogOnePlus;
        else bad(where + ".map", "unknown map '" + map + "'");
        out = LevyMeasure(Pushforward{std::make_shared<const LevyMeasure>(base), m});
    } else {
        bad(where + ".type", "unknown measure type '" + type + "'");
    }
    o.finish();
    return out;
}

std::string fmt_id(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

ModelSpec parse_spec(const Json& j) {
    Obj o(j, "spec");
    if (o.integer("version") != kSpecVersion) bad("spec.version", "only version 1 is supported");
    ModelSpec s;
    s.name = o.str("name");
    const std::string market = o.str("market");
    if (market == "linear") s.market = MarketKind::Linear;
    else if (market == "geometric") s.market = MarketKind::Geometric;
    else bad("spec.market", "expected 'linear' or 'geometric'");
    if (s.market == MarketKind::Geometric) {
        s.S0 = o.num("S0");
        if (!(s.S0 > 0)) bad("spec.S0", "must be positive");
    } else if (o.has("S0")) {
        bad("spec", "S0 only applies to geometric markets");
    }
    s.triplet.b = o.num("b");
    s.triplet.sigma2 = o.num("sigma2");
    s.T = o.num("T");
    if (!(s.T > 0)) bad("spec.T", "must be positive");
    s.triplet.nu = measure_from(o.at("nu"), "spec.nu");
    o.finish();
    validate_triplet(s.triplet);
    return s;
}

ModelSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open spec file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("spec is not valid JSON: ") + e.what());
    }
    return parse_spec(j);
}

Json spec_to_json(const ModelSpec& s) {
    Json j;
    j["version"] = kSpecVersion;
    j["name"] = s.name;
    j["market"] = s.market == MarketKind::Linear ? "linear" : "geometric";
    if (s.market == MarketKind::Geometric) j["S0"] = s.S0;
    j["b"] = s.triplet.b;
    j["sigma2"] = s.triplet.sigma2;
    j["T"] = s.T;
    j["nu"] = measure_to_json(s.triplet.nu);
    return j;
}

Json measure_to_json(const LevyMeasure& nu) {
    return std::visit(
        [&](const auto& m) -> Json {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, FiniteAtomic>) {
                if (m.atoms.empty()) return Json{{"type", "none"}};
                Json arr = Json::array();
                for (const Atom& a : m.atoms) arr.push_back(Json{{"x", a.x}, {"mass", a.mass}});
                return Json{{"type", "atoms"}, {"atoms", arr}};
            } else if constexpr (std::is_same_v<M, JumpDiffusionDensity>) {
                if (const auto* g = std::get_if<GaussianJumps>(&m.jumps))
                    return Json{{"type", "gaussian_jumps"}, {"intensity", m.intensity}, {"mean", g->mean}, {"stddev", g->stddev}};
                const auto& d = std::get<DoubleExponentialJumps>(m.jumps);
                return Json{{"type", "double_exponential"}, {"intensity", m.intensity}, {"p", d.p},
                            {"eta_plus", d.eta_plus}, {"eta_minus", d.eta_minus}};
            } else if constexpr (std::is_same_v<M, VarianceGamma>) {
                return Json{{"type", "variance_gamma"}, {"C", m.C}, {"G", m.G}, {"M", m.M}};
            } else if constexpr (std::is_same_v<M, CGMY>) {
                return Json{{"type", "cgmy"}, {"C", m.C}, {"G", m.G}, {"M", m.M}, {"Y", m.Y}};
            } else if constexpr (std::is_same_v<M, SymmetricAlphaStable>) {
                return Json{{"type", "symmetric_stable"}, {"alpha", m.alpha}, {"scale", m.scale}};
            } else if constexpr (std::is_same_v<M, Tempered>) {
                Json j{{"type", "tempered"}, {"base", measure_to_json(*m.base)}, {"tilt", m.weight.tilt}};
                if (m.weight.penalty)
                    j["penalty"] = Json{{"family", penalty_to_json(m.weight.penalty->family)}, {"n", m.weight.penalty->n}};
                return j;
            } else if constexpr (std::is_same_v<M, Pushforward>) {
                return Json{{"type", "pushforward"},
                            {"base", measure_to_json(*m.base)},
                            {"map", m.map == PushforwardMap::ExpMinusOne ? "exp_minus_one" : "log_one_plus"}};
            } else {
                throw UnsupportedMeasure("generic densities cannot be serialized");
            }
        },
        nu.variant());
}

LevyMeasure measure_from_json(const Json& j) { return measure_from(j, "nu"); }

Json triplet_to_json(const LevyTriplet& t) {
    return Json{{"b", t.b}, {"sigma2", t.sigma2}, {"nu", measure_to_json(t.nu)}};
}

PenaltyFamily parse_penalty(const std::string& text) {
    if (text == "default_quadratic") return PenaltyFamily::default_quadratic();
    if (text.rfind("power:", 0) == 0) {
        const double e = Obj::to_double(Json(text.substr(6)), "--penalty");
        return PenaltyFamily::power(e);
    }
    throw InvalidArgument("--penalty: expected 'default_quadratic' or 'power:<exponent>'");
}

std::string penalty_to_string(const PenaltyFamily& p) {
    if (p.kind() == PenaltyFamily::Kind::DefaultQuadratic) return "default_quadratic";
    if (auto e = p.power_exponent()) return "power:" + fmt_id(*e);
    return p.name();
}

Json number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v == 0.0 ? 0.0 : v; // drop the sign of -0
}

Json number(const ExtendedReal& v) {
    if (v.is_finite()) return number(v.value());
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    return nullptr;
}

Json interval_to_json(const ExpMomentInterval& I) {
    return Json{{"a", number(I.a)},         {"b", number(I.b)},         {"a_in_I", I.a_in_I},
                {"b_in_I", I.b_in_I},       {"a_in_E", I.a_in_E},       {"b_in_E", I.b_in_E},
                {"degenerate", I.degenerate()}, {"describe", I.describe()}};
}

Json parameter_status_to_json(const EsscherParameterStatus& s) {
    Json j{{"exists", s.exists}, {"kind", to_string(s.kind)}};
    j["kappa0"] = s.kappa0 ? number(*s.kappa0) : Json(nullptr);
    j["interval"] = interval_to_json(s.interval);
    j["diagnostic"] = s.diagnostic;
    return j;
}

Json minimum_to_json(const MinimumPoint& m) {
    return Json{{"kappa0", number(m.kappa0)}, {"kind", to_string(m.kind)}, {"phi_at_min", number(m.phi_at_min)}};
}

Json esscher_result_to_json(const EsscherResult& r) {
    auto opt = [](const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); };
    Json j;
    j["status"] = to_string(r.status);
    j["kappa0"] = opt(r.kappa0);
    j["entropy"] = opt(r.entropy);
    j["infimum_entropy"] = opt(r.infimum_entropy);
    j["parameter_status"] = parameter_status_to_json(r.parameter_status);
    j["minimum"] = r.minimum ? minimum_to_json(*r.minimum) : Json(nullptr);
    j["transformed"] = nullptr;
    if (r.transformed) {
        try {
            j["transformed"] = triplet_to_json(*r.transformed);
        } catch (const UnsupportedMeasure&) {
            j["transformed"] = Json{{"b", r.transformed->b}, {"sigma2", r.transformed->sigma2}, {"nu", r.transformed->nu.describe()}};
        }
    }
    j["diagnostic"] = r.diagnostic;
    return j;
}

Json memm_report_to_json(const MemmReport& r) {
    Json j;
    j["market"] = r.market == MarketKind::Linear ? "linear" : "geometric";
    j["verdict"] = r.verdict;
    j["summary"] = r.summary;
    j["notes"] = r.notes;
    j["esscher"] = esscher_result_to_json(r.result);
    j["kappa0"] = j["esscher"]["kappa0"];
    j["entropy"] = j["esscher"]["entropy"];
    j["infimum_entropy"] = j["esscher"]["infimum_entropy"];
    j["status"] = j["esscher"]["status"];
    if (r.error_name) j["solver_error"] = Json{{"name", *r.error_name}, {"message", r.error_message.value_or("")}};
    return j;
}

Json trace_to_json(const ApproxTrace& tr) {
    Json steps = Json::array();
    for (const ApproxStep& s : tr.steps) {
        Json js{{"n", s.n},
                {"kappa_n", number(s.kappa_n)},
                {"entropy_n", number(s.entropy_n)},
                {"correction_n", number(s.correction_n)},
                {"entropy_vs_P", number(s.entropy_vs_P)},
                {"mass_gap", number(s.mass_gap)}};
        js["error"] = s.error ? Json(*s.error) : Json(nullptr);
        steps.push_back(js);
    }
    return Json{{"steps", steps},
                {"kappa_limit", number(tr.kappa_limit)},
                {"entropy_limit", number(tr.entropy_limit)},
                {"limit_kind", to_string(tr.limit_kind)}};
}

std::string trace_to_csv(const ApproxTrace& tr) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "n,kappa_n,entropy_n,correction_n,entropy_vs_P,mass_gap\n";
    for (const ApproxStep& s : tr.steps)
        os << s.n << ',' << s.kappa_n << ',' << s.entropy_n << ',' << s.correction_n << ',' << s.entropy_vs_P << ','
           << s.mass_gap << '\n';
    return os.str();
}

Json settings_to_json(const QuadratureSettings& q, const RootSettings& r) {
    return Json{{"abs_tol", q.abs_tol},       {"rel_tol", q.rel_tol},   {"max_subdivisions", q.max_subdivisions},
                {"zero_window", q.zero_window}, {"inner_cut", q.inner_cut}, {"kappa_tol", r.kappa_tol}, {"m_tol", r.m_tol},
                {"max_abs_kappa", r.max_abs_kappa}};
}

} // namespace levy_emm::io
