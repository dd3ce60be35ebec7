#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "json.hpp"
#include "siq/analysis.hpp"
#include "siq/meanfield.hpp"

using namespace siq;
using namespace siq::test;

namespace {

template <class F>
double central_difference_v(const ModelParams& p, F&& f, double h = 1e-5) {
    ModelParams up = p, down = p;
    up.v += h;
    down.v -= h;
    return (f(up) - f(down)) / (2.0 * h);
}

} // namespace

TEST_CASE("epidemic threshold for the comparison set") {
    CHECK(std::abs(epidemic_threshold(population_params()) - kPopThreshold) < 1e-12);
}

TEST_CASE("threshold equals the linear growth rate plus testing") {
    // With y_s = 1, the i-row of the macro field is exactly linear in y_i.
    ParamGenerator gen(31);
    for (int k = 0; k < 100; ++k) {
        const ModelParams p = gen();
        const double eps = 1e-6;
        const double slope = macro_rhs(p, {1.0, eps, 0.0}).i / eps;
        CHECK(slope == doctest::Approx(epidemic_threshold(p) - p.c_t).epsilon(1e-9));
    }
}

TEST_CASE("case-study thresholds and regimes") {
    const ModelParams nominal = case_study_params(0.65);
    const ModelParams waned = case_study_params(0.165);
    CHECK(std::abs(epidemic_threshold(nominal) - kCaseThreshold065) < 1e-12);
    CHECK(std::abs(epidemic_threshold(waned) - kCaseThreshold0165) < 1e-12);
    CHECK(classify(nominal) == Regime::DiseaseFree);
    CHECK(classify(waned) == Regime::Endemic);

    // Long runs agree with the classification.
    CHECK(integrate(nominal, {0.99, 0.01, 0.0}, 5000.0, 10.0).final_state().i < 1e-6);
    CHECK(integrate(waned, {0.99, 0.01, 0.0}, 5000.0, 10.0).final_state().i > 0.1);
}

TEST_CASE("critical responsibility and NPI levels") {
    const ModelParams p = population_params();
    CHECK(critical_sigma(p) == doctest::Approx(kPopSigmaBar).epsilon(1e-13));
    CHECK(critical_eta(p) == doctest::Approx(kPopEtaBar).epsilon(1e-13));

    ModelParams at_sigma = p;
    at_sigma.sigma = critical_sigma(p);
    CHECK(std::abs(epidemic_threshold(at_sigma) - p.c_t) < 1e-12);
    ModelParams at_eta = p;
    at_eta.eta = critical_eta(p);
    CHECK(std::abs(epidemic_threshold(at_eta) - p.c_t) < 1e-12);
}

TEST_CASE("critical values: trivially satisfied and undefined") {
    ModelParams p = population_params();
    p.c_t = 5.0;
    CHECK(critical_sigma(p) <= 0.0);
    CHECK(critical_eta(p) <= 0.0);

    p = population_params();
    p.lambda = 0.0;
    CHECK_THROWS_AS(critical_sigma(p), UndefinedCriticalValue);
    CHECK_THROWS_AS(critical_eta(p), UndefinedCriticalValue);

    p = population_params();
    p.eta = 1.0;
    CHECK_THROWS_AS(critical_sigma(p), UndefinedCriticalValue);
    CHECK_NOTHROW(critical_eta(p));
}

TEST_CASE("inversion identities on random parameters") {
    ParamGenerator gen(32);
    int checked = 0;
    for (int k = 0; k < 500; ++k) {
        const ModelParams p = gen();
        if (p.lambda < 1e-3) continue;
        const double s = critical_sigma(p);
        if (s >= 0.0 && s <= 1.0) {
            ModelParams q = p;
            q.sigma = s;
            CHECK(epidemic_threshold(q) == doctest::Approx(p.c_t).epsilon(1e-10));
            ++checked;
        }
        const double e = critical_eta(p);
        if (e >= 0.0 && e <= 1.0) {
            ModelParams q = p;
            q.eta = e;
            CHECK(epidemic_threshold(q) == doctest::Approx(p.c_t).epsilon(1e-10));
            ++checked;
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("endemic equilibrium for the comparison set") {
    const ModelParams p = population_params();
    const MacroState eq = endemic_equilibrium(p);
    CHECK(std::abs(eq.s - kPopEqS) < 1e-12);
    CHECK(std::abs(eq.i - kPopEqI) < 1e-12);
    CHECK(std::abs(eq.q - kPopEqQ) < 1e-12);
    CHECK(std::abs(eq.sum() - 1.0) < 1e-12);
    CHECK(std::abs(endemic_equilibrium_product_form(p).q - eq.q) < 1e-10);
}

TEST_CASE("equilibrium in the disease-free regime") {
    ModelParams p = population_params();
    p.c_t = epidemic_threshold(p);
    CHECK(classify(p) == Regime::DiseaseFree);
    CHECK(endemic_equilibrium(p) == MacroState{1.0, 0.0, 0.0});
    // The closed form itself collapses to the disease-free state there.
    CHECK(max_norm_diff(endemic_equilibrium_product_form(p), {1.0, 0.0, 0.0}) < 1e-12);

    p = population_params();
    p.sigma = 1.0;
    CHECK(classify(p) == Regime::DiseaseFree);
    CHECK(endemic_equilibrium(p) == MacroState{1.0, 0.0, 0.0});
}

TEST_CASE("equilibrium is a fixed point on random endemic parameters") {
    ParamGenerator gen(33);
    int endemic = 0;
    for (int k = 0; k < 4000 && endemic < 200; ++k) {
        const ModelParams p = gen();
        if (classify(p) != Regime::Endemic) continue;
        ++endemic;
        const MacroState eq = endemic_equilibrium(p);
        CHECK(std::min({eq.s, eq.i, eq.q}) >= -1e-15);
        CHECK(std::abs(eq.sum() - 1.0) < 1e-12);
        CHECK(max_norm(macro_rhs(p, eq)) < 1e-10);
        CHECK(std::abs(endemic_equilibrium_product_form(p).q - eq.q) < 1e-10);
    }
    CHECK(endemic >= 100);
}

TEST_CASE("severe prevalence and its sensitivity") {
    const ModelParams p = population_params();
    CHECK(std::abs(severe_prevalence(p) - kPopXi) < 1e-12);
    CHECK(std::abs(d_xi_dv(p) - kPopDxiDv) < 1e-12);
    CHECK(std::abs(d_xi_dv(p) - central_difference_v(p, severe_prevalence)) < 1e-6);

    ModelParams free = p;
    free.c_t = 1.0;
    CHECK(severe_prevalence(free) == 0.0);
    CHECK(d_xi_dv(free) == 0.0);
}

TEST_CASE("threshold sensitivity to coverage") {
    const ModelParams p = population_params();
    CHECK(std::abs(d_ctbar_dv(p) - kPopDctDv) < 1e-12);
    CHECK(std::abs(d_ctbar_dv(p) - central_difference_v(p, epidemic_threshold)) < 1e-6);

    ModelParams boundary = p;
    boundary.v = 0.0;
    boundary.p_q = 0.2;
    boundary.gamma_q = 0.8;
    boundary.gamma_t = 0.2; // gamma_t / gamma_q == p_q / (1 - p_q)
    CHECK(std::abs(d_ctbar_dv(boundary)) < 1e-15);
}

TEST_CASE("threshold sensitivity changes sign for the waned vaccine") {
    ModelParams p = case_study_params(0.165);
    auto fd = [&](double v) {
        ModelParams q = p;
        q.v = v;
        return central_difference_v(q, epidemic_threshold);
    };
    double lo = 0.0, hi = 1.0;
    REQUIRE(fd(lo) > 0.0);
    REQUIRE(fd(hi) < 0.0);
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (fd(mid) > 0.0 ? lo : hi) = mid;
    }
    CHECK(std::abs(lo - kCaseRootV) < 1e-6);
    p.v = kCaseRootV;
    CHECK(std::abs(d_ctbar_dv(p)) < 1e-12);
}

TEST_CASE("analytic derivatives match finite differences on random parameters") {
    ParamGenerator gen(34);
    int xi_checked = 0;
    for (int k = 0; k < 400; ++k) {
        ModelParams p = gen();
        p.v = gen.range(0.05, 0.95);
        CHECK(std::abs(d_ctbar_dv(p) - central_difference_v(p, epidemic_threshold)) < 1e-6);
        // Stay clear of the regime boundary, where xi has a kink.
        if (std::abs(p.c_t - epidemic_threshold(p)) < 1e-2) continue;
        CHECK(std::abs(d_xi_dv(p) - central_difference_v(p, severe_prevalence)) < 1e-6);
        ++xi_checked;
    }
    CHECK(xi_checked > 100);
}

TEST_CASE("threshold monotonicity") {
    ParamGenerator gen(35);
    for (int k = 0; k < 300; ++k) {
        ModelParams p = gen();
        p.lambda = gen.range(0.05, 1.0);
        p.sigma = gen.range(0.0, 0.9);
        p.eta = gen.range(0.0, 0.9);
        p.gamma_t = gen.range(0.05, 0.9);
        p.v = gen.range(0.05, 0.95);
        p.p_q = gen.range(0.05, 0.95);
        p.gamma_q = gen.range(0.0, 0.9);
        const double base = epidemic_threshold(p);
        const double step = 0.05;
        ModelParams q = p;
        q.sigma += step;
        CHECK(epidemic_threshold(q) < base);
        q = p;
        q.eta += step;
        CHECK(epidemic_threshold(q) < base);
        q = p;
        q.gamma_t += step;
        CHECK(epidemic_threshold(q) < base);
        q = p;
        q.gamma_q += step;
        CHECK(epidemic_threshold(q) > base);
    }
}

TEST_CASE("analysis report") {
    const AnalysisReport r = analyze(population_params());
    CHECK(r.regime == Regime::Endemic);
    CHECK(std::abs(r.c_t_bar - kPopThreshold) < 1e-12);
    REQUIRE(r.sigma_bar.value);
    CHECK(*r.sigma_bar.value == doctest::Approx(kPopSigmaBar));
    CHECK(std::abs(r.xi - kPopXi) < 1e-12);
    CHECK(vaccination_effect(r) == "reduces severe prevalence");

    const auto json = nlohmann::json::parse(report_to_json(r));
    CHECK(json["regime"] == "endemic");
    CHECK(json["equilibrium"]["y_i"].get<double>() == doctest::Approx(kPopEqI));
    for (const char* key : {"c_t_bar", "sigma_bar", "eta_bar", "xi", "d_ctbar_dv", "d_xi_dv"}) {
        CHECK(json.contains(key));
    }

    ModelParams heavy_testing = population_params();
    heavy_testing.c_t = 10.0;
    const AnalysisReport free = analyze(heavy_testing);
    CHECK(free.regime == Regime::DiseaseFree);
    CHECK(free.equilibrium == MacroState{1.0, 0.0, 0.0});
    CHECK(free.xi == 0.0);

    ModelParams no_transmission = population_params();
    no_transmission.lambda = 0.0;
    const AnalysisReport none = analyze(no_transmission);
    CHECK(none.regime == Regime::DiseaseFree);
    CHECK_FALSE(none.sigma_bar.value);
    CHECK_FALSE(none.eta_bar.value);
    CHECK_FALSE(none.sigma_bar.reason.empty());
    const auto none_json = nlohmann::json::parse(report_to_json(none));
    CHECK(none_json["sigma_bar"].is_null());
    CHECK(none_json.contains("sigma_bar_reason"));
}
