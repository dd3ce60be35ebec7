#include "siq/analysis.hpp"

#include "json.hpp"

namespace siq {

std::string_view regime_tag(Regime regime) noexcept {
    return regime == Regime::Endemic ? "endemic" : "disease-free";
}

namespace {

/* (1 - gamma_t v) and [1 - p_q (1 - gamma_q v)]. */
double transmission_factor(const ModelParams& p) { return 1.0 - p.gamma_t * p.v; }
double mild_fraction(const ModelParams& p) { return 1.0 - p.p_q * (1.0 - p.gamma_q * p.v); }

/* Growth-rate coefficient of mildly symptomatic infections at y_s = 1. */
double mild_growth(const ModelParams& p) {
    return 2.0 * (1.0 - p.eta) * (1.0 - p.sigma) * p.lambda * transmission_factor(p) *
           mild_fraction(p);
}

} // namespace

double epidemic_threshold(const ModelParams& p) { return mild_growth(p) - p.beta; }

Regime classify(const ModelParams& p) {
    return p.c_t < epidemic_threshold(p) ? Regime::Endemic : Regime::DiseaseFree;
}

double critical_sigma(const ModelParams& p) {
    const double denom = 2.0 * (1.0 - p.eta) * p.lambda * transmission_factor(p) * mild_fraction(p);
    if (!(denom > 0.0)) {
        throw UndefinedCriticalValue("critical responsibility undefined: transmission already impossible");
    }
    return 1.0 - (p.beta + p.c_t) / denom;
}

double critical_eta(const ModelParams& p) {
    const double denom = 2.0 * (1.0 - p.sigma) * p.lambda * transmission_factor(p) * mild_fraction(p);
    if (!(denom > 0.0)) {
        throw UndefinedCriticalValue("critical NPI effectiveness undefined: transmission already impossible");
    }
    return 1.0 - (p.beta + p.c_t) / denom;
}

MacroState endemic_equilibrium_product_form(const ModelParams& p) {
    const double contact = 2.0 * (1.0 - p.eta) * (1.0 - p.sigma) * p.lambda * transmission_factor(p);
    const double mild = mild_fraction(p);
    const double outflow = p.beta + p.c_t;
    MacroState eq;
    eq.s = outflow / (contact * mild);
    eq.i = p.beta * mild / outflow - p.beta / contact;
    eq.q = (1.0 - p.beta * mild / outflow) * (1.0 - eq.s);
    return eq;
}

MacroState endemic_equilibrium(const ModelParams& p) {
    if (classify(p) == Regime::DiseaseFree) return {1.0, 0.0, 0.0};
    const MacroState product = endemic_equilibrium_product_form(p);
    return {product.s, product.i, 1.0 - product.s - product.i};
}

double severe_prevalence(const ModelParams& p) {
    if (classify(p) == Regime::DiseaseFree) return 0.0;
    return (1.0 - endemic_equilibrium(p).s) * p.p_q * (1.0 - p.gamma_q * p.v);
}

double d_ctbar_dv(const ModelParams& p) {
    return 2.0 * (1.0 - p.eta) * (1.0 - p.sigma) * p.lambda *
           (p.p_q * p.gamma_q - p.gamma_t * (1.0 - p.p_q) - 2.0 * p.p_q * p.gamma_t * p.gamma_q * p.v);
}

double d_xi_dv(const ModelParams& p) {
    if (classify(p) == Regime::DiseaseFree) return 0.0;
    const double outflow = p.beta + p.c_t;
    const double growth = p.beta + epidemic_threshold(p);
    const double severe = p.p_q * (1.0 - p.gamma_q * p.v);
    return outflow / (growth * growth) * d_ctbar_dv(p) * severe -
           (1.0 - outflow / growth) * p.p_q * p.gamma_q;
}

namespace {

template <class F>
CriticalValue try_critical(F&& f, const ModelParams& p) {
    try {
        return {f(p), {}};
    } catch (const UndefinedCriticalValue& e) {
        return {std::nullopt, e.what()};
    }
}

} // namespace

AnalysisReport analyze(const ModelParams& p) {
    AnalysisReport r;
    r.c_t_bar = epidemic_threshold(p);
    r.sigma_bar = try_critical(critical_sigma, p);
    r.eta_bar = try_critical(critical_eta, p);
    r.regime = classify(p);
    r.equilibrium = endemic_equilibrium(p);
    r.xi = severe_prevalence(p);
    r.d_ctbar_dv = d_ctbar_dv(p);
    r.d_xi_dv = d_xi_dv(p);
    return r;
}

std::string_view vaccination_effect(const AnalysisReport& r) noexcept {
    if (r.d_xi_dv < 0.0) return "reduces severe prevalence";
    if (r.d_xi_dv > 0.0) return "increases severe prevalence";
    return "no effect on severe prevalence";
}

std::string report_to_json(const AnalysisReport& r, int indent) {
    auto critical = [](const CriticalValue& c) {
        return c.value ? nlohmann::json(*c.value) : nlohmann::json(nullptr);
    };
    nlohmann::ordered_json j;
    j["c_t_bar"] = r.c_t_bar;
    j["sigma_bar"] = critical(r.sigma_bar);
    if (!r.sigma_bar.value) j["sigma_bar_reason"] = r.sigma_bar.reason;
    j["eta_bar"] = critical(r.eta_bar);
    if (!r.eta_bar.value) j["eta_bar_reason"] = r.eta_bar.reason;
    j["equilibrium"] = {{"y_s", r.equilibrium.s}, {"y_i", r.equilibrium.i}, {"y_q", r.equilibrium.q}};
    j["xi"] = r.xi;
    j["d_ctbar_dv"] = r.d_ctbar_dv;
    j["d_xi_dv"] = r.d_xi_dv;
    j["vaccination_effect"] = vaccination_effect(r);
    j["regime"] = regime_tag(r.regime);
    return j.dump(indent);
}

} // namespace siq
