#include "siq/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace siq {

namespace {

void require_unit(const char* field, double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << field << " must lie in [0, 1] (got " << value << ")";
        throw ValidationError(field, msg.str());
    }
}

} // namespace

ModelParams validate(const ModelParams& params) {
    if (params.n < 2) {
        std::ostringstream msg;
        msg << "n must be at least 2 (got " << params.n << ")";
        throw ValidationError("n", msg.str());
    }
    require_unit("sigma", params.sigma);
    require_unit("lambda", params.lambda);
    require_unit("p_q", params.p_q);
    if (!(params.beta > 0.0) || !std::isfinite(params.beta)) {
        std::ostringstream msg;
        msg << "beta must be a finite positive rate (got " << params.beta << ")";
        throw ValidationError("beta", msg.str());
    }
    require_unit("v", params.v);
    require_unit("gamma_t", params.gamma_t);
    require_unit("gamma_q", params.gamma_q);
    require_unit("eta", params.eta);
    if (!(params.c_t >= 0.0) || !std::isfinite(params.c_t)) {
        std::ostringstream msg;
        msg << "c_t must be a finite non-negative rate (got " << params.c_t << ")";
        throw ValidationError("c_t", msg.str());
    }
    return params;
}

EffectiveRates effective_rates(const ModelParams& p) {
    EffectiveRates r;
    r.lambda_eff = p.lambda * (1.0 - p.eta) * (1.0 - p.gamma_t * p.v);
    r.p_severe = p.p_q * (1.0 - p.gamma_q * p.v);
    r.pair_rate = 2.0 * r.lambda_eff * (1.0 - p.sigma);
    return r;
}

double max_norm_diff(const MacroState& a, const MacroState& b) noexcept {
    return std::max({std::abs(a.s - b.s), std::abs(a.i - b.i), std::abs(a.q - b.q)});
}

double max_norm(const MacroState& a) noexcept {
    return std::max({std::abs(a.s), std::abs(a.i), std::abs(a.q)});
}

double project_to_simplex(MacroState& x) noexcept {
    double clamp = 0.0;
    for (double* c : {&x.s, &x.i, &x.q}) {
        if (*c < 0.0) {
            clamp = std::max(clamp, -*c);
            *c = 0.0;
        }
    }
    const double total = x.sum();
    if (total > 0.0) {
        x.s /= total;
        x.i /= total;
        x.q /= total;
    }
    return clamp;
}

double& param_ref(ModelParams& p, std::string_view key) {
    if (key == "sigma") return p.sigma;
    if (key == "lambda") return p.lambda;
    if (key == "p_q") return p.p_q;
    if (key == "beta") return p.beta;
    if (key == "v") return p.v;
    if (key == "gamma_t") return p.gamma_t;
    if (key == "gamma_q") return p.gamma_q;
    if (key == "eta") return p.eta;
    if (key == "c_t") return p.c_t;
    throw std::out_of_range("not a real-valued model parameter: " + std::string(key));
}

double param_value(const ModelParams& p, std::string_view key) {
    return param_ref(const_cast<ModelParams&>(p), key);
}

} // namespace siq
