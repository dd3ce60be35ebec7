#pragma once

#include <random>

#include "siq/params.hpp"

namespace siq::test {

/* Population-level comparison example. */
inline ModelParams population_params(std::int64_t n = 10000) {
    ModelParams p;
    p.n = n;
    p.sigma = 0.4;
    p.lambda = 0.2;
    p.p_q = 0.2;
    p.beta = 0.02;
    p.v = 0.5;
    p.gamma_t = 0.5;
    p.gamma_q = 0.9;
    p.eta = 0.2;
    p.c_t = 0.05;
    return p;
}

/* COVID-19 calibrated scenario; gamma_t varies between scenarios. */
inline ModelParams case_study_params(double gamma_t) {
    ModelParams p;
    p.n = 10000;
    p.sigma = 0.4;
    p.v = 0.821;
    p.eta = 0.19;
    p.lambda = 0.36;
    p.p_q = 0.19;
    p.beta = 0.1;
    p.gamma_q = 0.92;
    p.gamma_t = gamma_t;
    p.c_t = 0.06;
    return p;
}

/* Values frozen from an independent 30-digit evaluation of the closed forms. */
inline constexpr double kPopThreshold = 0.10816;
inline constexpr double kPopEqS = 0.546192259675405767585;
inline constexpr double kPopEqI = 0.115396825396825387165;
inline constexpr double kPopEqQ = 0.338410914927768845250;
inline constexpr double kPopXi = 0.0499188514357053673290;
inline constexpr double kPopDxiDv = -0.109588248771432714078;
inline constexpr double kPopDctDv = -0.05952;
inline constexpr double kPopSigmaBar = 0.672284644194756551577;
inline constexpr double kPopEtaBar = 0.563046192259675391996;
inline constexpr double kCaseThreshold065 = 0.0555988429720735863856;
inline constexpr double kCaseThreshold0165 = 0.188454263340541732005;
inline constexpr double kCaseRootV = 0.713369391859094164514;

/* Uniformly random valid parameters for property tests. */
class ParamGenerator {
public:
    explicit ParamGenerator(std::uint64_t seed) : rng_(seed) {}

    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    double range(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    ModelParams operator()() {
        ModelParams p;
        p.n = 1000;
        p.sigma = unit();
        p.lambda = unit();
        p.p_q = unit();
        p.beta = range(0.005, 0.5);
        p.v = unit();
        p.gamma_t = unit();
        p.gamma_q = unit();
        p.eta = unit();
        p.c_t = range(0.0, 0.5);
        return p;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace siq::test
