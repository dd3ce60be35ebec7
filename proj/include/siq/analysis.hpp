#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "siq/params.hpp"

namespace siq {

enum class Regime { DiseaseFree, Endemic };

std::string_view regime_tag(Regime regime) noexcept;

/// Raised when a critical responsibility or NPI level does not exist
/// because transmission is already impossible.
class UndefinedCriticalValue : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Critical testing rate: 2 (1-eta)(1-sigma) lambda (1-gamma_t v) [1 - p_q (1-gamma_q v)] - beta.
/// Can be negative, in which case no testing is needed.
double epidemic_threshold(const ModelParams& params);

/// Disease-free iff c_t >= threshold (the boundary is disease-free).
Regime classify(const ModelParams& params);

/// Responsibility level above which the disease-free equilibrium is
/// stable at the actual testing rate. Throws UndefinedCriticalValue when
/// the transmission factor it divides by is not positive.
double critical_sigma(const ModelParams& params);

/// NPI effectiveness above which the disease-free equilibrium is stable.
double critical_eta(const ModelParams& params);

/// Endemic equilibrium, or (1, 0, 0) in the disease-free regime.
MacroState endemic_equilibrium(const ModelParams& params);

/// The equilibrium in its closed product form, without renormalization.
/// Only meaningful in the endemic regime; used to cross-check the
/// normalized equilibrium.
MacroState endemic_equilibrium_product_form(const ModelParams& params);

/// Steady-state fraction of severely ill individuals; 0 when disease-free.
double severe_prevalence(const ModelParams& params);

/// d(threshold)/dv.
double d_ctbar_dv(const ModelParams& params);

/// d(severe_prevalence)/dv; 0 in the disease-free regime.
double d_xi_dv(const ModelParams& params);

struct CriticalValue {
    std::optional<double> value;
    std::string reason; ///< set when value is absent
};

struct AnalysisReport {
    double c_t_bar = 0.0;
    CriticalValue sigma_bar;
    CriticalValue eta_bar;
    MacroState equilibrium;
    double xi = 0.0;
    double d_ctbar_dv = 0.0;
    double d_xi_dv = 0.0;
    Regime regime = Regime::DiseaseFree;
};

AnalysisReport analyze(const ModelParams& params);

/// Human-readable effect of marginal vaccination on severe prevalence.
std::string_view vaccination_effect(const AnalysisReport& report) noexcept;

/// JSON document whose keys mirror the report fields.
std::string report_to_json(const AnalysisReport& report, int indent = 2);

} // namespace siq
