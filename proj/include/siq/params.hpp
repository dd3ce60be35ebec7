#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace siq {

/// Model and control parameters of the S/I/Q model.
///
/// Construct freely, then pass through validate(); every other module
/// assumes its input has been validated and does not re-check ranges.
struct ModelParams {
    std::int64_t n = 0;   ///< population size
    double sigma = 0.0;   ///< responsibility level
    double lambda = 0.0;  ///< per-contact infection probability
    double p_q = 0.0;     ///< probability of severe illness
    double beta = 0.0;    ///< recovery rate
    double v = 0.0;       ///< vaccination coverage
    double gamma_t = 0.0; ///< vaccine effectiveness against transmission
    double gamma_q = 0.0; ///< vaccine effectiveness against severe illness
    double eta = 0.0;     ///< NPI effectiveness
    double c_t = 0.0;     ///< testing rate

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Raised when a parameter lies outside its admissible range.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Returns `params` unchanged if all ranges hold, otherwise throws
/// ValidationError naming the first offending field.
ModelParams validate(const ModelParams& params);

/// Control-adjusted quantities shared by every engine.
struct EffectiveRates {
    double lambda_eff = 0.0; ///< lambda (1 - eta)(1 - gamma_t v)
    double p_severe = 0.0;   ///< p_q (1 - gamma_q v)
    double pair_rate = 0.0;  ///< 2 lambda_eff (1 - sigma)
};

EffectiveRates effective_rates(const ModelParams& params);

enum class HealthState : std::uint8_t { S = 0, I = 1, Q = 2 };

/// Population fractions, or per-individual probabilities, over S/I/Q.
/// Also used for their time derivatives.
struct MacroState {
    double s = 0.0;
    double i = 0.0;
    double q = 0.0;

    double sum() const noexcept { return s + i + q; }

    friend bool operator==(const MacroState&, const MacroState&) = default;
};

/// Largest absolute componentwise difference.
double max_norm_diff(const MacroState& a, const MacroState& b) noexcept;
double max_norm(const MacroState& a) noexcept;

/// Clamps negative components to zero and rescales onto the simplex.
/// Returns the magnitude of the largest clamp applied.
double project_to_simplex(MacroState& state) noexcept;

/// Parameter names in the order they appear in config files.
inline constexpr std::string_view kParamKeys[] = {
    "n", "sigma", "lambda", "p_q", "beta", "v", "gamma_t", "gamma_q", "eta", "c_t"};

/// Mutable access to a real-valued parameter by its config key. Throws
/// std::out_of_range for unknown keys and for "n".
double& param_ref(ModelParams& params, std::string_view key);
double param_value(const ModelParams& params, std::string_view key);

} // namespace siq
