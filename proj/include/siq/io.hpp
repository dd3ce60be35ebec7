#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "siq/experiments.hpp"
#include "siq/stochastic.hpp"
#include "siq/trajectory.hpp"

namespace siq {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// "%.17g": enough digits to reproduce every double exactly.
std::string format_number(double x);

/// Header t,y_s,y_i,y_q.
std::string trajectory_csv(const Trajectory& traj);

/// Header t,mean_s,mean_i,mean_q,sd_s,sd_i,sd_q.
std::string ensemble_csv(const EnsembleSummary& summary);

/// Header <x param>,<y param>,quantity,value.
std::string sweep_csv(const SweepConfig& config, std::span<const SweepRow> rows);

/// Header n,seeds,sup_deviation.
std::string convergence_csv(std::span<const ConvergenceRow> rows);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace siq
