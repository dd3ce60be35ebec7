#include "siq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace siq {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,y_s,y_i,y_q\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const MacroState& x = traj.states[k];
        out += format_number(traj.times[k]) + ',' + format_number(x.s) + ',' + format_number(x.i) + ',' +
               format_number(x.q) + '\n';
    }
    return out;
}

std::string ensemble_csv(const EnsembleSummary& e) {
    std::string out = "t,mean_s,mean_i,mean_q,sd_s,sd_i,sd_q\n";
    for (std::size_t k = 0; k < e.times.size(); ++k) {
        const MacroState& m = e.mean[k];
        const MacroState& sd = e.sd[k];
        out += format_number(e.times[k]);
        for (double v : {m.s, m.i, m.q, sd.s, sd.i, sd.q}) out += ',' + format_number(v);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepConfig& config, std::span<const SweepRow> rows) {
    std::string out = config.x.param + ',' + config.y.param + ",quantity,value\n";
    for (const SweepRow& r : rows) {
        out += format_number(r.x) + ',' + format_number(r.y) + ',' + std::string(quantity_tag(r.quantity)) +
               ',' + format_number(r.value) + '\n';
    }
    return out;
}

std::string convergence_csv(std::span<const ConvergenceRow> rows) {
    std::string out = "n,seeds,sup_deviation\n";
    for (const ConvergenceRow& r : rows) {
        out += std::to_string(r.n) + ',' + std::to_string(r.seeds) + ',' + format_number(r.sup_deviation) + '\n';
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write to '" + path + "' failed");
}

} // namespace siq
