#include "siq/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "siq/analysis.hpp"

namespace siq {

std::string_view quantity_tag(Quantity q) noexcept {
    switch (q) {
    case Quantity::CtBar: return "c_t_bar";
    case Quantity::Xi: return "xi";
    case Quantity::YIStar: return "y_i_star";
    case Quantity::YQStar: return "y_q_star";
    case Quantity::Regime: return "regime";
    }
    return "unknown";
}

Quantity parse_quantity(std::string_view tag) {
    for (Quantity q : {Quantity::CtBar, Quantity::Xi, Quantity::YIStar, Quantity::YQStar, Quantity::Regime}) {
        if (quantity_tag(q) == tag) return q;
    }
    throw ValidationError("quantities", "unknown quantity '" + std::string(tag) + "'");
}

std::vector<double> SweepAxis::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::max(steps, 0)));
    if (steps == 1) {
        out.push_back(min);
        return out;
    }
    for (int k = 0; k < steps; ++k) {
        // Endpoints exactly, interior points by linear interpolation.
        out.push_back(k == steps - 1 ? max : min + (max - min) * k / (steps - 1));
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/* Key/value table that tracks which keys have been consumed. */
class KeyValues {
public:
    explicit KeyValues(std::string_view text) {
        std::size_t line_no = 0;
        while (!text.empty()) {
            ++line_no;
            const auto eol = text.find('\n');
            std::string_view line = text.substr(0, eol);
            text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ValidationError("config", "line " + std::to_string(line_no) + ": expected 'key = value'");
            }
            std::string key(trim(line.substr(0, eq)));
            std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) {
                throw ValidationError("config", "line " + std::to_string(line_no) + ": empty key");
            }
            if (!entries_.emplace(key, value).second) {
                throw ValidationError(key, "duplicate key '" + key + "'");
            }
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        std::string value = std::move(it->second);
        entries_.erase(it);
        return value;
    }

    std::string require(const std::string& key) {
        auto value = take(key);
        if (!value) throw ValidationError(key, "missing required key '" + key + "'");
        return *value;
    }

    void reject_leftovers() const {
        if (!entries_.empty()) {
            const std::string& key = entries_.begin()->first;
            throw ValidationError(key, "unknown key '" + key + "'");
        }
    }

private:
    std::map<std::string, std::string> entries_;
};

double to_double(const std::string& key, std::string_view s) {
    s = trim(s);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError(key, key + ": expected a number, got '" + std::string(s) + "'");
    }
    return value;
}

template <class Int>
Int to_int(const std::string& key, std::string_view s) {
    s = trim(s);
    Int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError(key, key + ": expected an integer, got '" + std::string(s) + "'");
    }
    return value;
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s = s.substr(comma + 1);
    }
    return out;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void read_params(KeyValues& kv, ModelParams& p, const std::vector<std::string>& optional_keys) {
    auto is_optional = [&](std::string_view key) {
        return std::find(optional_keys.begin(), optional_keys.end(), key) != optional_keys.end();
    };
    if (!is_optional("n") || kv.has("n")) p.n = to_int<std::int64_t>("n", kv.require("n"));
    for (std::string_view key : kParamKeys) {
        if (key == "n") continue;
        const std::string k(key);
        if (is_optional(k) && !kv.has(k)) continue;
        param_ref(p, k) = to_double(k, kv.require(k));
    }
}

void write_params(std::ostringstream& os, const ModelParams& p) {
    os << "n = " << p.n << '\n';
    for (std::string_view key : kParamKeys) {
        if (key == "n") continue;
        os << key << " = " << format_double(param_value(p, key)) << '\n';
    }
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& fmt) {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k) out += ", ";
        out += fmt(xs[k]);
    }
    return out;
}

SweepAxis read_axis(KeyValues& kv, const std::string& prefix) {
    SweepAxis axis;
    axis.param = kv.require(prefix);
    axis.min = to_double(prefix + "_min", kv.require(prefix + "_min"));
    axis.max = to_double(prefix + "_max", kv.require(prefix + "_max"));
    axis.steps = to_int<int>(prefix + "_steps", kv.require(prefix + "_steps"));
    return axis;
}

bool is_real_param(std::string_view key) {
    return key != "n" && std::find(std::begin(kParamKeys), std::end(kParamKeys), key) != std::end(kParamKeys);
}

} // namespace

void validate_run_config(const RunConfig& c) {
    validate(c.params);
    if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) {
        throw ValidationError("horizon", "horizon must be positive and finite");
    }
    if (!(c.sampling > 0.0) || !std::isfinite(c.sampling)) {
        throw ValidationError("sampling", "sampling must be positive and finite");
    }
    if (c.seeds.empty()) throw ValidationError("seeds", "seed list is empty");
    for (std::int64_t n : c.n_list) {
        if (n < 2) throw ValidationError("n_list", "population sizes must be at least 2");
    }
    if (const auto* f = std::get_if<MacroState>(&c.init)) {
        if (f->s < 0.0 || f->i < 0.0 || f->q < 0.0 || std::abs(f->sum() - 1.0) > 1e-9) {
            throw ValidationError("init", "init fractions must be non-negative and sum to 1");
        }
    } else {
        const auto& counts = std::get<std::vector<std::int64_t>>(c.init);
        if (counts.size() != 3 || std::any_of(counts.begin(), counts.end(), [](auto x) { return x < 0; }) ||
            counts[0] + counts[1] + counts[2] != c.params.n) {
            throw ValidationError("init_counts", "init_counts must be three non-negative counts summing to n");
        }
    }
}

RunConfig parse_run_config(std::string_view text) {
    KeyValues kv(text);
    RunConfig c;
    read_params(kv, c.params, {});
    if (auto e = kv.take("engine")) c.engine = parse_engine(*e);

    const auto fractions = kv.take("init");
    const auto counts = kv.take("init_counts");
    if (fractions && counts) throw ValidationError("init", "give either init or init_counts, not both");
    if (!fractions && !counts) throw ValidationError("init", "missing required key 'init' (or 'init_counts')");
    if (fractions) {
        const auto parts = split_list(*fractions);
        if (parts.size() != 3) throw ValidationError("init", "init needs three fractions s, i, q");
        c.init = MacroState{to_double("init", parts[0]), to_double("init", parts[1]), to_double("init", parts[2])};
    } else {
        std::vector<std::int64_t> xs;
        for (auto part : split_list(*counts)) xs.push_back(to_int<std::int64_t>("init_counts", part));
        c.init = xs;
    }

    if (auto h = kv.take("horizon")) c.horizon = to_double("horizon", *h);
    if (auto s = kv.take("sampling")) c.sampling = to_double("sampling", *s);
    if (auto s = kv.take("seeds")) {
        c.seeds.clear();
        for (auto part : split_list(*s)) c.seeds.push_back(to_int<std::uint64_t>("seeds", part));
    }
    if (auto s = kv.take("n_list")) {
        for (auto part : split_list(*s)) c.n_list.push_back(to_int<std::int64_t>("n_list", part));
    }
    if (auto o = kv.take("out")) c.out = *o;
    kv.reject_leftovers();
    validate_run_config(c);
    return c;
}

std::string serialize_run_config(const RunConfig& c) {
    std::ostringstream os;
    write_params(os, c.params);
    if (c.engine) os << "engine = " << engine_tag(*c.engine) << '\n';
    if (const auto* f = std::get_if<MacroState>(&c.init)) {
        os << "init = " << format_double(f->s) << ", " << format_double(f->i) << ", " << format_double(f->q) << '\n';
    } else {
        os << "init_counts = "
           << join(std::get<std::vector<std::int64_t>>(c.init), [](auto x) { return std::to_string(x); }) << '\n';
    }
    os << "horizon = " << format_double(c.horizon) << '\n';
    os << "sampling = " << format_double(c.sampling) << '\n';
    os << "seeds = " << join(c.seeds, [](auto x) { return std::to_string(x); }) << '\n';
    if (!c.n_list.empty()) os << "n_list = " << join(c.n_list, [](auto x) { return std::to_string(x); }) << '\n';
    os << "out = " << c.out << '\n';
    return os.str();
}

SweepConfig parse_sweep_config(std::string_view text) {
    KeyValues kv(text);
    SweepConfig c;
    c.x = read_axis(kv, "sweep_x");
    c.y = read_axis(kv, "sweep_y");
    for (const SweepAxis* axis : {&c.x, &c.y}) {
        if (!is_real_param(axis->param)) {
            throw ValidationError("sweep", "cannot sweep '" + axis->param + "': not a real-valued model parameter");
        }
        if (axis->steps < 1) throw ValidationError(axis->param, "sweep steps must be at least 1");
    }
    if (c.x.param == c.y.param) throw ValidationError("sweep", "swept parameters must be distinct");
    read_params(kv, c.base, {c.x.param, c.y.param});
    const std::string quantities = kv.require("quantities");
    for (auto part : split_list(quantities)) c.quantities.push_back(parse_quantity(part));
    if (auto o = kv.take("out")) c.out = *o;
    // Run-only keys are tolerated so one file can drive both commands.
    for (const char* ignored : {"engine", "init", "init_counts", "horizon", "sampling", "seeds", "n_list"}) {
        kv.take(ignored);
    }
    kv.reject_leftovers();

    // Every range is an interval, so validating both corners of the
    // grid validates all of it.
    for (double xv : {c.x.min, c.x.max}) {
        for (double yv : {c.y.min, c.y.max}) {
            ModelParams corner = c.base;
            param_ref(corner, c.x.param) = xv;
            param_ref(corner, c.y.param) = yv;
            validate(corner);
        }
    }
    param_ref(c.base, c.x.param) = c.x.min;
    param_ref(c.base, c.y.param) = c.y.min;
    return c;
}

std::string serialize_sweep_config(const SweepConfig& c) {
    std::ostringstream os;
    write_params(os, c.base);
    for (const auto& [prefix, axis] : {std::pair{"sweep_x", &c.x}, std::pair{"sweep_y", &c.y}}) {
        os << prefix << " = " << axis->param << '\n'
           << prefix << "_min = " << format_double(axis->min) << '\n'
           << prefix << "_max = " << format_double(axis->max) << '\n'
           << prefix << "_steps = " << axis->steps << '\n';
    }
    os << "quantities = " << join(c.quantities, [](Quantity q) { return std::string(quantity_tag(q)); }) << '\n';
    os << "out = " << c.out << '\n';
    return os.str();
}

PopulationCounts init_counts(const RunConfig& c, std::int64_t n) {
    if (const auto* f = std::get_if<MacroState>(&c.init)) return counts_from_fractions(n, *f);
    const auto& xs = std::get<std::vector<std::int64_t>>(c.init);
    if (n == c.params.n) return {xs[0], xs[1], xs[2]};
    return counts_from_fractions(n, PopulationCounts{xs[0], xs[1], xs[2]}.fractions());
}

MacroState init_fractions(const RunConfig& c) {
    if (const auto* f = std::get_if<MacroState>(&c.init)) return *f;
    const auto& xs = std::get<std::vector<std::int64_t>>(c.init);
    return PopulationCounts{xs[0], xs[1], xs[2]}.fractions();
}

} // namespace siq
