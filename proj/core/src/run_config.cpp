#include "splashwave/run_config.hpp"

#include <sstream>

namespace splashwave {

namespace {

[[noreturn]] void bad_line(int line, const std::string& what) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) bad_line(line, "trailing characters in number '" + v + "'");
        return d;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad_line(line, "expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& v, int line) {
    try {
        size_t pos = 0;
        int i = std::stoi(v, &pos);
        if (pos != v.size()) bad_line(line, "trailing characters in integer '" + v + "'");
        return i;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad_line(line, "expected an integer, got '" + v + "'");
    }
}

std::vector<double> parse_table(const std::string& v, int line) {
    std::vector<double> out;
    std::istringstream iss(v);
    std::string tok;
    while (iss >> tok) out.push_back(parse_double(tok, line));
    return out;
}

ParsedRun parse_impl(const std::string& text, bool accept_preset_keys) {
    ParsedRun run;
    std::istringstream stream(text);
    std::string raw;
    int line = 0;
    while (std::getline(stream, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string entry = trim(raw);
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos) bad_line(line, "expected 'key = value'");
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (key.empty() || value.empty()) bad_line(line, "empty key or value");

        RunConfig& c = run.config;
        if (key == "n") {
            c.n = parse_int(value, line);
        } else if (key == "dt") {
            c.dt = parse_double(value, line);
        } else if (key == "t_final") {
            c.t_final = parse_double(value, line);
        } else if (key == "formulation") {
            if (value == "bhl") c.formulation = Formulation::bhl;
            else if (value == "omega_form") c.formulation = Formulation::omega_form;
            else bad_line(line, "formulation must be bhl or omega_form");
        } else if (key == "omega_gauge") {
            if (value == "bhl_c_zero") c.omega_gauge = OmegaGauge::bhl_c_zero;
            else if (value == "length_preserving") c.omega_gauge = OmegaGauge::length_preserving;
            else bad_line(line, "omega_gauge must be bhl_c_zero or length_preserving");
        } else if (key == "direction") {
            if (value == "forward") c.direction = TimeDirection::forward;
            else if (value == "reversed") c.direction = TimeDirection::reversed;
            else bad_line(line, "direction must be forward or reversed");
        } else if (key == "filter_threshold") {
            c.filter_threshold = parse_double(value, line);
        } else if (key == "snapshot_stride") {
            c.snapshot_stride = parse_int(value, line);
        } else if (key == "solver_method") {
            if (value == "krylov") c.solver.method = SolveMethod::krylov;
            else if (value == "fixed_point") c.solver.method = SolveMethod::fixed_point;
            else bad_line(line, "solver_method must be krylov or fixed_point");
        } else if (key == "solver_tolerance") {
            c.solver.residual_tolerance = parse_double(value, line);
        } else if (key == "solver_max_iterations") {
            c.solver.max_iterations = parse_int(value, line);
        } else if (accept_preset_keys && key == "preset") {
            run.preset = preset_from_name(value);
        } else if (accept_preset_keys && key == "custom_z1_sin") {
            run.preset.z1_sin = parse_table(value, line);
        } else if (accept_preset_keys && key == "custom_z2_cos") {
            run.preset.z2_cos = parse_table(value, line);
        } else if (accept_preset_keys && key == "custom_psi_cos") {
            run.preset.psi_cos = parse_table(value, line);
        } else {
            bad_line(line, "unknown key '" + key + "'");
        }
    }
    run.config.check_valid();
    return run;
}

}  // namespace

RunConfig parse_config(const std::string& text) { return parse_impl(text, true).config; }

ParsedRun parse_run_file(const std::string& text) { return parse_impl(text, true); }

std::string format_config(const RunConfig& c, const PresetSpec& preset) {
    std::ostringstream os;
    os.precision(17);
    os << "n = " << c.n << "\n";
    os << "dt = " << c.dt << "\n";
    os << "t_final = " << c.t_final << "\n";
    os << "formulation = " << (c.formulation == Formulation::bhl ? "bhl" : "omega_form") << "\n";
    os << "omega_gauge = "
       << (c.omega_gauge == OmegaGauge::bhl_c_zero ? "bhl_c_zero" : "length_preserving") << "\n";
    os << "direction = " << (c.direction == TimeDirection::forward ? "forward" : "reversed")
       << "\n";
    os << "filter_threshold = " << c.filter_threshold << "\n";
    os << "snapshot_stride = " << c.snapshot_stride << "\n";
    os << "solver_method = "
       << (c.solver.method == SolveMethod::krylov ? "krylov" : "fixed_point") << "\n";
    os << "solver_tolerance = " << c.solver.residual_tolerance << "\n";
    os << "solver_max_iterations = " << c.solver.max_iterations << "\n";
    os << "preset = " << preset_name(preset.id) << "\n";
    auto table = [&os](const char* key, const std::vector<double>& t) {
        if (t.empty()) return;
        os << key << " =";
        for (double v : t) os << " " << v;
        os << "\n";
    };
    table("custom_z1_sin", preset.z1_sin);
    table("custom_z2_cos", preset.z2_cos);
    table("custom_psi_cos", preset.psi_cos);
    return os.str();
}

}  // namespace splashwave
