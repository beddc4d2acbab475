#include "splashwave/snapshot_io.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace splashwave {

namespace {

using nlohmann::json;

json curve_to_json(const PeriodicCurve& c) {
    return json{{"kind", c.kind == CurveKind::tilde_closed ? "tilde_closed" : "physical_periodic"},
                {"x", c.x},
                {"y", c.y}};
}

PeriodicCurve curve_from_json(const json& j) {
    PeriodicCurve c;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "tilde_closed") c.kind = CurveKind::tilde_closed;
    else if (kind == "physical_periodic") c.kind = CurveKind::physical_periodic;
    else throw Error(Errc::SchemaMismatch, "unknown curve kind '" + kind + "'");
    c.x = j.at("x").get<std::vector<double>>();
    c.y = j.at("y").get<std::vector<double>>();
    return c;
}

// JSON cannot carry inf/nan numerically; non-finite diagnostics (e.g. the
// q-distance of an identity-map run) are stored as strings.
json finite_or_tag(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0.0 ? "inf" : "-inf";
}

double tagged_double(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw Error(Errc::SchemaMismatch, "unexpected tagged number '" + s + "'");
    }
    return j.get<double>();
}

json diag_to_json(const StepDiagnostics& d) {
    return json{{"time", d.time},
                {"fourier_tail", d.fourier_tail},
                {"arc_chord", d.arc_chord},
                {"min_q_distance", finite_or_tag(d.min_q_distance)},
                {"min_gap", d.min_gap},
                {"graph_margin", finite_or_tag(d.graph_margin)}};
}

StepDiagnostics diag_from_json(const json& j) {
    StepDiagnostics d;
    d.time = j.at("time").get<double>();
    d.fourier_tail = j.at("fourier_tail").get<double>();
    d.arc_chord = j.at("arc_chord").get<double>();
    d.min_q_distance = tagged_double(j.at("min_q_distance"));
    d.min_gap = j.at("min_gap").get<double>();
    d.graph_margin = tagged_double(j.at("graph_margin"));
    return d;
}

json config_to_json(const RunConfig& c) {
    return json{{"n", c.n},
                {"dt", c.dt},
                {"t_final", c.t_final},
                {"formulation", c.formulation == Formulation::bhl ? "bhl" : "omega_form"},
                {"omega_gauge", c.omega_gauge == OmegaGauge::bhl_c_zero ? "bhl_c_zero"
                                                                        : "length_preserving"},
                {"direction",
                 c.direction == TimeDirection::forward ? "forward" : "reversed"},
                {"filter_threshold", c.filter_threshold},
                {"snapshot_stride", c.snapshot_stride},
                {"solver_method",
                 c.solver.method == SolveMethod::krylov ? "krylov" : "fixed_point"},
                {"solver_tolerance", c.solver.residual_tolerance},
                {"solver_max_iterations", c.solver.max_iterations}};
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.n = j.at("n").get<int>();
    c.dt = j.at("dt").get<double>();
    c.t_final = j.at("t_final").get<double>();
    c.formulation = j.at("formulation").get<std::string>() == "bhl" ? Formulation::bhl
                                                                    : Formulation::omega_form;
    c.omega_gauge = j.at("omega_gauge").get<std::string>() == "bhl_c_zero"
                        ? OmegaGauge::bhl_c_zero
                        : OmegaGauge::length_preserving;
    c.direction = j.at("direction").get<std::string>() == "forward" ? TimeDirection::forward
                                                                    : TimeDirection::reversed;
    c.filter_threshold = j.at("filter_threshold").get<double>();
    c.snapshot_stride = j.at("snapshot_stride").get<int>();
    c.solver.method = j.at("solver_method").get<std::string>() == "krylov"
                          ? SolveMethod::krylov
                          : SolveMethod::fixed_point;
    c.solver.residual_tolerance = j.at("solver_tolerance").get<double>();
    c.solver.max_iterations = j.at("solver_max_iterations").get<int>();
    return c;
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IOFailure, "cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, path.string() + ": " + e.what());
    }
    return j;
}

void store_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IOFailure, "cannot write " + path.string());
    out << j.dump(1, '\t') << "\n";
    if (!out) throw Error(Errc::IOFailure, "short write to " + path.string());
}

std::filesystem::path snapshot_path(const std::filesystem::path& dir, int index) {
    char name[32];
    std::snprintf(name, sizeof(name), "snapshot_%06d.json", index);
    return dir / name;
}

}  // namespace

void save_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    json j{{"schema_version", kSnapshotSchemaVersion},
           {"time", snap.time},
           {"n", snap.tilde.size()},
           {"tilde", curve_to_json(snap.tilde)},
           {"physical", curve_to_json(snap.physical)},
           {"omega", snap.omega},
           {"phi", snap.phi},
           {"diagnostics", diag_to_json(snap.diag)}};
    store_json(path, j);
}

Snapshot load_snapshot(const std::filesystem::path& path) {
    const json j = load_json(path);
    if (!j.contains("schema_version") ||
        j.at("schema_version").get<int>() != kSnapshotSchemaVersion)
        throw Error(Errc::SchemaMismatch, "unsupported snapshot schema in " + path.string());
    Snapshot snap;
    snap.time = j.at("time").get<double>();
    snap.tilde = curve_from_json(j.at("tilde"));
    snap.physical = curve_from_json(j.at("physical"));
    snap.omega = j.at("omega").get<std::vector<double>>();
    snap.phi = j.at("phi").get<std::vector<double>>();
    snap.diag = diag_from_json(j.at("diagnostics"));
    return snap;
}

void save_trajectory(const std::filesystem::path& dir, const Trajectory& traj,
                     const PresetSpec& preset) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::IOFailure, "cannot create " + dir.string());

    json meta{{"schema_version", kSnapshotSchemaVersion},
              {"config", config_to_json(traj.config)},
              {"preset", preset_name(preset.id)},
              {"gauge", traj.gauge == OmegaGauge::bhl_c_zero ? "bhl_c_zero"
                                                             : "length_preserving"},
              {"abort_cause", traj.abort_cause},
              {"snapshot_count", traj.snapshots.size()}};
    store_json(dir / "run.json", meta);

    for (size_t i = 0; i < traj.snapshots.size(); ++i)
        save_snapshot(snapshot_path(dir, static_cast<int>(i)), traj.snapshots[i]);

    std::ostringstream csv;
    csv.precision(17);
    csv << "time,fourier_tail,arc_chord,min_q_distance,min_gap,graph_margin\n";
    for (const StepDiagnostics& d : traj.steps)
        csv << d.time << ',' << d.fourier_tail << ',' << d.arc_chord << ',' << d.min_q_distance
            << ',' << d.min_gap << ',' << d.graph_margin << '\n';
    write_text_file(dir / "diagnostics.csv", csv.str());
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
    const json meta = load_json(dir / "run.json");
    if (!meta.contains("schema_version") ||
        meta.at("schema_version").get<int>() != kSnapshotSchemaVersion)
        throw Error(Errc::SchemaMismatch, "unsupported trajectory schema in " + dir.string());

    Trajectory traj;
    traj.config = config_from_json(meta.at("config"));
    traj.gauge = meta.at("gauge").get<std::string>() == "bhl_c_zero"
                     ? OmegaGauge::bhl_c_zero
                     : OmegaGauge::length_preserving;
    traj.abort_cause = meta.at("abort_cause").get<std::string>();
    const int count = meta.at("snapshot_count").get<int>();
    traj.snapshots.reserve(count);
    for (int i = 0; i < count; ++i)
        traj.snapshots.push_back(load_snapshot(snapshot_path(dir, i)));

    const auto csv_path = dir / "diagnostics.csv";
    if (std::filesystem::exists(csv_path)) {
        std::istringstream in(read_text_file(csv_path));
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::array<double, 6> v{};
            size_t pos = 0;
            for (int col = 0; col < 6; ++col) {
                const size_t end = col < 5 ? line.find(',', pos) : line.size();
                if (end == std::string::npos)
                    throw Error(Errc::ParseError, "malformed diagnostics row: " + line);
                char* tail = nullptr;
                const std::string tok = line.substr(pos, end - pos);
                v[col] = std::strtod(tok.c_str(), &tail);  // strtod handles inf/nan
                if (tail == tok.c_str())
                    throw Error(Errc::ParseError, "malformed diagnostics row: " + line);
                pos = end + 1;
            }
            traj.steps.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
        }
    }
    return traj;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IOFailure, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::IOFailure, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(Errc::IOFailure, "short write to " + path.string());
}

}  // namespace splashwave
