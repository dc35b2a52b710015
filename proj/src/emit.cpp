#include "ailc/emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "ailc/errors.hpp"

namespace ailc {

namespace {

using nlohmann::json;

// Shortest-exact is not needed; 17 significant digits always round-trip.
void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

json rows_json(const std::vector<IterationTrace>& traces) {
    json rows = json::array();
    for (const IterationTrace& trace : traces)
        for (const TraceRow& row : trace.rows) {
            json r;
            r["k"] = trace.k;
            r["t"] = row.t;
            r["x"] = row.x_next;
            r["r"] = row.r;
            r["e"] = row.e;
            r["u"] = row.u;
            r["epsilon"] = row.epsilon;
            r["a"] = row.a;
            r["w_hat"] = row.w_hat;
            rows.push_back(std::move(r));
        }
    return rows;
}

json finite_or_null(double v) {
    if (std::isfinite(v)) return json(v);
    return json(nullptr);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string csv_text(const std::vector<IterationTrace>& traces) {
    std::string out = "k,t,x,r,e,u,epsilon,a,w_hat\n";
    for (const IterationTrace& trace : traces)
        for (const TraceRow& row : trace.rows) {
            out += std::to_string(trace.k);
            out += ',';
            out += std::to_string(row.t);
            const double values[] = {row.x_next, row.r,       row.e,
                                     row.u,      row.epsilon, row.a,
                                     row.w_hat};
            for (double v : values) {
                out += ',';
                append_double(out, v);
            }
            out += '\n';
        }
    return out;
}

std::string json_rows_text(const std::vector<IterationTrace>& traces) {
    return rows_json(traces).dump(2) + "\n";
}

std::string summary_json_text(const ScenarioResult& result) {
    json doc;
    doc["scenario"] = result.config.name;
    doc["wall_ms"] = result.wall_ms;
    doc["config"] = json::parse(config_echo_json(result.config));

    json runs = json::array();
    for (const ScenarioRun& run : result.runs) {
        json r;
        r["controller"] = run.controller;
        r["channel"] = run.channel;
        r["iterations"] = run.traces.size();
        json max_err = json::array(), avg_err = json::array();
        for (const IterationTrace& trace : run.traces) {
            max_err.push_back(trace.max_err);
            avg_err.push_back(trace.avg_err);
        }
        r["max_err"] = std::move(max_err);
        r["avg_err"] = std::move(avg_err);
        if (!run.traces.empty()) {
            r["final_max_err"] = run.traces.back().max_err;
            r["final_avg_err"] = run.traces.back().avg_err;
        }
        if (run.controller == "ailc")
            r["containment_violation"] = finite_or_null(run.containment_violation);
        r["disturbance_sup"] = run.disturbance_sup;
        json theta = json::array();
        for (const Vector& th : run.theta_final) {
            json one = json::array();
            for (Eigen::Index i = 0; i < th.size(); ++i) one.push_back(th(i));
            theta.push_back(std::move(one));
        }
        r["theta_final"] = std::move(theta);
        r["w_hat_final"] = run.w_hat_final;
        runs.push_back(std::move(r));
    }
    doc["runs"] = std::move(runs);
    return doc.dump(2) + "\n";
}

std::vector<std::string> emit_results(const ScenarioResult& result, const std::string& out_dir,
                                      EmitFormat format) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    std::vector<std::string> written;
    for (const ScenarioRun& run : result.runs) {
        int same_controller = 0;
        for (const ScenarioRun& other : result.runs)
            if (other.controller == run.controller) ++same_controller;
        std::string stem = result.config.name + "_" + run.controller;
        if (same_controller > 1) stem += "_ch" + std::to_string(run.channel);
        const fs::path path =
            fs::path(out_dir) / (stem + (format == EmitFormat::csv ? ".csv" : ".json"));
        write_file(path, format == EmitFormat::csv ? csv_text(run.traces)
                                                   : json_rows_text(run.traces));
        written.push_back(path.string());
    }

    const fs::path summary = fs::path(out_dir) / (result.config.name + "_summary.json");
    write_file(summary, summary_json_text(result));
    written.push_back(summary.string());
    return written;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::size_t pos = text.find('\n');
    if (pos == std::string::npos) throw IoError("csv: missing header line");
    if (text.substr(0, pos) != "k,t,x,r,e,u,epsilon,a,w_hat")
        throw IoError("csv: unexpected header '" + text.substr(0, pos) + "'");
    ++pos;

    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;

        double field[9];
        const char* s = line.c_str();
        char* next = nullptr;
        for (int i = 0; i < 9; ++i) {
            field[i] = std::strtod(s, &next);
            if (next == s) throw IoError("csv: malformed row '" + line + "'");
            s = next;
            if (i < 8) {
                if (*s != ',') throw IoError("csv: malformed row '" + line + "'");
                ++s;
            }
        }
        if (*s != '\0') throw IoError("csv: trailing characters in row '" + line + "'");
        CsvRow row;
        row.k = static_cast<int>(field[0]);
        row.t = static_cast<int>(field[1]);
        row.x = field[2];
        row.r = field[3];
        row.e = field[4];
        row.u = field[5];
        row.epsilon = field[6];
        row.a = field[7];
        row.w_hat = field[8];
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ailc
