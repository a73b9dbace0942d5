#include "crowdsim/harness/report.hpp"

#include "crowdsim/errors.hpp"

#include <cstdio>
#include <fstream>

namespace crowdsim::harness {

namespace {

constexpr const char* kEvacHeader =
    "mode,scenario,strategy,point_index,seed,run_seed,aggregate,n_runs,"
    "avg_v,avg_n,ratio,avg_all,g1,g2,g3,g4,censored,"
    "avg_v_sd,avg_n_sd,ratio_sd,avg_all_sd,error";

constexpr const char* kStageHeader =
    "mode,map,pn,brf,pt,st,si,point_index,seed,run_seed,aggregate,n_runs,"
    "f,aps,switch_count,f_sd,aps_sd,switch_count_sd,error";

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// Counts (gate times, censored, switch counts) print as integers on run
// rows and as 4-decimal means on aggregate rows.
std::string count_field(double v, bool aggregate) {
    if (aggregate) return fixed4(v);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(v));
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void append_common_tail(std::string& line, const RunReport& r) {
    line += ',';
    line += csv_escape(r.error);
    line += '\n';
}

std::string render_row(const RunReport& r) {
    std::string line = to_string(r.mode);
    line += ',';
    if (r.mode == Mode::Evac) {
        line += r.scenario + ',' + r.strategy + ',';
    } else {
        line += r.map + ',' + std::to_string(r.pn) + ',' + std::to_string(r.brf) + ',' +
                std::to_string(r.pt) + ',' + std::to_string(r.st) + ',' + std::to_string(r.si) +
                ',';
    }
    line += std::to_string(r.point_index) + ',';
    line += (r.seed ? std::to_string(*r.seed) : "") + ',';
    line += (r.run_seed ? std::to_string(*r.run_seed) : "") + ',';
    line += (r.aggregate ? "1" : "0");
    line += ',' + std::to_string(r.n_runs);

    if (r.mode == Mode::Evac) {
        if (r.evac) {
            const auto& m = *r.evac;
            line += ',' + fixed4(m.avg_vulnerable) + ',' + fixed4(m.avg_normal) + ',' +
                    fixed4(m.ratio) + ',' + fixed4(m.avg_all);
            for (const double g : m.gate_time) line += ',' + count_field(g, r.aggregate);
            line += ',' + count_field(m.censored, r.aggregate);
        } else {
            line += ",,,,,,,,,";
        }
        if (r.evac_sd) {
            const auto& s = *r.evac_sd;
            line += ',' + fixed4(s.avg_vulnerable) + ',' + fixed4(s.avg_normal) + ',' +
                    fixed4(s.ratio) + ',' + fixed4(s.avg_all);
        } else {
            line += ",,,,";
        }
    } else {
        if (r.stage) {
            const auto& m = *r.stage;
            line += ',' + fixed4(m.frequency) + ',' + fixed4(m.aps) + ',' +
                    count_field(m.switch_count, r.aggregate);
        } else {
            line += ",,,";
        }
        if (r.stage_sd) {
            const auto& s = *r.stage_sd;
            line += ',' + fixed4(s.frequency) + ',' + fixed4(s.aps) + ',' +
                    fixed4(s.switch_count);
        } else {
            line += ",,,";
        }
    }
    append_common_tail(line, r);
    return line;
}

} // namespace

std::string render_report(const std::vector<RunReport>& rows) {
    if (rows.empty()) throw Error("render_report: no rows");
    std::string out = rows.front().mode == Mode::Evac ? kEvacHeader : kStageHeader;
    out += '\n';
    for (const auto& r : rows) out += render_row(r);
    return out;
}

void write_report(const std::vector<RunReport>& rows, const std::string& path) {
    const std::string text = render_report(rows);  // throws before any file is created
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_report: cannot open '" + path + "'");
    out << text;
    if (!out) throw Error("write_report: write to '" + path + "' failed");
}

} // namespace crowdsim::harness
