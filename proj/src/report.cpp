#include "wallflux/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wallflux/error.hpp"

namespace wallflux {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvTable::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += columns[i];
        out += (i + 1 < columns.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    return out;
}

void CsvTable::write(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write " + path);
    f << to_string();
}

CsvTable pairings_table(const std::vector<PairingValue>& pairings) {
    CsvTable t;
    t.columns = {"id", "op",       "field",    "section", "extension", "nu",
                 "h",  "ell",      "value",    "advective", "pressure",
                 "quad_error"};
    for (const auto& p : pairings)
        t.add_row({p.id, p.op, p.field_id, p.section_id, p.extension, fmt_double(p.nu),
                   fmt_double(p.h), fmt_double(p.ell), fmt_double(p.value),
                   fmt_double(p.advective), fmt_double(p.pressure), fmt_double(p.quad_error)});
    return t;
}

CsvTable identities_table(const std::vector<IdentityResidual>& identities) {
    CsvTable t;
    t.columns = {"id",           "op",          "field",     "section",
                 "left",         "right",       "abs_residual", "abs_residual_base",
                 "rel_residual", "left_err",    "right_err",  "tolerance",
                 "verdict"};
    for (const auto& r : identities)
        t.add_row({r.id, r.op, r.field_id, r.section_id, fmt_double(r.left),
                   fmt_double(r.right), fmt_double(r.abs_residual),
                   fmt_double(r.abs_residual_base), fmt_double(r.rel_residual),
                   fmt_double(r.left_err), fmt_double(r.right_err), fmt_double(r.tolerance),
                   r.pass ? "pass" : "fail"});
    return t;
}

namespace {

nlohmann::json table_json(const CsvTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i)
            obj[t.columns[i]] = row[i];
        rows.push_back(obj);
    }
    return rows;
}

}  // namespace

nlohmann::json ReportDocument::to_json() const {
    nlohmann::json j;
    j["tool"] = kToolVersion;
    j["schema_version"] = 1;
    j["command"] = command;
    j["config"] = config_echo;
    j["all_pass"] = all_pass;
    j["elapsed_seconds"] = elapsed_seconds;
    j["pairings"] = table_json(pairings_table(pairings));
    j["identities"] = table_json(identities_table(identities));
    j["sweep_points"] = table_json(sweep_points);
    j["rate_fits"] = table_json(rate_fits);
    j["curves"] = table_json(curves);
    return j;
}

void ReportDocument::write(const std::string& out_dir) const {
    std::filesystem::create_directories(out_dir);
    pairings_table(pairings).write(out_dir + "/pairings.csv");
    identities_table(identities).write(out_dir + "/identities.csv");
    sweep_points.write(out_dir + "/sweeps.csv");
    rate_fits.write(out_dir + "/ratefits.csv");
    curves.write(out_dir + "/curves.csv");
    std::ofstream f(out_dir + "/report.json");
    if (!f) throw DataError("cannot write report.json");
    f << to_json().dump(2) << "\n";
}

}  // namespace wallflux
