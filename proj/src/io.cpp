#include "rmhd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rmhd {

using nlohmann::json;

namespace {

PrimitiveState primitive_from_array(const json& arr, const char* key) {
    if (!arr.is_array() || arr.size() != 8)
        fail(Errc::config_error, std::string(key) + " must be an 8-element array");
    PrimitiveState v;
    v.rho = arr[0].get<double>();
    v.v = {arr[1].get<double>(), arr[2].get<double>(), arr[3].get<double>()};
    v.B = {arr[4].get<double>(), arr[5].get<double>(), arr[6].get<double>()};
    v.p = arr[7].get<double>();
    return v;
}

} // namespace

RunConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(Errc::config_error, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) fail(Errc::config_error, "config must be a JSON object");

    RunConfig c;
    try {
        if (!j.contains("preset")) fail(Errc::config_error, "missing key 'preset'");
        c.preset = preset_from_string(j.at("preset").get<std::string>());
        if (j.contains("scheme")) c.scheme = scheme_from_string(j.at("scheme").get<std::string>());
        if (j.contains("n_cells")) c.n_cells = j.at("n_cells").get<int>();
        if (j.contains("nx")) c.nx = j.at("nx").get<int>();
        if (j.contains("ny")) c.ny = j.at("ny").get<int>();
        if (j.contains("cfl")) c.cfl = j.at("cfl").get<double>();
        if (j.contains("t_final")) c.t_final = j.at("t_final").get<double>();
        if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("cells")) c.cells = j.at("cells").get<std::vector<int>>();
        if (j.contains("rotor_alpha")) c.rotor_alpha = j.at("rotor_alpha").get<double>();
        if (j.contains("blast_b")) c.blast_b = j.at("blast_b").get<double>();
        if (j.contains("eps")) {
            const auto& eps = j.at("eps");
            if (eps.is_string()) {
                if (eps.get<std::string>() != "off")
                    fail(Errc::config_error, "eps must be a number or \"off\"");
                c.limiter_enabled = false;
            } else {
                c.eps = eps.get<double>();
                if (!(c.eps > 0.0)) fail(Errc::config_error, "eps must be positive");
            }
        }
        if (c.preset == Preset::custom) {
            c.custom_left = primitive_from_array(j.at("left"), "left");
            c.custom_right = primitive_from_array(j.at("right"), "right");
            if (j.contains("x_split")) c.custom_split = j.at("x_split").get<double>();
            if (j.contains("x_min")) c.custom_x_min = j.at("x_min").get<double>();
            if (j.contains("x_max")) c.custom_x_max = j.at("x_max").get<double>();
        }
    } catch (const json::exception& e) {
        fail(Errc::config_error, std::string("bad config value: ") + e.what());
    }

    if (c.n_cells < 4 || c.nx < 4 || c.ny < 4)
        fail(Errc::config_error, "mesh must have at least 4 cells per direction");
    if (!(c.cfl > 0.0)) fail(Errc::config_error, "cfl must be positive");
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::config_error, "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(Errc::config_error, "cannot open output file '" + path + "'");
    return out;
}

void write_state_row(std::ofstream& out, const ConservedState& u, const PrimitiveState& v) {
    out << format17(v.rho) << ',' << format17(v.v.x) << ',' << format17(v.v.y) << ','
        << format17(v.v.z) << ',' << format17(v.B.x) << ',' << format17(v.B.y) << ','
        << format17(v.B.z) << ',' << format17(v.p) << ',' << format17(u.D) << ','
        << format17(u.m.x) << ',' << format17(u.m.y) << ',' << format17(u.m.z) << ','
        << format17(u.E) << '\n';
}

} // namespace

void write_snapshot_csv(const std::string& path, const Grid1D& grid, const Eos& eos) {
    auto out = open_out(path);
    out << "x,rho,v1,v2,v3,B1,B2,B3,p,D,m1,m2,m3,E\n";
    for (int j = 0; j < grid.n_cells; ++j) {
        const auto rec = recover_primitives(grid.cell(j), eos);
        out << format17(grid.x_center(j)) << ',';
        write_state_row(out, grid.cell(j), rec.primitives);
    }
}

void write_step_log_csv(const std::string& path, const std::vector<StepLogRow1D>& log) {
    auto out = open_out(path);
    out << "step,t,dt,min_rho,min_p,max_abs_v,limiter_activations\n";
    for (const auto& row : log)
        out << row.step << ',' << format17(row.t) << ',' << format17(row.dt) << ','
            << format17(row.min_rho) << ',' << format17(row.min_p) << ','
            << format17(row.max_abs_v) << ',' << row.limiter_activations << '\n';
}

void write_snapshot_csv(const std::string& path, const Grid2D& grid, const Eos& eos) {
    auto out = open_out(path);
    out << "i,j,x,y,rho,v1,v2,v3,B1,B2,B3,p,D,m1,m2,m3,E\n";
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const auto rec = recover_primitives(grid.cell(i, j), eos);
            out << i << ',' << j << ',' << format17(grid.x_center(i)) << ','
                << format17(grid.y_center(j)) << ',';
            write_state_row(out, grid.cell(i, j), rec.primitives);
        }
}

void write_step_log_csv(const std::string& path, const std::vector<StepLogRow2D>& log) {
    auto out = open_out(path);
    out << "step,t,e_inf,min_rho,min_p,max_lorentz\n";
    for (const auto& row : log)
        out << row.step << ',' << format17(row.t) << ',' << format17(row.e_inf) << ','
            << format17(row.min_rho) << ',' << format17(row.min_p) << ','
            << format17(row.max_lorentz) << '\n';
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
    auto out = open_out(path);
    out << "n_cells,l1_error,l2_error,l1_order,l2_order\n";
    for (size_t k = 0; k < rows.size(); ++k) {
        out << rows[k].n_cells << ',' << format17(rows[k].l1) << ',' << format17(rows[k].l2);
        if (k == 0)
            out << ",,\n";
        else
            out << ',' << format17(rows[k].order_l1) << ',' << format17(rows[k].order_l2) << '\n';
    }
}

void write_verify_report_json(const std::string& path, const std::vector<TrialReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back({{"name", r.name},
                       {"trials", r.trials},
                       {"failures", r.failures},
                       {"worst_margin", r.worst_margin},
                       {"seed", r.seed},
                       {"allowed_failures", r.allowed_failures},
                       {"passed", r.passed()}});
    }
    auto out = open_out(path);
    out << arr.dump(2) << '\n';
}

} // namespace rmhd
