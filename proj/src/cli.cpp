// SPDX-License-Identifier: Apache-2.0
#include "risbeam/cli.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

namespace risbeam {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const json& empty_object() {
    static const json e = json::object();
    return e;
}

// Strict view of one JSON object: every key must be consumed.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(label() + ": expected an object");
    }

    Section child(const char* key) {
        used_.insert(key);
        if (!j_.contains(key)) return Section(empty_object(), join(key));
        return Section(j_.at(key), join(key));
    }

    bool has(const char* key) const { return j_.contains(key); }

    double number(const char* key, double def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_number()) throw ConfigError(join(key) + ": expected a number");
        return v->get<double>();
    }

    std::optional<double> optional_number(const char* key) {
        if (!has(key)) {
            used_.insert(key);
            return std::nullopt;
        }
        return number(key, 0.0);
    }

    int integer(const char* key, int def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_number_integer()) throw ConfigError(join(key) + ": expected an integer");
        const auto x = v->get<long long>();
        if (x < -2147483647LL || x > 2147483647LL) throw ConfigError(join(key) + ": integer out of range");
        return static_cast<int>(x);
    }

    std::uint64_t unsigned64(const char* key, std::uint64_t def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_number_unsigned()) throw ConfigError(join(key) + ": expected a non-negative integer");
        return v->get<std::uint64_t>();
    }

    bool boolean(const char* key, bool def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_boolean()) throw ConfigError(join(key) + ": expected true or false");
        return v->get<bool>();
    }

    std::string string(const char* key, const std::string& def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_string()) throw ConfigError(join(key) + ": expected a string");
        return v->get<std::string>();
    }

    std::vector<double> numbers(const char* key, const std::vector<double>& def, std::size_t exact = 0) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_array()) throw ConfigError(join(key) + ": expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : *v) {
            if (!e.is_number()) throw ConfigError(join(key) + ": expected an array of numbers");
            out.push_back(e.get<double>());
        }
        if (exact != 0 && out.size() != exact) {
            throw ConfigError(join(key) + ": expected " + std::to_string(exact) + " numbers");
        }
        return out;
    }

    std::vector<std::string> strings(const char* key, const std::vector<std::string>& def) {
        const json* v = find(key);
        if (!v) return def;
        if (!v->is_array()) throw ConfigError(join(key) + ": expected an array of strings");
        std::vector<std::string> out;
        for (const auto& e : *v) {
            if (!e.is_string()) throw ConfigError(join(key) + ": expected an array of strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    Position3 vec3(const char* key, const Position3& def) {
        if (!has(key)) {
            used_.insert(key);
            return def;
        }
        const auto v = numbers(key, {}, 3);
        return {v[0], v[1], v[2]};
    }

    std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!used_.count(item.key())) throw ConfigError(join(item.key().c_str()) + ": unknown key");
        }
    }

private:
    const json* find(const char* key) {
        used_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    std::string label() const { return path_.empty() ? "document" : path_; }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void read_array(Section& sec, ArraySpec& a, bool is_ris) {
    a.ny = sec.integer("ny", a.ny);
    a.nz = sec.integer("nz", a.nz);
    a.spacing_lambda = sec.number("spacing_lambda", a.spacing_lambda);
    a.center = sec.vec3(is_ris ? "center_m" : "position_m", a.center);
    a.axis_y = sec.vec3("axis_y", a.axis_y);
    a.axis_z = sec.vec3("axis_z", a.axis_z);
}

json vec_json(const Position3& p) { return json::array({p.x(), p.y(), p.z()}); }

json array_json(const ArraySpec& a, bool is_ris) {
    return {{"ny", a.ny},
            {"nz", a.nz},
            {"spacing_lambda", a.spacing_lambda},
            {is_ris ? "center_m" : "position_m", vec_json(a.center)},
            {"axis_y", vec_json(a.axis_y)},
            {"axis_z", vec_json(a.axis_z)}};
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Scenario parse_config(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        const auto pos = what.find(": ", what.find("parse error"));
        if (pos != std::string::npos) what = what.substr(pos + 2);
        throw ConfigError("syntax error at " + line_column(text, e.byte) + ": " + what);
    }
    Scenario s;
    Section root(doc, "");
    s.name = root.string("name", s.name);
    s.seed = root.unsigned64("seed", s.seed);
    s.freq_ghz = root.number("freq_ghz", s.freq_ghz);
    {
        Section sec = root.child("ris");
        read_array(sec, s.ris, true);
        s.unit_cell_area_m2 = sec.optional_number("unit_cell_area_m2");
        sec.finish();
    }
    {
        Section sec = root.child("bs");
        read_array(sec, s.bs, false);
        s.bs_extent_m = sec.vec3("box_m", s.bs_extent_m);
        sec.finish();
    }
    {
        Section sec = root.child("illumination");
        s.u_ilm = sec.vec3("center_m", s.u_ilm);
        const auto size = sec.numbers("size_m", {s.region_x_m, s.region_y_m}, 2);
        s.region_x_m = size[0];
        s.region_y_m = size[1];
        sec.finish();
    }
    {
        Section sec = root.child("targets");
        const std::string r = sec.string("regime", std::string(to_string(s.regime)));
        const auto reg = parse_regime(r);
        if (!reg) throw ConfigError(sec.join("regime") + ": expected \"far\" or \"near\", got \"" + r + "\"");
        s.regime = *reg;
        s.points_per_axis = sec.integer("points_per_axis", s.points_per_axis);
        sec.finish();
    }
    {
        Section sec = root.child("design");
        const std::string m = sec.string("method", std::string(to_string(s.design)));
        const auto d = parse_design(m);
        if (!d) throw ConfigError(sec.join("method") + ": unknown design \"" + m + "\"");
        s.design = *d;
        s.profile_csv = sec.string("profile_csv", s.profile_csv);
        if (!s.profile_csv.empty() && !base_dir.empty() && fs::path(s.profile_csv).is_relative()) {
            s.profile_csv = (fs::path(base_dir) / s.profile_csv).lexically_normal().string();
        }
        sec.finish();
    }
    {
        Section sec = root.child("optimizer");
        ScaParams& p = s.sca;
        p.eta0 = sec.number("eta0", p.eta0);
        p.alpha = sec.number("alpha", p.alpha);
        p.eta_max = sec.number("eta_max", p.eta_max);
        p.max_iters = sec.integer("max_iters", p.max_iters);
        p.rank_tol = sec.number("rank_tol", p.rank_tol);
        p.inner_tol = sec.number("inner_tol", p.inner_tol);
        p.rel_change_tol = sec.number("rel_change_tol", p.rel_change_tol);
        p.keep_best = sec.boolean("keep_best", p.keep_best);
        p.admm_max_iters = sec.integer("admm_max_iters", p.admm_max_iters);
        p.admm_tol = sec.number("admm_tol", p.admm_tol);
        s.random_inits = sec.integer("random_inits", s.random_inits);
        sec.finish();
    }
    if (root.has("scan")) {
        Section sec = root.child("scan");
        ScanGrid g = default_scan(s);
        const auto x = sec.numbers("x_m", {g.x_lo, g.x_hi}, 2);
        const auto y = sec.numbers("y_m", {g.y_lo, g.y_hi}, 2);
        g.x_lo = x[0];
        g.x_hi = x[1];
        g.y_lo = y[0];
        g.y_hi = y[1];
        g.z = sec.number("z_m", g.z);
        g.nx = sec.integer("nx", g.nx);
        g.ny = sec.integer("ny", g.ny);
        sec.finish();
        s.scan = g;
    } else {
        root.child("scan");
    }
    {
        Section sec = root.child("region_sweep");
        s.sweep_r_m = sec.numbers("r_m", s.sweep_r_m);
        sec.finish();
    }
    {
        Section sec = root.child("multipath");
        MultipathSpec& m = s.multipath;
        m.scatterers = sec.integer("scatterers", m.scatterers);
        m.subpaths = sec.integer("subpaths", m.subpaths);
        m.subpath_jitter_m = sec.number("subpath_jitter_m", m.subpath_jitter_m);
        m.ground_z_m = sec.number("ground_z_m", m.ground_z_m);
        m.ground_loss_db = sec.number("ground_loss_db", m.ground_loss_db);
        m.ground_fluctuation_db = sec.number("ground_fluctuation_db", m.ground_fluctuation_db);
        {
            Section box = sec.child("scatterer_box_m");
            m.scatterer_box.lo = box.vec3("lo", m.scatterer_box.lo);
            m.scatterer_box.hi = box.vec3("hi", m.scatterer_box.hi);
            box.finish();
        }
        sec.finish();
    }
    {
        Section sec = root.child("link");
        LinkBudget& l = s.link;
        l.pt_dbm = sec.number("pt_dbm", l.pt_dbm);
        l.bandwidth_hz = sec.number("bandwidth_hz", l.bandwidth_hz);
        l.noise_psd_dbm_hz = sec.number("noise_psd_dbm_hz", l.noise_psd_dbm_hz);
        l.noise_figure_db = sec.number("noise_figure_db", l.noise_figure_db);
        l.direct_blockage_db = sec.number("direct_blockage_db", l.direct_blockage_db);
        l.self_blockage_prob = sec.number("self_blockage_prob", l.self_blockage_prob);
        l.path_loss.h0_db = sec.number("path_loss_h0_db", l.path_loss.h0_db);
        l.path_loss.d0_m = sec.number("path_loss_d0_m", l.path_loss.d0_m);
        l.path_loss.exponent = sec.number("path_loss_exponent", l.path_loss.exponent);
        sec.finish();
    }
    {
        Section sec = root.child("snr");
        SnrSpec& r = s.snr;
        r.k_db = sec.numbers("k_db", r.k_db);
        std::vector<std::string> names;
        for (auto b : r.benchmarks) names.emplace_back(to_string(b));
        names = sec.strings("benchmarks", names);
        r.benchmarks.clear();
        for (const auto& n : names) {
            const auto b = parse_benchmark(n);
            if (!b) throw ConfigError(sec.join("benchmarks") + ": unknown benchmark \"" + n + "\"");
            r.benchmarks.push_back(*b);
        }
        r.trials = sec.integer("trials", r.trials);
        r.v_est = sec.integer("v_est", r.v_est);
        r.full_csi_iters = sec.integer("full_csi_iters", r.full_csi_iters);
        sec.finish();
    }
    {
        Section sec = root.child("regime");
        s.regime_side_m = sec.numbers("side_m", s.regime_side_m);
        sec.finish();
    }
    root.finish();
    try {
        s.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
    return s;
}

std::string dump_config(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["seed"] = s.seed;
    j["freq_ghz"] = s.freq_ghz;
    j["ris"] = array_json(s.ris, true);
    if (s.unit_cell_area_m2) j["ris"]["unit_cell_area_m2"] = *s.unit_cell_area_m2;
    j["bs"] = array_json(s.bs, false);
    j["bs"]["box_m"] = vec_json(s.bs_extent_m);
    j["illumination"] = {{"center_m", vec_json(s.u_ilm)}, {"size_m", {s.region_x_m, s.region_y_m}}};
    j["targets"] = {{"regime", std::string(to_string(s.regime))}, {"points_per_axis", s.points_per_axis}};
    j["design"] = {{"method", std::string(to_string(s.design))}, {"profile_csv", s.profile_csv}};
    const ScaParams& p = s.sca;
    j["optimizer"] = {{"eta0", p.eta0},
                      {"alpha", p.alpha},
                      {"eta_max", p.eta_max},
                      {"max_iters", p.max_iters},
                      {"rank_tol", p.rank_tol},
                      {"inner_tol", p.inner_tol},
                      {"rel_change_tol", p.rel_change_tol},
                      {"keep_best", p.keep_best},
                      {"admm_max_iters", p.admm_max_iters},
                      {"admm_tol", p.admm_tol},
                      {"random_inits", s.random_inits}};
    if (s.scan) {
        const ScanGrid& g = *s.scan;
        j["scan"] = {{"x_m", {g.x_lo, g.x_hi}}, {"y_m", {g.y_lo, g.y_hi}}, {"z_m", g.z}, {"nx", g.nx}, {"ny", g.ny}};
    }
    j["region_sweep"] = {{"r_m", s.sweep_r_m}};
    const MultipathSpec& m = s.multipath;
    j["multipath"] = {{"scatterers", m.scatterers},
                      {"subpaths", m.subpaths},
                      {"subpath_jitter_m", m.subpath_jitter_m},
                      {"ground_z_m", m.ground_z_m},
                      {"ground_loss_db", m.ground_loss_db},
                      {"ground_fluctuation_db", m.ground_fluctuation_db},
                      {"scatterer_box_m", {{"lo", vec_json(m.scatterer_box.lo)}, {"hi", vec_json(m.scatterer_box.hi)}}}};
    const LinkBudget& l = s.link;
    j["link"] = {{"pt_dbm", l.pt_dbm},
                 {"bandwidth_hz", l.bandwidth_hz},
                 {"noise_psd_dbm_hz", l.noise_psd_dbm_hz},
                 {"noise_figure_db", l.noise_figure_db},
                 {"direct_blockage_db", l.direct_blockage_db},
                 {"self_blockage_prob", l.self_blockage_prob},
                 {"path_loss_h0_db", l.path_loss.h0_db},
                 {"path_loss_d0_m", l.path_loss.d0_m},
                 {"path_loss_exponent", l.path_loss.exponent}};
    json names = json::array();
    for (auto b : s.snr.benchmarks) names.push_back(std::string(to_string(b)));
    j["snr"] = {{"k_db", s.snr.k_db},
                {"benchmarks", names},
                {"trials", s.snr.trials},
                {"v_est", s.snr.v_est},
                {"full_csi_iters", s.snr.full_csi_iters}};
    j["regime"] = {{"side_m", s.regime_side_m}};
    return j.dump(2);
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> all{"regime",       "design-analytic", "design-optimize", "illuminate",
                                              "region-sweep", "snr-vs-k",        "convergence"};
    return all;
}

namespace {

std::string hex64(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string format_db(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

class Run {
public:
    Run(const RunConfig& rc, Scenario s, std::ostream& out, std::ostream& err)
        : rc_(rc), s_(std::move(s)), out_(out), err_(err) {}

    void execute() {
        const std::string& cmd = rc_.subcommand;
        if (cmd == "regime") {
            regime();
        } else if (cmd == "design-analytic") {
            design_analytic();
        } else if (cmd == "design-optimize") {
            design_optimize();
        } else if (cmd == "illuminate") {
            illuminate();
        } else if (cmd == "region-sweep") {
            region_sweep();
        } else if (cmd == "snr-vs-k") {
            snr_vs_k();
        } else if (cmd == "convergence") {
            convergence();
        }
    }

    const std::vector<std::pair<std::string, std::uint64_t>>& outputs() const { return outputs_; }

private:
    void log(const std::string& msg) {
        if (rc_.verbose) err_ << "risbeam: " << msg << '\n';
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& fn) {
        std::ostringstream buf;
        fn(buf);
        const std::string bytes = buf.str();
        const fs::path path = fs::path(rc_.out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
        f << bytes;
        f.close();
        if (!f) throw IoError("failed writing '" + path.string() + "'");
        outputs_.emplace_back(name, fnv1a64(bytes));
        log("wrote " + path.string());
    }

    Position3 centroid() const { return s_.ris_geometry().centroid(); }

    void regime() {
        const Wavelength wl = s_.wavelength();
        std::vector<double> sides = s_.regime_side_m;
        if (sides.empty()) sides.push_back(std::max(s_.ris.ny, s_.ris.nz) * s_.ris.spacing_lambda * wl.meters());
        std::vector<RegimeRow> rows;
        for (double l : sides) rows.push_back(regime_distances(l, wl, s_.ris.spacing_lambda));
        write("regime.csv", [&](std::ostream& os) { write_regime_csv(os, rows); });
        out_ << std::fixed << std::setprecision(2);
        for (const auto& r : rows) {
            out_ << "L = " << r.side_m << " m at " << s_.freq_ghz << " GHz: d_FF = " << r.d_ff_m
                 << " m, d_qNF = " << r.d_qnf_m << " m (" << r.n_elements << " elements)\n";
        }
        const ArrayGeometry geom = s_.ris_geometry();
        const double d = geom.largest_dimension();
        const double dt = (s_.u_bs() - geom.centroid()).norm();
        const double dr = (s_.u_ilm - geom.centroid()).norm();
        out_ << "configured RIS: D = " << d << " m, d_FF = " << far_field_distance(d, wl)
             << " m, d_qNF = " << quadratic_near_field_distance(d, wl) << " m\n";
        if (dt > 0.0) out_ << "BS at " << dt << " m: " << to_string(classify_regime(dt, d, wl)) << "\n";
        if (dr > 0.0) {
            out_ << "illumination centre at " << dr << " m: " << to_string(classify_regime(dr, d, wl)) << "\n";
        }
        out_.unsetf(std::ios::floatfield);
    }

    void design_analytic() {
        const Design d = s_.design;
        if (d == Design::OptimizedFF || d == Design::OptimizedNF || d == Design::Profile) {
            throw ConfigError("design-analytic needs an analytic design.method, got " + std::string(to_string(d)));
        }
        const Box3 region = s_.region_box();
        const DesignResult r = design_profile(s_, d, region);
        write("profile.csv", [&](std::ostream& os) { write_profile_csv(os, r.profile); });
        const TargetSet q = scenario_targets(s_, s_.regime, region);
        out_ << to_string(d) << ": worst-case normalized GRCS over " << q.description << " targets = "
             << format_db(linear_to_db(std::max(worst_case_normalized(q, r.profile), 1e-300))) << " dB\n";
    }

    void design_optimize() {
        const Box3 region = s_.region_box();
        const Design d = s_.regime == TargetRegime::Far ? Design::OptimizedFF : Design::OptimizedNF;
        log("optimizing " + std::string(to_string(d)));
        const DesignResult r = design_profile(s_, d, region);
        write("profile.csv", [&](std::ostream& os) { write_profile_csv(os, r.profile); });
        write("trace.csv", [&](std::ostream& os) { write_trace_csv(os, r.sca->trace); });
        out_ << to_string(d) << ": worst-case normalized GRCS = " << format_db(linear_to_db(r.sca->min_grcs))
             << " dB (analytic start " << format_db(r.sca->initial_profile_db) << " dB), final rank residual "
             << r.sca->trace.records.back().rank_residual << (r.sca->degraded ? " [degraded]" : "") << "\n";
    }

    void illuminate() {
        log("illuminating with " + std::string(to_string(s_.design)));
        const IlluminationResult r = run_illumination(s_, s_.design);
        write("grcs_field.csv", [&](std::ostream& os) { write_grcs_field_csv(os, r.field); });
        write("illumination_summary.csv", [&](std::ostream& os) { write_illumination_summary_csv(os, r); });
        write("profile.csv", [&](std::ostream& os) { write_profile_csv(os, r.design.profile); });
        out_ << to_string(s_.design) << ": in-region min " << format_db(linear_to_db(r.min_in_region))
             << " dB, max " << format_db(linear_to_db(r.max_in_region)) << " dB, peak "
             << format_db(linear_to_db(r.field.values.maxCoeff())) << " dB\n";
    }

    void region_sweep() {
        if (s_.sweep_r_m.empty()) throw ConfigError("region_sweep.r_m must list at least one R");
        const auto rows = run_region_sweep(s_, s_.sweep_r_m, rc_.workers);
        write("region_sweep.csv", [&](std::ostream& os) { write_region_sweep_csv(os, rows); });
        for (const auto& r : rows) {
            out_ << "R = " << r.r_m << " m  " << std::left << std::setw(12) << to_string(r.design) << std::right
                 << format_db(r.min_grcs_db) << " dB\n";
        }
    }

    void snr_vs_k() {
        const SnrResult r = run_snr_vs_k(s_, s_.snr.k_db, s_.snr.benchmarks, rc_.workers);
        write("snr_vs_k.csv", [&](std::ostream& os) { write_snr_csv(os, r); });
        for (const auto& e : r.entries) {
            out_ << "K = " << e.k_db << " dB  " << std::left << std::setw(19) << to_string(e.benchmark) << std::right
                 << format_db(e.snr_db) << " dB +- " << format_db(e.stderr_db) << "\n";
        }
    }

    void convergence() {
        const auto runs = run_convergence(s_, rc_.workers);
        for (const auto& r : runs) {
            write("trace_" + r.label + ".csv", [&](std::ostream& os) { write_trace_csv(os, r.result.trace); });
            out_ << std::left << std::setw(10) << r.label << std::right << " final "
                 << format_db(linear_to_db(r.result.min_grcs)) << " dB, rank residual "
                 << r.result.trace.records.back().rank_residual << "\n";
        }
    }

    const RunConfig& rc_;
    Scenario s_;
    std::ostream& out_;
    std::ostream& err_;
    std::vector<std::pair<std::string, std::uint64_t>> outputs_;
};

std::string compiler_id() {
#if defined(__clang__)
    return "clang " __clang_version__;
#elif defined(__GNUC__)
    return "gcc " __VERSION__;
#else
    return "unknown";
#endif
}

int fail(std::ostream& err, ExitCode code, const char* category, const std::string& msg) {
    err << "risbeam: error[" << category << "]: " << msg << '\n';
    return static_cast<int>(code);
}

}  // namespace

int dispatch(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    try {
        const auto& cmds = subcommands();
        if (std::find(cmds.begin(), cmds.end(), rc.subcommand) == cmds.end()) {
            throw UsageError("unknown subcommand '" + rc.subcommand + "'");
        }
        if (rc.workers < 1) throw UsageError("--workers must be >= 1");
        if (rc.config_path.empty()) throw UsageError("--config is required");
        std::ifstream in(rc.config_path, std::ios::binary);
        if (!in) throw IoError("cannot read config '" + rc.config_path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        Scenario s = parse_config(text, fs::path(rc.config_path).parent_path().string());
        if (rc.seed) s.seed = *rc.seed;

        std::error_code ec;
        fs::create_directories(rc.out_dir, ec);
        if (ec || !fs::is_directory(rc.out_dir)) throw IoError("cannot create output directory '" + rc.out_dir + "'");

        Run run(rc, s, out, err);
        run.execute();

        json manifest;
        manifest["tool"] = "risbeam";
        manifest["subcommand"] = rc.subcommand;
        manifest["config_path"] = rc.config_path;
        manifest["config_fnv1a64"] = hex64(fnv1a64(text));
        manifest["seed"] = s.seed;
        manifest["scenario"] = json::parse(dump_config(s));
        manifest["versions"] = {{"risbeam", kVersion},
                                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                              "." + std::to_string(EIGEN_MINOR_VERSION)},
                                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                                {"compiler", compiler_id()}};
        json outs = json::array();
        for (const auto& [name, h] : run.outputs()) outs.push_back({{"file", name}, {"fnv1a64", hex64(h)}});
        manifest["outputs"] = outs;
        const fs::path mpath = fs::path(rc.out_dir) / "manifest.json";
        std::ofstream mf(mpath, std::ios::binary);
        if (!mf) throw IoError("cannot open '" + mpath.string() + "' for writing");
        mf << manifest.dump(2) << '\n';
        if (!mf) throw IoError("failed writing '" + mpath.string() + "'");
        return static_cast<int>(ExitCode::Ok);
    } catch (const UsageError& e) {
        return fail(err, ExitCode::Usage, "usage", e.what());
    } catch (const ConfigError& e) {
        return fail(err, ExitCode::Config, "config", e.what());
    } catch (const IoError& e) {
        return fail(err, ExitCode::Io, "io", e.what());
    } catch (const SolverError& e) {
        return fail(err, ExitCode::Solver, "solver", e.status() + ": " + e.what());
    } catch (const DomainError& e) {
        return fail(err, ExitCode::Domain, "domain", e.what());
    } catch (const ShapeError& e) {
        return fail(err, ExitCode::Domain, "domain", e.what());
    } catch (const std::exception& e) {
        return fail(err, ExitCode::Internal, "internal", e.what());
    }
}

}  // namespace risbeam
