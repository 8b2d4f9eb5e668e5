#include "elreg/config.hpp"

#include <json.hpp>

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace elreg {

using nlohmann::json;

namespace {

[[noreturn]] void syntax_error(const std::string& text, std::size_t byte, const char* what) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << "config syntax error at line " << line << ", column " << col << ": " << what;
    throw ConfigError(os.str());
}

VelocityInit parse_velocity_init(const json& j) {
    VelocityInit v;
    std::string kind = j.value("kind", "zero");
    if (kind == "zero") v.kind = VelocityInit::Kind::zero;
    else if (kind == "taylor_green") v.kind = VelocityInit::Kind::taylor_green;
    else if (kind == "random_solenoidal") v.kind = VelocityInit::Kind::random_solenoidal;
    else throw ConfigError("unknown velocity init kind '" + kind +
                           "' (zero | taylor_green | random_solenoidal)");
    v.amplitude = j.value("amplitude", 1.0);
    v.spectrum_slope = j.value("spectrum_slope", -2.0);
    if (v.kind == VelocityInit::Kind::random_solenoidal) {
        if (!j.contains("seed")) throw ConfigError("random_solenoidal velocity requires a seed");
        v.seed = j.at("seed").get<std::uint64_t>();
    }
    return v;
}

DirectorInit parse_director_init(const json& j) {
    DirectorInit d;
    std::string kind = j.value("kind", "constant");
    if (kind == "constant") d.kind = DirectorInit::Kind::constant;
    else if (kind == "perturbed_constant") d.kind = DirectorInit::Kind::perturbed_constant;
    else if (kind == "random_unit") d.kind = DirectorInit::Kind::random_unit;
    else throw ConfigError("unknown director init kind '" + kind +
                           "' (constant | perturbed_constant | random_unit)");
    if (j.contains("vector")) d.vec = j.at("vector").get<std::vector<double>>();
    d.amplitude = j.value("amplitude", kind == "random_unit" ? 1.0 : 0.01);
    if (kind != "constant") {
        if (!j.contains("seed")) throw ConfigError(kind + " director requires a seed");
        d.seed = j.at("seed").get<std::uint64_t>();
    }
    if (kind != "random_unit" && d.vec.empty())
        throw ConfigError(kind + " director requires a 'vector'");
    return d;
}

json emit_velocity_init(const VelocityInit& v) {
    json j;
    switch (v.kind) {
        case VelocityInit::Kind::zero: j["kind"] = "zero"; break;
        case VelocityInit::Kind::taylor_green: j["kind"] = "taylor_green"; break;
        case VelocityInit::Kind::random_solenoidal: j["kind"] = "random_solenoidal"; break;
    }
    j["amplitude"] = v.amplitude;
    j["spectrum_slope"] = v.spectrum_slope;
    j["seed"] = v.seed;
    return j;
}

json emit_director_init(const DirectorInit& d) {
    json j;
    switch (d.kind) {
        case DirectorInit::Kind::constant: j["kind"] = "constant"; break;
        case DirectorInit::Kind::perturbed_constant: j["kind"] = "perturbed_constant"; break;
        case DirectorInit::Kind::random_unit: j["kind"] = "random_unit"; break;
    }
    if (!d.vec.empty()) j["vector"] = d.vec;
    j["amplitude"] = d.amplitude;
    j["seed"] = d.seed;
    return j;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        syntax_error(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }

    SimConfig cfg;
    try {
        // model selection: preset name or explicit exponents
        if (!j.contains("model")) throw ConfigError("missing 'model'");
        if (j.at("model").is_string()) {
            cfg.model_name = j.at("model").get<std::string>();
            cfg.params = preset(cfg.model_name);
        } else {
            const json& m = j.at("model");
            cfg.params.theta = m.at("theta").get<double>();
            cfg.params.theta1 = m.at("theta1").get<double>();
            cfg.params.theta2 = m.at("theta2").get<double>();
            cfg.params.chi = m.value("chi", 0);
            cfg.params.nsv_a0 = m.value("nsv_a0", false);
        }
        cfg.params.alpha = j.value("alpha", 1.0);
        cfg.params.mu4 = j.value("mu4", 1.0);
        if (j.contains("model_options"))
            cfg.params.chi_transpose_m = j.at("model_options").value("chi_transpose_m", false);
        cfg.params.validate();

        if (j.contains("leslie")) {
            const json& l = j.at("leslie");
            cfg.leslie.mu1 = l.value("mu1", 0.0);
            cfg.leslie.mu2 = l.at("mu2").get<double>();
            cfg.leslie.mu3 = l.at("mu3").get<double>();
            cfg.leslie.mu5 = l.at("mu5").get<double>();
            cfg.leslie.mu6 = l.at("mu6").get<double>();
        }
        int case_id = j.value("case", 1);
        if (case_id != 1 && case_id != 2) throw ConfigError("'case' must be 1 or 2");
        cfg.leslie.case_selector = case_id == 1 ? CaseSelector::case1 : CaseSelector::case2;

        if (j.contains("grid")) {
            const json& g = j.at("grid");
            cfg.grid.dim = g.value("dim", 2);
            cfg.grid.n_modes = g.value("n_modes", 32);
            cfg.grid.length = g.value("length", 2.0 * M_PI);
        }
        Grid probe(cfg.grid.dim, cfg.grid.n_modes, cfg.grid.length);  // range checks
        (void)probe;

        if (j.contains("time")) {
            const json& t = j.at("time");
            cfg.time.dt = t.value("dt", 1e-3);
            cfg.time.t_end = t.value("t_end", 1.0);
            std::string scheme = t.value("scheme", "imex1");
            if (scheme == "imex1") cfg.time.scheme = TimeScheme::imex1;
            else if (scheme == "cnab2") cfg.time.scheme = TimeScheme::cnab2;
            else throw ConfigError("unknown time scheme '" + scheme + "' (imex1 | cnab2)");
            cfg.time.record_every = t.value("record_every", 1);
            cfg.time.snapshot_every = t.value("snapshot_every", 0);
        }
        if (!(cfg.time.dt > 0.0)) throw ConfigError("time.dt must be > 0");
        if (!(cfg.time.t_end >= 0.0)) throw ConfigError("time.t_end must be >= 0");
        if (cfg.time.record_every < 1) throw ConfigError("time.record_every must be >= 1");

        if (j.contains("init")) {
            const json& i = j.at("init");
            if (i.contains("velocity")) cfg.velocity_init = parse_velocity_init(i.at("velocity"));
            if (i.contains("director")) cfg.director_init = parse_director_init(i.at("director"));
        }
        if (cfg.director_init.kind == DirectorInit::Kind::constant && cfg.director_init.vec.empty())
            cfg.director_init.vec.assign(static_cast<std::size_t>(cfg.grid.dim), 0.0);
        if (!cfg.director_init.vec.empty() &&
            static_cast<int>(cfg.director_init.vec.size()) != cfg.grid.dim)
            throw ConfigError("director vector length must equal grid.dim");

        if (j.contains("forcing")) {
            const json& f = j.at("forcing");
            std::string kind = f.value("kind", "zero");
            if (kind == "zero") cfg.forcing.kind = ForcingKind::zero;
            else if (kind == "steady") cfg.forcing.kind = ForcingKind::steady;
            else if (kind == "decaying") cfg.forcing.kind = ForcingKind::decaying;
            else throw ConfigError("unknown forcing kind '" + kind + "' (zero | steady | decaying)");
            if (cfg.forcing.kind != ForcingKind::zero) {
                if (!f.contains("profile")) throw ConfigError("forcing requires a 'profile'");
                cfg.forcing.profile = parse_velocity_init(f.at("profile"));
            }
            cfg.forcing.delta = f.value("delta", 0.5);
            if (cfg.forcing.kind == ForcingKind::decaying &&
                !(cfg.forcing.delta > 0.0 && cfg.forcing.delta < 1.0))
                throw ConfigError("forcing.delta must lie in (0,1)");
        }

        if (j.contains("output")) {
            cfg.output.csv_path = j.at("output").value("csv_path", "");
            cfg.output.snapshot_dir = j.at("output").value("snapshot_dir", "");
        }
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            cfg.tolerances.maxp = t.value("maxp", 1e-6);
            cfg.tolerances.budget = t.value("budget", 1e-2);
            cfg.tolerances.blowup_threshold = t.value("blowup_threshold", 1e6);
            if (!(cfg.tolerances.maxp > 0.0) || !(cfg.tolerances.budget > 0.0) ||
                !(cfg.tolerances.blowup_threshold > 0.0))
                throw ConfigError("tolerances must be positive");
        }
        if (j.contains("extra_norms")) {
            for (const auto& e : j.at("extra_norms")) {
                std::string field = e.at(0).get<std::string>();
                if (field != "u" && field != "d")
                    throw ConfigError("extra norm field must be 'u' or 'd'");
                cfg.extra_norms.push_back({field[0], e.at(1).get<double>()});
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config structure error: ") + e.what());
    }

    cfg.validation = validate_constraints(cfg.leslie);
    if (!cfg.validation.passed) {
        std::ostringstream os;
        os << "coefficient constraints violated:\n";
        for (const auto& c : cfg.validation.violated())
            os << "  " << c.name << " (slack " << c.slack << ")\n";
        throw ConfigError(os.str());
    }
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string emit_config(const SimConfig& cfg) {
    json j;
    if (!cfg.model_name.empty()) {
        j["model"] = cfg.model_name;
    } else {
        j["model"] = {{"theta", cfg.params.theta},
                      {"theta1", cfg.params.theta1},
                      {"theta2", cfg.params.theta2},
                      {"chi", cfg.params.chi},
                      {"nsv_a0", cfg.params.nsv_a0}};
    }
    j["alpha"] = cfg.params.alpha;
    j["mu4"] = cfg.params.mu4;
    j["model_options"] = {{"chi_transpose_m", cfg.params.chi_transpose_m}};
    j["leslie"] = {{"mu1", cfg.leslie.mu1}, {"mu2", cfg.leslie.mu2}, {"mu3", cfg.leslie.mu3},
                   {"mu5", cfg.leslie.mu5}, {"mu6", cfg.leslie.mu6}};
    j["case"] = cfg.leslie.case_selector == CaseSelector::case1 ? 1 : 2;
    j["grid"] = {{"dim", cfg.grid.dim}, {"n_modes", cfg.grid.n_modes}, {"length", cfg.grid.length}};
    j["time"] = {{"dt", cfg.time.dt},
                 {"t_end", cfg.time.t_end},
                 {"scheme", cfg.time.scheme == TimeScheme::imex1 ? "imex1" : "cnab2"},
                 {"record_every", cfg.time.record_every},
                 {"snapshot_every", cfg.time.snapshot_every}};
    j["init"] = {{"velocity", emit_velocity_init(cfg.velocity_init)},
                 {"director", emit_director_init(cfg.director_init)}};
    json f;
    switch (cfg.forcing.kind) {
        case ForcingKind::zero: f["kind"] = "zero"; break;
        case ForcingKind::steady: f["kind"] = "steady"; break;
        case ForcingKind::decaying: f["kind"] = "decaying"; break;
    }
    if (cfg.forcing.kind != ForcingKind::zero) f["profile"] = emit_velocity_init(cfg.forcing.profile);
    f["delta"] = cfg.forcing.delta;
    j["forcing"] = f;
    j["output"] = {{"csv_path", cfg.output.csv_path}, {"snapshot_dir", cfg.output.snapshot_dir}};
    j["tolerances"] = {{"maxp", cfg.tolerances.maxp},
                       {"budget", cfg.tolerances.budget},
                       {"blowup_threshold", cfg.tolerances.blowup_threshold}};
    json extras = json::array();
    for (const auto& e : cfg.extra_norms)
        extras.push_back({std::string(1, e.field), e.s});
    j["extra_norms"] = extras;
    return j.dump(2) + "\n";
}

// ---- CSV ------------------------------------------------------------------------

const char* const kCsvBaseHeader[] = {
    "t", "e_total", "kinetic", "elastic", "potential", "diss_visc", "diss_rho",
    "diss_mu1", "diss_aqd", "diss_nq", "forcing_power", "budget_residual",
    "norm_u_m_theta2", "norm_u_theta_m_theta2", "max_abs_d"};

std::string csv_header(const std::vector<ExtraNorm>& extras) {
    std::ostringstream os;
    for (int i = 0; i < 15; ++i) {
        if (i) os << ",";
        os << kCsvBaseHeader[i];
    }
    for (const auto& e : extras) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), ",norm_%c_s%g", e.field, e.s);
        os << buf;
    }
    return os.str();
}

void write_records_csv(const std::vector<EnergyRecord>& records,
                       const std::vector<ExtraNorm>& extras, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path);
    std::string header = csv_header(extras);
    std::fprintf(f, "%s\n", header.c_str());
    for (const auto& r : records) {
        const double base[15] = {r.t, r.e_total, r.kinetic, r.elastic, r.potential,
                                 r.diss_visc, r.diss_rho, r.diss_mu1, r.diss_aqd, r.diss_nq,
                                 r.forcing_power, r.budget_residual, r.norm_u_m_theta2,
                                 r.norm_u_theta_m_theta2, r.max_abs_d};
        for (int i = 0; i < 15; ++i) std::fprintf(f, i ? ",%.17g" : "%.17g", base[i]);
        for (double v : r.extra_norms) std::fprintf(f, ",%.17g", v);
        std::fprintf(f, "\n");
    }
    if (std::fclose(f) != 0) throw IoError("write failed: " + path);
}

std::pair<std::vector<EnergyRecord>, std::vector<std::string>> read_records_csv(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV: " + path);

    std::vector<std::string> columns;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) columns.push_back(tok);
    }
    if (columns.size() < 15) throw IoError("malformed CSV header: " + path);
    for (int i = 0; i < 15; ++i)
        if (columns[i] != kCsvBaseHeader[i]) throw IoError("unexpected CSV column: " + columns[i]);
    std::vector<std::string> extra_names(columns.begin() + 15, columns.end());

    std::vector<EnergyRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> vals;
        const char* p = line.c_str();
        char* end = nullptr;
        while (*p) {
            double v = std::strtod(p, &end);
            if (end == p) throw IoError("malformed CSV row: " + line);
            vals.push_back(v);
            p = end;
            if (*p == ',') ++p;
        }
        if (vals.size() != columns.size()) throw IoError("malformed CSV row width: " + line);
        EnergyRecord r;
        r.t = vals[0]; r.e_total = vals[1]; r.kinetic = vals[2]; r.elastic = vals[3];
        r.potential = vals[4]; r.diss_visc = vals[5]; r.diss_rho = vals[6]; r.diss_mu1 = vals[7];
        r.diss_aqd = vals[8]; r.diss_nq = vals[9]; r.forcing_power = vals[10];
        r.budget_residual = vals[11]; r.norm_u_m_theta2 = vals[12];
        r.norm_u_theta_m_theta2 = vals[13]; r.max_abs_d = vals[14];
        r.extra_norms.assign(vals.begin() + 15, vals.end());
        records.push_back(std::move(r));
    }
    return {records, extra_names};
}

// ---- snapshots ----------------------------------------------------------------------

void write_snapshot(const SimState& state, const std::string& path) {
    static_assert(std::endian::native == std::endian::little,
                  "snapshot writer assumes a little-endian host");
    const Grid& g = state.u.grid();
    PhysicalField up = fft::to_physical(state.u);
    PhysicalField dp = fft::to_physical(state.d);

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path);
    std::fprintf(f, "elreg-snapshot endian=little dim=%d n_modes=%d length=%.17g t=%.17g "
                    "fields=u:vector,d:vector\n",
                 g.dim, g.n, g.length, state.t);
    auto dump = [&](const PhysicalField& pf) {
        std::fwrite(pf.raw().data(), sizeof(double), pf.raw().size(), f);
    };
    dump(up);
    dump(dp);
    if (std::fclose(f) != 0) throw IoError("write failed: " + path);
}

SimState read_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot: " + path);
    std::string header;
    if (!std::getline(in, header)) throw IoError("snapshot missing header: " + path);

    auto field = [&](const std::string& key) -> std::string {
        auto pos = header.find(key + "=");
        if (pos == std::string::npos) throw IoError("snapshot header missing " + key);
        pos += key.size() + 1;
        auto end = header.find(' ', pos);
        return header.substr(pos, end == std::string::npos ? end : end - pos);
    };
    if (header.rfind("elreg-snapshot", 0) != 0) throw IoError("not an elreg snapshot: " + path);
    if (field("endian") != "little") throw IoError("snapshot endianness marker absent or unsupported");
    int dim = std::stoi(field("dim"));
    int n = std::stoi(field("n_modes"));
    double length = std::stod(field("length"));
    double t = std::stod(field("t"));
    if (field("fields") != "u:vector,d:vector") throw IoError("unexpected snapshot field list");

    GridPtr grid = make_grid(dim, n, length);
    PhysicalField up(grid, Rank::vector), dp(grid, Rank::vector);
    auto slurp = [&](PhysicalField& pf) {
        in.read(reinterpret_cast<char*>(pf.raw().data()),
                static_cast<std::streamsize>(pf.raw().size() * sizeof(double)));
        if (static_cast<std::size_t>(in.gcount()) != pf.raw().size() * sizeof(double))
            throw IoError("snapshot payload truncated: " + path);
    };
    slurp(up);
    slurp(dp);
    in.peek();
    if (!in.eof()) throw IoError("snapshot payload size mismatch: " + path);

    SimState state{fft::to_spectral(up), fft::to_spectral(dp), t};
    state.u = dealias(leray_project(state.u));
    zero_mean_mode(state.u);
    state.d = dealias(state.d);
    return state;
}

// ---- construction ---------------------------------------------------------------------

SpectralField build_velocity(const VelocityInit& init, const GridPtr& grid) {
    switch (init.kind) {
        case VelocityInit::Kind::zero: return SpectralField(grid, Rank::vector);
        case VelocityInit::Kind::taylor_green: return taylor_green_velocity(grid, init.amplitude);
        case VelocityInit::Kind::random_solenoidal:
            return random_solenoidal_velocity(grid, init.amplitude, init.spectrum_slope, init.seed);
    }
    return SpectralField(grid, Rank::vector);
}

SpectralField build_director(const DirectorInit& init, const GridPtr& grid) {
    switch (init.kind) {
        case DirectorInit::Kind::constant: return constant_director(grid, init.vec);
        case DirectorInit::Kind::perturbed_constant:
            return perturbed_constant_director(grid, init.vec, init.amplitude, init.seed);
        case DirectorInit::Kind::random_unit:
            return random_unit_director(grid, init.amplitude, init.seed);
    }
    return SpectralField(grid, Rank::vector);
}

ForcingSpec build_forcing(const ForcingConfig& cfg, const GridPtr& grid) {
    ForcingSpec spec;
    spec.kind = cfg.kind;
    spec.delta = cfg.delta;
    if (cfg.kind != ForcingKind::zero) {
        spec.profile = build_velocity(cfg.profile, grid);
        spec.profile = dealias(leray_project(spec.profile));
        zero_mean_mode(spec.profile);
    }
    spec.validate();
    return spec;
}

}  // namespace elreg
