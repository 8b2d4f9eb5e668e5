#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elreg/coefficients.hpp"
#include "elreg/diagnostics.hpp"
#include "elreg/dynamics.hpp"

namespace elreg {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VelocityInit {
    enum class Kind { zero, taylor_green, random_solenoidal } kind = Kind::zero;
    double amplitude = 1.0;
    double spectrum_slope = -2.0;
    std::uint64_t seed = 1;
};

struct DirectorInit {
    enum class Kind { constant, perturbed_constant, random_unit } kind = Kind::constant;
    std::vector<double> vec;  // constant / perturbed_constant direction
    double amplitude = 1.0;   // perturbation size resp. field magnitude
    std::uint64_t seed = 1;
};

struct ForcingConfig {
    ForcingKind kind = ForcingKind::zero;
    VelocityInit profile;  // shape of g0 (built like a velocity field)
    double delta = 0.5;
};

// Aggregated run configuration; parse_config validates everything and embeds
// the coefficient ValidationReport.
struct SimConfig {
    std::string model_name;  // empty if explicit exponents were given
    ModelParams params;
    LeslieCoefficients leslie;
    ValidationReport validation;

    struct { int dim = 2; int n_modes = 32; double length = 2.0 * M_PI; } grid;
    struct {
        double dt = 1e-3;
        double t_end = 1.0;
        TimeScheme scheme = TimeScheme::imex1;
        int record_every = 1;
        int snapshot_every = 0;  // 0 = no snapshots
    } time;
    VelocityInit velocity_init;
    DirectorInit director_init;
    ForcingConfig forcing;
    struct { std::string csv_path; std::string snapshot_dir; } output;
    struct {
        double maxp = 1e-6;
        double budget = 1e-2;
        double blowup_threshold = 1e6;
    } tolerances;
    std::vector<ExtraNorm> extra_norms;

    GridPtr make_grid_ptr() const { return make_grid(grid.dim, grid.n_modes, grid.length); }
};

// JSON text -> validated SimConfig. Errors carry line/column for syntax
// problems and the violated inequality name for constraint problems.
SimConfig parse_config(const std::string& text);
SimConfig load_config_file(const std::string& path);

// emit_config(parse_config(text)) parses back to an identical config
std::string emit_config(const SimConfig& cfg);

// ---- CSV time series -----------------------------------------------------------

extern const char* const kCsvBaseHeader[];  // the 15 fixed columns
std::string csv_header(const std::vector<ExtraNorm>& extras);

void write_records_csv(const std::vector<EnergyRecord>& records,
                       const std::vector<ExtraNorm>& extras, const std::string& path);
std::pair<std::vector<EnergyRecord>, std::vector<std::string>> read_records_csv(
    const std::string& path);

// ---- snapshots --------------------------------------------------------------------

// One UTF-8 header line, then raw little-endian doubles of the physical
// fields (u components, then d components), row-major, components outermost.
void write_snapshot(const SimState& state, const std::string& path);
SimState read_snapshot(const std::string& path);

// ---- construction from a config -----------------------------------------------------

SpectralField build_velocity(const VelocityInit& init, const GridPtr& grid);
SpectralField build_director(const DirectorInit& init, const GridPtr& grid);
ForcingSpec build_forcing(const ForcingConfig& cfg, const GridPtr& grid);

}  // namespace elreg
