#pragma once

#include "arago/diffraction.hpp"
#include "arago/layerpot.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arago {

inline constexpr const char* kVersion = "arago 0.3.0";

enum class Experiment {
    green_check,
    wave_dispersion_3d,
    schrodinger_dispersion_3d,
    arago_sweep,
    lambda_scan,
    specfun_table,
    cfie_compare
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GeometrySpec {
    int random_pairs = 4;
    std::uint64_t seed = 20240601;
    double c0 = 5.0;
    double t_octave_start = 0.2;
    int t_octave_points = 5;
};

struct LambdaSpec {
    double tau = 1000.0;
    double tau_check = 4000.0;
    double z_min = 0.1, z_max = 0.95, z_step = 0.01;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::green_check;
    int dimension = 3;
    AragoFlow flow = AragoFlow::wave;
    std::vector<double> h_list;
    double gamma = 0.0; // 0 selects the centre of the scanned interval
    GeometrySpec geometry;
    LambdaSpec lambda;
    WindowProfile profile = WindowProfile::smooth_bump;
    double window_width = 0.25;
    double schrodinger_h = 0.05;
    double tail_tolerance = 1e-13;
    double panel_phase = 0.5 * kPi;
    int min_panels = 48;
    long node_budget = 1000000;
    std::vector<double> taus{0.5, 1.0, 2.0};
    int cfie_pairs = 10;
    std::uint64_t seed = 1;
    std::string output = "out";
    double budget_scale = 1.0;

    QuadOptions quad_options() const;
};

std::string experiment_name(Experiment e);
// Throws ConfigError naming the offending key.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
ExperimentConfig default_config(Experiment e);

// RFC-4180 table; complex values appear as paired re/im columns.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
std::string format_number(double v);
std::string to_csv(const Table& t);
Table parse_csv(const std::string& text);

struct KernelRow {
    int d = 3;
    double h = 0.0, gamma = 0.0, s = 0.0, r = 0.0, theta = 0.0, t = 0.0;
    cplx value;
    int modes_used = 0;
    long nodes_used = 0;
    double tail_bound = 0.0, quad_err = 0.0;
};
std::vector<std::string> kernel_header();
std::vector<std::string> kernel_cells(const KernelRow& r);

struct CheckRow {
    std::string name;
    std::string args;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};
std::vector<CheckRow> green_checks();
std::vector<CheckRow> specfun_checks();
Table check_table(const std::vector<CheckRow>& rows);

struct DispersionTriple {
    ExteriorPoint source, target;
    double t = 0.0;
    std::string tag;
};
// Fixed pairs (antipodal, near-boundary, visible) plus seeded random pairs in 3D.
std::vector<std::pair<ExteriorPoint, ExteriorPoint>> dispersion_pairs(const GeometrySpec& g);
// Three times per pair around the exterior geodesic length, clamped into time_window_hint.
std::vector<DispersionTriple> dispersion_grid(const GeometrySpec& g);

struct RunResult {
    Table table;
    nlohmann::json summary;
};

RunResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

// Least squares of log(abs) on log(h) over the rows of a kernel CSV.
SlopeFit fit_csv(const Table& t);

} // namespace arago
