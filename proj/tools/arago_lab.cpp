#include "arago/experiments.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct LabError {
    std::string kind;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LabError{"io", "cannot open '" + path + "'"};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LabError{"io", "cannot write '" + path.string() + "'"};
    out << text;
}

arago::ExperimentConfig load_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw LabError{"schema", std::string("invalid JSON: ") + e.what()};
    }
    try {
        return arago::config_from_json(j);
    } catch (const arago::ConfigError& e) {
        throw LabError{"schema", e.what()};
    } catch (const json::exception& e) {
        throw LabError{"schema", e.what()};
    }
}

int resolve_threads(int flag) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("ARAGO_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
        throw LabError{"schema", std::string("ARAGO_LAB_THREADS must be a positive integer, got '") + env + "'"};
    }
    return 1;
}

int fail(const LabError& e) {
    std::cout << json{{"error", {{"kind", e.kind}, {"message", e.message}}}}.dump() << '\n';
    return e.kind == "schema" ? 2 : (e.kind == "budget" ? 3 : 4);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exterior-sphere wave and Schrodinger experiment runner"};
    app.set_version_flag("--version", arago::kVersion);
    app.require_subcommand(1);

    std::string config_path, out_dir = "", csv_path, model = "power_law";
    int threads = 0;
    double budget_scale = 0.0;

    auto* run = app.add_subcommand("run", "Run an experiment and write CSV plus a JSON summary");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory (overrides the config)");
    run->add_option("--threads", threads, "Worker threads (falls back to ARAGO_LAB_THREADS)")->check(CLI::PositiveNumber);
    run->add_option("--budget-scale", budget_scale, "Multiplier for quadrature and mode budgets")->check(CLI::PositiveNumber);

    auto* fit = app.add_subcommand("fit", "Log-log slope of abs against h for a kernel CSV");
    fit->add_option("csv", csv_path, "Kernel CSV")->required();
    fit->add_option("--model", model, "Fit model")->check(CLI::IsMember({"power_law"}));

    auto* validate = app.add_subcommand("validate-config", "Check a config and print the resolved form");
    validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) {
            const auto cfg = load_config(config_path);
            std::cout << arago::config_to_json(cfg).dump(2) << '\n';
            return 0;
        }
        if (*fit) {
            arago::Table t;
            try {
                t = arago::parse_csv(read_file(csv_path));
                const arago::SlopeFit f = arago::fit_csv(t);
                std::cout << json{{"model", model},
                                  {"slope", f.slope},
                                  {"intercept", f.intercept},
                                  {"max_residual", f.max_residual},
                                  {"points", f.log_h.size()}}
                                 .dump(2)
                          << '\n';
            } catch (const std::exception& e) {
                throw LabError{"fit", e.what()};
            }
            return 0;
        }

        auto cfg = load_config(config_path);
        if (!out_dir.empty()) cfg.output = out_dir;
        if (budget_scale > 0.0) cfg.budget_scale = budget_scale;
        const int nthreads = resolve_threads(threads);

        arago::RunResult r;
        try {
            r = arago::run_experiment(cfg, nthreads);
        } catch (const arago::BudgetExhausted& e) {
            throw LabError{"budget", e.what()};
        } catch (const std::exception& e) {
            throw LabError{"module", e.what()};
        }
        const fs::path dir(cfg.output);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw LabError{"io", "cannot create '" + dir.string() + "': " + ec.message()};
        const std::string stem = arago::experiment_name(cfg.experiment);
        write_file(dir / (stem + ".csv"), arago::to_csv(r.table));
        write_file(dir / (stem + ".summary.json"), r.summary.dump(2) + "\n");
        std::cout << r.summary.dump(2) << '\n';
        return 0;
    } catch (const LabError& e) {
        return fail(e);
    } catch (const std::exception& e) {
        return fail({"internal", e.what()});
    }
}
