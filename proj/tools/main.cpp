#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resilsim/contingency.hpp"
#include "resilsim/csv.hpp"
#include "resilsim/engine.hpp"
#include "resilsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw resilsim::ConfigError(
            {{path.string(), "cannot open file"}});
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string run_name(std::size_t index) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "run_%03zu.csv", index);
    return buffer;
}

int do_simulate(const std::string& scenario_path, int runs_override,
                long long seed_override, const std::string& out_dir,
                int parallel) {
    const resilsim::ScenarioConfig scenario =
        resilsim::load_scenario_file(scenario_path);
    const int runs = runs_override > 0 ? runs_override : scenario.monte_carlo.runs;
    const std::uint64_t seed = seed_override >= 0
                                   ? static_cast<std::uint64_t>(seed_override)
                                   : scenario.monte_carlo.master_seed;
    std::filesystem::create_directories(out_dir);
    const resilsim::MonteCarloResult result =
        resilsim::run_montecarlo(scenario, runs, seed, parallel);
    const std::filesystem::path dir(out_dir);
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        resilsim::write_timeseries(result.runs[r], dir / run_name(r));
    }
    resilsim::write_timeseries(result.mean, dir / "mean.csv");
    resilsim::write_file(dir / "summary.csv",
                         resilsim::summary_csv(result.runs, result.mean));
    std::cout << "wrote " << result.runs.size() << " run file(s), mean.csv and "
              << "summary.csv to " << out_dir << "\n";
    return kExitOk;
}

int do_matrix(const std::string& scenario_path, const std::string& risks_path,
              const std::vector<std::string>& measures,
              const std::string& merit_token, const std::string& out_file,
              int runs_override, long long seed_override, int parallel) {
    const std::string scenario_text = read_file(scenario_path);
    const std::string risks_text = read_file(risks_path);
    const std::vector<resilsim::RiskCell> cells =
        resilsim::expand_risk_grid(scenario_text, risks_text);
    const resilsim::MeritKind merit =
        resilsim::merit_kind_from_token(merit_token);

    std::vector<std::string> columns = {"baseline"};
    for (const std::string& measure : measures) {
        if (measure != "baseline") {
            columns.push_back(measure);
        }
    }

    struct Job {
        std::string risk;
        std::string measure;
        resilsim::ScenarioConfig scenario;
        int runs = 1;
        std::uint64_t seed = 0;
    };
    std::vector<Job> jobs;
    std::vector<std::string> risk_labels;
    for (const resilsim::RiskCell& cell : cells) {
        risk_labels.push_back(cell.label);
        for (const std::string& measure : columns) {
            Job job;
            job.risk = cell.label;
            job.measure = measure;
            job.scenario = resilsim::apply_countermeasure(cell.scenario, measure);
            job.runs = runs_override > 0 ? runs_override
                                         : job.scenario.monte_carlo.runs;
            job.seed = seed_override >= 0
                           ? static_cast<std::uint64_t>(seed_override)
                           : job.scenario.monte_carlo.master_seed;
            jobs.push_back(std::move(job));
        }
    }

    std::vector<resilsim::MeanMetrics> means(jobs.size());
    std::vector<std::uint32_t> run_of_job;
    std::vector<std::size_t> job_of_job;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        for (int r = 0; r < jobs[j].runs; ++r) {
            job_of_job.push_back(j);
            run_of_job.push_back(static_cast<std::uint32_t>(r));
        }
    }
    std::vector<std::vector<resilsim::RunMetrics>> cell_runs(jobs.size());
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        cell_runs[j].resize(jobs[j].runs);
    }
    resilsim::parallel_for(job_of_job.size(), parallel, [&](std::size_t k) {
        const Job& job = jobs[job_of_job[k]];
        cell_runs[job_of_job[k]][run_of_job[k]] =
            resilsim::run_simulation(job.scenario, job.seed, run_of_job[k]);
    });

    std::map<std::pair<std::string, std::string>, resilsim::MeanMetrics> grid;
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        grid.emplace(std::make_pair(jobs[j].risk, jobs[j].measure),
                     resilsim::mean_of(cell_runs[j]));
        cell_runs[j].clear();
    }
    const resilsim::ContingencyMatrix matrix =
        resilsim::build_contingency_matrix(risk_labels, columns, grid, merit);

    const std::filesystem::path csv_path(out_file);
    std::filesystem::path text_path(out_file);
    text_path.replace_extension(".txt");
    if (csv_path.has_parent_path()) {
        std::filesystem::create_directories(csv_path.parent_path());
    }
    resilsim::write_file(csv_path, resilsim::contingency_csv(matrix));
    resilsim::write_file(text_path, resilsim::contingency_text(matrix));
    std::cout << resilsim::contingency_text(matrix);
    std::cout << "wrote " << csv_path.string() << " and " << text_path.string()
              << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "resilsim - scenario simulator for healthcare systems coupled to an "
        "IT infrastructure"};
    app.require_subcommand(1);
    app.fallthrough();

    int parallel = 0;
    app.add_option("--parallel", parallel,
                   "worker thread cap (0: hardware concurrency)")
        ->envname("RESILSIM_THREADS");

    std::string scenario_path;
    auto* validate =
        app.add_subcommand("validate", "check a scenario file and exit");
    validate->add_option("scenario", scenario_path, "scenario JSON file")
        ->required();

    std::string sim_scenario;
    std::string out_dir = "out";
    int runs = 0;
    long long seed = -1;
    auto* simulate = app.add_subcommand(
        "simulate", "run a Monte Carlo batch and write per-run and mean CSVs");
    simulate->add_option("scenario", sim_scenario, "scenario JSON file")
        ->required();
    simulate->add_option("--runs", runs, "number of runs (default: scenario)");
    simulate->add_option("--seed", seed, "master seed (default: scenario)");
    simulate->add_option("--out", out_dir, "output directory")
        ->capture_default_str();

    std::string matrix_scenario;
    std::string risks_path;
    std::string merit = "deaths";
    std::string matrix_out = "matrix.csv";
    std::vector<std::string> measures = {"highBeds",     "highSecurity",
                                         "lowBeds",      "lowSecurity",
                                         "mHealth",      "referral"};
    int matrix_runs = 0;
    long long matrix_seed = -1;
    auto* matrix = app.add_subcommand(
        "matrix",
        "run a risk x countermeasure grid and write the contingency matrix");
    matrix->add_option("scenario", matrix_scenario, "scenario JSON file")
        ->required();
    matrix->add_option("--risks", risks_path, "risk axes JSON file")->required();
    matrix->add_option("--measures", measures,
                       "countermeasure labels (baseline is always included)")
        ->delimiter(',')
        ->capture_default_str();
    matrix->add_option("--merit", merit, "deaths or utilization")
        ->capture_default_str();
    matrix->add_option("--out", matrix_out, "output CSV path (a .txt twin is "
                                            "written alongside)")
        ->capture_default_str();
    matrix->add_option("--runs", matrix_runs, "runs per cell (default: scenario)");
    matrix->add_option("--seed", matrix_seed, "master seed (default: scenario)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            resilsim::load_scenario_file(scenario_path);
            std::cout << "OK: " << scenario_path << " is a valid scenario\n";
            return kExitOk;
        }
        if (simulate->parsed()) {
            return do_simulate(sim_scenario, runs, seed, out_dir, parallel);
        }
        if (matrix->parsed()) {
            return do_matrix(matrix_scenario, risks_path, measures, merit,
                             matrix_out, matrix_runs, matrix_seed, parallel);
        }
    } catch (const resilsim::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
