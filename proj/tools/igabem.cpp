#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "igabem/error.hpp"
#include "igabem/io.hpp"
#include "igabem/solve.hpp"

namespace fs = std::filesystem;
using namespace igabem;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_failure = 1;

struct SolveOptions {
    std::string model;
    std::optional<int> order;
    std::optional<int> gauss;
    std::optional<int> threads;
    std::string out = "out";
    std::vector<std::string> traces;
    int samples = 51;
    bool vtk = false;
    double scale = 0.0;
    int vtk_samples = 17;
};

struct StudyOptions {
    std::string model;
    std::vector<int> orders{2, 3, 4};
    std::optional<int> gauss;
    std::string out = "study.csv";
};

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("igabem");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("IGABEM_LOG_LEVEL")) {
        spdlog::set_level(spdlog::level::from_str(level));
    }
}

int current_order(const BoundaryModel& model) {
    int order = 0;
    for (const auto& p : model.patches) {
        order = std::max({order, p.field.u.degree(), p.field.v.degree()});
    }
    return order;
}

BoundaryModel apply_overrides(BoundaryModel model, std::optional<int> order,
                              std::optional<int> gauss, std::optional<int> threads) {
    if (gauss) {
        model.config.gauss_order = *gauss;
    }
    if (threads) {
        model.config.threads = *threads;
    }
    if (order && *order != current_order(model)) {
        model = elevate_model_order(model, *order);
    }
    return model;
}

std::string trace_file_name(const std::string& selector) {
    std::string name = "trace_" + selector + ".csv";
    for (char& c : name) {
        if (c == ':') {
            c = '_';
        }
    }
    return name;
}

int run_solve(const SolveOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    const BoundaryModel model =
        apply_overrides(parse_model(opt.model), opt.order, opt.gauss, opt.threads);
    std::vector<TraceRequest> requests;
    for (const auto& sel : opt.traces) {
        requests.push_back(parse_trace_selector(sel, opt.samples));
    }

    spdlog::info("solving {} patches at field order {}", model.patches.size(),
                 current_order(model));
    const ModelSolution result = solve_model(model);

    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (ec) {
        throw IoError(fmt::format("cannot create output directory {}: {}", opt.out, ec.message()));
    }
    const fs::path out(opt.out);

    {
        std::ostringstream buf;
        write_coefficients(buf, result.colloc, result.solution);
        std::ofstream f(out / "coefficients.csv", std::ios::binary);
        if (!f) {
            throw IoError(fmt::format("cannot write {}", (out / "coefficients.csv").string()));
        }
        f << buf.str();
    }
    for (std::size_t i = 0; i < requests.size(); ++i) {
        write_trace(out / trace_file_name(opt.traces[i]), model, result.solution, requests[i]);
    }
    if (opt.vtk) {
        write_vtk(out / "solution.vtk", model, result.solution, opt.scale, opt.vtk_samples);
    }

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json report = {
        {"model", opt.model},
        {"field_order", current_order(model)},
        {"node_count", result.colloc.size()},
        {"dof_count", result.solution.dof_count()},
        {"residual", result.solution.residual},
        {"probe", probe_functional(model, result)},
        {"merge_warnings", result.colloc.diagnostics.size()},
    };
    {
        std::ofstream f(out / "report.json", std::ios::binary);
        if (!f) {
            throw IoError(fmt::format("cannot write {}", (out / "report.json").string()));
        }
        f << report.dump(2) << '\n';
    }
    fmt::print("order {} dofs {} residual {:.3e} probe {:.10g}\n", current_order(model),
               result.solution.dof_count(), result.solution.residual,
               report["probe"].get<double>());
    spdlog::info("finished in {:.2f} s", seconds);
    return 0;
}

int run_study(const StudyOptions& opt) {
    const BoundaryModel model = apply_overrides(parse_model(opt.model), std::nullopt, opt.gauss,
                                                std::nullopt);
    const std::vector<StudyRow> rows = refinement_study(model, opt.orders);
    std::ostringstream buf;
    write_study_csv(buf, rows);
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) {
        throw IoError(fmt::format("cannot write {}", opt.out));
    }
    f << buf.str();
    std::cout << buf.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Isogeometric boundary elements for 3D elastostatics on trimmed NURBS"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    auto* solve = app.add_subcommand("solve", "Solve a model and write results");
    solve->add_option("model", solve_opt.model, "Model file (JSON)")->required();
    solve->add_option("--order", solve_opt.order, "Field order in both directions")
        ->check(CLI::Range(1, 30));
    solve->add_option("--gauss", solve_opt.gauss, "Gauss points per direction")
        ->check(CLI::Range(1, 64));
    solve->add_option("--threads", solve_opt.threads, "Assembly threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--out", solve_opt.out, "Output directory");
    solve->add_option("--trace", solve_opt.traces,
                      "Trace selector PATCH:CURVE[:COMPONENT], CURVE in trim1 trim2 s0 s1 t0 t1");
    solve->add_option("--samples", solve_opt.samples, "Samples per trace")
        ->check(CLI::Range(2, 1000000));
    solve->add_flag("--vtk", solve_opt.vtk, "Write solution.vtk");
    solve->add_option("--scale", solve_opt.scale, "Displacement scale for the VTK geometry");
    solve->add_option("--vtk-samples", solve_opt.vtk_samples, "VTK grid points per direction")
        ->check(CLI::Range(2, 10000));

    StudyOptions study_opt;
    auto* study = app.add_subcommand("study", "Field order refinement study");
    study->add_option("model", study_opt.model, "Model file (JSON)")->required();
    study->add_option("--orders", study_opt.orders, "Field orders, increasing")
        ->check(CLI::Range(1, 30));
    study->add_option("--gauss", study_opt.gauss, "Gauss points per direction")
        ->check(CLI::Range(1, 64));
    study->add_option("--out", study_opt.out, "CSV report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: E_USAGE " << e.what() << '\n';
        std::cerr << app.help();
        return exit_usage;
    }

    try {
        if (solve->parsed()) {
            return run_solve(solve_opt);
        }
        return run_study(study_opt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.code() << ' ' << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: E_INTERNAL " << e.what() << '\n';
    }
    return exit_failure;
}
