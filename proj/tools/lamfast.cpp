#include <chrono>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "lamfast/bench.hpp"
#include "lamfast/sparse.hpp"

namespace {

lamfast::ProblemSetup setupFromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    return lamfast::buildSetup(lamfast::parseProblemConfig(in));
}

int runBenchCommand(const std::string& config_path, const std::string& out_path,
                    const std::string& format, int threads, unsigned seed) {
    std::ifstream in(config_path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + config_path + "'");
    lamfast::BenchConfig config = lamfast::parseBenchConfig(in);
    config.threads = threads;
    config.seed = seed;

    const lamfast::BenchReport report = lamfast::runBench(config);

    std::ofstream out(out_path);
    if (!out)
        throw std::runtime_error("cannot write report to '" + out_path + "'");
    if (format == "csv")
        lamfast::emitCsv(report, out);
    else
        lamfast::emitJson(report, out);
    if (!out)
        throw std::runtime_error("error while writing '" + out_path + "'");

    std::cout << report.records.size() << " records written to " << out_path << '\n';
    for (const std::string& failure : report.failures)
        std::cerr << "failed cell: " << failure << '\n';
    return report.failures.empty() ? 0 : 1;
}

int runAssembleCommand(const std::string& config_path, const std::string& backend_name,
                       const std::string& export_path, int threads) {
    const lamfast::ProblemSetup setup = setupFromFile(config_path);
    const lamfast::Backend backend = lamfast::backendFromName(backend_name);

    lamfast::AssemblyOptions options;
    options.threads = threads;
    lamfast::AssemblyStats stats;
    const auto t0 = std::chrono::steady_clock::now();
    const lamfast::StiffnessMatrix matrix = lamfast::assembleWith(backend, setup, options, &stats);
    const auto t1 = std::chrono::steady_clock::now();

    std::cout << "backend:        " << lamfast::backendName(backend) << '\n'
              << "matrix size:    " << matrix.dim() << " x " << matrix.dim() << '\n'
              << "nonzeros:       " << matrix.nnz() << '\n'
              << "layers:         " << setup.layup.numLayers() << " ("
              << setup.layup.numDistinctConfigs() << " distinct)" << '\n'
              << "qpoint visits:  " << stats.qpoint_visits << '\n'
              << "assembly time:  " << std::chrono::duration<double>(t1 - t0).count() << " s\n";

    if (!export_path.empty()) {
        std::ofstream out(export_path);
        if (!out)
            throw std::runtime_error("cannot write matrix to '" + export_path + "'");
        lamfast::writeMatrixMarket(matrix, out);
        if (!out)
            throw std::runtime_error("error while writing '" + export_path + "'");
        std::cout << "matrix written: " << export_path << '\n';
    }
    return 0;
}

int runVerifyCommand(const std::string& config_path, int threads) {
    const lamfast::ProblemSetup setup = setupFromFile(config_path);
    lamfast::AssemblyOptions options;
    options.threads = threads;

    const lamfast::StiffnessMatrix reference =
        lamfast::assembleWith(lamfast::Backend::Standard, setup, options);
    constexpr double tolerance = 1e-12;
    bool all_ok = true;
    for (lamfast::Backend backend : {lamfast::Backend::Fast, lamfast::Backend::VoigtFree}) {
        const lamfast::StiffnessMatrix matrix = lamfast::assembleWith(backend, setup, options);
        const double diff = lamfast::frobeniusRelDiff(matrix, reference);
        const bool ok = diff <= tolerance;
        all_ok = all_ok && ok;
        std::cout << lamfast::backendName(backend) << " vs standard: rel diff " << diff << "  "
                  << (ok ? "ok" : "MISMATCH") << '\n';
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stiffness assembly for laminated plates on spline bases"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::string backend_name = "fast";
    std::string export_path;
    int threads = 1;
    unsigned seed = 1u;

    CLI::App* bench = app.add_subcommand("bench", "Run a timing sweep described by a JSON config");
    bench->add_option("--config", config_path, "sweep config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    bench->add_option("--out", out_path, "report output path")->required();
    bench->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    bench->add_option("--threads", threads, "threads per assembly");
    bench->add_option("--seed", seed, "seed for the custom layup family's random angles");

    CLI::App* assemble =
        app.add_subcommand("assemble", "Assemble one problem and optionally export the matrix");
    assemble->add_option("--config", config_path, "problem config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    assemble->add_option("--backend", backend_name, "assembly backend")
        ->check(CLI::IsMember({"standard", "fast", "voigt-free"}));
    assemble->add_option("--export-matrix", export_path, "Matrix Market output path");
    assemble->add_option("--threads", threads, "threads per assembly");

    CLI::App* verify =
        app.add_subcommand("verify", "Assemble with every backend and compare the matrices");
    verify->add_option("--config", config_path, "problem config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    verify->add_option("--threads", threads, "threads per assembly");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed())
            return runBenchCommand(config_path, out_path, format, threads, seed);
        if (assemble->parsed())
            return runAssembleCommand(config_path, backend_name, export_path, threads);
        return runVerifyCommand(config_path, threads);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}
