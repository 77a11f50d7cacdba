// Batch runner for the verification suites.
//
//   sl2check --suite flow --seed 7 --samples 100 --format csv --out flow.csv
//
// Exit codes: 0 when every hard check passes, 1 when one fails, 2 on a usage
// error.

#include "sl2/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    sl2::SuiteConfig cfg;
    std::string out;
    std::string format = "json";

    CLI::App app{"Run the sl2 verification suites and emit a report."};
    std::vector<std::string> choices = sl2::suite_names();
    choices.push_back("all");
    app.add_option("--suite", cfg.suite, "Suite to run")->check(CLI::IsMember(choices))->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for all sampled checks")->capture_default_str();
    app.add_option("--tol-scale", cfg.tol_scale, "Factor applied to every tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--grid", cfg.grid, "Odd grid resolution for the 2-D suites")->capture_default_str();
    app.add_option("--samples", cfg.samples, "Sample count for sampled checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", out, "Write the report here instead of stdout");
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    sl2::SuiteReport report;
    try {
        report = sl2::run_suite(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "sl2check: " << e.what() << "\n";
        return 2;
    }

    const std::string text = format == "csv" ? sl2::to_csv(report) : sl2::to_json(report);
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) {
            std::cerr << "sl2check: cannot write " << out << "\n";
            return 2;
        }
        f << text;
    }
    for (const auto& c : report.checks)
        if (!c.pass)
            std::cerr << (c.hard ? "FAIL " : "note ") << c.suite << "/" << c.name << ": " << c.measured << " "
                      << c.relation << " " << c.tolerance << "\n";
    return report.hard_failures() == 0 ? 0 : 1;
}
