// Convergence study driver for the expanded mixed RT0 Forchheimer solver.
//
//   forchheimer_study --mesh-sizes 4,8,16,32,64 --format markdown
//   forchheimer_study --g-coeffs 1 --g-exponents "" --problem zero --mesh-sizes 4
//
// Exit codes: 0 success, 1 usage error, 2 solver failure, 3 I/O error.

#include "forchheimer/study.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv)
{
    forch::StudyConfig config;
    try {
        config = forch::parse_config(argc, argv);
    } catch (const forch::HelpRequested& help) {
        std::cout << help.what();
        return 0;
    } catch (const forch::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    }

    forch::StudyReport report;
    try {
        report = forch::run_study(config);
    } catch (const forch::StudyError& e) {
        std::cerr << "solver failure at " << e.what() << '\n';
        return 2;
    }

    if (config.output_path.empty()) {
        forch::write_report(std::cout, report, config.format);
        return 0;
    }
    std::ofstream out(config.output_path);
    if (!out) {
        std::cerr << "cannot open " << config.output_path << '\n';
        return 3;
    }
    forch::write_report(out, report, config.format);
    return out ? 0 : 3;
}
