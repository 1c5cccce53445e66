#pragma once

#include "forchheimer/forchheimer_law.hpp"
#include "forchheimer/verification.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace forch {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by parse_config for --help; what() is the help text.
class HelpRequested : public UsageError {
public:
    using UsageError::UsageError;
};

/// A solver failure inside a study, tagged with the mesh size that failed.
class StudyError : public std::runtime_error {
public:
    StudyError(int mesh_size, const std::string& what)
        : std::runtime_error("N = " + std::to_string(mesh_size) + ": " + what), mesh_size_(mesh_size)
    {
    }
    [[nodiscard]] int mesh_size() const noexcept { return mesh_size_; }

private:
    int mesh_size_;
};

enum class DtRule { OneOverN, Fixed };
enum class ReportFormat { Csv, Markdown };
enum class RateKind { Factor, Order };
enum class StudyProblem { Manufactured, Zero };

struct StudyConfig {
    std::vector<int> mesh_sizes{4, 8, 16, 32, 64};
    DtRule dt_rule{DtRule::OneOverN};
    double dt{0.0};  // used with DtRule::Fixed
    double t_final{1.0};
    double nonlinear_tol{1e-6};
    int max_picard{100};
    std::string g_coeffs{"1,1"};
    std::string g_exponents{"1"};
    StudyProblem problem{StudyProblem::Manufactured};
    ReportFormat format{ReportFormat::Csv};
    RateKind rates{RateKind::Factor};
    std::string output_path;      // empty: stdout
    std::string diagnostics_dir;  // empty: no per-run diagnostics
    std::string mesh_dump_path;   // empty: no dump

    [[nodiscard]] ForchheimerPolynomial law() const { return parse_law(g_coeffs, g_exponents); }
    /// Time step for a mesh of n squares per side.
    [[nodiscard]] double dt_for(int n) const;
};

/// Parse command-line flags (argv[0] is the program name). Throws UsageError.
StudyConfig parse_config(int argc, const char* const* argv);
StudyConfig parse_config(const std::vector<std::string>& args);

/// Checks the invariants of a configuration; throws UsageError.
void validate(const StudyConfig& config);

struct StudyRow {
    int n{0};
    double dt{0.0};
    ErrorTriple errors;
    std::optional<double> rate_p;
    std::optional<double> rate_s;
    std::optional<double> rate_u;
    int max_picard_iters{0};
};

struct StudyReport {
    std::vector<StudyRow> rows;
    RateKind rates{RateKind::Factor};
};

/// Build, solve and measure every mesh in the study, in mesh-size order.
StudyReport run_study(const StudyConfig& config);

inline constexpr const char* kCsvHeader = "N,err_p_L2,rate_p,err_s_Lbeta,rate_s,err_u_Lbeta,rate_u";

void write_csv(std::ostream& os, const StudyReport& report);
void write_markdown(std::ostream& os, const StudyReport& report);
void write_report(std::ostream& os, const StudyReport& report, ReportFormat format);

} // namespace forch
