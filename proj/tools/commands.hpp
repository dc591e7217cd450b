#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cascade/polarization.hpp"
#include "cascade/rates.hpp"

namespace cascade::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kValidation = 2, kVerificationFailed = 3 };

enum class Method { analytic, oracle, both, symmetric };

/// Bad command-line usage that the option parser itself cannot see.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Method parse_method(std::string_view text);

/// Evenly spaced, strictly increasing sample points.
struct Grid {
    double start = 0.0;
    double stop = 1.0;
    int points = 2;

    void validate(std::string_view name) const;
    std::vector<double> values() const;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Twelve significant digits, shortest of fixed/exponent ("%.12g").
std::string format_number(double value);
void write_csv(const CsvTable& table, std::ostream& out);

/// Parameters used by the figure presets: gamma1 = gamma3 = 1/2, gamma2 = gamma4 = 1.
RateParams figure_params(double delta, double dephasing);

/// Starting from the fully populated biexciton.
CsvTable populations_table(const RateParams& params, const Grid& times, Method method);
CsvTable g2_table(const RateParams& params, const PolarizerSetting& p1, const PolarizerSetting& p2,
                  const Grid& taus, Method method);
CsvTable degree_table(const RateParams& params, const BasisPair& basis, const Grid& taus,
                      Method method);
/// Time-averaged degree in the basis (theta, phi) / orthogonal, swept over theta.
CsvTable degree_avg_table(const RateParams& params, const Grid& thetas, double phi);

struct NamedTable {
    std::string file_name;
    CsvTable table;
};

/// One table per curve of figure `id` (3a, 3b, 4a, 4b or 5).
std::vector<NamedTable> figure_tables(std::string_view id);

struct VerifyOptions {
    int cases = 200;
    Grid taus{0.0, 10.0, 50};
    std::uint64_t seed = 1;
    double max_rate = 10.0;
    double max_delta = 20.0;
    double tolerance = 1e-6;
    /// When set every case uses these rates and only the analyzers vary.
    std::optional<RateParams> fixed_params;
};

struct VerifyCase {
    RateParams params;
    PolarizerSetting p1;
    PolarizerSetting p2;
    double max_abs_error = 0.0;
    double scale = 0.0;
    double relative_error = 0.0;
};

struct VerifyReport {
    VerifyOptions options;
    std::vector<VerifyCase> cases;
    double max_relative_error = 0.0;
    bool passed = false;

    nlohmann::json to_json() const;
};

/// Analytic g2 against conditioned evolution on random parameters and analyzers.
/// Relative error is measured against the largest analytic value on each case's grid.
VerifyReport run_verification(const VerifyOptions& options);

/// Full command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace cascade::cli
