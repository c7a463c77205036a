#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace bnls {

/// Least-squares line through (x_i, y_i): y ~ slope x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double residual_rms = 0.0;
};

LineFit fit_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Fit of log|y| against log x; requires >= min_points positive samples.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                   int min_points = 4);

/// One experiment's tabulated samples plus fitted quantities, serializable to
/// CSV + JSON for downstream plotting.
struct ExperimentReport {
    std::string experiment;
    std::vector<std::string> columns;          // CSV column names
    std::vector<std::vector<double>> rows;     // sample table
    std::map<std::string, double> scalars;     // fitted slopes, targets, residuals
    std::map<std::string, std::string> notes;  // provenance of inputs, warnings

    void add_row(std::initializer_list<double> vals);
    void write_csv(const std::string& path) const;
    std::string to_json() const; // schema-versioned report object
    void write_json(const std::string& path) const;
};

/// Versioned JSON schema describing the report format.
std::string report_schema();
int report_schema_version();

/// Minimal validation of a serialized report against report_schema().
bool validate_report_json(const std::string& json_text, std::string* why = nullptr);

/// FNV-1a hash of a canonical string; used to stamp configs into reports.
std::string fnv1a_hex(const std::string& text);

} // namespace bnls
