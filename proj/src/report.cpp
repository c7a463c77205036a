#include "bnls/report.hpp"

#include "bnls/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bnls {

LineFit fit_line(const Eigen::VectorXd& x, const Eigen::VectorXd& y)
{
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != n) throw fit_error("fit_line: need >= 2 paired samples");
    const double xm = x.mean(), ym = y.mean();
    const Eigen::VectorXd dx = x.array() - xm, dy = y.array() - ym;
    const double sxx = dx.squaredNorm();
    if (sxx == 0.0) throw fit_error("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = dx.dot(dy) / sxx;
    f.intercept = ym - f.slope * xm;
    const Eigen::VectorXd resid = dy - f.slope * dx;
    const double syy = dy.squaredNorm();
    f.residual_rms = std::sqrt(resid.squaredNorm() / n);
    f.r_squared = syy > 0.0 ? 1.0 - resid.squaredNorm() / syy : 1.0;
    return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y, int min_points)
{
    std::vector<double> lx, ly;
    for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0.0 && std::abs(y[i]) > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(std::abs(y[i])));
        }
    }
    if (static_cast<int>(lx.size()) < min_points)
        throw fit_error("fit_loglog: fewer than the required number of positive samples");
    Eigen::VectorXd vx = Eigen::Map<Eigen::VectorXd>(lx.data(), lx.size());
    Eigen::VectorXd vy = Eigen::Map<Eigen::VectorXd>(ly.data(), ly.size());
    return fit_line(vx, vy);
}

void ExperimentReport::add_row(std::initializer_list<double> vals)
{
    rows.emplace_back(vals);
}

void ExperimentReport::write_csv(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << std::setprecision(17);
    for (size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << '\n';
    for (const auto& row : rows) {
        for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << '\n';
    }
}

int report_schema_version() { return 1; }

std::string ExperimentReport::to_json() const
{
    nlohmann::json j;
    j["schema_version"] = report_schema_version();
    j["experiment"] = experiment;
    j["columns"] = columns;
    j["rows"] = rows;
    j["scalars"] = scalars;
    j["notes"] = notes;
    return j.dump(2);
}

void ExperimentReport::write_json(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << to_json() << '\n';
}

std::string report_schema()
{
    nlohmann::json s;
    s["schema_version"] = report_schema_version();
    s["type"] = "object";
    s["required"] = {"schema_version", "experiment", "columns", "rows", "scalars", "notes"};
    s["properties"] = {
        {"schema_version", {{"type", "integer"}}},
        {"experiment", {{"type", "string"}}},
        {"columns", {{"type", "array"}, {"items", {{"type", "string"}}}}},
        {"rows", {{"type", "array"}, {"items", {{"type", "array"}, {"items", {{"type", "number"}}}}}}},
        {"scalars", {{"type", "object"}, {"values", {{"type", "number"}}}}},
        {"notes", {{"type", "object"}, {"values", {{"type", "string"}}}}},
    };
    return s.dump(2);
}

namespace {

bool type_matches(const nlohmann::json& v, const std::string& t)
{
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    if (t == "string") return v.is_string();
    if (t == "array") return v.is_array();
    if (t == "object") return v.is_object();
    return false;
}

bool check_node(const nlohmann::json& schema, const nlohmann::json& v, std::string* why)
{
    const std::string t = schema.value("type", "object");
    if (!type_matches(v, t)) {
        if (why) *why = "expected " + t;
        return false;
    }
    if (t == "array" && schema.contains("items")) {
        for (const auto& item : v)
            if (!check_node(schema["items"], item, why)) return false;
    }
    if (t == "object" && schema.contains("values")) {
        for (const auto& [key, val] : v.items()) {
            (void)key;
            if (!check_node(schema["values"], val, why)) return false;
        }
    }
    return true;
}

} // namespace

bool validate_report_json(const std::string& json_text, std::string* why)
{
    nlohmann::json doc, schema;
    try {
        doc = nlohmann::json::parse(json_text);
        schema = nlohmann::json::parse(report_schema());
    } catch (const std::exception& e) {
        if (why) *why = e.what();
        return false;
    }
    for (const auto& req : schema["required"]) {
        if (!doc.contains(req.get<std::string>())) {
            if (why) *why = "missing field " + req.get<std::string>();
            return false;
        }
    }
    if (doc["schema_version"].get<int>() != report_schema_version()) {
        if (why) *why = "schema_version mismatch";
        return false;
    }
    for (const auto& [key, sub] : schema["properties"].items()) {
        if (!doc.contains(key)) continue;
        if (!check_node(sub, doc[key], why)) {
            if (why) *why = "field " + key + (why && !why->empty() ? ": " + *why : "");
            return false;
        }
    }
    return true;
}

std::string fnv1a_hex(const std::string& text)
{
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

} // namespace bnls
