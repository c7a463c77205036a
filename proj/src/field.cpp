#include "bnls/field.hpp"

#include "bnls/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bnls {

void require_same_plan(const PlanPtr& a, const PlanPtr& b, const char* where)
{
    if (a == b) return;
    if (a && b && a->dimension() == b->dimension() && a->size() == b->size() &&
        a->r_max() == b->r_max())
        return;
    throw grid_mismatch_error(std::string(where) + ": fields live on different grids");
}

RadialField sample_field(const PlanPtr& plan, const std::function<std::complex<double>(double)>& f)
{
    Eigen::VectorXcd v(plan->spatial_size());
    const auto& nodes = plan->spatial_grid().nodes;
    for (int j = 0; j < plan->spatial_size(); ++j) v[j] = f(nodes[j]);
    return {plan, std::move(v)};
}

SpectralField sample_spectrum(const PlanPtr& plan,
                              const std::function<std::complex<double>(double)>& fhat)
{
    Eigen::VectorXcd v(plan->size());
    const auto& nodes = plan->frequency_grid().nodes;
    for (int j = 0; j < plan->size(); ++j) v[j] = fhat(nodes[j]);
    return {plan, std::move(v)};
}

SpectralField radial_fourier(const RadialField& f)
{
    return {f.plan, f.plan->forward(f.values)};
}

RadialField inverse_radial_fourier(const SpectralField& fhat)
{
    return {fhat.plan, fhat.plan->inverse(fhat.values)};
}

double lq_norm(const RadialField& f, Exponent q)
{
    if (q.is_inf()) return f.values.cwiseAbs().maxCoeff();
    const double qv = q.finite_value();
    if (qv < 1.0) throw std::invalid_argument("lq_norm: q must be >= 1 or inf");
    const Eigen::ArrayXd mag = f.values.cwiseAbs().array();
    const double integral = (f.plan->radial_weights().array() * mag.pow(qv)).sum();
    return std::pow(f.plan->sphere() * integral, 1.0 / qv);
}

namespace {
double spectral_weighted_l2(const SpectralField& fhat, double s, SobolevKind kind)
{
    const auto& k = fhat.plan->frequency_grid().nodes;
    const auto& w = fhat.plan->frequency_weights();
    double acc = 0.0;
    for (int i = 0; i < fhat.plan->size(); ++i) {
        const double k2 = k[i] * k[i];
        const double mult = kind == SobolevKind::inhomogeneous ? std::pow(1.0 + k2, s)
                                                               : std::pow(k2, s);
        acc += w[i] * mult * std::norm(fhat.values[i]);
    }
    return std::sqrt(fhat.plan->sphere() * acc);
}
} // namespace

double sobolev_norm(const SpectralField& fhat, double s, SobolevKind kind)
{
    if (s < 0.0 || s > 4.0) throw std::invalid_argument("sobolev_norm: s outside [0, 4]");
    return spectral_weighted_l2(fhat, s, kind);
}

double sobolev_norm(const RadialField& f, double s, SobolevKind kind)
{
    return sobolev_norm(radial_fourier(f), s, kind);
}

double mass_fraction_beyond(const RadialField& f, double radius)
{
    const auto& r = f.plan->spatial_grid().nodes;
    const auto& w = f.plan->radial_weights();
    double total = 0.0, outer = 0.0;
    for (int j = 0; j < f.plan->spatial_size(); ++j) {
        const double contrib = w[j] * std::norm(f.values[j]);
        total += contrib;
        if (r[j] > radius) outer += contrib;
    }
    return total > 0.0 ? outer / total : 0.0;
}

bool truncation_warning(const RadialField& f, double threshold)
{
    return mass_fraction_beyond(f, 0.9 * f.plan->r_max()) > threshold;
}

void save_field_csv(const RadialField& f, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_field_csv: cannot open " + path);
    out << "r,re,im\n" << std::setprecision(17);
    const auto& r = f.plan->spatial_grid().nodes;
    for (int j = 0; j < f.plan->spatial_size(); ++j)
        out << r[j] << ',' << f.values[j].real() << ',' << f.values[j].imag() << '\n';

    nlohmann::json header;
    header["n"] = f.plan->dimension();
    header["r_max"] = f.plan->r_max();
    header["m"] = f.plan->size();
    std::ofstream hout(path + ".json");
    hout << header.dump(2) << '\n';
}

RadialField load_field_csv(const std::string& path)
{
    std::ifstream hin(path + ".json");
    if (!hin) throw std::runtime_error("load_field_csv: missing header " + path + ".json");
    nlohmann::json header;
    hin >> header;
    PlanPtr plan = get_plan(header.at("n").get<int>(), header.at("m").get<int>(),
                            header.at("r_max").get<double>());

    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_field_csv: cannot open " + path);
    std::string line;
    std::getline(in, line); // header row
    Eigen::VectorXcd v(plan->spatial_size());
    int j = 0;
    while (std::getline(in, line) && j < plan->spatial_size()) {
        std::istringstream ls(line);
        std::string tok;
        double cols[3] = {0, 0, 0};
        for (double& c : cols) {
            if (!std::getline(ls, tok, ',')) break;
            c = std::stod(tok);
        }
        v[j++] = {cols[1], cols[2]};
    }
    if (j != plan->spatial_size()) throw std::runtime_error("load_field_csv: row count mismatch");
    return {plan, std::move(v)};
}

} // namespace bnls
