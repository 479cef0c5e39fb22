// disorder.cpp — Monte-Carlo fractional moments and disorder-averaged coherence

#include "lindlab/disorder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "lindlab/dynamics.hpp"

namespace lindlab {

RealVector sample_potential(const DisorderSpec& spec, const Lattice& lat,
                            std::uint64_t realization) {
    if (spec.b <= spec.a) throw std::invalid_argument("disorder: requires a < b");
    RealVector omega(lat.size());
    for (int u = 0; u < lat.size(); ++u) {
        omega(u) = spec.a + (spec.b - spec.a) * num::uniform01(spec.master_seed, realization, u);
    }
    return omega;
}

std::vector<MomentEstimate> fractional_moment_mc(const Matrix& a0, const Lattice& lat,
                                                 const DisorderSpec& spec, double s, Complex z,
                                                 const std::vector<std::pair<int, int>>& pairs,
                                                 int n_samples, int threads) {
    if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("fractional moments: s in (0,1)");
    if (n_samples < 2) throw std::invalid_argument("fractional moments: need n_samples >= 2");
    const Eigen::Index n = lat.size();
    if (a0.rows() != n || a0.cols() != n) {
        throw std::invalid_argument("fractional moments: dimension mismatch");
    }
    for (const auto& [x, y] : pairs) {
        if (x < 0 || x >= n || y < 0 || y >= n) {
            throw std::invalid_argument("fractional moments: pair outside lattice");
        }
    }
    // per-realization samples land in indexed slots; reductions run in index order
    std::vector<std::vector<double>> samples(pairs.size(), std::vector<double>(n_samples));
    const Matrix id = Matrix::Identity(n, n);
    num::parallel_for(n_samples, threads, [&](std::size_t r) {
        const RealVector omega = sample_potential(spec, lat, r);
        Matrix shifted = z * id - a0;
        for (Eigen::Index u = 0; u < n; ++u) {
            shifted(u, u) -= Complex(0.0, spec.lambda * omega(u));  // A = A0 + i lambda V
        }
        Eigen::PartialPivLU<Matrix> lu(shifted);
        // group solves by column
        std::vector<int> columns;
        for (const auto& p : pairs) columns.push_back(p.second);
        std::sort(columns.begin(), columns.end());
        columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
        for (int col : columns) {
            Vector e = Vector::Zero(n);
            e(col) = 1.0;
            const Vector g = lu.solve(e);
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                if (pairs[p].second == col) {
                    samples[p][r] = std::pow(std::abs(g(pairs[p].first)), s);
                }
            }
        }
    });

    std::vector<MomentEstimate> out;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        MomentEstimate est;
        est.s = s;
        est.z = z;
        est.x = pairs[p].first;
        est.y = pairs[p].second;
        est.n_samples = n_samples;
        double sum = 0.0;
        for (double v : samples[p]) sum += v;
        est.mean = sum / n_samples;
        double var = 0.0;
        for (double v : samples[p]) var += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(var / (n_samples - 1.0) / n_samples);
        // median of means over 10 bins, in realization order
        const int bins = std::min(10, n_samples);
        std::vector<double> bin_means(bins, 0.0);
        std::vector<int> bin_counts(bins, 0);
        for (int r = 0; r < n_samples; ++r) {
            const int b = r % bins;
            bin_means[b] += samples[p][r];
            ++bin_counts[b];
        }
        for (int b = 0; b < bins; ++b) bin_means[b] /= std::max(1, bin_counts[b]);
        std::nth_element(bin_means.begin(), bin_means.begin() + bins / 2, bin_means.end());
        est.median_of_means = bin_means[bins / 2];
        out.push_back(est);
    }
    return out;
}

bool LocalizationThreshold::applies(double lambda) const {
    return std::pow(std::abs(lambda), s) > lambda_s_mu;
}

double LocalizationThreshold::prefactor(double lambda) const {
    if (!applies(lambda)) {
        throw std::invalid_argument("localization threshold: |lambda|^s <= lambda_s(mu)");
    }
    return c_s / (std::pow(std::abs(lambda), s) - lambda_s_mu);
}

LocalizationThreshold localization_threshold(const Matrix& a0, const Lattice& lat,
                                             const DisorderSpec& spec, double s, double mu) {
    if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("localization threshold: s in (0,1)");
    if (mu < 0.0) throw std::invalid_argument("localization threshold: mu must be nonnegative");
    LocalizationThreshold out;
    out.s = s;
    out.mu = mu;
    out.c_s = std::pow(2.0, s) * std::pow(spec.density_sup(), s) / (1.0 - s);
    double sup = 0.0;
    for (int x = 0; x < lat.size(); ++x) {
        double row = 0.0;
        for (int y = 0; y < lat.size(); ++y) {
            if (y == x) continue;
            const double mag = std::abs(a0(x, y));
            if (mag == 0.0) continue;
            const int d = lat.distance(x, y);
            if (d == Lattice::kInfinity) {
                throw std::invalid_argument("localization threshold: entry between disconnected sites");
            }
            row += std::exp(mu * d) * std::pow(mag, s);
        }
        sup = std::max(sup, row);
    }
    out.lambda_s_mu = out.c_s * sup;
    out.lambda_min = std::pow(out.lambda_s_mu, 1.0 / s);
    return out;
}

std::vector<CoherenceEstimate> disordered_coherence_mc(
    const std::function<LindbladModel(const RealVector&)>& family, const DisorderSpec& spec,
    const Lattice& lat, int x0, int x, const std::vector<int>& ys, double eps, int n_samples,
    int threads) {
    if (n_samples < 2) throw std::invalid_argument("coherence mc: need n_samples >= 2");
    std::vector<std::vector<double>> samples(ys.size(), std::vector<double>(n_samples));
    num::parallel_for(n_samples, threads, [&](std::size_t r) {
        const RealVector omega = sample_potential(spec, lat, r);
        const LindbladModel model = family(omega);
        const Matrix abel =
            abel_average(model, DensityMatrix::pure_site(lat.size(), x0).rho, eps, false);
        for (std::size_t i = 0; i < ys.size(); ++i) {
            samples[i][r] = std::abs(abel(x, ys[i]));
        }
    });
    std::vector<CoherenceEstimate> out;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        CoherenceEstimate est;
        est.y = ys[i];
        est.distance = lat.distance(x, ys[i]);
        double sum = 0.0;
        for (double v : samples[i]) sum += v;
        est.mean = sum / n_samples;
        double var = 0.0;
        for (double v : samples[i]) var += (v - est.mean) * (v - est.mean);
        est.std_error = std::sqrt(var / (n_samples - 1.0) / n_samples);
        out.push_back(est);
    }
    return out;
}

DecayFit fit_exponential_decay(const std::vector<std::pair<double, double>>& distance_magnitude) {
    constexpr double kFloor = 1e-13;
    std::vector<std::pair<double, double>> usable;
    for (const auto& [d, m] : distance_magnitude) {
        if (d < 0 || std::abs(d - std::round(d)) > 1e-9) {
            throw std::invalid_argument("fit_exponential_decay: not a distance series");
        }
        if (m > kFloor) usable.emplace_back(d, m);
    }
    if (usable.size() < 3) {
        throw std::invalid_argument("fit_exponential_decay: need at least 3 points above floor");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [d, m] : usable) {
        const double ln = std::log(m);
        sx += d;
        sy += ln;
        sxx += d * d;
        sxy += d * ln;
    }
    const double n = static_cast<double>(usable.size());
    const double denom = n * sxx - sx * sx;
    DecayFit fit;
    fit.points_used = static_cast<int>(usable.size());
    const double slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    fit.mu = -slope;
    fit.c = std::exp(intercept);
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / n;
    for (const auto& [d, m] : usable) {
        const double ln = std::log(m);
        ss_res += (ln - (intercept + slope * d)) * (ln - (intercept + slope * d));
        ss_tot += (ln - mean_y) * (ln - mean_y);
    }
    fit.r2 = ss_tot <= 1e-30 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

}  // namespace lindlab
