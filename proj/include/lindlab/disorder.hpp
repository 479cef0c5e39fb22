// disorder.hpp — dissipative Anderson models: seeded potentials, Monte-Carlo
// fractional moments, the strong-disorder threshold, and decay fits

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "lindlab/lattice.hpp"
#include "lindlab/model.hpp"
#include "lindlab/numerics.hpp"

namespace lindlab {

// Uniform(a, b) site disorder of strength lambda; draws are a pure function of
// (master_seed, realization, site ordinal).
struct DisorderSpec {
    double a = 0.0;
    double b = 1.0;
    double lambda = 0.0;
    std::uint64_t master_seed = 0;

    double density_sup() const { return 1.0 / (b - a); }
};

RealVector sample_potential(const DisorderSpec& spec, const Lattice& lat,
                            std::uint64_t realization);

struct MomentEstimate {
    double s = 0.0;
    Complex z;
    int x = 0, y = 0;
    double mean = 0.0;
    double std_error = 0.0;
    double median_of_means = 0.0;  // robustness column for s >= 1/2
    int n_samples = 0;
};

// Monte-Carlo estimate of E |<x| (z - A0 - i lambda V)^{-1} |y>|^s over potential
// realizations. Deterministic given the spec's master seed, at any worker count.
std::vector<MomentEstimate> fractional_moment_mc(const Matrix& a0, const Lattice& lat,
                                                 const DisorderSpec& spec, double s, Complex z,
                                                 const std::vector<std::pair<int, int>>& pairs,
                                                 int n_samples, int threads = 1);

struct LocalizationThreshold {
    double s = 0.0;
    double mu = 0.0;
    double c_s = 0.0;          // 2^s ||p||_inf^s / (1 - s)
    double lambda_s_mu = 0.0;  // C_s sup_x sum_{y' != x} e^{mu d} |A0(x,y')|^s
    double lambda_min = 0.0;   // smallest |lambda| to which the theorem applies

    bool applies(double lambda) const;
    double prefactor(double lambda) const;  // C_s / (|lambda|^s - lambda_s_mu)
};

LocalizationThreshold localization_threshold(const Matrix& a0, const Lattice& lat,
                                             const DisorderSpec& spec, double s, double mu);

struct CoherenceEstimate {
    int y = 0;
    int distance = 0;
    double mean = 0.0;
    double std_error = 0.0;
};

// E |<x| A_eps(|x0><x0|) |y>| over disorder realizations of the model family.
std::vector<CoherenceEstimate> disordered_coherence_mc(
    const std::function<LindbladModel(const RealVector&)>& family, const DisorderSpec& spec,
    const Lattice& lat, int x0, int x, const std::vector<int>& ys, double eps, int n_samples,
    int threads = 1);

struct DecayFit {
    double c = 0.0;
    double mu = 0.0;
    double r2 = 0.0;
    int points_used = 0;
};

// Least squares of log magnitude against distance. Requires at least three points
// above the 1e-13 floor on a genuine distance series (nonnegative integers).
DecayFit fit_exponential_decay(const std::vector<std::pair<double, double>>& distance_magnitude);

}  // namespace lindlab
