#pragma once

// Totally skewed alpha-stable laws with characteristic function
//
//     E exp(itG) = exp{ -c |t|^alpha (1 - i s sgn(t) tan(pi alpha / 2)) },   s = skew_sign,
//
// i.e. the conventional S(alpha, beta = s, sigma = c^{1/alpha}, delta = 0) law.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "lsvwip/cadlag.hpp"
#include "lsvwip/error.hpp"
#include "lsvwip/rng.hpp"

namespace lsvwip {

struct StableLaw {
    double alpha = 1.5;
    double c = 1.0;
    int skew_sign = 1;

    /// Conventional scale sigma = c^{1/alpha}.
    double sigma() const { return std::pow(c, 1.0 / alpha); }
    void validate() const;
};

/// alpha = 1/gamma, c = h(1/2)/4 (alpha |phi(0)|)^alpha Gamma(1 - alpha) cos(pi alpha / 2),
/// skew_sign = sgn(phi(0)).
StableLaw from_lsv_params(double gamma, double phi_at_zero, double h_half);

std::complex<double> cf(const StableLaw& law, double t);

/// Chambers-Mallows-Stuck draw.
double sample(const StableLaw& law, Rng& rng);
std::vector<double> sample_many(const StableLaw& law, std::size_t count, std::uint64_t seed, Stream stream);

inline constexpr double kDefaultCdfTolerance = 1e-6;

/// CDF by Gil-Pelaez inversion of the characteristic function.
double cdf(const StableLaw& law, double x, double tol = kDefaultCdfTolerance);

/// Piecewise-linear interpolation of the CDF on a grid uniform in asinh(x / sigma)
/// over |x| <= z_max sigma (dense in the bulk, sparse in the tails); arguments outside
/// the grid fall back to direct inversion.
class CdfTable {
public:
    explicit CdfTable(const StableLaw& law, double z_max = 300.0, std::size_t points = 8001,
                      double tol = kDefaultCdfTolerance);

    double operator()(double x) const;
    double lo() const noexcept;
    double hi() const noexcept;

private:
    StableLaw law_;
    double sigma_;
    double u_max_;
    double step_;
    double tol_;
    std::vector<double> values_;
};

struct LevyPathConfig {
    double T = 1.0;
    double grid_step = 1e-3;
    void validate() const;
};

/// W(0) = 0 and i.i.d. increments grid_step^{1/alpha} G on each grid cell.
StepPath sample_levy_path(const StableLaw& law, const LevyPathConfig& config, Rng& rng);

/// Law of mean_return^{-1/alpha} G: c -> c / mean_return.
StableLaw rescale_full_system(const StableLaw& law, double mean_return);

/// Inverse of `rescale_full_system`: the induced-system law whose rescaling is `law`.
StableLaw lift_to_induced_system(const StableLaw& law, double mean_return);

}  // namespace lsvwip
