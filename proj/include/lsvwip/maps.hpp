#pragma once

// Interval dynamics for the Liverani-Saussol-Vaienti (LSV) family
//
//     f(x) = x (1 + 2^g x^g)   for x in [0, 1/2]
//     f(x) = 2x - 1            for x in (1/2, 1]
//
// together with observables, initial laws and invariant-density estimation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lsvwip/error.hpp"
#include "lsvwip/rng.hpp"

namespace lsvwip {

enum class MapKind { LSV };

class MapSpec {
public:
    static MapSpec lsv(double gamma);

    MapKind kind() const noexcept { return kind_; }
    double gamma() const noexcept { return gamma_; }
    /// Stable exponent 1/gamma.
    double alpha() const noexcept { return 1.0 / gamma_; }
    /// True when gamma lies in (1/2, 1), the heavy-tailed regime.
    bool heavy_tailed() const noexcept { return gamma_ > 0.5 && gamma_ < 1.0; }

    /// Unchecked evaluation; callers guarantee x in [0,1].
    double operator()(double x) const noexcept {
        if (x < 0.5) return std::min(1.0, x * (1.0 + two_pow_gamma_ * std::pow(x, gamma_)));
        // 2^g (1/2)^g is not exactly 1 in floating point; pin the branch point.
        return x == 0.5 ? 1.0 : 2.0 * x - 1.0;
    }

    /// Left branch only, used by the preimage solver.
    double left_branch(double x) const noexcept {
        return x * (1.0 + two_pow_gamma_ * std::pow(x, gamma_));
    }
    double left_branch_derivative(double x) const noexcept {
        return 1.0 + (1.0 + gamma_) * two_pow_gamma_ * std::pow(x, gamma_);
    }

private:
    MapSpec(MapKind kind, double gamma);

    MapKind kind_;
    double gamma_;
    double two_pow_gamma_;
};

/// Checked map evaluation: throws DomainError for x outside [0,1].
double lsv_map(const MapSpec& spec, double x);

/// Streams x0, f(x0), ..., f^{n-1}(x0) into `visit` without materializing the orbit.
template <class Visitor>
void iterate_orbit(const MapSpec& spec, double x0, std::uint64_t n, Visitor&& visit) {
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("iterate_orbit: x0 outside [0,1]");
    double x = x0;
    for (std::uint64_t k = 0; k < n; ++k) {
        visit(x);
        x = spec(x);
    }
}

std::vector<double> orbit(const MapSpec& spec, double x0, std::uint64_t n);

// ---------------------------------------------------------------------------
// Observables

enum class ObservableFamily { Affine, Power };

/// weight * 1_[left, right). Use right = +inf to include x = 1.
struct IndicatorTerm {
    double left;
    double right;
    double weight;

    bool contains(double x) const noexcept { return x >= left && x < right; }
};

struct CenteringRecord {
    std::uint64_t orbit_length = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t chains = 0;
    std::uint64_t seed = 0;
};

/// phi(x) = a + b * x           (Affine, Hoelder exponent 1)
/// phi(x) = a + b * x^eta       (Power,  Hoelder exponent eta)
/// plus any number of indicator terms, minus an empirical centering offset.
class ObservableSpec {
public:
    static ObservableSpec affine(double a, double b);
    static ObservableSpec power(double a, double b, double eta);
    static ObservableSpec constant(double c) { return affine(c, 0.0); }

    ObservableSpec with_indicator(IndicatorTerm term) const;
    ObservableSpec with_centering(double offset, CenteringRecord record) const;

    ObservableFamily family() const noexcept { return family_; }
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double eta() const noexcept { return eta_; }
    const std::vector<IndicatorTerm>& indicators() const noexcept { return indicators_; }
    double centering_offset() const noexcept { return offset_; }
    const CenteringRecord& centering_record() const noexcept { return record_; }

    /// Expression value before centering.
    double raw(double x) const noexcept { return smooth(x) + indicator_sum(x); }
    /// Effective (centered) value.
    double operator()(double x) const noexcept { return raw(x) - offset_; }

    /// phi(0) of the raw expression.
    double raw_value_at_zero() const noexcept { return raw(0.0); }
    /// phi(0) of the centered observable; this is the phi(0) the limit theorem refers to.
    double value_at_zero() const noexcept { return raw(0.0) - offset_; }

    double holder_exponent() const noexcept;
    /// sup |phi| over [0,1] for the centered observable (exact: piecewise monotone).
    double sup_norm() const;
    /// sup { e : phi keeps the strict sign of phi(0) on [0, e) }, capped at 1.
    /// Zero when phi(0) == 0.
    double sign_radius() const;

    std::string describe() const;

private:
    ObservableSpec(ObservableFamily family, double a, double b, double eta);

    double smooth(double x) const noexcept {
        return family_ == ObservableFamily::Affine ? a_ + b_ * x : a_ + b_ * std::pow(x, eta_);
    }
    double indicator_sum(double x) const noexcept {
        double s = 0.0;
        for (const auto& t : indicators_)
            if (t.contains(x)) s += t.weight;
        return s;
    }
    // Sorted breakpoints of the piecewise structure, including 0 and 1.
    std::vector<double> pieces() const;
    // Value on the piece [lo, hi) as x -> hi from the left.
    double left_limit_on_piece(double lo, double hi) const noexcept;

    ObservableFamily family_;
    double a_;
    double b_;
    double eta_;
    std::vector<IndicatorTerm> indicators_;
    double offset_ = 0.0;
    CenteringRecord record_;
};

/// Birkhoff sum phi_n(x0) = sum_{j<n} phi(f^j x0) of the centered observable.
double birkhoff_sum(const MapSpec& spec, const ObservableSpec& obs, double x0, std::uint64_t n);

/// Empirical mean-zero centering: offset = Birkhoff average of the raw observable
/// over `chains` independent orbits of `orbit_length / chains` steps after burn-in.
ObservableSpec calibrate_centering(const MapSpec& spec, const ObservableSpec& obs,
                                   std::uint64_t orbit_length, std::uint64_t burn_in,
                                   std::uint64_t chains, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Initial laws

enum class DensityFamily { Uniform, Polynomial, Histogram };

/// Probability density on [0,1].
///  Uniform:    no parameters.
///  Polynomial: coefficients c_0..c_d of sum c_k x^k.
///  Histogram:  equal-width bin heights (densities); integrate to 1.
class DensitySpec {
public:
    static DensitySpec uniform();
    static DensitySpec polynomial(std::vector<double> coefficients);
    static DensitySpec histogram(std::vector<double> heights);

    DensityFamily family() const noexcept { return family_; }
    const std::vector<double>& parameters() const noexcept { return params_; }

    double density(double x) const;
    double cdf(double x) const;
    /// Checks nonnegativity and unit mass; throws ValidationError.
    void validate() const;

    std::string describe() const;

private:
    DensitySpec(DensityFamily family, std::vector<double> params);

    DensityFamily family_;
    std::vector<double> params_;
};

/// One draw from the density by inverse CDF.
double sample_initial(const DensitySpec& density, Rng& rng);

// ---------------------------------------------------------------------------
// Invariant density

struct DensityEstimate {
    std::vector<double> bin_edges;
    std::vector<double> masses;
    std::uint64_t sample_count = 0;
    /// Set when the orbit is short relative to the number of bins.
    bool low_quality = false;
    /// Density estimate at 1/2 from the two bins adjacent to 1/2 (centered window).
    double h_half = 0.0;

    /// mass / width of the bin containing x.
    double at(double x) const;
    /// Estimated mu([lo, hi)) by integrating the histogram.
    double mass_between(double lo, double hi) const;
};

DensityEstimate estimate_invariant_density(const MapSpec& spec, std::uint64_t n, std::uint64_t bins,
                                           std::uint64_t burn_in, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Preimages of 1/2 along the neutral branch

/// x_1 = 1/2 and f(x_n) = x_{n-1} on the left branch; strictly decreasing to 0.
std::vector<double> preimage_sequence(const MapSpec& spec, std::size_t k);

}  // namespace lsvwip
