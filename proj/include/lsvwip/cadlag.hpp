#pragma once

// Skorohod-space toolkit: piecewise-constant cadlag paths, completed graphs,
// certified J1 / M1 distance brackets and the infinite-horizon metric.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lsvwip/error.hpp"

namespace lsvwip {

/// Right-continuous step function on [start, T].
///
/// The value is `initial_value` on [start, b_0) and `values[i]` on [b_i, b_{i+1})
/// (the last interval closed at T). Breakpoints are strictly increasing in (start, T];
/// a breakpoint need not carry a jump (values may repeat).
class StepPath {
public:
    /// Constant 0 on [0, 1].
    StepPath() = default;
    StepPath(double domain_end, double initial_value, std::vector<double> breakpoints,
             std::vector<double> values, double domain_start = 0.0);

    static StepPath constant(double domain_end, double value, double domain_start = 0.0);

    double domain_start() const noexcept { return start_; }
    double domain_end() const noexcept { return end_; }
    double initial_value() const noexcept { return initial_; }
    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    const std::vector<double>& values() const noexcept { return values_; }
    double final_value() const noexcept { return values_.empty() ? initial_ : values_.back(); }

    /// g(t) for t in [start, T] (clamped outside).
    double operator()(double t) const noexcept;
    /// g(t-) for t in (start, T]; g(start) at t = start.
    double left_limit(double t) const noexcept;

    /// Number of breakpoints carrying a nonzero jump.
    std::size_t jump_count() const noexcept;
    /// Same function with the no-jump breakpoints removed.
    StepPath simplified() const;

    bool operator==(const StepPath& other) const = default;

private:
    double start_ = 0.0;
    double end_ = 1.0;
    double initial_ = 0.0;
    std::vector<double> breaks_;
    std::vector<double> values_;
};

struct GraphVertex {
    double time;
    double value;
    bool operator==(const GraphVertex&) const = default;
};

/// Axis-aligned polyline traversing the completed graph in graph order.
struct CompletedGraph {
    std::vector<GraphVertex> vertices;
};

/// (start, g(start)), then (b, g(b-)), (b, g(b)) at every jump, then (T, g(T)).
CompletedGraph completed_graph(const StepPath& g);

/// Certified bracket lower <= d <= upper with upper - lower <= tolerance.
struct MetricResult {
    double lower = 0.0;
    double upper = 0.0;
    double tolerance = 0.0;
};

enum class MetricKind { J1, M1 };

const char* to_string(MetricKind kind) noexcept;
MetricKind parse_metric_kind(const std::string& tag);

inline constexpr double kDefaultMetricTolerance = 1e-6;

/// sup_t |g1(t) - g2(t)|; both paths must share their domain.
double uniform_distance(const StepPath& g1, const StepPath& g2);

/// Decision procedures "is d <= eps?" (monotone in eps).
bool j1_within(const StepPath& g1, const StepPath& g2, double eps);
bool m1_within(const StepPath& g1, const StepPath& g2, double eps);

MetricResult j1_distance(const StepPath& g1, const StepPath& g2, double tol = kDefaultMetricTolerance);
MetricResult m1_distance(const StepPath& g1, const StepPath& g2, double tol = kDefaultMetricTolerance);
MetricResult distance(MetricKind kind, const StepPath& g1, const StepPath& g2,
                      double tol = kDefaultMetricTolerance);

/// Quadrature parameters for the infinite-horizon metric.
struct QuadratureParams {
    double t_max = 20.0;          ///< truncation point
    std::size_t panels = 64;      ///< trapezoid panels on [0, t_max]; must be even
    double inner_tol = 1e-6;      ///< tolerance of each finite-horizon distance
};

struct InfiniteDistance {
    double value = 0.0;        ///< trapezoid estimate with `panels` panels
    double quad_error = 0.0;   ///< |T_N - T_{N/2}| / 3
    double tail_bound = 0.0;   ///< exp(-t_max)
    double uncertainty() const noexcept { return quad_error + tail_bound; }
};

/// Integral of e^{-t} (1 ^ d_t(g1, g2)) over [0, t_max] where d_t is the distance
/// between the restrictions to [0, t]. Paths must start at 0 and extend past t_max.
InfiniteDistance dist_infinite(const StepPath& g1, const StepPath& g2, MetricKind kind,
                               const QuadratureParams& quad = {});

/// Restriction to [t1, t2] (times unchanged; value at t1 taken right-continuously).
StepPath restrict(const StepPath& g, double t1, double t2);

/// sup of g over its domain.
double sup_functional(const StepPath& g) noexcept;
/// Largest |g(t) - g(t-)|.
double max_jump(const StepPath& g) noexcept;

}  // namespace lsvwip
