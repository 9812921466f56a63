#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "json.hpp"
#include "qrgg/random_stream.hpp"

namespace qrgg {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point u, Point v);

enum class KernelKind { kFixed, kLinearDecay };

/// Pairwise connectivity rule of a quasi random geometric graph.
///
/// Pairs at distance <= r always connect, pairs beyond r_prime never do, and
/// pairs in the annulus connect with probability p (kFixed) or with
/// (1 - sqrt((d^2 - r^2) / (r_prime^2 - r^2))) * p_connection (kLinearDecay).
class ConnectionModel {
 public:
  /// Throws Error(kInvalidParameter) unless 0 <= r <= r_prime <= 1 and
  /// 0 <= p <= 1.
  static ConnectionModel fixed(double r, double r_prime, double p);
  /// As above, but r < r_prime is strict since the decay needs a non-empty annulus.
  static ConnectionModel linear_decay(double r, double r_prime,
                                      double p_connection);

  double r() const noexcept { return r_; }
  double r_prime() const noexcept { return r_prime_; }
  KernelKind kind() const noexcept { return kind_; }
  /// p for kFixed, p_connection for kLinearDecay.
  double probability() const noexcept { return probability_; }

  friend bool operator==(const ConnectionModel&,
                         const ConnectionModel&) = default;

 private:
  ConnectionModel(double r, double r_prime, KernelKind kind, double probability)
      : r_(r), r_prime_(r_prime), kind_(kind), probability_(probability) {}

  double r_;
  double r_prime_;
  KernelKind kind_;
  double probability_;
};

nlohmann::json to_json(const ConnectionModel& model);
ConnectionModel model_from_json(const nlohmann::json& j);

std::vector<Point> sample_points(std::size_t n, RandomStream& rng);

double kernel_probability(double d, const ConnectionModel& model);

/// Consumes exactly one draw when the pair probability is strictly between 0
/// and 1, and none otherwise.
bool connect_decision(Point u, Point v, const ConnectionModel& model,
                      RandomStream& rng);

struct ProbabilityInterval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double p) const { return lower <= p && p <= upper; }
};

/// Corner/interior bracket (pi r^2 + pi (r'^2 - r^2) p) / 4 <= p' <= ... for
/// the pair connection probability. The bracket is defined for a constant
/// annulus probability; a kLinearDecay model is rejected with
/// kUnsupportedKernel unless `effective_p` supplies the constant to use.
ProbabilityInterval p_prime_bounds(const ConnectionModel& model,
                                   std::optional<double> effective_p = {});

/// Area-weighted mean of the annulus connection probability. For kFixed this
/// is p; for kLinearDecay the decay factor averages to exactly 1/3 over the
/// annulus, giving p_connection / 3.
double effective_annulus_probability(const ConnectionModel& model);

/// P(d <= rho) for two independent uniform points in the unit square, valid
/// for 0 <= rho <= 1.
double square_distance_cdf(double rho);

/// Exact pair connection probability p' including border effects, computed
/// from the unit-square distance distribution (closed form for kFixed,
/// Simpson quadrature for kLinearDecay).
double connection_probability(const ConnectionModel& model);

/// Pair samples are drawn in fixed-size blocks; block b uses
/// rng.child("pairs", b), so the result does not depend on thread count.
inline constexpr std::size_t kPairBlock = 1 << 16;

/// Monte Carlo estimate of p' from `samples` independent point pairs.
/// OpenMP-parallel over blocks; `jobs` = 0 uses the OpenMP default.
double estimate_connection_probability(const ConnectionModel& model,
                                       std::size_t samples, RandomStream& rng,
                                       int jobs = 0);

namespace serial {
/// Single-threaded reference for estimate_connection_probability. Produces
/// the bit-identical value.
double estimate_connection_probability(const ConnectionModel& model,
                                       std::size_t samples, RandomStream& rng);
}  // namespace serial

}  // namespace qrgg
