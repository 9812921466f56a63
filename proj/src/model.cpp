#include "qrgg/model.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qrgg/errors.hpp"

namespace qrgg {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::kInvalidParameter, message);
}

void validate_common(double r, double r_prime, double probability) {
  require(std::isfinite(r) && std::isfinite(r_prime) && std::isfinite(probability),
          "connection model parameters must be finite");
  require(r >= 0.0, "r must be >= 0");
  require(r_prime <= 1.0, "r_prime must be <= 1");
  require(probability >= 0.0 && probability <= 1.0,
          "connection probability must lie in [0,1]");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double block_sum(const ConnectionModel& model, std::size_t count,
                 RandomStream rng) {
  double sum = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const Point u{rng.uniform(), rng.uniform()};
    const Point v{rng.uniform(), rng.uniform()};
    sum += kernel_probability(distance(u, v), model);
  }
  return sum;
}

void check_samples(std::size_t samples) {
  require(samples >= 1, "samples must be >= 1");
}

}  // namespace

double distance(Point u, Point v) { return std::hypot(u.x - v.x, u.y - v.y); }

ConnectionModel ConnectionModel::fixed(double r, double r_prime, double p) {
  validate_common(r, r_prime, p);
  require(r <= r_prime, "r must be <= r_prime");
  return ConnectionModel(r, r_prime, KernelKind::kFixed, p);
}

ConnectionModel ConnectionModel::linear_decay(double r, double r_prime,
                                              double p_connection) {
  validate_common(r, r_prime, p_connection);
  require(r < r_prime, "linear-decay kernel requires r < r_prime");
  return ConnectionModel(r, r_prime, KernelKind::kLinearDecay, p_connection);
}

nlohmann::json to_json(const ConnectionModel& model) {
  return {
      {"r", model.r()},
      {"r_prime", model.r_prime()},
      {"kernel", model.kind() == KernelKind::kFixed ? "fixed" : "linear_decay"},
      {"p", model.probability()},
  };
}

ConnectionModel model_from_json(const nlohmann::json& j) {
  try {
    const auto kernel = j.at("kernel").get<std::string>();
    const double r = j.at("r").get<double>();
    const double r_prime = j.at("r_prime").get<double>();
    const double p = j.at("p").get<double>();
    if (kernel == "fixed") return ConnectionModel::fixed(r, r_prime, p);
    if (kernel == "linear_decay") {
      return ConnectionModel::linear_decay(r, r_prime, p);
    }
    throw Error(ErrorCode::kMalformedInput, "unknown kernel '" + kernel + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("bad connection model: ") + e.what());
  }
}

std::vector<Point> sample_points(std::size_t n, RandomStream& rng) {
  std::vector<Point> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    points.push_back({x, y});
  }
  return points;
}

double kernel_probability(double d, const ConnectionModel& model) {
  if (d > model.r_prime()) return 0.0;
  if (model.kind() == KernelKind::kFixed) {
    return d <= model.r() ? 1.0 : model.probability();
  }
  // The decay kernel takes over at d = r itself, where it equals p_c.
  if (d < model.r()) return 1.0;
  const double r2 = model.r() * model.r();
  const double span = model.r_prime() * model.r_prime() - r2;
  const double frac = std::clamp((d * d - r2) / span, 0.0, 1.0);
  return (1.0 - std::sqrt(frac)) * model.probability();
}

bool connect_decision(Point u, Point v, const ConnectionModel& model,
                      RandomStream& rng) {
  const double p = kernel_probability(distance(u, v), model);
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return rng.uniform() < p;
}

ProbabilityInterval p_prime_bounds(const ConnectionModel& model,
                                   std::optional<double> effective_p) {
  double p = model.probability();
  if (model.kind() == KernelKind::kLinearDecay) {
    if (!effective_p) {
      throw Error(ErrorCode::kUnsupportedKernel,
                  "p' bracket needs a constant annulus probability; pass an "
                  "effective p for the linear-decay kernel");
    }
    p = *effective_p;
  }
  require(p >= 0.0 && p <= 1.0, "effective p must lie in [0,1]");
  const double r2 = model.r() * model.r();
  const double rp2 = model.r_prime() * model.r_prime();
  const double disk = std::numbers::pi * r2 + std::numbers::pi * (rp2 - r2) * p;
  return {clamp01(disk / 4.0), clamp01(disk)};
}

double effective_annulus_probability(const ConnectionModel& model) {
  if (model.kind() == KernelKind::kFixed) return model.probability();
  return model.probability() / 3.0;
}

double square_distance_cdf(double rho) {
  if (rho <= 0.0) return 0.0;
  if (rho > 1.0) {
    throw Error(ErrorCode::kInvalidParameter,
                "square_distance_cdf is only defined for rho <= 1");
  }
  const double rho2 = rho * rho;
  return std::numbers::pi * rho2 - 8.0 / 3.0 * rho2 * rho + rho2 * rho2 / 2.0;
}

double connection_probability(const ConnectionModel& model) {
  const double inner = square_distance_cdf(model.r());
  const double annulus = square_distance_cdf(model.r_prime()) - inner;
  if (model.kind() == KernelKind::kFixed) {
    return clamp01(inner + model.probability() * annulus);
  }
  // Substitute u = sqrt((rho^2 - r^2) / (r'^2 - r^2)); the decay factor
  // becomes (1 - u) and f(rho) d(rho) = (2 pi - 8 rho + 2 rho^2) u span du,
  // which is smooth on [0, 1].
  const double r2 = model.r() * model.r();
  const double span = model.r_prime() * model.r_prime() - r2;
  auto integrand = [&](double u) {
    const double rho = std::sqrt(r2 + u * u * span);
    return (1.0 - u) * (2.0 * std::numbers::pi - 8.0 * rho + 2.0 * rho * rho) *
           u * span;
  };
  constexpr int kIntervals = 4096;
  const double h = 1.0 / kIntervals;
  double acc = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < kIntervals; ++i) {
    acc += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * h);
  }
  return clamp01(inner + model.probability() * acc * h / 3.0);
}

double estimate_connection_probability(const ConnectionModel& model,
                                       std::size_t samples, RandomStream& rng,
                                       int jobs) {
  check_samples(samples);
  const std::size_t blocks = (samples + kPairBlock - 1) / kPairBlock;
  std::vector<double> sums(blocks, 0.0);
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto block_count = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t b = 0; b < block_count; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    const std::size_t count = std::min(kPairBlock, samples - ub * kPairBlock);
    sums[ub] = block_sum(model, count, rng.child("pairs", ub));
  }
  double total = 0.0;
  for (double s : sums) total += s;
  return clamp01(total / static_cast<double>(samples));
}

namespace serial {

double estimate_connection_probability(const ConnectionModel& model,
                                       std::size_t samples, RandomStream& rng) {
  check_samples(samples);
  double total = 0.0;
  for (std::size_t b = 0, done = 0; done < samples; ++b, done += kPairBlock) {
    const std::size_t count = std::min(kPairBlock, samples - done);
    total += block_sum(model, count, rng.child("pairs", b));
  }
  return clamp01(total / static_cast<double>(samples));
}

}  // namespace serial

}  // namespace qrgg
