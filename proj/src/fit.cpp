#include "paraunit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>

#include "paraunit/errors.hpp"

namespace paraunit {

void SampleSet::validate() const {
  if (points.size() != values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sample set: point and value counts differ");
  }
  for (const auto& g : values) {
    if (g.rows() != p || g.cols() != m) {
      throw Error(ErrorCode::DimensionMismatch, "sample set: every value must be p x m");
    }
  }
}

SampleSet circle_samples(const AnyForm& f, std::size_t n) {
  SampleSet s;
  s.p = rows_of(f);
  s.m = cols_of(f);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    s.points.push_back(z);
    s.values.push_back(eval(f, z));
  }
  return s;
}

double objective(const BlaschkePotapovForm& f, const SampleSet& samples) {
  samples.validate();
  if (f.p() != samples.p || f.m() != samples.m) {
    throw Error(ErrorCode::DimensionMismatch, "objective: function and samples differ in shape");
  }
  // Per-sample terms summed in index order so the value does not depend on
  // the thread count.
  std::vector<double> terms(samples.size(), 0.0);
  std::exception_ptr failure;
  const long long count = static_cast<long long>(samples.size());
#pragma omp parallel for schedule(static) if (count >= 32)
  for (long long k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const double e = (eval(f, samples.points[i]) - samples.values[i]).frobenius_norm();
      terms[i] = e * e;
    } catch (...) {
#pragma omp critical(paraunit_objective_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

double objective(const ParaunitaryParam& params, const SampleSet& samples) {
  if (params.p != samples.p || params.m != samples.m) {
    throw Error(ErrorCode::DimensionMismatch, "objective: parameters and samples differ in shape");
  }
  return objective(build_paraunitary(params), samples);
}

namespace {

double safe_value(const std::function<double(std::span<const double>)>& f, std::span<const double> x) {
  double v;
  try {
    v = f(x);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  if (n == 0) {
    res.x = x0;
    res.value = safe_value(f, x0);
    res.evaluations = 1;
    res.converged = true;
    res.history.push_back(res.value);
    return res;
  }
  const double dn = static_cast<double>(n);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dn;
  const double contract = 0.75 - 1.0 / (2.0 * dn);
  const double shrink = 1.0 - 1.0 / dn;

  std::vector<std::vector<double>> simplex(n + 1);
  std::vector<double> values(n + 1);
  auto evaluate = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return safe_value(f, x);
  };
  auto build = [&](const std::vector<double>& base, double base_value, double step) {
    simplex[0] = base;
    values[0] = base_value;
    for (std::size_t i = 0; i < n; ++i) {
      simplex[i + 1] = base;
      simplex[i + 1][i] += step;
      values[i + 1] = evaluate(simplex[i + 1]);
    }
  };
  build(x0, evaluate(x0), opts.initial_step);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto point = [&](double t, std::vector<double>& out) {
    const auto& worst = simplex[order[n]];
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (centroid[j] - worst[j]);
  };

  std::size_t rebuilds = 0;
  double best_at_rebuild = std::numeric_limits<double>::infinity();
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double best = values[order[0]];
    res.history.push_back(best);
    if (best < opts.objective_tol) {
      res.converged = true;
      break;
    }
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        diameter = std::max(diameter, std::abs(simplex[order[i]][j] - simplex[order[0]][j]));
    if (diameter < opts.diameter_tol) {
      if (rebuilds < opts.max_rebuilds && best < best_at_rebuild &&
          res.evaluations + n < opts.max_evaluations) {
        best_at_rebuild = best;
        ++rebuilds;
        const std::vector<double> base = simplex[order[0]];
        build(base, best, opts.initial_step / static_cast<double>(1u << std::min<std::size_t>(rebuilds, 20)));
        continue;
      }
      res.converged = true;
      break;
    }
    if (res.evaluations >= opts.max_evaluations) break;
    ++res.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[order[i]][j] / dn;

    const std::size_t w = order[n];
    const double f_best = values[order[0]];
    const double f_second = values[order[n - 1]];
    const double f_worst = values[w];

    point(reflect, xr);
    const double fr = evaluate(xr);
    if (fr < f_best) {
      point(expand, xe);
      const double fe = evaluate(xe);
      if (fe < fr) {
        simplex[w] = xe;
        values[w] = fe;
      } else {
        simplex[w] = xr;
        values[w] = fr;
      }
      continue;
    }
    if (fr < f_second) {
      simplex[w] = xr;
      values[w] = fr;
      continue;
    }
    if (fr < f_worst) {
      point(reflect * contract, xc);
      const double fc = evaluate(xc);
      if (fc <= fr) {
        simplex[w] = xc;
        values[w] = fc;
        continue;
      }
    } else {
      point(-contract, xc);
      const double fc = evaluate(xc);
      if (fc < f_worst) {
        simplex[w] = xc;
        values[w] = fc;
        continue;
      }
    }
    const auto& b = simplex[order[0]];
    for (std::size_t i = 1; i <= n; ++i) {
      auto& x = simplex[order[i]];
      for (std::size_t j = 0; j < n; ++j) x[j] = b[j] + shrink * (x[j] - b[j]);
      values[order[i]] = evaluate(x);
    }
  }
  res.x = simplex[order[0]];
  res.value = values[order[0]];
  return res;
}

namespace fitdetail {

namespace {

constexpr double kRadiusCap = 1.0 - kPoleMargin;

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(a, two_pi);
  if (w < 0.0) w += two_pi;
  return w >= two_pi ? 0.0 : w;
}

}  // namespace

std::vector<double> to_coordinates(const ParaunitaryParam& params) {
  std::vector<double> x;
  for (const auto& pp : params.poles) {
    if (pp.kind == PoleParam::Kind::Infinity || (pp.kind == PoleParam::Kind::Polar && pp.r >= kRadiusCap)) {
      throw Error(ErrorCode::InvalidArgument, "fit coordinates need Schur-stable pole slots");
    }
    if (pp.kind != PoleParam::Kind::Polar) continue;
    const double t = pp.r / kRadiusCap;
    x.push_back(std::log(t / (1.0 - t)));
    x.push_back(pp.theta);
  }
  const auto a = params.angles();
  x.insert(x.end(), a.begin(), a.end());
  return x;
}

ParaunitaryParam from_coordinates(const ParaunitaryParam& pattern, std::span<const double> x) {
  ParaunitaryParam out = pattern;
  std::size_t i = 0;
  for (auto& pp : out.poles) {
    if (pp.kind != PoleParam::Kind::Polar) continue;
    const double s = std::clamp(x[i], -700.0, 700.0);
    pp.r = kRadiusCap / (1.0 + std::exp(-s));
    pp.theta = wrap_angle(x[i + 1]);
    i += 2;
  }
  for (auto& dir : out.directions)
    for (auto& a : dir) a = wrap_angle(x[i++]);
  for (auto& a : out.frame) a = wrap_angle(x[i++]);
  return out;
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t i) {
  return seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(i);
}

ParaunitaryParam restart_start(const SampleSet& samples, std::size_t d, Side side,
                               std::uint64_t seed, std::size_t i) {
  ParaunitaryParam start = random_params(restart_seed(seed, i), side, samples.p, samples.m, d, true);
  if (i == 0) {
    for (auto& pp : start.poles) {
      if (pp.kind == PoleParam::Kind::Zero) pp = PoleParam::polar(0.5, 0.0);
    }
  }
  return start;
}

}  // namespace fitdetail

FitResult fit_lossless(const SampleSet& samples, std::size_t d, std::size_t p, std::size_t m,
                       Side side, std::uint64_t seed, std::size_t restarts, const NelderMeadOptions& opts) {
  samples.validate();
  if (samples.p != p || samples.m != m) {
    throw Error(ErrorCode::DimensionMismatch, "fit_lossless: samples are not p x m");
  }
  if (restarts == 0) throw Error(ErrorCode::InvalidArgument, "fit_lossless: restarts >= 1");
  if (samples.size() < 2 * d + 1) {
    throw Error(ErrorCode::InvalidArgument, "fit_lossless: need at least 2d + 1 samples");
  }
  param_count(side, p, m, d);

  std::vector<FitResult> results(restarts);
  const long long count = static_cast<long long>(restarts);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long r = 0; r < count; ++r) {
    const auto i = static_cast<std::size_t>(r);
    const ParaunitaryParam pattern = fitdetail::restart_start(samples, d, side, seed, i);
    auto f = [&](std::span<const double> x) {
      return objective(fitdetail::from_coordinates(pattern, x), samples);
    };
    NelderMeadResult nm = nelder_mead(f, fitdetail::to_coordinates(pattern), opts);
    FitResult& out = results[i];
    out.params = fitdetail::from_coordinates(pattern, nm.x);
    out.objective = objective(out.params, samples);
    out.iterations = nm.iterations;
    out.converged = nm.converged;
    out.history = std::move(nm.history);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < restarts; ++i)
    if (results[i].objective < results[best].objective) best = i;
  return std::move(results[best]);
}

}  // namespace paraunit
