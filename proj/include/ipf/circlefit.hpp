#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "ipf/constants.hpp"
#include "ipf/csv.hpp"
#include "ipf/errors.hpp"

namespace ipf {

// =============================================================================
// Notch-type resonator transmission model and its inversion.
//
//   S21(f) = a e^{i alpha0} e^{-2 pi i f tau}
//            [1 - (Q_l/|Q_c|) e^{i phi} / (1 + 2 i Q_l (f/f_r - 1))]
//
// The fit pipeline: (1) cable delay from the phase slope on the trace wings,
// (2) algebraic circle fit of the delay-corrected data, (3) phase-vs-
// frequency arctangent fit for (f_r, Q_l), (4) |Q_c| and phi from the circle
// geometry, (5) Q_i from 1/Q_i = 1/Q_l - cos(phi)/|Q_c|, followed by one
// Gauss-Newton refinement pass of the full model.
// =============================================================================

struct TraceSample {
  double f_hz = 0.0;
  Complex s21;
};

struct ComplexTrace {
  std::vector<TraceSample> samples;

  void validate() const {
    if (samples.size() < 20)
      throw InsufficientSpan("trace needs at least 20 samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
      if (!(samples[i].f_hz > samples[i - 1].f_hz))
        throw ParseError("trace frequencies must be strictly increasing");
  }
};

struct FitStdErrors {
  double f_r_hz = 0.0, q_l = 0.0, q_c_mag = 0.0, phi_rad = 0.0;
  double tau_s = 0.0, amplitude = 0.0, alpha0_rad = 0.0;
};

struct ResonatorFitResult {
  double f_r_hz = 0.0;
  double q_l = 0.0;       // loaded
  double q_c_mag = 0.0;   // |Q_c|
  double phi_rad = 0.0;   // impedance-mismatch rotation
  double q_i = 0.0;       // internal
  double tau_s = 0.0;     // cable delay
  double amplitude = 1.0;
  double alpha0_rad = 0.0;
  FitStdErrors std_err;
  double residual_rms = 0.0;

  double kappa() const { return two_pi * f_r_hz / q_l; }
};

/// Evaluate the notch model at f [Hz].
inline Complex notch_model(const ResonatorFitResult& p, double f_hz) {
  const Complex env = p.amplitude * std::exp(j_unit * p.alpha0_rad) *
                      std::exp(-j_unit * (two_pi * f_hz * p.tau_s));
  const Complex dip = (p.q_l / p.q_c_mag) * std::exp(j_unit * p.phi_rad) /
                      (1.0 + 2.0 * j_unit * p.q_l * (f_hz / p.f_r_hz - 1.0));
  return env * (1.0 - dip);
}

namespace detail {

struct CircleFit {
  double cx = 0.0, cy = 0.0, r = 0.0;
};

/// Taubin algebraic circle fit (Newton form of the eigenvalue problem).
inline CircleFit fit_circle_taubin(const std::vector<Complex>& z) {
  const std::size_t n = z.size();
  double mx = 0.0, my = 0.0;
  for (const auto& p : z) {
    mx += p.real();
    my += p.imag();
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double muu = 0, mvv = 0, muv = 0, muz = 0, mvz = 0, mzz = 0;
  for (const auto& p : z) {
    const double u = p.real() - mx;
    const double v = p.imag() - my;
    const double w = u * u + v * v;
    muu += u * u;
    mvv += v * v;
    muv += u * v;
    muz += u * w;
    mvz += v * w;
    mzz += w * w;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  muu *= inv_n;
  mvv *= inv_n;
  muv *= inv_n;
  muz *= inv_n;
  mvz *= inv_n;
  mzz *= inv_n;

  const double mz = muu + mvv;
  const double cov = muu * mvv - muv * muv;
  const double var_z = mzz - mz * mz;
  const double a3 = 4.0 * mz;
  const double a2 = -3.0 * mz * mz - mzz;
  const double a1 = var_z * mz + 4.0 * cov * mz - muz * muz - mvz * mvz;
  const double a0 = muz * (muz * mvv - mvz * muv) + mvz * (mvz * muu - muz * muv) -
                    var_z * cov;
  const double a22 = a2 + a2;
  const double a33 = a3 + a3 + a3;

  double x = 0.0, y = a0;
  for (int iter = 0; iter < 99; ++iter) {
    const double dy = a1 + x * (a22 + a33 * x);
    const double x_new = x - y / dy;
    if (x_new == x || !std::isfinite(x_new)) break;
    const double y_new = a0 + x_new * (a1 + x_new * (a2 + x_new * a3));
    if (std::abs(y_new) >= std::abs(y)) break;
    x = x_new;
    y = y_new;
  }

  const double det = x * x - x * mz + cov;
  if (det == 0.0 || !std::isfinite(det))
    throw FitDiverged("degenerate circle fit");
  CircleFit c;
  const double ucx = (muz * (mvv - x) - mvz * muv) / det / 2.0;
  const double ucy = (mvz * (muu - x) - muz * muv) / det / 2.0;
  c.cx = ucx + mx;
  c.cy = ucy + my;
  c.r = std::sqrt(ucx * ucx + ucy * ucy + mz);
  if (!(c.r > 0.0) || !std::isfinite(c.r)) throw FitDiverged("degenerate circle fit");
  return c;
}

inline std::vector<double> unwrap(std::vector<double> phase) {
  for (std::size_t i = 1; i < phase.size(); ++i) {
    double d = phase[i] - phase[i - 1];
    while (d > pi) {
      phase[i] -= two_pi;
      d = phase[i] - phase[i - 1];
    }
    while (d < -pi) {
      phase[i] += two_pi;
      d = phase[i] - phase[i - 1];
    }
  }
  return phase;
}

/// Minimal Levenberg-Marquardt with numeric forward-difference Jacobian.
/// fn fills the residual vector for a parameter vector.
template <typename Fn>
inline bool levenberg_marquardt(Fn&& fn, Eigen::VectorXd& p, int max_iters,
                                Eigen::MatrixXd* jacobian_out = nullptr) {
  const auto eval = [&](const Eigen::VectorXd& q) {
    Eigen::VectorXd r;
    fn(q, r);
    return r;
  };
  Eigen::VectorXd r = eval(p);
  double cost = r.squaredNorm();
  const auto n_res = r.size();
  const auto n_par = p.size();

  Eigen::MatrixXd jac(n_res, n_par);
  double lambda = 1e-4;
  bool need_jacobian = true;

  for (int iter = 0; iter < max_iters; ++iter) {
    if (need_jacobian) {
      for (Eigen::Index c = 0; c < n_par; ++c) {
        const double step = 1e-7 * std::max(std::abs(p(c)), 1e-12);
        Eigen::VectorXd q = p;
        q(c) += step;
        jac.col(c) = (eval(q) - r) / step;
      }
      need_jacobian = false;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    Eigen::MatrixXd damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
    const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
    if (!step.allFinite()) return false;

    const Eigen::VectorXd p_try = p + step;
    const Eigen::VectorXd r_try = eval(p_try);
    const double cost_try = r_try.squaredNorm();
    if (cost_try < cost) {
      const double improvement = (cost - cost_try) / std::max(cost, 1e-300);
      p = p_try;
      r = r_try;
      cost = cost_try;
      lambda = std::max(lambda * 0.3, 1e-12);
      need_jacobian = true;
      if (improvement < 1e-14) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  if (jacobian_out) {
    for (Eigen::Index c = 0; c < n_par; ++c) {
      const double step = 1e-7 * std::max(std::abs(p(c)), 1e-12);
      Eigen::VectorXd q = p;
      q(c) += step;
      jacobian_out->resize(n_res, n_par);
      jacobian_out->col(c) = (eval(q) - r) / step;
    }
  }
  return std::isfinite(cost);
}

}  // namespace detail

/// Fit the notch model to a complex transmission trace.
inline ResonatorFitResult fit_resonator(const ComplexTrace& trace) {
  trace.validate();
  const std::size_t n = trace.samples.size();
  std::vector<double> f(n);
  std::vector<Complex> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = trace.samples[i].f_hz;
    s[i] = trace.samples[i].s21;
    if (!(std::isfinite(s[i].real()) && std::isfinite(s[i].imag())))
      throw FitDiverged("non-finite trace sample");
  }

  // (1) cable delay and baseline from the outer 20% of the trace on each wing
  const std::size_t wing = std::max<std::size_t>(3, n / 5);
  std::vector<double> phase(n);
  for (std::size_t i = 0; i < n; ++i) phase[i] = std::arg(s[i]);
  phase = detail::unwrap(std::move(phase));

  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  double baseline = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= wing && i < n - wing) continue;
    sw += 1.0;
    swx += f[i];
    swy += phase[i];
    swxx += f[i] * f[i];
    swxy += f[i] * phase[i];
    baseline += std::abs(s[i]);
  }
  const double denom = sw * swxx - swx * swx;
  const double slope = denom != 0.0 ? (sw * swxy - swx * swy) / denom : 0.0;
  double tau = -slope / two_pi;
  baseline /= sw;

  // (2) delay-corrected circle
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i)
    z[i] = s[i] * std::exp(j_unit * (two_pi * f[i] * tau));
  detail::CircleFit circle = detail::fit_circle_taubin(z);

  // (3) arctangent fit of the centered phase for (f_r, Q_l, theta0)
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i)
    theta[i] = std::arg(z[i] - Complex{circle.cx, circle.cy});
  theta = detail::unwrap(std::move(theta));

  std::size_t i_dip = 0;
  double dip = std::abs(s[0]);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(s[i]) < dip) {
      dip = std::abs(s[i]);
      i_dip = i;
    }
  }
  double f_r0 = f[i_dip];

  // crude width estimate from the half-depth crossings of |S21|
  const double half_level = 0.5 * (baseline + dip);
  std::size_t lo = i_dip, hi = i_dip;
  while (lo > 0 && std::abs(s[lo]) < half_level) --lo;
  while (hi + 1 < n && std::abs(s[hi]) < half_level) ++hi;
  double width = f[hi] - f[lo];
  if (!(width > 0.0)) width = (f.back() - f.front()) / 10.0;
  double q_l0 = f_r0 / width;

  Eigen::VectorXd p_phase(3);
  p_phase << f_r0, q_l0, theta[i_dip];
  const auto phase_residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double model = q(2) + 2.0 * std::atan(2.0 * q(1) * (1.0 - f[i] / q(0)));
      r(static_cast<Eigen::Index>(i)) = theta[i] - model;
    }
  };
  if (!detail::levenberg_marquardt(phase_residuals, p_phase, 60) || !(p_phase(1) > 0.0))
    throw FitDiverged("phase fit failed");
  double f_r = p_phase(0);
  double q_l = p_phase(1);
  const double theta0 = p_phase(2);

  if ((f.back() - f.front()) * q_l / f_r < 3.0)
    throw InsufficientSpan("trace spans fewer than 3 linewidths");

  // (4) off-resonant point, amplitude, rotation, |Q_c|
  const Complex z_inf = Complex{circle.cx, circle.cy} +
                        circle.r * std::exp(j_unit * (theta0 - pi));
  double amplitude = std::abs(z_inf);
  double alpha0 = std::arg(z_inf);
  // in normalized coordinates the vector from circle center to the
  // off-resonant point points along e^{i phi}
  double phi = std::arg((z_inf - Complex{circle.cx, circle.cy}) / z_inf);
  double q_c = q_l * amplitude / (2.0 * circle.r);

  // (5) full-model refinement
  Eigen::VectorXd p(7);
  p << f_r, q_l, q_c, phi, tau, amplitude, alpha0;
  const auto model_residuals = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r) {
    ResonatorFitResult trial;
    trial.f_r_hz = q(0);
    trial.q_l = q(1);
    trial.q_c_mag = q(2);
    trial.phi_rad = q(3);
    trial.tau_s = q(4);
    trial.amplitude = q(5);
    trial.alpha0_rad = q(6);
    r.resize(static_cast<Eigen::Index>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
      const Complex d = notch_model(trial, f[i]) - s[i];
      r(static_cast<Eigen::Index>(2 * i)) = d.real();
      r(static_cast<Eigen::Index>(2 * i + 1)) = d.imag();
    }
  };
  Eigen::MatrixXd jac;
  if (!detail::levenberg_marquardt(model_residuals, p, 60, &jac))
    throw FitDiverged("model refinement failed");

  ResonatorFitResult out;
  out.f_r_hz = p(0);
  out.q_l = p(1);
  out.q_c_mag = std::abs(p(2));
  out.phi_rad = std::remainder(p(3), two_pi);
  out.tau_s = p(4);
  out.amplitude = std::abs(p(5));
  out.alpha0_rad = std::remainder(p(6), two_pi);
  if (!(out.q_l > 0.0) || !(out.f_r_hz > 0.0)) throw FitDiverged("unphysical fit");

  const double inv_qi = 1.0 / out.q_l - std::cos(out.phi_rad) / out.q_c_mag;
  if (!(inv_qi >= 0.0))
    throw FitDiverged("fit implies negative internal quality factor");
  out.q_i = inv_qi > 0.0 ? 1.0 / inv_qi : std::numeric_limits<double>::infinity();

  // standard errors from the Jacobian at the optimum
  Eigen::VectorXd r_final;
  model_residuals(p, r_final);
  out.residual_rms = std::sqrt(r_final.squaredNorm() / static_cast<double>(2 * n));
  const double dof = static_cast<double>(2 * n) - 7.0;
  if (dof > 0 && jac.size() > 0) {
    const double sigma2 = r_final.squaredNorm() / dof;
    const Eigen::MatrixXd cov =
        sigma2 * (jac.transpose() * jac)
                     .ldlt()
                     .solve(Eigen::MatrixXd::Identity(7, 7));
    auto se = [&](int i) { return std::sqrt(std::max(0.0, cov(i, i))); };
    out.std_err = FitStdErrors{se(0), se(1), se(2), se(3), se(4), se(5), se(6)};
  }
  return out;
}

// --- synthetic traces and file I/O ---

/// Deterministic synthetic trace from model parameters with additive complex
/// Gaussian noise (sigma given as a fraction of the baseline amplitude).
inline ComplexTrace synthesize_trace(const ResonatorFitResult& p, double f_min_hz,
                                     double f_max_hz, std::size_t n_points,
                                     double noise_fraction, std::uint64_t seed) {
  ComplexTrace trace;
  trace.samples.reserve(n_points);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sigma = noise_fraction * p.amplitude;
  for (std::size_t i = 0; i < n_points; ++i) {
    const double f = f_min_hz + (f_max_hz - f_min_hz) * static_cast<double>(i) /
                                    static_cast<double>(n_points - 1);
    Complex v = notch_model(p, f);
    if (sigma > 0.0) v += Complex{sigma * gauss(rng), sigma * gauss(rng)};
    trace.samples.push_back({f, v});
  }
  return trace;
}

/// Read a `freq_hz,re,im` trace (linear units).
inline ComplexTrace read_trace_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.columns != std::vector<std::string>{"freq_hz", "re", "im"})
    throw ParseError(path.string() + ": expected header freq_hz,re,im");
  ComplexTrace trace;
  trace.samples.reserve(table.rows.size());
  for (const auto& row : table.rows)
    trace.samples.push_back({row[0], Complex{row[1], row[2]}});
  trace.validate();
  return trace;
}

inline void write_trace_csv(const std::filesystem::path& path, const ComplexTrace& trace) {
  CsvTable table;
  table.columns = {"freq_hz", "re", "im"};
  for (const auto& smp : trace.samples)
    table.rows.push_back({smp.f_hz, smp.s21.real(), smp.s21.imag()});
  write_csv(path, table);
}

}  // namespace ipf
