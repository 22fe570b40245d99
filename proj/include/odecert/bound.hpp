#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "odecert/integrate.hpp"
#include "odecert/linalg.hpp"
#include "odecert/problem.hpp"
#include "odecert/residual.hpp"
#include "odecert/spline.hpp"

namespace odecert {

/// Spectral data anchored at the left endpoint: A0 = A(t0) with the real
/// eigendecomposition A0 = P diag(lambda) P^-1, eigenvalues descending.
struct SpectralFrame {
    Matrix a0;
    EigenDecomposition eig;
    double norm_p = 0.0;  // ||P||_inf
    std::size_t n = 0;
};

enum class BoundMode { Global, Stepwise };

/// The certified envelope B(t) >= ||x*(t) - xtilde(t)||_inf on a grid,
/// together with the scalars that produced it.
struct BoundReport {
    double mu = 0.0;     // lambda_1 + n * h_max, the growth exponent
    double h_max = 0.0;
    double delta_global = 0.0;        // global transformed residual max
    std::vector<double> delta_steps;  // per-interval maxima (stepwise mode)
    std::vector<double> grid;
    std::vector<double> envelope;     // B at each grid point
    BoundMode mode = BoundMode::Global;
    bool sampled_maxima = true;  // h_max and delta are grid maxima, not exact
};

/// Builds the frame from A(t0). Propagates ComplexSpectrum/DefectiveMatrix,
/// which mean the growth-bound construction does not apply to this problem.
SpectralFrame spectral_frame(const LinearOdeProblem& p);

/// max over an equispaced grid (grid_points >= 2) of |P^-1 (A(t)-A0) P|
/// entries. Zero when A is constant.
double compute_hmax(const LinearOdeProblem& p, const SpectralFrame& f,
                    std::size_t grid_points);

/// Closed-form envelope at a single time: with mu = lambda_1 + n h_max and
/// s = t - t0, returns ||P||_inf delta_max (e^{mu s} - 1)/mu, switching to
/// the mu->0 limit ||P||_inf delta_max s when |mu| <= 1e-12.
double bound_envelope_global(const SpectralFrame& f, double h_max,
                             double delta_max, double t, double t0);

/// Envelope over a grid from the single global delta_max.
BoundReport bound_report_global(const SpectralFrame& f, double h_max,
                                double delta_max, double t0,
                                const std::vector<double>& grid);

/// Per-interval envelope: phi(t0) = 0 and on each trajectory interval with
/// local residual max d, phi(t) = (phi_prev + d/mu) e^{mu (t - t_prev)} - d/mu
/// (linear accumulation when |mu| <= 1e-12); B = ||P||_inf phi. Grid points
/// must lie within [t0, tm] (GridOutsideDomain otherwise).
BoundReport bound_envelope_stepwise(const SpectralFrame& f, double h_max,
                                    const ResidualProfile& profile,
                                    const Trajectory& traj,
                                    const std::vector<double>& grid);

/// Reference forward error by integrating dx' = A(t) dx - delta(t), dx(t0)=0
/// at tight tolerance, reported at the requested times. Used to cross-check
/// the directly measured x* - xtilde and to estimate the error when no exact
/// solution is known.
std::vector<Vector> forward_error_oracle(const LinearOdeProblem& p,
                                         const HermiteSpline& s,
                                         const IntegratorConfig& cfg,
                                         const std::vector<double>& times);

}  // namespace odecert
