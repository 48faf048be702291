#pragma once

// Every default used by the library, the CLI and the acceptance suite.
// The README reproduces this table.

#include <array>

namespace polyrad::config {

// Adaptive quadrature.
inline constexpr double quad_rel_tol = 1e-10;
inline constexpr double quad_abs_tol = 1e-14;
inline constexpr int quad_max_subdivisions = 2000;
inline constexpr double quad_split_point = 1.0;

// Regularity chain grid.
inline constexpr double grid_r_min = 1e-4;
inline constexpr double grid_r_max = 1e3;
inline constexpr int grid_points = 4096;
inline constexpr int fixed_point_grid_points = 8192;
inline constexpr int quick_grid_points = 1024;

// Finite-difference checks on the chain.
inline constexpr double fd_log_spacing = 0.02;
inline constexpr double inverse_window_lo = 0.1;   // window for j >= 2
inline constexpr double inverse_window_hi = 20.0;
inline constexpr double origin_fit_radius = 0.02;
inline constexpr double decay_slope_tolerance = 0.05;

// Initial value problem.
inline constexpr double ivp_rel_tol = 1e-13;
inline constexpr double ivp_abs_tol = 1e-16;
inline constexpr double ivp_r0_factor = 1e-4;      // r0 = factor * eps
inline constexpr double ivp_r_max = 20.0;
inline constexpr int ivp_output_points = 2001;
inline constexpr int scalar_check_output_points = 4001;
inline constexpr double scalar_check_max_log_spacing = 0.1;
inline constexpr std::array<double, 4> scalar_check_radii = {0.25, 0.5, 1.0, 2.0};
inline constexpr double departure_scale = 0.05;
inline constexpr int departure_index = 1;
inline constexpr double departure_threshold = 0.01;

// Radial bound scan.
inline constexpr double bound_r_min = 1e-4;
inline constexpr double bound_r_max = 1e4;
inline constexpr int bound_points = 2001;

// Sweeps.
inline constexpr std::array<double, 3> eps_list = {0.5, 1.0, 2.0};
inline constexpr std::array<double, 2> probe_amplitudes = {0.05, 0.1};
inline constexpr unsigned long long default_seed = 20240611ULL;

}  // namespace polyrad::config
