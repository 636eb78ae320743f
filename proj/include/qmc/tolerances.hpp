#pragma once

// Default numeric tolerances. Every public operation that compares against
// these accepts an explicit override; the values here are the documented
// defaults.
namespace qmc::tol {

inline constexpr double model = 1e-10;      // trace-preservation residual per column
inline constexpr double fix = 1e-9;         // stationary fixed-point residual
inline constexpr double ginverse = 1e-9;    // ||A X A - A|| relative residual
inline constexpr double formula = 1e-8;     // cross-route agreement for hitting times
inline constexpr double hit = 1e-8;         // hitting-probability gate for finite tau
inline constexpr double positivity = 1e-10; // faithfulness cutoff on block eigenvalues
inline constexpr double inverse = 1e-9;     // ||A A^-1 - I|| residual
inline constexpr double pivot_rel = 1e-12;  // LU pivot threshold, relative to ||A||_inf
inline constexpr double spectral = 1e-6;    // spectral-radius relative accuracy target
inline constexpr double admissible = 1e-10; // |<e_I|t>|, |<u|pi>| admissibility floor
inline constexpr double condition_cap = 1e12;

}  // namespace qmc::tol
