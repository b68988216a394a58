#pragma once

namespace telenoise::tol {

/// Entrywise matrix / scalar equality.
inline constexpr double eq = 1e-12;

/// Kraus completeness defect (sum of E^dag E vs identity).
inline constexpr double completeness = 1e-10;

/// Imaginary residue allowed when a real quantity is computed through
/// complex arithmetic.
inline constexpr double imag_residue = 1e-12;

/// Agreement between the diagonal-extraction and explicit-conjugation
/// routes of the Pauli twirl.
inline constexpr double twirl_agreement = 1e-14;

/// X/Y-coherence allowed in a channel that claims pure Z-coherence.
inline constexpr double purity = 1e-10;

}  // namespace telenoise::tol
