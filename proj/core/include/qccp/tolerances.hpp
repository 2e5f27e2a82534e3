#pragma once

namespace qccp::tol {

// All numerical tolerances used across the library, centralized.

// -- linear algebra -----------------------------------------------------
inline constexpr double kHermitianInput = 1e-12;   // ||H - H^dag||_max at entry
inline constexpr double kEigConvergence = 1e-14;   // off-diag Frobenius, relative
inline constexpr int kEigMaxSweeps = 100;          // Jacobi sweep cap
inline constexpr double kEigResidual = 1e-10;      // reconstruction contract
inline constexpr double kGramSchmidtIndependence = 1e-6;  // residual norm floor
inline constexpr double kOrthonormal = 1e-10;      // U^dag U - I check
inline constexpr int kDimCap = 100;                // largest operator dimension

// -- strategy validation (strict profile) -------------------------------
inline constexpr double kPsdMin = -1e-9;           // smallest admissible eigenvalue
inline constexpr double kTraceOne = 1e-9;          // |tr(rho) - 1|
inline constexpr double kCompleteness = 1e-8;      // ||sum_g M_g - I||_max

// -- strategy validation (lenient profile, for 2-decimal input data) ----
inline constexpr double kPsdMinLenient = -5e-2;
inline constexpr double kTraceOneLenient = 1e-6;
inline constexpr double kCompletenessLenient = 0.15;

// -- distributions ------------------------------------------------------
inline constexpr double kDistNonneg = -1e-9;       // smallest admissible entry
inline constexpr double kDistNorm = 1e-9;          // |slice sum - 1| for guesses
inline constexpr double kBehaviorNorm = 1e-8;      // |slice sum - 1| for behaviors
inline constexpr double kNoSignaling = 1e-8;       // marginal consistency

// -- optimization -------------------------------------------------------
inline constexpr double kCertificateDefault = 1e-7;
inline constexpr double kConvergenceDefault = 1e-9;
inline constexpr double kStepImprovement = 1e-10;  // constrained-ascent stop
inline constexpr double kReportConsistency = 1e-10;  // best value re-evaluation
inline constexpr double kPatienceGain = 1e-7;  // min best-payoff gain per window

}  // namespace qccp::tol
