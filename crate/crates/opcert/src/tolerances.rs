//! Default tolerances and sampling parameters.
//!
//! Two accuracy classes: quantities computed exactly through jets (grid
//! eigenvalues, asymmetries, pointwise algebra) get `TOL_EXACT`; quantities
//! that pass through quadrature or finite differences get `TOL_QUAD`.

/// Tolerance for jet-exact quantities (eigenvalue bounds, asymmetry,
/// pairwise monotonicity ratios). Rounding in a handful of f64 operations
/// stays many orders below this.
pub const TOL_EXACT: f64 = 1e-9;

/// Tolerance for quadrature and finite-difference quantities (potential
/// reconstruction, FD Jacobian fallback, refutation thresholds).
pub const TOL_QUAD: f64 = 1e-6;

/// Default number of random pairs for the definitional monotonicity check.
pub const PAIR_SAMPLES: usize = 10_000;

/// Default RNG seed. All sampling is counter-based on (seed, index).
pub const SEED: u64 = 0;

/// Default corner-inclusive grid resolution per axis. 129 points on
/// [-pi, pi] puts +/- pi/2 on the lattice (index multiples of pi/64),
/// so the eigenvalue-zero witnesses of the built-in operators are sampled.
pub const GRID_N: usize = 129;

/// Default composite-Simpson step for line integrals.
pub const QUAD_STEP: f64 = 1e-3;

/// Central-difference step scale for first derivatives:
/// h = FD_STEP1 * max(1, |coordinate|). Cube root of machine epsilon
/// balances truncation (h^2) against rounding (eps/h).
pub const FD_STEP1: f64 = 6.055454452393343e-6; // eps^(1/3)

/// Central-difference step scale for second derivatives:
/// h = FD_STEP2 * max(1, |coordinate|). Fourth root of machine epsilon;
/// the second difference divides by h^2, so cbrt(eps) would leave a
/// rounding floor of eps/h^2 ~ 2e-6, too coarse to verify jets at 1e-6.
pub const FD_STEP2: f64 = 1.2207031250000002e-4; // eps^(1/4)

/// Regions narrower than this on either axis are rejected rather than
/// certified vacuously.
pub const MIN_REGION_WIDTH: f64 = 10.0 * f64::EPSILON;
