//! The oscillating atom: an odd, smooth, tiny-support profile whose
//! discrete half-line integral is exactly one half at *every* dyadic
//! sampling stride.
//!
//! The stride condition is what makes the coefficient identities of the
//! test families exact: a dilated translate `eta(2^m (x - c))` placed at a
//! Haar midpoint or edge produces an inner product proportional to the
//! half-line Riemann sum of the profile at stride `2^m`, and pinning all
//! those sums to the same value turns the analytically derived
//! coefficients into discrete identities instead of quadrature
//! approximations.  The sums, the odd moments, and the final
//! normalization are imposed by a least-norm correction of the sampled
//! profile; oddness is exact by construction because only the positive
//! half is stored.

use hpl_core::bump::BumpDerivative;
use hpl_core::moments::enforce_linear_constraints;
use hpl_core::{dyadic_sum, pow2, DyadicGrid, SampledFunction};

use crate::error::AdversarialError;

/// Fewest samples per half-support accepted at construction.
pub const MIN_HALF_SAMPLES: usize = 15;

/// Odd unit-half-mass profile with certified dyadic-stride quadrature.
#[derive(Clone, Debug)]
pub struct Atom {
    profile: SampledFunction,
    m0: usize,
    support_radius: f64,
    radius_log2: i32,
    half_mass: f64,
    max_dilation: u32,
    constraint_resid: f64,
}

impl Atom {
    pub fn profile(&self) -> &SampledFunction {
        &self.profile
    }

    /// Vanishing-moment count: discrete moments `0..=m0` are zero.
    pub fn m0(&self) -> usize {
        self.m0
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Discrete `integral over (0, 1/2)` of the profile; fixed to `1/2`.
    pub fn half_mass(&self) -> f64 {
        self.half_mass
    }

    /// Largest `m` for which the dilated copy `eta(2^m .)` keeps its
    /// certified half-line sums (and at least one interior sample).
    pub fn max_dilation(&self) -> u32 {
        self.max_dilation
    }

    /// Worst constraint residual left by the least-norm correction.
    pub fn constraint_resid(&self) -> f64 {
        self.constraint_resid
    }

    /// Resolution the profile is sampled at.
    pub fn j_max(&self) -> u32 {
        self.profile.grid().j_max()
    }

    fn center_index(&self) -> i64 {
        1i64 << self.j_max()
    }

    /// Profile value of `eta(2^dilation .)` at `offset` grid cells from the
    /// copy's center; zero beyond the support.
    pub fn value_at(&self, dilation: u32, offset: i64) -> f64 {
        let idx = self.center_index() + (offset << dilation);
        let values = self.profile.values();
        if idx < 0 || idx >= values.len() as i64 {
            return 0.0;
        }
        values[idx as usize]
    }

    /// Grid cells the dilated copy extends to each side of its center.
    pub fn half_extent(&self, dilation: u32) -> i64 {
        let cells = 1i64 << (self.j_max() as i32 + self.radius_log2);
        cells >> dilation
    }

    pub(crate) fn check_dilation(&self, dilation: i64) -> Result<u32, AdversarialError> {
        if dilation < 0 || dilation > self.max_dilation as i64 {
            return Err(AdversarialError::DilationOverflow {
                dilation,
                max: self.max_dilation,
            });
        }
        Ok(dilation as u32)
    }

    /// Accumulate `weight * eta(2^dilation (x - center))` into `out`, with
    /// `center` in grid cells from `x = 0`.
    pub(crate) fn add_copy(
        &self,
        out: &mut SampledFunction,
        dilation: u32,
        center: i64,
        weight: f64,
    ) {
        let grid = out.grid();
        let base = -grid.x_lo() * (1i64 << grid.j_max()) + center;
        let extent = self.half_extent(dilation);
        let n = out.values().len() as i64;
        let values = out.values_mut();
        for d in -extent..=extent {
            let idx = base + d;
            if idx >= 0 && idx < n {
                values[idx as usize] += weight * self.value_at(dilation, d);
            }
        }
    }
}

/// Build the atom at the resolution of `grid`: sample an odd bump
/// derivative on the support, enforce the odd moments `1..m0` and the
/// equality of all dyadic-stride half-line sums, then normalize the common
/// sum to exactly one half.
pub fn build_atom(
    m0: usize,
    support_radius: f64,
    grid: DyadicGrid,
) -> Result<Atom, AdversarialError> {
    if m0 % 2 != 0 {
        return Err(AdversarialError::AtomParityMismatch { m0 });
    }
    let rl = support_radius.log2();
    if !(support_radius > 0.0 && rl.fract() == 0.0 && rl <= -5.0) {
        return Err(AdversarialError::UnsupportedAtomRadius {
            value: support_radius,
        });
    }
    let radius_log2 = rl as i32;
    let j_max = grid.j_max();
    let half_cells_log2 = j_max as i32 + radius_log2;
    if half_cells_log2 < 0 || ((1usize << half_cells_log2) - 1) < MIN_HALF_SAMPLES {
        let samples = if half_cells_log2 < 0 {
            0
        } else {
            (1usize << half_cells_log2) - 1
        };
        return Err(AdversarialError::AtomResolutionTooCoarse {
            samples,
            min: MIN_HALF_SAMPLES,
        });
    }
    let half_cells = 1usize << half_cells_log2;
    let p = half_cells - 1; // interior positive samples

    // Odd raw profile: an odd-order bump derivative over the half-support.
    let bump = BumpDerivative::new(m0 + 1);
    let mut v: Vec<f64> = (1..=p)
        .map(|d| bump.eval(d as f64 / half_cells as f64))
        .collect();

    // Constraint rows on the positive half.  Odd moments vanish (even ones
    // cancel by oddness); all stride-decimated half-line sums match the
    // full-resolution one.  Rows are scaled to O(1) for conditioning.
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for m in (1..=m0).step_by(2) {
        rows.push(
            (1..=p)
                .map(|d| (d as f64 / half_cells as f64).powi(m as i32))
                .collect(),
        );
    }
    let max_dilation = (half_cells_log2 - 1) as u32;
    for r in 1..=max_dilation {
        let stride = 1usize << r;
        let scale = 2f64.powf(-(r as f64) / 2.0);
        rows.push(
            (1..=p)
                .map(|d| {
                    let decimated = if d % stride == 0 { stride as f64 } else { 0.0 };
                    scale * (decimated - 1.0)
                })
                .collect(),
        );
    }
    let targets = vec![0.0; rows.len()];
    let resid = enforce_linear_constraints(&mut v, &rows, &targets)?;

    // Normalize the common half-line sum to exactly 1/2.
    let delta = pow2(-(j_max as i32));
    let sum = dyadic_sum(&v) * delta;
    if sum.abs() < 1e-8 {
        return Err(AdversarialError::DegenerateAtom { sum });
    }
    let c = 0.5 / sum;
    for x in v.iter_mut() {
        *x *= c;
    }

    // Certify: every stride's half-line sum sits at 1/2 after rounding.
    let mut worst: f64 = resid * c.abs();
    for r in 0..=max_dilation {
        let stride = 1usize << r;
        let terms: Vec<f64> = (1..=p / stride).map(|t| v[t * stride - 1]).collect();
        let got = dyadic_sum(&terms) * delta * stride as f64;
        worst = worst.max((got - 0.5).abs());
    }
    if worst > 1e-10 {
        return Err(AdversarialError::DegenerateAtom { sum: worst });
    }

    // Store the full odd profile on its own [-1, 1] window.
    let profile_grid = DyadicGrid::new(j_max, -1, 1)?;
    let mut values = vec![0.0f64; profile_grid.n_points()];
    let center = 1usize << j_max;
    for (i, &val) in v.iter().enumerate() {
        values[center + i + 1] = val;
        values[center - i - 1] = -val;
    }
    let profile = SampledFunction::from_values(profile_grid, values)?;

    Ok(Atom {
        profile,
        m0,
        support_radius,
        radius_log2,
        half_mass: 0.5,
        max_dilation,
        constraint_resid: worst,
    })
}
