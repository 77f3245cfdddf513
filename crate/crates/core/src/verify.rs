//! Parameter sweeps comparing closed forms and block reductions with exact
//! computation. Sweeps run in parallel; results come back in parameter
//! order.

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::block_spectra::{
    check_cyclic_identity, check_mixed_identity, check_structured_identity, closed_form_kmn,
    closed_form_kn, orbit_blocks_complete, random_cyclic_spec, random_mixed_spec,
    random_structured_spec, rank_one_checks, IdentityCheck, KmnClosedForm, KnClosedForm, RankCheck,
    Tolerance,
};
use crate::error::{Error, Result};
use crate::graphs::{build_graph, GraphSpec};
use crate::kirchhoff::hessian_at_ones;
use crate::linalg::{determinant, verify_spectrum, ExactMatrix, Inertia, SpectrumCheck};

/// Relative singular-value threshold for the rank-one checks.
pub const RANK_THRESHOLD: f64 = 1e-8;

fn lorentzian(dim: usize) -> Inertia {
    Inertia {
        positive: 1,
        negative: dim - 1,
        zero: 0,
    }
}

/// Exact all-ones Hessian of a complete or complete bipartite graph.
pub fn graph_hessian(spec: &GraphSpec) -> Result<ExactMatrix> {
    hessian_at_ones(&build_graph(spec)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnPoint {
    pub closed: KnClosedForm,
    pub spectrum: SpectrumCheck,
    pub computed_det: BigRational,
    pub det_matches_formula: bool,
    pub inertia_lorentzian: bool,
    /// Orbit-block matrix equals the permuted Hessian exactly.
    pub orbit_blocks_match: bool,
    pub rank_checks: Vec<RankCheck>,
}

impl KnPoint {
    pub fn passed(&self) -> bool {
        self.spectrum.passed()
            && self.det_matches_formula
            && self.closed.agrees()
            && self.inertia_lorentzian
            && self.orbit_blocks_match
            && self.rank_one_holds()
    }

    pub fn rank_one_holds(&self) -> bool {
        self.rank_checks.iter().all(|c| c.rank <= 1)
    }
}

pub fn verify_kn(n: usize) -> Result<KnPoint> {
    let closed = closed_form_kn(n)?;
    let h = graph_hessian(&GraphSpec::Complete(n))?;
    let spectrum = verify_spectrum(&h, &closed.spectrum)?;
    let computed_det = determinant(&h)?;
    let orbit = orbit_blocks_complete(n)?;
    Ok(KnPoint {
        det_matches_formula: computed_det == closed.formula_det,
        inertia_lorentzian: spectrum.inertia == Some(lorentzian(h.rows())),
        orbit_blocks_match: h.permuted(&orbit.edge_order) == orbit.assemble_scaled(),
        rank_checks: rank_one_checks(n, RANK_THRESHOLD)?,
        closed,
        spectrum,
        computed_det,
    })
}

pub fn sweep_kn(from: usize, to: usize) -> Result<Vec<KnPoint>> {
    if from < 3 || from > to {
        return Err(Error::InvalidParameter(format!(
            "need 3 <= from <= to, got {from}..{to}"
        )));
    }
    (from..=to).into_par_iter().map(verify_kn).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmnPoint {
    pub closed: KmnClosedForm,
    pub spectrum: SpectrumCheck,
    pub computed_det: BigRational,
    pub inertia_lorentzian: bool,
}

impl KmnPoint {
    /// The determinant formula disagreeing is a finding, not a failure;
    /// only the spectrum and the product must match.
    pub fn passed(&self) -> bool {
        self.spectrum.passed() && self.product_matches_computed() && self.inertia_lorentzian
    }

    pub fn product_matches_computed(&self) -> bool {
        self.closed.product_det == self.computed_det
    }

    pub fn formula_agrees(&self) -> bool {
        self.closed.formula_det == self.computed_det
    }
}

pub fn verify_kmn(m: usize, n: usize) -> Result<KmnPoint> {
    let closed = closed_form_kmn(m, n)?;
    let h = graph_hessian(&GraphSpec::CompleteBipartite(m, n))?;
    let spectrum = verify_spectrum(&h, &closed.spectrum)?;
    Ok(KmnPoint {
        computed_det: determinant(&h)?,
        inertia_lorentzian: spectrum.inertia == Some(lorentzian(h.rows())),
        closed,
        spectrum,
    })
}

/// All `(m, n)` with `m, n >= 1` and `3 <= m + n <= max_sum`, in
/// lexicographic order.
pub fn kmn_grid(max_sum: usize) -> Vec<(usize, usize)> {
    (1..max_sum)
        .flat_map(|m| (1..=max_sum - m).map(move |n| (m, n)))
        .filter(|&(m, n)| m + n >= 3)
        .collect()
}

pub fn sweep_kmn(max_sum: usize) -> Result<Vec<KmnPoint>> {
    kmn_grid(max_sum)
        .into_par_iter()
        .map(|(m, n)| verify_kmn(m, n))
        .collect()
}

/// Bounds on randomly generated block specs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockBounds {
    pub max_l: usize,
    /// Largest circulant block for cyclic specs and largest `d_i` for
    /// structured specs; mixed specs use corner size up to half of it.
    pub size_cap: usize,
    pub entry_bound: i64,
}

impl Default for BlockBounds {
    fn default() -> Self {
        Self {
            max_l: 4,
            size_cap: 6,
            entry_bound: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockSweep {
    pub seed: u64,
    pub cyclic: Vec<IdentityCheck>,
    pub mixed: Vec<IdentityCheck>,
    /// Exact identity per structured trial.
    pub structured: Vec<bool>,
}

impl BlockSweep {
    pub fn cyclic_passed(&self) -> bool {
        self.cyclic.iter().all(|c| c.passed)
    }

    pub fn mixed_passed(&self) -> bool {
        self.mixed.iter().all(|c| c.passed)
    }

    pub fn structured_passed(&self) -> bool {
        self.structured.iter().all(|&b| b)
    }

    pub fn passed(&self) -> bool {
        self.cyclic_passed() && self.mixed_passed() && self.structured_passed()
    }
}

/// `trials` random specs of each kind, generated sequentially from one
/// seeded stream and checked in parallel.
pub fn sweep_blocks(
    trials: usize,
    seed: u64,
    bounds: BlockBounds,
    tol: Tolerance,
) -> Result<BlockSweep> {
    if bounds.max_l == 0 || bounds.size_cap == 0 {
        return Err(Error::InvalidParameter(
            "block bounds must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half_cap = (bounds.size_cap / 2).max(1);
    let cyclic: Vec<_> = (0..trials)
        .map(|_| random_cyclic_spec(&mut rng, bounds.max_l, bounds.size_cap, bounds.entry_bound))
        .collect();
    let mixed: Vec<_> = (0..trials)
        .map(|_| random_mixed_spec(&mut rng, bounds.max_l, half_cap, bounds.entry_bound))
        .collect();
    let structured: Vec<_> = (0..trials)
        .map(|_| {
            random_structured_spec(&mut rng, bounds.max_l, bounds.size_cap, bounds.entry_bound)
        })
        .collect();
    Ok(BlockSweep {
        seed,
        cyclic: cyclic
            .par_iter()
            .map(|s| check_cyclic_identity(s, tol))
            .collect::<Result<_>>()?,
        mixed: mixed
            .par_iter()
            .map(|s| check_mixed_identity(s, tol))
            .collect::<Result<_>>()?,
        structured: structured
            .par_iter()
            .map(check_structured_identity)
            .collect::<Result<_>>()?,
    })
}
