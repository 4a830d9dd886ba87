//! Truncated Fock-space checks of the interferometric readout: SWAP as a
//! parity after a beamsplitter, cyclic twists through a Fourier transform,
//! the cavity-controlled SWAP, the logical-level Ramsey circuit, first-order
//! error estimates, and recovery of `S` from measured expectation values.
//!
//! Basis index convention: mode `site * modes_per_site + layer` is digit
//! `mode` of the index in base `cutoff + 1`, so site 0 is least significant.
//! Mode maps `M` act as `Γ(M) a†_i Γ(M)† = Σ_j M[j][i] a†_j`.

use crate::anyons::{rep_on_torus, ModularData};
use crate::linalg::{self, c, cis, CMat, CVec};
use crate::mcg::MCGWord;
use crate::report::{Check, Report, Status};
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

pub const DEFAULT_CUTOFF: usize = 2;
pub const DEFAULT_MAX_DIM: usize = 4096;
pub const IDENTITY_TOL: f64 = 1e-9;
const CONSTRUCTION_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockSystem {
    pub sites: usize,
    pub modes_per_site: usize,
    pub cutoff: usize,
}

/// Unitarity audit of a truncated operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Leakage {
    /// `max |U†U - I|` over the columns whose groups stay below the cutoff.
    pub faithful_defect: f64,
    /// Largest norm lost by any basis column through truncation.
    pub lost_norm: f64,
}

impl FockSystem {
    pub fn new(sites: usize, modes_per_site: usize, cutoff: usize) -> Result<Self> {
        Self::with_max_dim(sites, modes_per_site, cutoff, DEFAULT_MAX_DIM)
    }

    pub fn with_max_dim(sites: usize, modes_per_site: usize, cutoff: usize, max_dim: usize) -> Result<Self> {
        if sites == 0 || modes_per_site == 0 {
            return Err(Error::InvalidParameter("need at least one site and one mode".into()));
        }
        if cutoff == 0 {
            return Err(Error::CutoffTooSmall { cutoff, reason: "no particles fit".into() });
        }
        let modes = (sites * modes_per_site) as u32;
        match (cutoff + 1).checked_pow(modes) {
            Some(d) if d <= max_dim => Ok(FockSystem { sites, modes_per_site, cutoff }),
            _ => Err(Error::ResourceLimit(format!(
                "Fock dimension {}^{} exceeds the cap of {max_dim}",
                cutoff + 1,
                modes
            ))),
        }
    }

    pub fn modes(&self) -> usize {
        self.sites * self.modes_per_site
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes() as u32)
    }

    pub fn site_dim(&self) -> usize {
        (self.cutoff + 1).pow(self.modes_per_site as u32)
    }

    pub fn mode(&self, site: usize, layer: usize) -> usize {
        site * self.modes_per_site + layer
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow(mode as u32)
    }

    pub fn occupation(&self, idx: usize, mode: usize) -> usize {
        (idx / self.stride(mode)) % (self.cutoff + 1)
    }

    pub fn occupations(&self, idx: usize) -> Vec<usize> {
        (0..self.modes()).map(|m| self.occupation(idx, m)).collect()
    }

    pub fn index_of(&self, occ: &[usize]) -> Result<usize> {
        if occ.len() != self.modes() {
            return Err(Error::InvalidParameter(format!("expected {} occupations", self.modes())));
        }
        if let Some(&n) = occ.iter().find(|&&n| n > self.cutoff) {
            return Err(Error::CutoffTooSmall { cutoff: self.cutoff, reason: format!("occupation {n} requested") });
        }
        Ok(occ.iter().enumerate().map(|(m, &n)| n * self.stride(m)).sum())
    }

    pub fn basis_state(&self, occ: &[usize]) -> Result<CVec> {
        let mut v = CVec::zeros(self.dim());
        v[self.index_of(occ)?] = c(1.0, 0.0);
        Ok(v)
    }

    pub fn vacuum(&self) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[0] = c(1.0, 0.0);
        v
    }

    /// `a†_mode v`, dropping amplitude that would exceed the cutoff.
    pub fn create(&self, mode: usize, v: &CVec) -> CVec {
        let s = self.stride(mode);
        let mut out = CVec::zeros(v.len());
        for (idx, &z) in v.iter().enumerate() {
            let n = self.occupation(idx, mode);
            if n < self.cutoff && z != c(0.0, 0.0) {
                out[idx + s] += z * ((n + 1) as f64).sqrt();
            }
        }
        out
    }

    pub fn annihilate(&self, mode: usize, v: &CVec) -> CVec {
        let s = self.stride(mode);
        let mut out = CVec::zeros(v.len());
        for (idx, &z) in v.iter().enumerate() {
            let n = self.occupation(idx, mode);
            if n > 0 {
                out[idx - s] += z * (n as f64).sqrt();
            }
        }
        out
    }

    fn column_op(&self, f: impl Fn(&CVec) -> CVec) -> CMat {
        let d = self.dim();
        let mut m = CMat::zeros(d, d);
        for j in 0..d {
            let mut e = CVec::zeros(d);
            e[j] = c(1.0, 0.0);
            m.set_column(j, &f(&e));
        }
        m
    }

    pub fn annihilation(&self, mode: usize) -> CMat {
        self.column_op(|v| self.annihilate(mode, v))
    }

    pub fn number(&self, mode: usize) -> CMat {
        let d: Vec<Complex64> = (0..self.dim()).map(|i| c(self.occupation(i, mode) as f64, 0.0)).collect();
        linalg::diag(&d)
    }

    /// `a†_a a_b + a†_b a_a`.
    pub fn hopping(&self, a: usize, b: usize) -> CMat {
        let one = self.column_op(|v| self.create(a, &self.annihilate(b, v)));
        &one + one.adjoint()
    }

    /// Diagonal operator `∏_m phase(m, n_m)`.
    pub fn diagonal_phase(&self, phase: impl Fn(usize, usize) -> Complex64) -> CMat {
        let d: Vec<Complex64> =
            (0..self.dim()).map(|i| (0..self.modes()).map(|m| phase(m, self.occupation(i, m))).product()).collect();
        linalg::diag(&d)
    }

    /// The same system restricted to one site.
    pub fn single_site(&self) -> FockSystem {
        FockSystem { sites: 1, ..self.clone() }
    }

    /// `Γ(M)` built column by column from `∏_i (Σ_j M[j][i] a†_j)^{n_i} / √n_i!`.
    /// Exact on columns whose mixed groups stay within the cutoff.
    pub fn mode_unitary(&self, m: &CMat) -> Result<CMat> {
        let modes = self.modes();
        if m.shape() != (modes, modes) {
            return Err(Error::InvalidParameter(format!("mode map must be {modes}x{modes}")));
        }
        let d = self.dim();
        let mut u = CMat::zeros(d, d);
        for col in 0..d {
            let mut v = self.vacuum();
            for i in 0..modes {
                let n = self.occupation(col, i);
                for k in 1..=n {
                    let mut next = CVec::zeros(d);
                    for j in 0..modes {
                        if m[(j, i)] != c(0.0, 0.0) {
                            next += self.create(j, &v) * m[(j, i)];
                        }
                    }
                    v = next / c((k as f64).sqrt(), 0.0);
                }
            }
            u.set_column(col, &v);
        }
        Ok(u)
    }

    /// Layer permutation on one site: the content of layer `l` moves to `perm[l]`.
    pub fn site_permutation(&self, perm: &[usize]) -> Result<CMat> {
        check_layers(self, perm)?;
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection")));
            }
        }
        self.single_site().mode_unitary(&linalg::permutation_matrix(perm))
    }

    pub fn on_every_site(&self, site_op: &CMat) -> CMat {
        let mut acc = site_op.clone();
        for _ in 1..self.sites {
            acc = linalg::kron(site_op, &acc);
        }
        acc
    }

    /// Tensor product with `ops[s]` on site `s`.
    pub fn per_site(&self, ops: &[CMat]) -> Result<CMat> {
        if ops.len() != self.sites || ops.iter().any(|o| o.nrows() != self.site_dim()) {
            return Err(Error::InvalidParameter(format!(
                "need {} site operators of dimension {}",
                self.sites,
                self.site_dim()
            )));
        }
        Ok(ops[1..].iter().fold(ops[0].clone(), |acc, op| linalg::kron(op, &acc)))
    }

    /// Sum over sites of `site_op` acting on that site alone.
    pub fn site_sum(&self, site_op: &CMat) -> CMat {
        let id = linalg::identity(self.site_dim());
        let mut total = CMat::zeros(self.dim(), self.dim());
        for s in 0..self.sites {
            let ops: Vec<CMat> = (0..self.sites).map(|t| if t == s { site_op.clone() } else { id.clone() }).collect();
            total += self.per_site(&ops).expect("shapes are consistent");
        }
        total
    }

    /// Layer groups repeated on every site, as global mode lists.
    pub fn uniform_groups(&self, layer_groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
        (0..self.sites)
            .flat_map(|s| layer_groups.iter().map(move |g| g.iter().map(|&l| self.mode(s, l)).collect()))
            .collect()
    }

    /// True when each group's total occupation is at most the cutoff, so that
    /// any mode map mixing only within groups is represented exactly.
    pub fn faithful(&self, idx: usize, groups: &[Vec<usize>]) -> bool {
        groups.iter().all(|g| g.iter().map(|&m| self.occupation(idx, m)).sum::<usize>() <= self.cutoff)
    }

    pub fn faithful_indices(&self, groups: &[Vec<usize>]) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.faithful(i, groups)).collect()
    }

    /// Normalised random state supported on the faithful subspace.
    pub fn random_state<R: Rng + ?Sized>(&self, groups: &[Vec<usize>], rng: &mut R) -> CVec {
        let mut v = CVec::zeros(self.dim());
        for i in self.faithful_indices(groups) {
            v[i] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let norm = v.norm();
        v / c(norm, 0.0)
    }

    pub fn leakage(&self, u: &CMat, groups: &[Vec<usize>]) -> Leakage {
        let idx = self.faithful_indices(groups);
        let gram = u.adjoint() * u;
        let mut faithful_defect: f64 = 0.0;
        for &i in &idx {
            for &j in &idx {
                let target = if i == j { 1.0 } else { 0.0 };
                faithful_defect = faithful_defect.max((gram[(i, j)] - target).norm());
            }
        }
        let lost_norm = (0..u.ncols()).map(|j| (1.0 - gram[(j, j)].re).abs()).fold(0.0, f64::max);
        Leakage { faithful_defect, lost_norm }
    }

    /// Largest entry of `a - b` over the given columns.
    pub fn column_diff(&self, a: &CMat, b: &CMat, cols: &[usize]) -> f64 {
        cols.iter().flat_map(|&j| (0..a.nrows()).map(move |i| (a[(i, j)] - b[(i, j)]).norm())).fold(0.0, f64::max)
    }

    /// Rejects states that are not normalised or that leave the faithful subspace.
    pub fn check_state(&self, state: &CVec, groups: &[Vec<usize>]) -> Result<()> {
        if state.len() != self.dim() {
            return Err(Error::InvalidParameter(format!("state has length {}, expected {}", state.len(), self.dim())));
        }
        if (state.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("state norm is {}", state.norm())));
        }
        let outside: f64 = (0..self.dim()).filter(|&i| !self.faithful(i, groups)).map(|i| state[i].norm_sqr()).sum();
        if outside > 1e-20 {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff,
                reason: format!("state has weight {outside:.2e} on sectors the truncation cannot represent"),
            });
        }
        Ok(())
    }
}

fn check_layers(sys: &FockSystem, layers: &[usize]) -> Result<()> {
    match layers.iter().find(|&&l| l >= sys.modes_per_site) {
        Some(l) => Err(Error::InvalidParameter(format!("layer {l} out of range for {} layers", sys.modes_per_site))),
        None => Ok(()),
    }
}

fn check_pair(sys: &FockSystem, (a, b): (usize, usize)) -> Result<()> {
    check_layers(sys, &[a, b])?;
    if a == b {
        return Err(Error::InvalidParameter("a pair needs two distinct layers".into()));
    }
    Ok(())
}

fn transposition(n: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(a, b);
    p
}

fn verify(name: &str, diff: f64, tol: f64) -> Result<()> {
    if diff > tol {
        Err(Error::IdentityViolation { name: name.into(), diff })
    } else {
        Ok(())
    }
}

/// Exchange of layers `a` and `b` on one site.
pub fn site_swap(sys: &FockSystem, pair: (usize, usize)) -> Result<CMat> {
    check_pair(sys, pair)?;
    sys.site_permutation(&transposition(sys.modes_per_site, pair.0, pair.1))
}

/// Site-level `U⁽¹⁾(t)·U⁽²⁾(t)` at `θ = Jt`: tunneling `exp(-iθ (a†_A a_B + h.c.))`
/// followed by the phase `exp(iθ (n_A + n_B))`.
pub fn tunneling_evolution(sys: &FockSystem, pair: (usize, usize), theta: f64) -> Result<CMat> {
    check_pair(sys, pair)?;
    let site = sys.single_site();
    let hop = site.hopping(pair.0, pair.1);
    let n = site.number(pair.0) + site.number(pair.1);
    Ok(linalg::expm_hermitian(&hop, theta) * linalg::expm_hermitian(&n, -theta))
}

/// Transversal SWAP of the pair on every site, from tunneling at `Jt = π/2`.
pub fn tunneling_swap(sys: &FockSystem, pair: (usize, usize)) -> Result<CMat> {
    let u = tunneling_evolution(sys, pair, FRAC_PI_2)?;
    let site = sys.single_site();
    let cols = site.faithful_indices(&[vec![pair.0, pair.1]]);
    verify("tunneling SWAP", site.column_diff(&u, &site_swap(sys, pair)?, &cols), CONSTRUCTION_TOL)?;
    Ok(sys.on_every_site(&u))
}

fn embed_pair(n: usize, (a, b): (usize, usize), block: [[Complex64; 2]; 2]) -> CMat {
    let mut m = linalg::identity(n);
    m[(a, a)] = block[0][0];
    m[(a, b)] = block[0][1];
    m[(b, a)] = block[1][0];
    m[(b, b)] = block[1][1];
    m
}

/// Site-level beamsplitter with `ã_A = (a_A + a_B)/√2`, `ã_B = (a_A - a_B)/√2`.
/// It is its own inverse.
pub fn site_beamsplitter(sys: &FockSystem, pair: (usize, usize)) -> Result<CMat> {
    check_pair(sys, pair)?;
    let h = c(FRAC_1_SQRT_2, 0.0);
    let m = embed_pair(sys.modes_per_site, pair, [[h, h], [h, -h]]);
    let u = sys.single_site().mode_unitary(&m)?;
    let realised = beamsplitter_from_tunneling(sys, pair)?;
    let site = sys.single_site();
    let cols = site.faithful_indices(&[vec![pair.0, pair.1]]);
    verify("beamsplitter realisation", site.column_diff(&u, &realised, &cols), CONSTRUCTION_TOL)?;
    Ok(u)
}

/// Tunneling for `Jt = π/4` sandwiched between quarter-wave phase shifts on
/// layer `B`. Without the shifts the 50/50 splitter sends the antisymmetric
/// mode elsewhere and the parity no longer reads out the SWAP.
pub fn beamsplitter_from_tunneling(sys: &FockSystem, pair: (usize, usize)) -> Result<CMat> {
    check_pair(sys, pair)?;
    let site = sys.single_site();
    let hop = site.hopping(pair.0, pair.1);
    let shift = linalg::expm_hermitian(&site.number(pair.1), -FRAC_PI_2);
    Ok(&shift * linalg::expm_hermitian(&hop, PI / 4.0) * &shift)
}

pub fn beamsplitter(sys: &FockSystem, pair: (usize, usize)) -> Result<CMat> {
    Ok(sys.on_every_site(&site_beamsplitter(sys, pair)?))
}

/// A value obtained through an interferometric identity next to the same
/// value computed directly.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub measured: Complex64,
    pub direct: Complex64,
    pub diff: f64,
}

impl IdentityCheck {
    fn new(name: &str, measured: Complex64, direct: Complex64) -> Result<Self> {
        let diff = (measured - direct).norm();
        verify(name, diff, IDENTITY_TOL)?;
        Ok(IdentityCheck { measured, direct, diff })
    }
}

/// `⟨SWAP⟩` of the pair on every site, read as the parity of layer `B`
/// after beamsplitting.
pub fn swap_expectation_via_parity(sys: &FockSystem, pair: (usize, usize), state: &CVec) -> Result<IdentityCheck> {
    product_parity_expectation(sys, &vec![vec![pair]; sys.sites], state)
}

/// Parity readout for site-dependent pair lists. `site_pairs[s]` holds
/// disjoint pairs; each gets a beamsplitter and the parity of its second
/// layer is measured. Compared against the product of the corresponding
/// direct SWAPs.
pub fn product_parity_expectation(
    sys: &FockSystem,
    site_pairs: &[Vec<(usize, usize)>],
    state: &CVec,
) -> Result<IdentityCheck> {
    if site_pairs.len() != sys.sites {
        return Err(Error::InvalidParameter(format!("need pairs for {} sites", sys.sites)));
    }
    let site = sys.single_site();
    let mut groups = Vec::new();
    let (mut bms, mut swaps, mut odd) = (Vec::new(), Vec::new(), Vec::new());
    for (s, pairs) in site_pairs.iter().enumerate() {
        let mut used = vec![false; sys.modes_per_site];
        let (mut bm, mut sw) = (linalg::identity(site.dim()), linalg::identity(site.dim()));
        for &(a, b) in pairs {
            check_pair(sys, (a, b))?;
            if std::mem::replace(&mut used[a], true) || std::mem::replace(&mut used[b], true) {
                return Err(Error::InvalidParameter(format!("pairs on site {s} overlap")));
            }
            bm = site_beamsplitter(sys, (a, b))? * bm;
            sw = site_swap(sys, (a, b))? * sw;
            groups.push(vec![sys.mode(s, a), sys.mode(s, b)]);
            odd.push(sys.mode(s, b));
        }
        bms.push(bm);
        swaps.push(sw);
    }
    sys.check_state(state, &groups)?;
    let bm = sys.per_site(&bms)?;
    let parity = sys.diagonal_phase(|m, n| if odd.contains(&m) && n % 2 == 1 { c(-1.0, 0.0) } else { c(1.0, 0.0) });
    let after = &bm * state;
    let measured = linalg::expectation(&after, &parity);
    let direct = linalg::expectation(state, &sys.per_site(&swaps)?);
    IdentityCheck::new("parity after beamsplitter vs SWAP", measured, direct)
}

/// The four-layer readout with two regions: on site 0 the pairs (1,4)(3,2),
/// on site 1 the pairs (3,4)(1,2), with the parity of layers 2 and 4 taken
/// everywhere. Layers are numbered from 1 as in the protocol tables.
pub fn four_layer_region_parity(state: &CVec) -> Result<IdentityCheck> {
    let sys = FockSystem::new(2, 4, 1)?;
    product_parity_expectation(&sys, &[vec![(0, 3), (2, 1)], vec![(2, 3), (0, 1)]], state)
}

fn check_cycle(sys: &FockSystem, cycle: &[usize]) -> Result<()> {
    if cycle.len() < 2 {
        return Err(Error::InvalidParameter("a twist needs a cycle of at least two layers".into()));
    }
    check_layers(sys, cycle)?;
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cycle.len() {
        return Err(Error::InvalidParameter(format!("cycle {cycle:?} repeats a layer")));
    }
    Ok(())
}

/// Site-level cyclic twist `V a†_{c_k} V† = a†_{c_{k+1}}`.
pub fn site_twist(sys: &FockSystem, cycle: &[usize]) -> Result<CMat> {
    check_cycle(sys, cycle)?;
    let mut perm: Vec<usize> = (0..sys.modes_per_site).collect();
    for (k, &l) in cycle.iter().enumerate() {
        perm[l] = cycle[(k + 1) % cycle.len()];
    }
    sys.site_permutation(&perm)
}

/// Site-level Fourier transform after which layer `c_k` holds the mode
/// `ã_k = N^{-1/2} Σ_l e^{2πi lk/N} a_{c_l}`.
pub fn site_fourier(sys: &FockSystem, cycle: &[usize]) -> Result<CMat> {
    check_cycle(sys, cycle)?;
    let n = cycle.len();
    let norm = 1.0 / (n as f64).sqrt();
    let mut m = linalg::identity(sys.modes_per_site);
    for (k, &ck) in cycle.iter().enumerate() {
        for (l, &cl) in cycle.iter().enumerate() {
            m[(ck, cl)] = cis(2.0 * PI * (l * k) as f64 / n as f64) * norm;
        }
    }
    sys.single_site().mode_unitary(&m)
}

/// `⟨V̄⟩` for the cycle applied on every site, directly and as
/// `⟨∏_{j,k} exp(2πi k ñ_{j,k}/N)⟩` after the Fourier transform.
pub fn twist_expectation(sys: &FockSystem, cycle: &[usize], state: &CVec) -> Result<IdentityCheck> {
    check_cycle(sys, cycle)?;
    sys.check_state(state, &sys.uniform_groups(&[cycle.to_vec()]))?;
    let n = cycle.len();
    let direct = linalg::expectation(state, &sys.on_every_site(&site_twist(sys, cycle)?));
    let ft = sys.on_every_site(&site_fourier(sys, cycle)?);
    let weight: Vec<Option<usize>> =
        (0..sys.modes()).map(|m| cycle.iter().position(|&l| l == m % sys.modes_per_site)).collect();
    let phase = sys.diagonal_phase(|m, occ| match weight[m] {
        Some(k) => cis(2.0 * PI * (k * occ) as f64 / n as f64),
        None => c(1.0, 0.0),
    });
    let measured = linalg::expectation(&(&ft * state), &phase);
    IdentityCheck::new("Fourier phase formula vs direct twist", measured, direct)
}

/// Site-level number operator of the antisymmetric mode `(a_A - a_B)/√2`.
pub fn site_antisymmetric_number(sys: &FockSystem, (a, b): (usize, usize)) -> Result<CMat> {
    check_pair(sys, (a, b))?;
    let site = sys.single_site();
    Ok((site.number(a) + site.number(b) - site.hopping(a, b)) * c(0.5, 0.0))
}

/// `I ⊗ |0⟩⟨0| + SWAP ⊗ |1⟩⟨1|` (and `SWAP^c` on higher ancilla levels),
/// with the ancilla as the least significant factor.
pub fn fredkin(sys: &FockSystem, pair: (usize, usize), ancilla_dim: usize) -> Result<CMat> {
    let swap = sys.on_every_site(&site_swap(sys, pair)?);
    let id = linalg::identity(sys.dim());
    let mut u = CMat::zeros(sys.dim() * ancilla_dim, sys.dim() * ancilla_dim);
    for level in 0..ancilla_dim {
        let mut proj = CMat::zeros(ancilla_dim, ancilla_dim);
        proj[(level, level)] = c(1.0, 0.0);
        u += linalg::kron(if level % 2 == 0 { &id } else { &swap }, &proj);
    }
    Ok(u)
}

/// `exp(-iπ n_C Σ_j ñ_{j,B})` with the cavity as the least significant factor.
pub fn cswap(sys: &FockSystem, pair: (usize, usize), ancilla_dim: usize) -> Result<CMat> {
    if ancilla_dim < 2 {
        return Err(Error::InvalidParameter("the ancilla needs at least two levels".into()));
    }
    if sys.dim() * ancilla_dim > DEFAULT_MAX_DIM {
        return Err(Error::ResourceLimit(format!("system-ancilla dimension {}", sys.dim() * ancilla_dim)));
    }
    let total = sys.site_sum(&site_antisymmetric_number(sys, pair)?);
    let mut u = CMat::zeros(sys.dim() * ancilla_dim, sys.dim() * ancilla_dim);
    for level in 0..ancilla_dim {
        let mut proj = CMat::zeros(ancilla_dim, ancilla_dim);
        proj[(level, level)] = c(1.0, 0.0);
        u += linalg::kron(&linalg::expm_hermitian(&total, PI * level as f64), &proj);
    }
    let reference = fredkin(sys, pair, ancilla_dim)?;
    let cols: Vec<usize> = sys
        .faithful_indices(&sys.uniform_groups(&[vec![pair.0, pair.1]]))
        .into_iter()
        .flat_map(|i| [i * ancilla_dim, i * ancilla_dim + 1])
        .collect();
    let full = FockSystem { sites: 1, modes_per_site: 1, cutoff: u.nrows() - 1 };
    verify("controlled-SWAP block structure", full.column_diff(&u, &reference, &cols), CONSTRUCTION_TOL)?;
    Ok(u)
}

/// Parses a logical state: labels, binary strings over the basis, or
/// indices, joined by `+` or `-`, each optionally prefixed by `i*`.
/// `flux:a` names the state prepared by threading flux `a` through the
/// cycle, which at the logical level is the basis state `|a⟩`.
pub fn parse_state_spec(m: &ModularData, spec: &str) -> Result<CVec> {
    let n = m.rank();
    let cleaned: String = spec.chars().filter(|ch| !matches!(ch, '|' | '⟩' | '>' | ' ')).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty state".into()));
    }
    let mut v = CVec::zeros(n);
    let mut sign = 1.0;
    let mut term = String::new();
    let flush = |term: &str, sign: f64, v: &mut CVec| -> Result<()> {
        let (coeff, label) = match term.strip_prefix("i*") {
            Some(rest) => (c(0.0, sign), rest),
            None => (c(sign, 0.0), term),
        };
        let label = label.strip_prefix("flux:").unwrap_or(label);
        v[resolve_basis(m, label)?] += coeff;
        Ok(())
    };
    for (i, ch) in cleaned.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            flush(&term, sign, &mut v)?;
            term.clear();
            sign = if ch == '-' { -1.0 } else { 1.0 };
        } else if ch == '-' {
            sign = -1.0;
        } else if ch != '+' {
            term.push(ch);
        }
    }
    flush(&term, sign, &mut v)?;
    let norm = v.norm();
    if norm < 1e-12 {
        return Err(Error::Parse(format!("state `{spec}` vanishes")));
    }
    Ok(v / c(norm, 0.0))
}

fn resolve_basis(m: &ModularData, label: &str) -> Result<usize> {
    if let Ok(i) = m.label_index(label) {
        return Ok(i);
    }
    let n = m.rank();
    if !label.is_empty() && label.chars().all(|ch| ch == '0' || ch == '1') && 1usize << label.len() == n {
        return Ok(usize::from_str_radix(label, 2).expect("binary digits"));
    }
    match label.parse::<usize>() {
        Ok(i) if i < n => Ok(i),
        _ => Err(Error::UnknownLabel(label.to_string())),
    }
}

/// Ramsey circuit on ancilla ⊗ logical space: `(|0⟩+|1⟩)/√2`, controlled
/// `rep(word)`, then `⟨X_A⟩` and `⟨Y_A⟩`.
pub fn hadamard_test(m: &ModularData, word: &MCGWord, state: &CVec) -> Result<(f64, f64)> {
    let n = m.rank();
    if state.len() != n || (state.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("need a normalised state of length {n}")));
    }
    let u = rep_on_torus(word, m)?;
    let h = c(FRAC_1_SQRT_2, 0.0);
    let plus = CVec::from_column_slice(&[h, h]);
    let psi =
        linalg::kron(&CMat::from_column_slice(2, 1, plus.as_slice()), &CMat::from_column_slice(n, 1, state.as_slice()));
    let psi = CVec::from_column_slice(psi.as_slice());
    let p0 = linalg::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
    let p1 = linalg::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]);
    let controlled = linalg::kron(&p0, &linalg::identity(n)) + linalg::kron(&p1, &u);
    let out = controlled * psi;
    let x = linalg::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
    let y = linalg::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]);
    let re = linalg::expectation(&out, &linalg::kron(&x, &linalg::identity(n))).re;
    let im = linalg::expectation(&out, &linalg::kron(&y, &linalg::identity(n))).re;
    IdentityCheck::new("Ramsey readout vs matrix element", c(re, im), linalg::expectation(state, &u))?;
    Ok((re, im))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub n: usize,
    /// Tunneling rate.
    pub j: f64,
    pub dt: f64,
    pub e_g: f64,
    pub t: f64,
    /// Per-site readout fidelity.
    pub f: f64,
    /// Code distance; carried for reporting only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

impl Default for ErrorBudget {
    fn default() -> Self {
        ErrorBudget { n: 1, j: 1.0, dt: 0.0, e_g: 1.0, t: 0.0, f: 1.0, d: None }
    }
}

impl ErrorBudget {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("J", self.j), ("dt", self.dt), ("E_g", self.e_g), ("T", self.t)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and nonnegative, got {v}")));
            }
        }
        if !(self.f > 0.0 && self.f <= 1.0) {
            return Err(Error::InvalidParameter(format!("readout fidelity must lie in (0, 1], got {}", self.f)));
        }
        Ok(())
    }
}

/// A first-order estimate and whether its expansion parameter is small.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub valid: bool,
}

/// Beyond this size the first-order correction is no longer small.
const EXPANSION_LIMIT: f64 = 0.5;

/// `1 - 2N²(JΔt)²`, valid while `JΔt ≪ 1/N`.
pub fn timing_error_overlap(b: &ErrorBudget) -> Estimate {
    let n = b.n as f64;
    let x = 2.0 * n * n * (b.j * b.dt).powi(2);
    Estimate { value: 1.0 - x, valid: x <= EXPANSION_LIMIT }
}

/// `1 - N² e^{-E_g/T}`; exactly 1 at zero temperature.
pub fn thermal_fidelity(b: &ErrorBudget) -> Estimate {
    if b.t <= 0.0 {
        return Estimate { value: 1.0, valid: true };
    }
    let n = b.n as f64;
    let x = n * n * (-b.e_g / b.t).exp();
    Estimate { value: 1.0 - x, valid: x <= EXPANSION_LIMIT }
}

pub fn readout_fidelity(b: &ErrorBudget) -> Estimate {
    Estimate { value: b.f.powi(b.n as i32), valid: true }
}

/// `(|vac⟩ + ∏_j (a†_{j,-})^k/√k! |vac⟩)/√2`, the state whose total
/// antisymmetric occupation has the largest spread for `k` per site.
pub fn antisymmetric_cat(sys: &FockSystem, pair: (usize, usize), k: usize) -> Result<CVec> {
    check_pair(sys, pair)?;
    if k > sys.cutoff {
        return Err(Error::CutoffTooSmall { cutoff: sys.cutoff, reason: format!("{k} particles per site") });
    }
    let mut occ = vec![0; sys.modes()];
    for s in 0..sys.sites {
        occ[sys.mode(s, pair.1)] = k;
    }
    let loaded = beamsplitter(sys, pair)? * sys.basis_state(&occ)?;
    Ok((sys.vacuum() + loaded) * c(FRAC_1_SQRT_2, 0.0))
}

/// `|⟨U(π/2J + Δt)⟩| / |⟨U(π/2J)⟩|` for transversal tunneling on the pair.
pub fn timing_overlap_exact(sys: &FockSystem, pair: (usize, usize), state: &CVec, j_dt: f64) -> Result<f64> {
    sys.check_state(state, &sys.uniform_groups(&[vec![pair.0, pair.1]]))?;
    let ideal = sys.on_every_site(&tunneling_evolution(sys, pair, FRAC_PI_2)?);
    let late = sys.on_every_site(&tunneling_evolution(sys, pair, FRAC_PI_2 + j_dt)?);
    let reference = linalg::expectation(state, &ideal).norm();
    if reference < 1e-12 {
        return Err(Error::InvalidParameter("the ideal SWAP expectation vanishes".into()));
    }
    Ok(linalg::expectation(state, &late).norm() / reference)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preparation {
    Basis {
        a: usize,
    },
    /// `(|a⟩ + |b⟩)/√2`
    Plus {
        a: usize,
        b: usize,
    },
    /// `(|a⟩ + i|b⟩)/√2`
    PlusI {
        a: usize,
        b: usize,
    },
}

impl Preparation {
    /// Every preparation the extraction needs for rank `n`.
    pub fn complete_set(n: usize) -> Vec<Preparation> {
        let mut out: Vec<Preparation> = (0..n).map(|a| Preparation::Basis { a }).collect();
        for a in 0..n {
            for b in a + 1..n {
                out.push(Preparation::Plus { a, b });
                out.push(Preparation::PlusI { a, b });
            }
        }
        out
    }

    pub fn state(&self, n: usize) -> Result<CVec> {
        let mut v = CVec::zeros(n);
        let (a, b, coeff) = match *self {
            Preparation::Basis { a } => (a, None, c(1.0, 0.0)),
            Preparation::Plus { a, b } => (a, Some(b), c(1.0, 0.0)),
            Preparation::PlusI { a, b } => (a, Some(b), c(0.0, 1.0)),
        };
        if a >= n || b.is_some_and(|b| b >= n || b == a) {
            return Err(Error::InvalidParameter(format!("preparation {self} does not fit rank {n}")));
        }
        v[a] = c(1.0, 0.0);
        if let Some(b) = b {
            v[b] = coeff;
        }
        let norm = v.norm();
        Ok(v / c(norm, 0.0))
    }
}

impl fmt::Display for Preparation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preparation::Basis { a } => write!(f, "|{a}⟩"),
            Preparation::Plus { a, b } => write!(f, "(|{a}⟩+|{b}⟩)/√2"),
            Preparation::PlusI { a, b } => write!(f, "(|{a}⟩+i|{b}⟩)/√2"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Analytic,
    Simulated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub observable: String,
    pub preparation: Preparation,
    /// `[re, im]` of `⟨ψ|O|ψ⟩`.
    pub value: Complex64,
    /// Only `Re` was measured (a parity readout without the `Y` quadrature).
    #[serde(default)]
    pub real_only: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    pub provenance: Provenance,
}

/// Exact Ramsey readouts of `⟨ψ|S|ψ⟩` over the complete preparation set.
pub fn synthetic_measurements(m: &ModularData) -> Result<Vec<MeasurementRecord>> {
    let word: MCGWord = "S".parse()?;
    Preparation::complete_set(m.rank())
        .into_iter()
        .map(|p| {
            let (re, im) = hadamard_test(m, &word, &p.state(m.rank())?)?;
            Ok(MeasurementRecord {
                observable: "S".into(),
                preparation: p,
                value: c(re, im),
                real_only: false,
                variance: None,
                provenance: Provenance::Analytic,
            })
        })
        .collect()
}

/// Replaces an exact record by the mean of `shots` ±1 outcomes in each
/// quadrature, with the variance of that complex estimator.
pub fn sample_record<R: Rng + ?Sized>(record: &MeasurementRecord, shots: usize, rng: &mut R) -> MeasurementRecord {
    let mut quadrature = |mean: f64| {
        let p = ((1.0 + mean) / 2.0).clamp(0.0, 1.0);
        let ups = (0..shots).filter(|_| rng.gen_bool(p)).count() as f64;
        (2.0 * ups - shots as f64) / shots as f64
    };
    let re = quadrature(record.value.re);
    let im = if record.real_only { 0.0 } else { quadrature(record.value.im) };
    let var_q = |mean: f64| (1.0 - mean * mean) / shots as f64;
    let variance = var_q(record.value.re) + if record.real_only { 0.0 } else { var_q(record.value.im) };
    MeasurementRecord {
        value: c(re, im),
        variance: Some(variance),
        provenance: Provenance::Simulated,
        ..record.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionMethod {
    /// `C = 1`, so `S` is Hermitian and the real parts suffice.
    SelfConjugate,
    /// Linear solve using `S + S† = (1 + C)S` and `S - S† = (1 - C)S`.
    ConjugationSolve,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub s: CMat,
    pub residual: f64,
    pub method: ExtractionMethod,
}

/// Reconstructs `S` from `⟨ψ|S|ψ⟩` records over [`Preparation::complete_set`].
pub fn extract_matrix_elements(records: &[MeasurementRecord], conj: &CMat) -> Result<Extraction> {
    let n = conj.nrows();
    let mut by_prep: BTreeMap<Preparation, (Complex64, bool, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.observable == "S") {
        r.preparation.state(n)?;
        let e = by_prep.entry(r.preparation).or_insert((c(0.0, 0.0), false, 0));
        e.0 += r.value;
        e.1 |= r.real_only;
        e.2 += 1;
    }
    let data: BTreeMap<Preparation, (Complex64, bool)> =
        by_prep.into_iter().map(|(p, (sum, ro, k))| (p, (sum / k as f64, ro))).collect();
    let missing: Vec<String> =
        Preparation::complete_set(n).into_iter().filter(|p| !data.contains_key(p)).map(|p| p.to_string()).collect();
    if !missing.is_empty() {
        return Err(Error::InsufficientMeasurements(missing));
    }
    if linalg::approx_eq(conj, &linalg::identity(n), 1e-12) {
        Ok(self_conjugate_solve(n, &data))
    } else {
        conjugation_solve(n, &data, conj)
    }
}

fn self_conjugate_solve(n: usize, data: &BTreeMap<Preparation, (Complex64, bool)>) -> Extraction {
    let re = |p: Preparation| data[&p].0.re;
    let d: Vec<f64> = (0..n).map(|a| re(Preparation::Basis { a })).collect();
    let mut s = CMat::zeros(n, n);
    for a in 0..n {
        s[(a, a)] = c(d[a], 0.0);
        for b in a + 1..n {
            let mean = 0.5 * (d[a] + d[b]);
            let z = c(re(Preparation::Plus { a, b }) - mean, mean - re(Preparation::PlusI { a, b }));
            s[(a, b)] = z;
            s[(b, a)] = z.conj();
        }
    }
    let residual = data
        .iter()
        .map(|(p, (v, _))| {
            let psi = p.state(n).expect("validated");
            (linalg::expectation(&psi, &s).re - v.re).abs()
        })
        .fold(0.0, f64::max);
    Extraction { s, residual, method: ExtractionMethod::SelfConjugate }
}

fn conjugation_solve(n: usize, data: &BTreeMap<Preparation, (Complex64, bool)>, conj: &CMat) -> Result<Extraction> {
    let id = linalg::identity(n);
    let (plus_c, minus_c) = (&id + conj, &id - conj);
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut rhs: Vec<Complex64> = Vec::new();
    // ⟨ψ|K S|ψ⟩ = Σ_{c,b} conj(ψ_a) K_ac ψ_b S_cb, unknowns ordered (c, b).
    let row = |psi: &CVec, k: &CMat| -> Vec<Complex64> {
        let left = k.transpose() * psi.map(|z| z.conj());
        (0..n).flat_map(|cc| (0..n).map(move |b| (cc, b))).map(|(cc, b)| left[cc] * psi[b]).collect()
    };
    for (p, &(v, real_only)) in data {
        let psi = p.state(n)?;
        rows.push(row(&psi, &plus_c));
        rhs.push(c(2.0 * v.re, 0.0));
        if !real_only {
            rows.push(row(&psi, &minus_c));
            rhs.push(c(0.0, 2.0 * v.im));
        }
    }
    let a = CMat::from_fn(rows.len(), n * n, |i, j| rows[i][j]);
    let b = CVec::from_vec(rhs);
    let svd = a.clone().svd(true, true);
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let rank = svd.singular_values.iter().filter(|&&x| x > 1e-9 * top.max(1e-300)).count();
    if rank < n * n {
        let need: Vec<String> =
            data.iter().filter(|(_, &(_, ro))| ro).map(|(p, _)| format!("imaginary part for {p}")).collect();
        let need = if need.is_empty() { vec![format!("{} more independent preparations", n * n - rank)] } else { need };
        return Err(Error::InsufficientMeasurements(need));
    }
    let x = svd.solve(&b, 1e-12).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let residual = (&a * &x - &b).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let s = CMat::from_fn(n, n, |cc, bb| x[cc * n + bb]);
    Ok(Extraction { s, residual, method: ExtractionMethod::ConjugationSolve })
}

/// Seeded random-state sweeps of every readout identity. Each sweep draws
/// from its own stream of the generator, so sweeps are independent of one
/// another and of their order.
pub fn identity_suite(seed: u64, states: usize, max_dim: usize, tol: f64) -> Result<Report> {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    let stream = |k: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        rng
    };
    let sweep = |k: u64, sys: &FockSystem, groups: &[Vec<usize>], f: &dyn Fn(&CVec) -> Result<IdentityCheck>| {
        let mut rng = stream(k);
        (0..states).try_fold(0.0f64, |worst, _| {
            let diff = match f(&sys.random_state(groups, &mut rng)) {
                Ok(c) => c.diff,
                Err(Error::IdentityViolation { diff, .. }) => diff,
                Err(e) => return Err(e),
            };
            Ok(worst.max(diff))
        })
    };
    let check = |name: &str, diff: f64, tol: f64| {
        Check::new(name, Status::from_bool(diff < tol), format!("< {tol:e}"), format!("{diff:.3e}")).with_tolerance(tol)
    };
    let mut report = Report::new();

    let pair_sys = FockSystem::with_max_dim(2, 2, 2, max_dim)?;
    let pair_groups = pair_sys.uniform_groups(&[vec![0, 1]]);
    let d = sweep(0, &pair_sys, &pair_groups, &|psi| swap_expectation_via_parity(&pair_sys, (0, 1), psi))?;
    report.push(check("parity after beamsplitter = SWAP", d, tol));
    let d = sweep(1, &pair_sys, &pair_groups, &|psi| twist_expectation(&pair_sys, &[0, 1], psi))?;
    report.push(check("Fourier twist formula, N=2", d, tol));

    let tri = FockSystem::with_max_dim(1, 3, 2, max_dim)?;
    let d = sweep(2, &tri, &[vec![0, 1, 2]], &|psi| twist_expectation(&tri, &[0, 1, 2], psi))?;
    report.push(check("Fourier twist formula, N=3", d, tol));

    let u = cswap(&pair_sys, (0, 1), 2)?;
    let f = fredkin(&pair_sys, (0, 1), 2)?;
    let cols: Vec<usize> =
        pair_sys.faithful_indices(&pair_groups).into_iter().flat_map(|i| [2 * i, 2 * i + 1]).collect();
    let d = cols
        .iter()
        .flat_map(|&j| (0..u.nrows()).map(move |i| (i, j)))
        .map(|(i, j)| (u[(i, j)] - f[(i, j)]).norm())
        .fold(0.0, f64::max);
    report.push(check("controlled-SWAP block structure", d, tol.min(CONSTRUCTION_TOL)));

    let quad = FockSystem::with_max_dim(2, 4, 1, max_dim)?;
    let quad_groups = vec![vec![0, 3], vec![2, 1], vec![6, 7], vec![4, 5]];
    let d = sweep(3, &quad, &quad_groups, &four_layer_region_parity)?;
    report.push(check("four-layer region parity = double SWAP", d, tol));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_and_cap() {
        let sys = FockSystem::new(2, 2, 2).unwrap();
        assert_eq!(sys.dim(), 81);
        assert!(matches!(FockSystem::new(3, 4, 2), Err(Error::ResourceLimit(_))));
        assert!(matches!(FockSystem::new(1, 2, 0), Err(Error::CutoffTooSmall { .. })));
    }

    #[test]
    fn creation_respects_cutoff() {
        let sys = FockSystem::new(1, 1, 1).unwrap();
        let one = sys.create(0, &sys.vacuum());
        assert_eq!(one[1], c(1.0, 0.0));
        assert_eq!(sys.create(0, &one).norm(), 0.0);
    }

    #[test]
    fn state_spec_forms() {
        let m = crate::anyons::toric_code();
        assert_eq!(parse_state_spec(&m, "|em⟩").unwrap()[3], c(1.0, 0.0));
        assert_eq!(parse_state_spec(&m, "00").unwrap()[0], c(1.0, 0.0));
        assert_eq!(parse_state_spec(&m, "flux:m").unwrap()[1], c(1.0, 0.0));
        let v = parse_state_spec(&m, "1-i*e").unwrap();
        assert!((v[2] - c(0.0, -FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(parse_state_spec(&m, "q").is_err());
    }
}
