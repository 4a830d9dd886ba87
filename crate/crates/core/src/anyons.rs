//! Modular data for the five reference anyon models and the torus
//! representation of mapping-class words.
//!
//! Basis conventions: the torus ground space is spanned by `|a⟩_α`, one state
//! per anyon label, with label 0 the vacuum. The toric code uses the two-qubit
//! basis `|n_e n_m⟩`, so index `2·n_e + n_m` runs over `1, m, e, em`.
//!
//! Laughlin twist: the printed exponent `e^{i2πa(a+k)/2}` equals `e^{iπa(a+k)}`,
//! which is `±1` and gives a vanishing Gauss sum at `k = 2`. The built-in model
//! uses `θ_a = e^{-iπa(a+k)/k}` instead. It reproduces the double-semion phase
//! gate `diag(1, i)` at `k = 2` and satisfies `(ST)³ = Θ S²` for every `k`.
//! The printed form is kept as [`laughlin_twist_verbatim`].

use crate::linalg::{self, c, cis, CMat};
use crate::mcg::{Generator, MCGWord};
use crate::report::{Check, Report, Status};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Entrywise tolerance for every floating-point identity in this module.
pub const TOL: f64 = 1e-10;
/// Rounding tolerance for Verlinde coefficients.
pub const FUSION_TOL: f64 = 1e-9;

/// How spatial reflections act on the torus states of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReflectionRule {
    /// Reflections act as the identity on the anyon basis.
    Trivial,
    /// The model is one chiral half of a doubled theory and a reflection
    /// swaps the halves. Only words with an even number of reflections stay
    /// inside the encoded half.
    SwapChiralHalves,
    #[default]
    Unsupported,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularData {
    pub name: String,
    pub labels: Vec<String>,
    pub dims: Vec<f64>,
    pub s: CMat,
    /// Diagonal of the modular T matrix (topological spins).
    pub t: Vec<Complex64>,
    pub conj: Vec<usize>,
    pub reflection: ReflectionRule,
}

impl ModularData {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn t_matrix(&self) -> CMat {
        linalg::diag(&self.t)
    }

    pub fn conj_matrix(&self) -> CMat {
        linalg::permutation_matrix(&self.conj)
    }

    pub fn total_dim(&self) -> f64 {
        self.dims.iter().map(|d| d * d).sum::<f64>().sqrt()
    }

    /// Looks up a label; the vacuum also answers to `1`, `I`, `𝕀` and `vacuum`.
    pub fn label_index(&self, label: &str) -> Result<usize> {
        if let Some(i) = self.labels.iter().position(|l| l == label) {
            return Ok(i);
        }
        match label {
            "1" | "I" | "𝕀" | "vacuum" | "0" => Ok(0),
            _ => Err(Error::UnknownLabel(label.to_string())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModelJson::from(self)).expect("model serialises")
    }

    /// Parses a model document and rejects it unless every consistency check passes.
    pub fn from_json_verified(text: &str) -> Result<ModularData> {
        let m = Self::from_json_unchecked(text)?;
        let rep = verify_modular_data(&m);
        if let Some(bad) = rep.failures().next() {
            return Err(Error::InconsistentData(format!(
                "{}: expected {}, got {}",
                bad.name, bad.expected, bad.actual
            )));
        }
        Ok(m)
    }

    pub fn from_json_unchecked(text: &str) -> Result<ModularData> {
        let j: ModelJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        ModularData::try_from(j)
    }
}

/// On-disk form: S is a flat row-major list of `[re, im]` pairs, T its diagonal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelJson {
    #[serde(default)]
    pub name: String,
    pub labels: Vec<String>,
    pub dims: Vec<f64>,
    #[serde(rename = "S")]
    pub s: Vec<[f64; 2]>,
    #[serde(rename = "T")]
    pub t: Vec<[f64; 2]>,
    pub conj: Vec<usize>,
    #[serde(default)]
    pub reflection: ReflectionRule,
}

impl From<&ModularData> for ModelJson {
    fn from(m: &ModularData) -> Self {
        let n = m.rank();
        let mut s = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = m.s[(i, j)];
                s.push([z.re, z.im]);
            }
        }
        ModelJson {
            name: m.name.clone(),
            labels: m.labels.clone(),
            dims: m.dims.clone(),
            s,
            t: m.t.iter().map(|z| [z.re, z.im]).collect(),
            conj: m.conj.clone(),
            reflection: m.reflection,
        }
    }
}

impl TryFrom<ModelJson> for ModularData {
    type Error = Error;

    fn try_from(j: ModelJson) -> Result<Self> {
        let n = j.labels.len();
        if n == 0 {
            return Err(Error::Parse("model has no labels".into()));
        }
        if j.dims.len() != n || j.t.len() != n || j.conj.len() != n || j.s.len() != n * n {
            return Err(Error::Parse(format!(
                "size mismatch: {n} labels, {} dims, {} S entries, {} T entries, {} conj",
                j.dims.len(),
                j.s.len(),
                j.t.len(),
                j.conj.len()
            )));
        }
        let mut seen = vec![false; n];
        for &x in &j.conj {
            if x >= n || seen[x] {
                return Err(Error::Parse("conj is not a permutation".into()));
            }
            seen[x] = true;
        }
        Ok(ModularData {
            name: j.name,
            labels: j.labels,
            dims: j.dims,
            s: CMat::from_fn(n, n, |r, col| {
                let [re, im] = j.s[r * n + col];
                c(re, im)
            }),
            t: j.t.iter().map(|&[re, im]| c(re, im)).collect(),
            conj: j.conj,
            reflection: j.reflection,
        })
    }
}

/// The Laughlin twist exactly as printed, `e^{i2πa(a+k)/2}`.
pub fn laughlin_twist_verbatim(_k: u32, a: u32) -> Complex64 {
    let a = a as f64;
    let k = _k as f64;
    cis(2.0 * PI * a * (a + k) / 2.0)
}

/// The twist used by the built-in Laughlin model, `e^{-iπa(a+k)/k}`.
pub fn laughlin_twist(k: u32, a: u32) -> Complex64 {
    let (a, kf) = (a as f64, k as f64);
    cis(-PI * a * (a + kf) / kf)
}

fn hadamard() -> CMat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    linalg::from_real_rows(&[&[h, h], &[h, -h]])
}

pub fn laughlin(k: u32) -> Result<ModularData> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("laughlin needs k >= 2, got {k}")));
    }
    let n = k as usize;
    let norm = 1.0 / (k as f64).sqrt();
    let s = CMat::from_fn(n, n, |a, b| cis(2.0 * PI * (a * b) as f64 / k as f64) * norm);
    Ok(ModularData {
        name: format!("laughlin({k})"),
        labels: (0..n).map(|a| a.to_string()).collect(),
        dims: vec![1.0; n],
        s,
        t: (0..k).map(|a| laughlin_twist(k, a)).collect(),
        conj: (0..n).map(|a| (n - a) % n).collect(),
        reflection: ReflectionRule::Unsupported,
    })
}

pub fn toric_code() -> ModularData {
    let s = CMat::from_fn(4, 4, |i, j| {
        let (ne, nm) = (i >> 1, i & 1);
        let (ne2, nm2) = (j >> 1, j & 1);
        let sign = if (ne * nm2 + nm * ne2) % 2 == 0 { 0.5 } else { -0.5 };
        c(sign, 0.0)
    });
    ModularData {
        name: "toric_code".into(),
        labels: vec!["1".into(), "m".into(), "e".into(), "em".into()],
        dims: vec![1.0; 4],
        s,
        t: vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)],
        conj: vec![0, 1, 2, 3],
        reflection: ReflectionRule::Trivial,
    }
}

pub fn double_semion() -> ModularData {
    ModularData {
        name: "double_semion".into(),
        labels: vec!["1".into(), "s".into()],
        dims: vec![1.0, 1.0],
        s: hadamard(),
        t: vec![c(1.0, 0.0), c(0.0, 1.0)],
        conj: vec![0, 1],
        reflection: ReflectionRule::SwapChiralHalves,
    }
}

pub fn ising() -> ModularData {
    let r2 = std::f64::consts::SQRT_2;
    ModularData {
        name: "ising".into(),
        labels: vec!["1".into(), "sigma".into(), "psi".into()],
        dims: vec![1.0, r2, 1.0],
        s: linalg::from_real_rows(&[&[0.5, r2 / 2.0, 0.5], &[r2 / 2.0, 0.0, -r2 / 2.0], &[0.5, -r2 / 2.0, 0.5]]),
        t: vec![c(1.0, 0.0), cis(PI / 8.0), c(-1.0, 0.0)],
        conj: vec![0, 1, 2],
        reflection: ReflectionRule::Unsupported,
    }
}

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

pub fn fibonacci() -> ModularData {
    let phi = golden_ratio();
    let n = 1.0 / (2.0 + phi).sqrt();
    ModularData {
        name: "fibonacci".into(),
        labels: vec!["1".into(), "tau".into()],
        dims: vec![1.0, phi],
        s: linalg::from_real_rows(&[&[n, n * phi], &[n * phi, -n]]),
        t: vec![c(1.0, 0.0), cis(4.0 * PI / 5.0)],
        conj: vec![0, 1],
        reflection: ReflectionRule::Unsupported,
    }
}

pub const BUILTIN_NAMES: [&str; 5] = ["toric_code", "double_semion", "laughlin", "ising", "fibonacci"];

pub fn builtin_model(name: &str, parameter: Option<u32>) -> Result<ModularData> {
    match name {
        "toric_code" => Ok(toric_code()),
        "double_semion" => Ok(double_semion()),
        "ising" => Ok(ising()),
        "fibonacci" => Ok(fibonacci()),
        "laughlin" => laughlin(parameter.ok_or_else(|| Error::InvalidParameter("laughlin requires k".into()))?),
        other => Err(Error::UnknownModel(other.to_string())),
    }
}

/// Accepts `laughlin(3)`, `laughlin:3` or a bare built-in name.
pub fn model_by_spec(spec: &str) -> Result<ModularData> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("laughlin") {
        let k = rest.trim_matches(|ch| matches!(ch, '(' | ')' | ':' | ' '));
        let k: u32 = k.parse().map_err(|_| Error::InvalidParameter(format!("bad laughlin parameter `{rest}`")))?;
        return laughlin(k);
    }
    builtin_model(spec, None)
}

/// `Θ = (1/D) Σ_a d_a² θ_a`.
pub fn gauss_sum(m: &ModularData) -> Complex64 {
    let sum: Complex64 = m.dims.iter().zip(&m.t).map(|(d, th)| th * (d * d)).sum();
    sum / m.total_dim()
}

pub fn verify_modular_data(m: &ModularData) -> Report {
    let mut r = Report::new();
    let n = m.rank();
    let chk = |name: &str, err: f64, expected: &str| {
        Check::new(format!("{}: {}", m.name, name), Status::from_bool(err <= TOL), expected, format!("{err:.3e}"))
            .with_tolerance(TOL)
    };

    r.push(chk("S unitary", linalg::unitarity_defect(&m.s), "|S†S - I| = 0"));
    r.push(chk("S symmetric", linalg::max_abs_diff(&m.s, &m.s.transpose()), "|S - Sᵀ| = 0"));
    let s2 = &m.s * &m.s;
    r.push(chk("S² = C", linalg::max_abs_diff(&s2, &m.conj_matrix()), "|S² - C| = 0"));
    r.push(chk("S⁴ = I", linalg::max_abs_diff(&(&s2 * &s2), &linalg::identity(n)), "|S⁴ - I| = 0"));

    let theta_dev = m.t.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    r.push(chk("|θ_a| = 1", theta_dev, "0"));
    r.push(chk("θ_0 = 1", (m.t[0] - c(1.0, 0.0)).norm(), "0"));
    let dd = m.total_dim();
    let s0_dev = (0..n).map(|a| (m.s[(0, a)] - c(m.dims[a] / dd, 0.0)).norm()).fold(0.0, f64::max);
    r.push(chk("S_0a = d_a/D", s0_dev, "0"));

    let theta = gauss_sum(m);
    r.push(
        Check::new(
            format!("{}: |Θ| = 1", m.name),
            Status::from_bool((theta.norm() - 1.0).abs() <= TOL),
            "1",
            format!("{:.12} (Θ = {:.6}{:+.6}i)", theta.norm(), theta.re, theta.im),
        )
        .with_tolerance(TOL),
    );
    let st = &m.s * m.t_matrix();
    let st3 = &st * &st * &st;
    r.push(chk("(ST)³ = Θ S²", linalg::max_abs_diff(&st3, &(&s2 * theta)), "0"));
    if m.reflection == ReflectionRule::SwapChiralHalves {
        // Gauss sum of the full doubled theory, Θ·Θ̄.
        let full = theta * theta.conj();
        r.push(
            Check::new(
                format!("{}: doubled-theory Θ = 1", m.name),
                Status::from_bool((full - c(1.0, 0.0)).norm() <= TOL),
                "1",
                format!("{:.12}{:+.12}i", full.re, full.im),
            )
            .with_tolerance(TOL),
        );
    }

    match fusion_rules(m) {
        Ok(_) => r.push(
            Check::new(
                format!("{}: Verlinde coefficients integral", m.name),
                Status::Pass,
                "nonnegative integers",
                "ok",
            )
            .with_tolerance(FUSION_TOL),
        ),
        Err(e) => r.push(
            Check::new(
                format!("{}: Verlinde coefficients integral", m.name),
                Status::Fail,
                "nonnegative integers",
                e.to_string(),
            )
            .with_tolerance(FUSION_TOL),
        ),
    }
    r
}

/// Fusion tensor `N[a][b][c]` from the Verlinde formula.
pub fn fusion_rules(m: &ModularData) -> Result<Vec<Vec<Vec<u32>>>> {
    let n = m.rank();
    let mut out = vec![vec![vec![0u32; n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                let mut z = c(0.0, 0.0);
                for x in 0..n {
                    let s0 = m.s[(0, x)];
                    if s0.norm() < 1e-300 {
                        return Err(Error::InconsistentData("vanishing S_0x".into()));
                    }
                    z += m.s[(a, x)] * m.s[(b, x)] * m.s[(cc, x)].conj() / s0;
                }
                let r = z.re.round();
                if (z - c(r, 0.0)).norm() > FUSION_TOL || r < 0.0 {
                    return Err(Error::InconsistentData(format!(
                        "N_{{{},{}}}^{} = {:.6}{:+.6}i",
                        m.labels[a], m.labels[b], m.labels[cc], z.re, z.im
                    )));
                }
                out[a][b][cc] = r as u32;
            }
        }
    }
    Ok(out)
}

/// Labels appearing in `a × b`, with multiplicity.
pub fn fuse(m: &ModularData, a: &str, b: &str) -> Result<Vec<(String, u32)>> {
    let n = fusion_rules(m)?;
    let (ia, ib) = (m.label_index(a)?, m.label_index(b)?);
    Ok(n[ia][ib].iter().enumerate().filter(|(_, &k)| k > 0).map(|(cc, &k)| (m.labels[cc].clone(), k)).collect())
}

fn generator_matrix(m: &ModularData, g: Generator) -> Option<CMat> {
    match g {
        Generator::S => Some(m.s.clone()),
        Generator::SInv => Some(m.s.adjoint()),
        Generator::T => Some(m.t_matrix()),
        Generator::TInv => Some(m.t_matrix().adjoint()),
        Generator::C => Some(m.conj_matrix()),
        Generator::Ra | Generator::Rb => None,
    }
}

fn product(m: &ModularData, word: &MCGWord) -> CMat {
    let n = m.rank();
    word.0
        .iter()
        .fold(linalg::identity(n), |acc, &g| acc * generator_matrix(m, g).unwrap_or_else(|| linalg::identity(n)))
}

/// Unitary on the torus ground space for a word, in the `|a⟩_α` basis.
pub fn rep_on_torus(word: &MCGWord, m: &ModularData) -> Result<CMat> {
    let refl = word.reflection_count();
    if refl == 0 {
        return Ok(product(m, word));
    }
    match m.reflection {
        ReflectionRule::Trivial => Ok(product(m, word)),
        ReflectionRule::Unsupported => Err(Error::UnsupportedReflection {
            model: m.name.clone(),
            reason: "model is chiral; a reflection maps it to its time-reversed partner".into(),
        }),
        ReflectionRule::SwapChiralHalves => {
            if refl % 2 == 1 {
                return Err(Error::UnsupportedReflection {
                    model: m.name.clone(),
                    reason: "an odd number of reflections exchanges the encoded half with its partner".into(),
                });
            }
            doubled_rep(word, m)
        }
    }
}

/// Evaluates the word on `A ⊗ Ā`, where a reflection swaps the factors, then
/// reads off the first factor.
fn doubled_rep(word: &MCGWord, m: &ModularData) -> Result<CMat> {
    let n = m.rank();
    let swap = {
        let perm: Vec<usize> = (0..n * n).map(|i| (i % n) * n + i / n).collect();
        linalg::permutation_matrix(&perm)
    };
    let mut acc = linalg::identity(n * n);
    for &g in &word.0 {
        let step = match generator_matrix(m, g) {
            Some(u) => {
                let ubar = u.map(|z| z.conj());
                linalg::kron(&u, &ubar)
            }
            None => swap.clone(),
        };
        acc *= step;
    }
    // acc = U ⊗ V; pick the (k, l) block of V with the largest weight.
    let mut best = (0, 0, -1.0);
    for k in 0..n {
        for l in 0..n {
            let w: f64 = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| acc[(i * n + k, j * n + l)].norm_sqr())
                .sum();
            if w > best.2 {
                best = (k, l, w);
            }
        }
    }
    let (k, l, w) = best;
    let scale = (w / n as f64).sqrt();
    let u = CMat::from_fn(n, n, |i, j| acc[(i * n + k, j * n + l)] / scale);
    let v = CMat::from_fn(n, n, |kk, ll| {
        let z: Complex64 = (0..n).map(|i| u[(i, 0)].conj() * acc[(i * n + kk, ll)]).sum();
        z
    });
    if linalg::max_abs_diff(&linalg::kron(&u, &v), &acc) > TOL {
        return Err(Error::InconsistentData("doubled word did not factorise".into()));
    }
    Ok(u)
}

pub fn mixed_state_expectation(m: &ModularData, word: &MCGWord) -> Result<Complex64> {
    Ok(linalg::trace(&rep_on_torus(word, m)?) / m.rank() as f64)
}

/// `⟨a| rep(word) |b⟩`.
pub fn sector_element(m: &ModularData, a: &str, b: &str, word: &MCGWord) -> Result<Complex64> {
    let (ia, ib) = (m.label_index(a)?, m.label_index(b)?);
    Ok(rep_on_torus(word, m)?[(ia, ib)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateEntry {
    pub generator: Generator,
    pub gate: String,
    pub matrix: CMat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogicalGateDictionary {
    pub model: String,
    pub basis: String,
    pub entries: Vec<GateEntry>,
}

impl LogicalGateDictionary {
    pub fn get(&self, g: Generator) -> Option<&GateEntry> {
        self.entries.iter().find(|e| e.generator == g)
    }
}

/// Named logical gates per model, with matrices built from textbook gate
/// definitions rather than from the modular data.
pub fn logical_gate_dictionary(m: &ModularData) -> LogicalGateDictionary {
    let entry = |generator, gate: &str, matrix| GateEntry { generator, gate: gate.into(), matrix };
    let (basis, entries) = match m.name.as_str() {
        "toric_code" => {
            let h = hadamard();
            let swap = linalg::permutation_matrix(&[0, 2, 1, 3]);
            let cz = linalg::diag(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
            (
                "|n_e n_m>",
                vec![
                    entry(Generator::S, "(H⊗H)·SWAP", linalg::kron(&h, &h) * swap),
                    entry(Generator::T, "CZ", cz),
                    entry(Generator::C, "I", linalg::identity(4)),
                    entry(Generator::Ra, "I", linalg::identity(4)),
                    entry(Generator::Rb, "I", linalg::identity(4)),
                ],
            )
        }
        "double_semion" => (
            "|n_s>",
            vec![
                entry(Generator::S, "H", hadamard()),
                entry(Generator::T, "P", linalg::diag(&[c(1.0, 0.0), c(0.0, 1.0)])),
                entry(Generator::C, "I", linalg::identity(2)),
            ],
        ),
        name if name.starts_with("laughlin") => {
            let k = m.rank();
            let f = CMat::from_fn(k, k, |a, b| cis(2.0 * PI * (a * b) as f64 / k as f64) / (k as f64).sqrt());
            let parity = linalg::permutation_matrix(&(0..k).map(|a| (k - a) % k).collect::<Vec<_>>());
            (
                "|a>",
                vec![
                    entry(Generator::S, "Fourier", f),
                    entry(Generator::T, "phase", m.t_matrix()),
                    entry(Generator::C, "X-parity a→-a", parity),
                ],
            )
        }
        _ => {
            ("|a>", vec![entry(Generator::S, "modular S", m.s.clone()), entry(Generator::T, "modular T", m.t_matrix())])
        }
    };
    LogicalGateDictionary { model: m.name.clone(), basis: basis.into(), entries }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> MCGWord {
        s.parse().unwrap()
    }

    #[test]
    fn builtins_verify() {
        for m in [toric_code(), double_semion(), ising(), fibonacci(), laughlin(2).unwrap(), laughlin(5).unwrap()] {
            let r = verify_modular_data(&m);
            assert!(r.all_pass(), "{}\n{}", m.name, r);
        }
    }

    #[test]
    fn laughlin_two_matches_double_semion() {
        let l = laughlin(2).unwrap();
        let ds = double_semion();
        assert!(linalg::approx_eq(&l.s, &ds.s, TOL));
        assert!(linalg::approx_eq(&l.t_matrix(), &ds.t_matrix(), TOL));
    }

    #[test]
    fn verbatim_laughlin_twist_breaks_the_anchor() {
        // Printed form gives θ_1 = -1 at k = 2 where the double-semion phase gate needs i.
        let t1 = laughlin_twist_verbatim(2, 1);
        assert!((t1 - c(-1.0, 0.0)).norm() < 1e-12);
        let mut m = laughlin(2).unwrap();
        m.t = (0..2).map(|a| laughlin_twist_verbatim(2, a)).collect();
        assert!(gauss_sum(&m).norm() < 1e-12);
        assert!(!verify_modular_data(&m).all_pass());
    }

    #[test]
    fn gauss_sums() {
        assert!((gauss_sum(&toric_code()) - c(1.0, 0.0)).norm() < TOL);
        assert!((gauss_sum(&ising()) - cis(PI / 8.0)).norm() < TOL);
        assert!((gauss_sum(&double_semion()) - cis(PI / 4.0)).norm() < TOL);
    }

    #[test]
    fn fusion_examples() {
        let tc = toric_code();
        assert_eq!(fuse(&tc, "e", "m").unwrap(), vec![("em".to_string(), 1)]);
        let fib = fibonacci();
        assert_eq!(fuse(&fib, "tau", "tau").unwrap(), vec![("1".to_string(), 1), ("tau".to_string(), 1)]);
        let is = ising();
        assert_eq!(fuse(&is, "sigma", "sigma").unwrap(), vec![("1".to_string(), 1), ("psi".to_string(), 1)]);
    }

    #[test]
    fn traces_and_spins() {
        let tc = toric_code();
        let ds = double_semion();
        assert!((mixed_state_expectation(&tc, &w("S")).unwrap() - c(0.5, 0.0)).norm() < TOL);
        assert!(mixed_state_expectation(&ds, &w("S")).unwrap().norm() < TOL);
        assert!((sector_element(&tc, "em", "em", &w("T")).unwrap() - c(-1.0, 0.0)).norm() < TOL);
        let fib = fibonacci();
        let expect = -1.0 / (2.0 + golden_ratio()).sqrt();
        assert!((sector_element(&fib, "tau", "tau", &w("S")).unwrap() - c(expect, 0.0)).norm() < TOL);
    }

    #[test]
    fn reflection_rules() {
        let tc = toric_code();
        assert!(linalg::approx_eq(&rep_on_torus(&w("Ra"), &tc).unwrap(), &linalg::identity(4), TOL));
        let ds = double_semion();
        assert!(matches!(rep_on_torus(&w("Ra S"), &ds), Err(Error::UnsupportedReflection { .. })));
        // Ra T Ra = T⁻¹ as matrices, so the doubled evaluation must return P†.
        let u = rep_on_torus(&w("Ra T Ra"), &ds).unwrap();
        assert!(linalg::eq_up_to_phase(&u, &ds.t_matrix().adjoint(), TOL));
        assert!(matches!(rep_on_torus(&w("Rb"), &ising()), Err(Error::UnsupportedReflection { .. })));
    }

    #[test]
    fn dictionary_matches_rep() {
        for m in [toric_code(), double_semion(), laughlin(3).unwrap(), ising(), fibonacci()] {
            let d = logical_gate_dictionary(&m);
            for e in &d.entries {
                let word = MCGWord::new(vec![e.generator]);
                let u = rep_on_torus(&word, &m).unwrap();
                assert!(linalg::eq_up_to_phase(&u, &e.matrix, TOL), "{} {}", m.name, e.gate);
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let m = ising();
        let back = ModularData::from_json_verified(&m.to_json()).unwrap();
        assert_eq!(back.labels, m.labels);
        assert!(linalg::approx_eq(&back.s, &m.s, 0.0));
        let mut bad = ModelJson::from(&m);
        bad.s[0] = [2.0, 0.0];
        let text = serde_json::to_string(&bad).unwrap();
        assert!(ModularData::from_json_verified(&text).is_err());
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(model_by_spec("laughlin(3)").unwrap().rank(), 3);
        assert_eq!(model_by_spec("laughlin:4").unwrap().rank(), 4);
        assert!(matches!(model_by_spec("laughlin(1)"), Err(Error::InvalidParameter(_))));
        assert!(matches!(model_by_spec("su2_3"), Err(Error::UnknownModel(_))));
    }
}
