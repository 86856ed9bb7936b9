//! Detection amplitudes, probabilities and signature supports for hyper-Bell
//! states under bosonic or fermionic exchange statistics.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::apparatus::Apparatus;
use crate::bellcore::{enumerate_bell_labels, left_mode, right_mode, BellLabel, LRVector, ModeIndex, VarCount};
use crate::error::{LabError, Result};

/// Threshold below which an amplitude counts as zero.
pub const DEFAULT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl Statistics {
    /// `+1` for bosons, `-1` for fermions.
    pub fn exchange_sign(self) -> f64 {
        match self {
            Statistics::Boson => 1.0,
            Statistics::Fermion => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistics {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "boson" | "bosons" => Ok(Statistics::Boson),
            "fermion" | "fermions" => Ok(Statistics::Fermion),
            other => Err(format!("unknown statistics '{other}'")),
        }
    }
}

/// Unordered detector pair, stored zero-based with `i <= j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OutcomePair {
    i: usize,
    j: usize,
}

impl OutcomePair {
    /// From one-based mode indices, in either order.
    pub fn new(a: ModeIndex, b: ModeIndex) -> Self {
        Self::from_zero_based(a.zero_based(), b.zero_based())
    }

    pub fn from_zero_based(a: usize, b: usize) -> Self {
        Self { i: a.min(b), j: a.max(b) }
    }

    /// One-based `(i, j)` with `i <= j`.
    pub fn modes(&self) -> (usize, usize) {
        (self.i + 1, self.j + 1)
    }

    pub fn zero_based(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn is_double(&self) -> bool {
        self.i == self.j
    }

    /// Position in the [`all_outcomes`] ordering.
    pub fn index(&self, n: VarCount) -> usize {
        // rows k < i hold d - k entries each
        let d = n.modes();
        self.i * d - self.i * self.i.saturating_sub(1) / 2 + (self.j - self.i)
    }
}

impl fmt::Display for OutcomePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.modes();
        write!(f, "({i},{j})")
    }
}

/// All `i <= j` detector pairs in lexicographic order.
pub fn all_outcomes(n: VarCount) -> Vec<OutcomePair> {
    let d = n.modes();
    (0..d)
        .flat_map(|i| (i..d).map(move |j| OutcomePair { i, j }))
        .collect()
}

fn check_label(app: &Apparatus, label: &BellLabel) -> Result<()> {
    if app.n() != label.n() {
        return Err(LabError::DimensionMismatch {
            expected: app.n().labels(),
            found: label.n().labels(),
        });
    }
    Ok(())
}

fn check_outcome(app: &Apparatus, out: &OutcomePair) -> Result<()> {
    if out.j >= app.dim() {
        return Err(LabError::InvalidMode {
            index: out.j + 1,
            max: app.dim(),
        });
    }
    Ok(())
}

/// Unchecked amplitude kernel on zero-based detector indices.
#[inline]
pub(crate) fn amplitude_kernel(app: &Apparatus, stats: Statistics, label: &BellLabel, i: usize, j: usize) -> Complex64 {
    let n = app.n();
    let exch = stats.exchange_sign();
    let mut acc = Complex64::new(0.0, 0.0);
    for s0 in 0..n.value_strings() {
        let l = left_mode(s0);
        let r = right_mode(label.pair_index(s0));
        let direct = app.entry(i, l).conj() * app.entry(j, r).conj();
        let swapped = app.entry(j, l).conj() * app.entry(i, r).conj();
        acc += (direct + swapped * exch) * label.sign_factor(s0);
    }
    acc * (n.value_strings() as f64).sqrt().recip()
}

/// `A(i,j|B) = ⟨0| c_j c_i |B⟩`.
pub fn outcome_amplitude(app: &Apparatus, stats: Statistics, label: &BellLabel, out: &OutcomePair) -> Result<Complex64> {
    check_label(app, label)?;
    check_outcome(app, out)?;
    if stats == Statistics::Fermion && out.is_double() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(amplitude_kernel(app, stats, label, out.i, out.j))
}

#[inline]
fn probability_from_amplitude(amp: Complex64, out: &OutcomePair) -> f64 {
    if out.is_double() {
        amp.norm_sqr() / 2.0
    } else {
        amp.norm_sqr()
    }
}

/// Born-rule probability of the number-resolved outcome `out`.
pub fn outcome_probability(app: &Apparatus, stats: Statistics, label: &BellLabel, out: &OutcomePair) -> Result<f64> {
    let amp = outcome_amplitude(app, stats, label, out)?;
    Ok(probability_from_amplitude(amp, out))
}

/// Outcomes with `|A| > eps`.
pub fn signature_support(app: &Apparatus, stats: Statistics, label: &BellLabel, eps: f64) -> Result<Vec<OutcomePair>> {
    check_label(app, label)?;
    Ok(signature_row(app, stats, label, eps)
        .entries
        .into_iter()
        .map(|e| e.outcome)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureEntry {
    pub outcome: OutcomePair,
    pub amplitude: Complex64,
    pub probability: f64,
}

/// Support of one Bell label.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureRow {
    pub label: BellLabel,
    pub entries: Vec<SignatureEntry>,
    /// Bitset over [`all_outcomes`] indices.
    support: Vec<u64>,
}

impl SignatureRow {
    pub fn support_bits(&self) -> &[u64] {
        &self.support
    }

    pub fn contains(&self, outcome_index: usize) -> bool {
        (self.support[outcome_index / 64] >> (outcome_index % 64)) & 1 == 1
    }

    pub fn intersects(&self, other: &SignatureRow) -> bool {
        self.support.iter().zip(&other.support).any(|(a, b)| a & b != 0)
    }

    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }
}

fn signature_row(app: &Apparatus, stats: Statistics, label: &BellLabel, eps: f64) -> SignatureRow {
    let outcomes = all_outcomes(app.n());
    let mut support = vec![0u64; outcomes.len().div_ceil(64)];
    let mut entries = Vec::new();
    for (k, out) in outcomes.iter().enumerate() {
        if stats == Statistics::Fermion && out.is_double() {
            continue;
        }
        let amp = amplitude_kernel(app, stats, label, out.i, out.j);
        if amp.norm() > eps {
            support[k / 64] |= 1 << (k % 64);
            entries.push(SignatureEntry {
                outcome: *out,
                amplitude: amp,
                probability: probability_from_amplitude(amp, out),
            });
        }
    }
    SignatureRow {
        label: *label,
        entries,
        support,
    }
}

/// Signature supports of every Bell label, in label order.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureTable {
    pub n: VarCount,
    pub stats: Statistics,
    pub eps: f64,
    pub outcomes: Vec<OutcomePair>,
    pub rows: Vec<SignatureRow>,
}

impl SignatureTable {
    /// Labels whose support contains the outcome at `outcome_index`.
    pub fn labels_with(&self, outcome_index: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.contains(outcome_index))
            .map(|(k, _)| k)
    }
}

pub fn signature_table(app: &Apparatus, stats: Statistics) -> SignatureTable {
    signature_table_with_eps(app, stats, DEFAULT_EPS)
}

pub fn signature_table_with_eps(app: &Apparatus, stats: Statistics, eps: f64) -> SignatureTable {
    let labels = enumerate_bell_labels(app.n());
    let rows = labels
        .par_iter()
        .map(|label| signature_row(app, stats, label, eps))
        .collect();
    SignatureTable {
        n: app.n(),
        stats,
        eps,
        outcomes: all_outcomes(app.n()),
        rows,
    }
}

/// `⟨B| c_i^† c_i |B⟩ = Σ_j p(i,j) (1 + δ_ij)`.
pub fn expected_click_rate(app: &Apparatus, stats: Statistics, label: &BellLabel, i: ModeIndex) -> Result<f64> {
    check_label(app, label)?;
    let i0 = i.zero_based();
    if i0 >= app.dim() {
        return Err(LabError::InvalidMode {
            index: i.get(),
            max: app.dim(),
        });
    }
    let mut rate = 0.0;
    for j0 in 0..app.dim() {
        let out = OutcomePair::from_zero_based(i0, j0);
        let p = outcome_probability(app, stats, label, &out)?;
        rate += if out.is_double() { 2.0 * p } else { p };
    }
    Ok(rate)
}

/// Projection of the (anti)symmetrized product `|i⟩|j⟩` onto the
/// one-particle-per-channel subspace, in the `(a, b)` basis of [`LRVector`].
///
/// Computed from the dense first-quantized two-particle tensor rather than the
/// amplitude formula, so it serves as an independent check of
/// [`outcome_amplitude`].
pub fn detection_signature_vector(app: &Apparatus, stats: Statistics, out: &OutcomePair) -> Result<LRVector> {
    check_outcome(app, out)?;
    let n = app.n();
    let dim = app.dim();
    let exch = stats.exchange_sign();
    let root_half = std::f64::consts::FRAC_1_SQRT_2;
    let (i, j) = out.zero_based();

    // T[m][k] = (U_im U_jk ± U_jm U_ik) / √2
    let mut tensor = vec![Complex64::new(0.0, 0.0); dim * dim];
    for m in 0..dim {
        for k in 0..dim {
            let sym = app.entry(i, m) * app.entry(j, k) + app.entry(j, m) * app.entry(i, k) * exch;
            tensor[m * dim + k] = sym * root_half;
        }
    }

    // coefficient on (|a,L⟩|b,R⟩ ± |b,R⟩|a,L⟩)/√2
    let mut v = LRVector::zeros(n);
    for a0 in 0..n.value_strings() {
        for b0 in 0..n.value_strings() {
            let (l, r) = (left_mode(a0), right_mode(b0));
            *v.at_mut(a0, b0) = (tensor[l * dim + r] + tensor[r * dim + l] * exch) * root_half;
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apparatus::{hadamard_lr, haar_random, projective_separate, separate, seeded_rng, haar_unitary};
    use crate::bellcore::{BellToken::*, BellLabel};
    use approx::assert_abs_diff_eq;

    fn n(v: usize) -> VarCount {
        VarCount::new(v).unwrap()
    }

    fn pair(a: usize, b: usize) -> OutcomePair {
        OutcomePair::from_zero_based(a - 1, b - 1)
    }

    fn label(t: &[crate::bellcore::BellToken]) -> BellLabel {
        BellLabel::from_tokens(t).unwrap()
    }

    #[test]
    fn outcome_ordering_and_index() {
        for v in 1..=3 {
            let outs = all_outcomes(n(v));
            let d = n(v).modes();
            assert_eq!(outs.len(), d * (d + 1) / 2);
            for (k, o) in outs.iter().enumerate() {
                assert_eq!(o.index(n(v)), k, "{o}");
            }
        }
        assert_eq!(pair(4, 1), pair(1, 4));
        assert_eq!(pair(1, 4).modes(), (1, 4));
    }

    #[test]
    fn hadamard_boson_amplitudes() {
        let app = hadamard_lr(n(1));
        let a = outcome_amplitude(&app, Statistics::Boson, &label(&[PhiPlus]), &pair(1, 1)).unwrap();
        assert_abs_diff_eq!(a.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(a.im, 0.0, epsilon = 1e-15);

        let a = outcome_amplitude(&app, Statistics::Boson, &label(&[PsiPlus]), &pair(1, 4)).unwrap();
        assert_abs_diff_eq!(a.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn hadamard_boson_probabilities() {
        let app = hadamard_lr(n(1));
        let p = outcome_probability(&app, Statistics::Boson, &label(&[PhiPlus]), &pair(1, 1)).unwrap();
        assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        let p = outcome_probability(&app, Statistics::Boson, &label(&[PsiPlus]), &pair(1, 3)).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn fermion_double_click_is_zero() {
        let app = haar_random(n(2), 8);
        for l in enumerate_bell_labels(n(2)) {
            for i in 0..8 {
                let a = outcome_amplitude(&app, Statistics::Fermion, &l, &OutcomePair::from_zero_based(i, i)).unwrap();
                assert_eq!(a, Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn supports_match_hand_enumeration() {
        let app = hadamard_lr(n(1));
        let s = signature_support(&app, Statistics::Boson, &label(&[PsiMinus]), DEFAULT_EPS).unwrap();
        assert_eq!(s, vec![pair(1, 4), pair(2, 3)]);
        let s = signature_support(&app, Statistics::Boson, &label(&[PhiMinus]), DEFAULT_EPS).unwrap();
        assert_eq!(s, vec![pair(1, 1), pair(2, 2), pair(3, 3), pair(4, 4)]);
        let s = signature_support(&projective_separate(n(1)), Statistics::Boson, &label(&[PhiPlus]), DEFAULT_EPS).unwrap();
        assert_eq!(s, vec![pair(1, 2), pair(3, 4)]);
    }

    #[test]
    fn table_shape() {
        let t = signature_table(&hadamard_lr(n(1)), Statistics::Boson);
        assert_eq!(t.rows.len(), 4);
        assert!(t.rows.iter().all(|r| !r.entries.is_empty()));
        let f = signature_table(&haar_random(n(2), 1), Statistics::Fermion);
        assert!(f.rows.iter().all(|r| r.entries.iter().all(|e| !e.outcome.is_double())));
    }

    #[test]
    fn click_rate_examples() {
        let app = hadamard_lr(n(1));
        let i1 = ModeIndex::new(n(1), 1).unwrap();
        let r = expected_click_rate(&app, Statistics::Boson, &label(&[PhiPlus]), i1).unwrap();
        assert_abs_diff_eq!(r, 0.5, epsilon = 1e-12);

        let app = haar_random(n(2), 7);
        for l in enumerate_bell_labels(n(2)) {
            let mut total = 0.0;
            for i in 1..=8 {
                let r = expected_click_rate(&app, Statistics::Boson, &l, ModeIndex::new(n(2), i).unwrap()).unwrap();
                assert_abs_diff_eq!(r, 0.25, epsilon = 1e-9);
                total += r;
            }
            assert_abs_diff_eq!(total, 2.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn signature_vector_hadamard_pair() {
        let app = hadamard_lr(n(1));
        // Bosons: |1⟩|2⟩ is antisymmetric in L/R, so the symmetrized projection vanishes.
        let v = detection_signature_vector(&app, Statistics::Boson, &pair(1, 2)).unwrap();
        assert!(v.amplitudes().iter().all(|z| z.norm() < 1e-15));
        // Fermions: −|0,L⟩|0,R⟩ only.
        let v = detection_signature_vector(&app, Statistics::Fermion, &pair(1, 2)).unwrap();
        assert_abs_diff_eq!(v.at(0, 0).re, -1.0, epsilon = 1e-15);
        assert_eq!(v.count_nonzero(1e-12), 1);
    }

    #[test]
    fn signature_vector_separate_left_left_is_zero() {
        let mut rng = seeded_rng(2);
        let app = separate(&haar_unitary(2, &mut rng), &haar_unitary(2, &mut rng), n(1)).unwrap();
        // modes 1 and 3 are both left-channel outputs
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let v = detection_signature_vector(&app, stats, &pair(1, 3)).unwrap();
            assert!(v.amplitudes().iter().all(|z| z.norm() < 1e-15));
        }
    }

    #[test]
    fn label_mismatch_is_error() {
        let app = hadamard_lr(n(2));
        assert!(outcome_amplitude(&app, Statistics::Boson, &label(&[PhiPlus]), &pair(1, 1)).is_err());
        assert!(outcome_amplitude(&app, Statistics::Boson, &label(&[PhiPlus, PhiPlus]), &pair(1, 9)).is_err());
    }
}
