//! Test-only oracles that do not go through the amplitude formula.
#![allow(dead_code)]

use std::collections::BTreeMap;

use lelm_lab::apparatus::{Apparatus, Complex64};
use lelm_lab::bellcore::{BellLabel, BellToken, VarCount};
use lelm_lab::detection::{OutcomePair, Statistics};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Single-variable Bell state as a 2x2 table `[left value][right value]`.
fn single_variable(token: BellToken) -> [[f64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match token {
        BellToken::PhiPlus => [[h, 0.0], [0.0, h]],
        BellToken::PhiMinus => [[h, 0.0], [0.0, -h]],
        BellToken::PsiPlus => [[0.0, h], [h, 0.0]],
        BellToken::PsiMinus => [[0.0, h], [-h, 0.0]],
    }
}

/// Hyper-Bell amplitudes `c[a][b]` (left value string `a`, right `b`, zero-based)
/// built as an explicit tensor product of single-variable tables.
pub fn tensor_bell(label: &BellLabel) -> Vec<Vec<f64>> {
    let n = label.n().get();
    let k = 1usize << n;
    let mut c = vec![vec![0.0; k]; k];
    for (a, row) in c.iter_mut().enumerate() {
        for (b, entry) in row.iter_mut().enumerate() {
            *entry = (0..n)
                .map(|v| single_variable(label.token(v))[(a >> v) & 1][(b >> v) & 1])
                .product();
        }
    }
    c
}

/// Brute-force second quantization: substitute `a†_m = Σ_i conj(U_im) c†_i`
/// into `Σ c[a][b] a†_{L(a)} a†_{R(b)} |0⟩`, normal-order the products with
/// the exchange rule of `stats`, and read off `⟨0| c_j c_i |B⟩`.
pub fn fock_amplitudes(app: &Apparatus, stats: Statistics, label: &BellLabel) -> BTreeMap<(usize, usize), Complex64> {
    let bell = tensor_bell(label);
    let dim = app.dim();
    // coefficient of the ordered product c†_i c†_j, i <= j
    let mut ordered: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    for (a, row) in bell.iter().enumerate() {
        for (b, &coef) in row.iter().enumerate() {
            if coef == 0.0 {
                continue;
            }
            let (left, right) = (2 * a, 2 * b + 1);
            for i in 0..dim {
                for j in 0..dim {
                    let term = app.entry(i, left).conj() * app.entry(j, right).conj() * coef;
                    let (key, sign) = if i <= j {
                        ((i, j), 1.0)
                    } else {
                        match stats {
                            Statistics::Boson => ((j, i), 1.0),
                            Statistics::Fermion => ((j, i), -1.0),
                        }
                    };
                    if stats == Statistics::Fermion && i == j {
                        continue;
                    }
                    *ordered.entry(key).or_insert(ZERO) += term * sign;
                }
            }
        }
    }
    // ⟨0|c_j c_i c†_i c†_j|0⟩ = 1 for i < j; ⟨0|c_i c_i (c†_i)^2|0⟩ = 2
    let mut out = BTreeMap::new();
    for i in 0..dim {
        for j in i..dim {
            let coef = ordered.get(&(i, j)).copied().unwrap_or(ZERO);
            let amp = if i == j { coef * 2.0 } else { coef };
            out.insert((i, j), amp);
        }
    }
    out
}

/// Outcome probabilities from the Fock amplitudes: `|1_i 1_j⟩` has weight
/// `|A|^2`, `|2_i⟩ = (c†_i)^2/√2 |0⟩` has weight `|A|^2 / 2`.
pub fn fock_probability(amp: Complex64, i: usize, j: usize) -> f64 {
    if i == j {
        amp.norm_sqr() / 2.0
    } else {
        amp.norm_sqr()
    }
}

pub fn outcome(i: usize, j: usize) -> OutcomePair {
    OutcomePair::from_zero_based(i - 1, j - 1)
}

pub fn n(v: usize) -> VarCount {
    VarCount::new(v).unwrap()
}

/// Brute-force partition: pairwise confusability from support sets, closed
/// under transitivity by repeated relaxation (no union-find).
pub fn brute_force_classes(supports: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let len = supports.len();
    let mut label_of: Vec<usize> = (0..len).collect();
    loop {
        let mut changed = false;
        for a in 0..len {
            for b in 0..len {
                let share = supports[a].iter().any(|o| supports[b].contains(o));
                if share && label_of[a] != label_of[b] {
                    let m = label_of[a].min(label_of[b]);
                    label_of[a] = m;
                    label_of[b] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, c) in label_of.into_iter().enumerate() {
        classes.entry(c).or_default().push(k);
    }
    classes.into_values().collect()
}
