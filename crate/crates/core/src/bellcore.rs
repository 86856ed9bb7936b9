//! Mode indexing, the hyper-Bell basis, and two-particle state vectors.
//!
//! Single-particle input modes are numbered `m = 1..=2^(n+1)`. Odd `m` is the
//! left channel and even `m` the right channel, both carrying the value string
//! `s = ceil(m / 2)`. Variable `v` of a value string is bit `v` of `s - 1`
//! (variable 0 is the least significant bit).
//!
//! Internally everything is zero-based: value string `s0 = s - 1`, left mode
//! `2 * s0`, right mode `2 * s0 + 1`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::detection::Statistics;
use crate::error::{LabError, Result};

/// Hard cap on the number of two-state variables. Table cost grows as 16^n.
pub const MAX_VARS: usize = 8;

/// Number of two-state variables carried by each particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct VarCount(usize);

impl VarCount {
    pub fn new(n: usize) -> Result<Self> {
        if (1..=MAX_VARS).contains(&n) {
            Ok(Self(n))
        } else {
            Err(LabError::VarCountOutOfRange(n))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// `2^n`, the number of value strings per channel.
    pub fn value_strings(self) -> usize {
        1 << self.0
    }

    /// `2^(n+1)`, the number of single-particle modes (and detectors).
    pub fn modes(self) -> usize {
        1 << (self.0 + 1)
    }

    /// `4^n`, the number of hyper-Bell states.
    pub fn labels(self) -> usize {
        1 << (2 * self.0)
    }
}

impl TryFrom<usize> for VarCount {
    type Error = LabError;

    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<VarCount> for usize {
    fn from(n: VarCount) -> usize {
        n.0
    }
}

impl fmt::Display for VarCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Spatial input channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Left,
    Right,
}

/// One-based single-particle mode index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex(usize);

impl ModeIndex {
    pub fn new(n: VarCount, m: usize) -> Result<Self> {
        if (1..=n.modes()).contains(&m) {
            Ok(Self(m))
        } else {
            Err(LabError::InvalidMode {
                index: m,
                max: n.modes(),
            })
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn zero_based(self) -> usize {
        self.0 - 1
    }

    pub fn channel(self) -> Channel {
        if self.0 % 2 == 1 {
            Channel::Left
        } else {
            Channel::Right
        }
    }

    pub fn value_string(self) -> ValueString {
        ValueString(self.0.div_ceil(2))
    }
}

/// One-based value string `s`; bit `v` of `s - 1` is the value of variable `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ValueString(usize);

impl ValueString {
    pub fn new(n: VarCount, s: usize) -> Result<Self> {
        if (1..=n.value_strings()).contains(&s) {
            Ok(Self(s))
        } else {
            Err(LabError::InvalidMode {
                index: s,
                max: n.value_strings(),
            })
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn zero_based(self) -> usize {
        self.0 - 1
    }

    pub fn bit(self, var: usize) -> u8 {
        ((self.zero_based() >> var) & 1) as u8
    }

    pub fn left_mode(self) -> ModeIndex {
        ModeIndex(2 * self.0 - 1)
    }

    pub fn right_mode(self) -> ModeIndex {
        ModeIndex(2 * self.0)
    }
}

/// Zero-based left-channel mode carrying value string `s0`.
#[inline]
pub fn left_mode(s0: usize) -> usize {
    2 * s0
}

/// Zero-based right-channel mode carrying value string `s0`.
#[inline]
pub fn right_mode(s0: usize) -> usize {
    2 * s0 + 1
}

/// Single-variable Bell state, ordered `Φ+ < Φ− < Ψ+ < Ψ−`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BellToken {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellToken {
    pub const ALL: [BellToken; 4] = [
        BellToken::PhiPlus,
        BellToken::PhiMinus,
        BellToken::PsiPlus,
        BellToken::PsiMinus,
    ];

    fn digit(self) -> usize {
        self as usize
    }

    fn from_digit(d: usize) -> Self {
        Self::ALL[d & 3]
    }

    /// Ψ states pair opposite values across the channels.
    pub fn is_psi(self) -> bool {
        matches!(self, BellToken::PsiPlus | BellToken::PsiMinus)
    }

    pub fn is_minus(self) -> bool {
        matches!(self, BellToken::PhiMinus | BellToken::PsiMinus)
    }

    pub fn ascii(self) -> &'static str {
        match self {
            BellToken::PhiPlus => "phi+",
            BellToken::PhiMinus => "phi-",
            BellToken::PsiPlus => "psi+",
            BellToken::PsiMinus => "psi-",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            BellToken::PhiPlus => "Φ+",
            BellToken::PhiMinus => "Φ−",
            BellToken::PsiPlus => "Ψ+",
            BellToken::PsiMinus => "Ψ−",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "phi+" | "Φ+" => Some(BellToken::PhiPlus),
            "phi-" | "Φ−" | "Φ-" => Some(BellToken::PhiMinus),
            "psi+" | "Ψ+" => Some(BellToken::PsiPlus),
            "psi-" | "Ψ−" | "Ψ-" => Some(BellToken::PsiMinus),
            _ => None,
        }
    }
}

/// A hyper-Bell state: one [`BellToken`] per variable.
///
/// Stored as two masks. Bit `v` of `pairing_mask` is set when variable `v` is
/// a Ψ state; bit `v` of `sign_mask` is set when it is a minus state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BellLabel {
    n: VarCount,
    pairing_mask: usize,
    sign_mask: usize,
}

impl BellLabel {
    pub fn from_tokens(tokens: &[BellToken]) -> Result<Self> {
        let n = VarCount::new(tokens.len())?;
        let mut pairing_mask = 0;
        let mut sign_mask = 0;
        for (v, t) in tokens.iter().enumerate() {
            if t.is_psi() {
                pairing_mask |= 1 << v;
            }
            if t.is_minus() {
                sign_mask |= 1 << v;
            }
        }
        Ok(Self {
            n,
            pairing_mask,
            sign_mask,
        })
    }

    pub fn from_masks(n: VarCount, pairing_mask: usize, sign_mask: usize) -> Self {
        let full = n.value_strings() - 1;
        Self {
            n,
            pairing_mask: pairing_mask & full,
            sign_mask: sign_mask & full,
        }
    }

    /// Label at position `index` of the lexicographic enumeration.
    pub fn from_index(n: VarCount, index: usize) -> Result<Self> {
        if index >= n.labels() {
            return Err(LabError::DimensionMismatch {
                expected: n.labels(),
                found: index,
            });
        }
        let tokens: Vec<BellToken> = (0..n.get())
            .map(|v| BellToken::from_digit(index >> (2 * (n.get() - 1 - v))))
            .collect();
        Self::from_tokens(&tokens)
    }

    /// Position in the lexicographic enumeration (variable 0 most significant).
    pub fn index(&self) -> usize {
        self.tokens()
            .iter()
            .fold(0, |acc, t| (acc << 2) | t.digit())
    }

    pub fn n(&self) -> VarCount {
        self.n
    }

    pub fn pairing_mask(&self) -> usize {
        self.pairing_mask
    }

    pub fn sign_mask(&self) -> usize {
        self.sign_mask
    }

    pub fn token(&self, var: usize) -> BellToken {
        let psi = (self.pairing_mask >> var) & 1 == 1;
        let minus = (self.sign_mask >> var) & 1 == 1;
        match (psi, minus) {
            (false, false) => BellToken::PhiPlus,
            (false, true) => BellToken::PhiMinus,
            (true, false) => BellToken::PsiPlus,
            (true, true) => BellToken::PsiMinus,
        }
    }

    pub fn tokens(&self) -> Vec<BellToken> {
        (0..self.n.get()).map(|v| self.token(v)).collect()
    }

    /// Right-channel partner `r_B(s)` of the left value string `s`.
    pub fn pairing(&self, s: ValueString) -> ValueString {
        ValueString(self.pair_index(s.zero_based()) + 1)
    }

    /// Sign exponent `σ_B(s)` in {0, 1}.
    pub fn sign(&self, s: ValueString) -> u8 {
        self.sign_bit(s.zero_based())
    }

    #[inline]
    pub fn pair_index(&self, s0: usize) -> usize {
        s0 ^ self.pairing_mask
    }

    #[inline]
    pub fn sign_bit(&self, s0: usize) -> u8 {
        ((s0 & self.sign_mask).count_ones() & 1) as u8
    }

    /// `(-1)^σ_B(s0)` as a float.
    #[inline]
    pub fn sign_factor(&self, s0: usize) -> f64 {
        if self.sign_bit(s0) == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// ASCII rendering, e.g. `phi+ x psi-`.
    pub fn ascii(&self) -> String {
        self.tokens()
            .iter()
            .map(|t| t.ascii())
            .collect::<Vec<_>>()
            .join(" x ")
    }

    pub fn parse(n: VarCount, s: &str) -> Option<Self> {
        let tokens: Option<Vec<BellToken>> = s
            .split(['x', '⊗'])
            .map(BellToken::parse)
            .collect();
        let tokens = tokens?;
        if tokens.len() != n.get() {
            return None;
        }
        Self::from_tokens(&tokens).ok()
    }
}

impl PartialOrd for BellLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BellLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.index()).cmp(&(other.n, other.index()))
    }
}

impl fmt::Display for BellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.tokens().iter().map(|t| t.unicode()).collect();
        f.write_str(&parts.join("⊗"))
    }
}

/// All `4^n` hyper-Bell labels in lexicographic token order.
pub fn enumerate_bell_labels(n: VarCount) -> Vec<BellLabel> {
    (0..n.labels())
        .map(|k| BellLabel::from_index(n, k).expect("index below 4^n"))
        .collect()
}

/// Two-particle amplitudes on the one-particle-per-channel subspace.
///
/// Entry `(a, b)` is the amplitude of the left particle in value string `a`
/// and the right particle in value string `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LRVector {
    n: VarCount,
    amps: Vec<Complex64>,
}

impl LRVector {
    pub fn zeros(n: VarCount) -> Self {
        Self {
            n,
            amps: vec![Complex64::new(0.0, 0.0); n.labels()],
        }
    }

    pub fn n(&self) -> VarCount {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    fn offset(&self, a0: usize, b0: usize) -> usize {
        a0 * self.n.value_strings() + b0
    }

    /// Zero-based accessor.
    #[inline]
    pub fn at(&self, a0: usize, b0: usize) -> Complex64 {
        self.amps[self.offset(a0, b0)]
    }

    #[inline]
    pub fn at_mut(&mut self, a0: usize, b0: usize) -> &mut Complex64 {
        let k = self.offset(a0, b0);
        &mut self.amps[k]
    }

    pub fn get(&self, a: ValueString, b: ValueString) -> Complex64 {
        self.at(a.zero_based(), b.zero_based())
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn count_nonzero(&self, eps: f64) -> usize {
        self.amps.iter().filter(|z| z.norm() > eps).count()
    }
}

/// `|B⟩ = 2^(-n/2) Σ_s (-1)^σ(s) |χ_s, L⟩|χ_r(s), R⟩`.
pub fn bell_vector(label: &BellLabel) -> LRVector {
    let n = label.n();
    let scale = (n.value_strings() as f64).sqrt().recip();
    let mut v = LRVector::zeros(n);
    for a0 in 0..n.value_strings() {
        *v.at_mut(a0, label.pair_index(a0)) = Complex64::new(label.sign_factor(a0) * scale, 0.0);
    }
    v
}

/// Hermitian inner product `⟨u|v⟩`.
pub fn inner_product(u: &LRVector, v: &LRVector) -> Result<Complex64> {
    if u.dim() != v.dim() {
        return Err(LabError::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(u.amps
        .iter()
        .zip(&v.amps)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// First-quantized (anti)symmetrized Bell state as a dense
/// `2^(n+1) x 2^(n+1)` amplitude array `ψ[m][k]` (particle 1 in `m`, particle 2 in `k`).
pub fn symmetrized_state(label: &BellLabel, stats: Statistics) -> DMatrix<Complex64> {
    let n = label.n();
    let dim = n.modes();
    let exchange = stats.exchange_sign();
    let scale = (2.0 * n.value_strings() as f64).sqrt().recip();
    let mut psi = DMatrix::<Complex64>::zeros(dim, dim);
    for a0 in 0..n.value_strings() {
        let amp = label.sign_factor(a0) * scale;
        let l = left_mode(a0);
        let r = right_mode(label.pair_index(a0));
        psi[(l, r)] += Complex64::new(amp, 0.0);
        psi[(r, l)] += Complex64::new(exchange * amp, 0.0);
    }
    psi
}

/// Reduced density matrix of particle 2, `Tr_1 |B_sym⟩⟨B_sym|`, over all input modes.
pub fn reduced_density(label: &BellLabel, stats: Statistics) -> DMatrix<Complex64> {
    let psi = symmetrized_state(label, stats);
    // ρ[k][k'] = Σ_m ψ[m][k] conj(ψ[m][k'])
    psi.transpose() * psi.conjugate()
}
