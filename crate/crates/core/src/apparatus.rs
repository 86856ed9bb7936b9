//! LELM apparatuses as unitaries over the `2^(n+1)` single-particle input modes.
//!
//! Row `i` of the matrix is output mode `|i⟩` written in input-mode
//! coordinates: `|i⟩ = Σ_m U[i][m] |φ_m⟩`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
pub use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bellcore::{left_mode, right_mode, ModeIndex, VarCount};
use crate::error::{LabError, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Unitarity tolerance for matrices built from exact formulas.
pub const EXACT_TOL: f64 = 1e-12;
/// Unitarity tolerance for sampled or loaded matrices.
pub const SAMPLED_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Apparatus {
    n: VarCount,
    u: CMatrix,
}

impl Apparatus {
    /// Wraps `u` after checking its shape and unitarity at `tol`.
    pub fn new(n: VarCount, u: CMatrix, tol: f64) -> Result<Self> {
        let dim = n.modes();
        if u.nrows() != dim || u.ncols() != dim {
            return Err(LabError::DimensionMismatch {
                expected: dim,
                found: if u.nrows() != dim { u.nrows() } else { u.ncols() },
            });
        }
        let app = Self { n, u };
        let report = check_unitary(&app, tol);
        if !report.pass {
            return Err(LabError::NotUnitary {
                deviation: report.deviation,
                tolerance: tol,
            });
        }
        Ok(app)
    }

    /// No unitarity check. Only for matrices that are unitary by construction.
    pub(crate) fn from_parts(n: VarCount, u: CMatrix) -> Self {
        debug_assert_eq!(u.nrows(), n.modes());
        Self { n, u }
    }

    pub fn n(&self) -> VarCount {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.u
    }

    pub fn into_matrix(self) -> CMatrix {
        self.u
    }

    /// Zero-based entry `U[i][m]`.
    #[inline]
    pub fn entry(&self, i: usize, m: usize) -> Complex64 {
        self.u[(i, m)]
    }

    /// True when no output mode mixes the left and right channels.
    pub fn is_channel_separated(&self) -> bool {
        (0..self.dim()).all(|i| {
            let split = lr_split_row(self, i);
            split.alpha.norm() == 0.0 || split.beta.norm() == 0.0
        })
    }
}

/// Result of a unitarity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityReport {
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Max-entry deviation of `U U^†` from the identity.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    let prod = u * u.adjoint();
    let mut worst = 0.0f64;
    for i in 0..prod.nrows() {
        for j in 0..prod.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

pub fn check_unitary(app: &Apparatus, tol: f64) -> UnitarityReport {
    let deviation = unitarity_deviation(&app.u);
    UnitarityReport {
        deviation,
        tolerance: tol,
        pass: deviation <= tol,
    }
}

/// L/R Hadamard: `|2s−1⟩ = (|χ_s,L⟩ + |χ_s,R⟩)/√2`, `|2s⟩ = (|χ_s,L⟩ − |χ_s,R⟩)/√2`.
pub fn hadamard_lr(n: VarCount) -> Apparatus {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = CMatrix::zeros(n.modes(), n.modes());
    for s0 in 0..n.value_strings() {
        let (l, r) = (left_mode(s0), right_mode(s0));
        u[(l, l)] = Complex64::new(h, 0.0);
        u[(l, r)] = Complex64::new(h, 0.0);
        u[(r, l)] = Complex64::new(h, 0.0);
        u[(r, r)] = Complex64::new(-h, 0.0);
    }
    Apparatus::from_parts(n, u)
}

/// Each channel measured separately in the computational basis.
pub fn projective_separate(n: VarCount) -> Apparatus {
    Apparatus::from_parts(n, CMatrix::identity(n.modes(), n.modes()))
}

/// The all-±1/2 optimal 4x4 unitary for one variable.
pub fn uopt_n1() -> Apparatus {
    #[rustfmt::skip]
    let signs = [
        1.0,  1.0,  1.0,  1.0,
        1.0, -1.0,  1.0, -1.0,
        1.0,  1.0, -1.0, -1.0,
        1.0, -1.0, -1.0,  1.0,
    ];
    let u = CMatrix::from_row_iterator(4, 4, signs.iter().map(|s| Complex64::new(0.5 * s, 0.0)));
    Apparatus::from_parts(VarCount::new(1).expect("n = 1"), u)
}

/// Applies `(|0⟩ ± |1⟩)/√2` to every variable in `vars`, identically on both channels.
pub fn diagonal_rotation(n: VarCount, vars: &[usize]) -> Result<Apparatus> {
    let mut mask = 0usize;
    for &v in vars {
        if v >= n.get() {
            return Err(LabError::InvalidVariable { index: v, n: n.get() });
        }
        mask |= 1 << v;
    }
    let rotated = mask.count_ones() as i32;
    let scale = std::f64::consts::FRAC_1_SQRT_2.powi(rotated);
    let mut u = CMatrix::zeros(n.modes(), n.modes());
    for s0 in 0..n.value_strings() {
        for t0 in 0..n.value_strings() {
            // identity on unrotated variables
            if (s0 ^ t0) & !mask != 0 {
                continue;
            }
            // H[x][y] = (-1)^(x·y) / √2 per rotated variable
            let sign = if (s0 & t0 & mask).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            let z = Complex64::new(sign * scale, 0.0);
            u[(left_mode(s0), left_mode(t0))] = z;
            u[(right_mode(s0), right_mode(t0))] = z;
        }
    }
    Ok(Apparatus::from_parts(n, u))
}

/// Diagonal rotation on every variable.
pub fn diagonal_all(n: VarCount) -> Apparatus {
    let vars: Vec<usize> = (0..n.get()).collect();
    diagonal_rotation(n, &vars).expect("all variables are in range")
}

/// `outer.U · inner.U`: the inner apparatus acts first.
pub fn compose(outer: &Apparatus, inner: &Apparatus) -> Result<Apparatus> {
    if outer.n != inner.n {
        return Err(LabError::DimensionMismatch {
            expected: outer.dim(),
            found: inner.dim(),
        });
    }
    Ok(Apparatus::from_parts(outer.n, &outer.u * &inner.u))
}

/// Channel-block-diagonal apparatus: `u_left` acts on the left modes and
/// `u_right` on the right modes. Output mode `2s−1` is left, `2s` is right.
pub fn separate(u_left: &CMatrix, u_right: &CMatrix, n: VarCount) -> Result<Apparatus> {
    let k = n.value_strings();
    for block in [u_left, u_right] {
        if block.nrows() != k || block.ncols() != k {
            return Err(LabError::DimensionMismatch {
                expected: k,
                found: block.nrows(),
            });
        }
        let deviation = unitarity_deviation(block);
        if deviation > SAMPLED_TOL {
            return Err(LabError::NotUnitary {
                deviation,
                tolerance: SAMPLED_TOL,
            });
        }
    }
    let mut u = CMatrix::zeros(n.modes(), n.modes());
    for a in 0..k {
        for b in 0..k {
            u[(left_mode(a), left_mode(b))] = u_left[(a, b)];
            u[(right_mode(a), right_mode(b))] = u_right[(a, b)];
        }
    }
    Ok(Apparatus::from_parts(n, u))
}

/// Haar-distributed `dim x dim` unitary: complex Gaussian fill, QR, then the
/// R-diagonal phases are moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let gauss = CMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * half, im * half)
    });
    let qr = gauss.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Deterministic RNG for a given seed.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Haar-random apparatus over all `2^(n+1)` modes.
pub fn haar_random(n: VarCount, seed: u64) -> Apparatus {
    let mut rng = seeded_rng(seed);
    Apparatus::from_parts(n, haar_unitary(n.modes(), &mut rng))
}

/// Haar-random channel-separated apparatus (independent blocks per channel).
pub fn haar_random_separate(n: VarCount, seed: u64) -> Apparatus {
    let mut rng = seeded_rng(seed);
    let ul = haar_unitary(n.value_strings(), &mut rng);
    let ur = haar_unitary(n.value_strings(), &mut rng);
    separate(&ul, &ur, n).expect("Haar blocks are unitary")
}

/// `|i⟩ = α |l⟩ + β |r⟩` with `|l⟩`, `|r⟩` normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct LRSplit {
    pub alpha: Complex64,
    /// Coefficients over the left modes, indexed by zero-based value string.
    pub left: Vec<Complex64>,
    pub beta: Complex64,
    /// Coefficients over the right modes, indexed by zero-based value string.
    pub right: Vec<Complex64>,
}

fn normalize(part: Vec<Complex64>) -> (Complex64, Vec<Complex64>) {
    let norm = part.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        (ZERO, part)
    } else {
        (Complex64::new(norm, 0.0), part.into_iter().map(|z| z / norm).collect())
    }
}

fn lr_split_row(app: &Apparatus, i: usize) -> LRSplit {
    let k = app.n.value_strings();
    let left: Vec<Complex64> = (0..k).map(|s| app.u[(i, left_mode(s))]).collect();
    let right: Vec<Complex64> = (0..k).map(|s| app.u[(i, right_mode(s))]).collect();
    let (alpha, left) = normalize(left);
    let (beta, right) = normalize(right);
    LRSplit { alpha, left, beta, right }
}

/// Splits output mode `i` into its left- and right-channel parts. The
/// coefficients are chosen real and non-negative; any phase stays in the vectors.
pub fn lr_split(app: &Apparatus, i: ModeIndex) -> LRSplit {
    lr_split_row(app, i.zero_based())
}

#[derive(Serialize, Deserialize)]
struct ApparatusFile {
    n: usize,
    matrix: Vec<Vec<[f64; 2]>>,
}

impl ApparatusFile {
    fn from_apparatus(app: &Apparatus) -> Self {
        let dim = app.dim();
        Self {
            n: app.n.get(),
            matrix: (0..dim)
                .map(|i| (0..dim).map(|m| [app.u[(i, m)].re, app.u[(i, m)].im]).collect())
                .collect(),
        }
    }

    fn into_apparatus(self, tol: f64) -> Result<Apparatus> {
        let n = VarCount::new(self.n)?;
        let dim = n.modes();
        if self.matrix.len() != dim {
            return Err(LabError::DimensionMismatch {
                expected: dim,
                found: self.matrix.len(),
            });
        }
        if let Some(bad) = self.matrix.iter().find(|row| row.len() != dim) {
            return Err(LabError::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        let u = CMatrix::from_fn(dim, dim, |i, m| {
            let [re, im] = self.matrix[i][m];
            Complex64::new(re, im)
        });
        Apparatus::new(n, u, tol)
    }
}

impl Serialize for Apparatus {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ApparatusFile::from_apparatus(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Apparatus {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        ApparatusFile::deserialize(deserializer)?
            .into_apparatus(SAMPLED_TOL)
            .map_err(serde::de::Error::custom)
    }
}

/// Serializes to the apparatus file format: JSON with `n` and a row-major
/// `matrix` of `[re, im]` pairs, 17 significant digits per number.
pub fn to_file_string(app: &Apparatus) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"n\": {},", app.n.get());
    let _ = writeln!(out, "  \"matrix\": [");
    let dim = app.dim();
    for i in 0..dim {
        let row: Vec<String> = (0..dim)
            .map(|m| {
                let z = app.u[(i, m)];
                format!("[{:.16e}, {:.16e}]", z.re, z.im)
            })
            .collect();
        let sep = if i + 1 < dim { "," } else { "" };
        let _ = writeln!(out, "    [{}]{}", row.join(", "), sep);
    }
    let _ = writeln!(out, "  ]");
    let _ = writeln!(out, "}}");
    out
}

/// Parses the apparatus file format, checking shape and unitarity at `tol`.
pub fn from_file_str(text: &str, path: &Path, tol: f64) -> Result<Apparatus> {
    let parsed: ApparatusFile = serde_json::from_str(text).map_err(|e| LabError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parsed.into_apparatus(tol)
}

pub fn save_apparatus(app: &Apparatus, path: &Path) -> Result<()> {
    fs::write(path, to_file_string(app)).map_err(|source| LabError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads an apparatus file, rejecting non-unitary matrices at [`SAMPLED_TOL`].
pub fn load_apparatus(path: &Path) -> Result<Apparatus> {
    load_apparatus_with_tol(path, SAMPLED_TOL)
}

pub fn load_apparatus_with_tol(path: &Path, tol: f64) -> Result<Apparatus> {
    let text = fs::read_to_string(path).map_err(|source| LabError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    from_file_str(&text, path, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn n(v: usize) -> VarCount {
        VarCount::new(v).unwrap()
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn hadamard_n1_rows() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let app = hadamard_lr(n(1));
        #[rustfmt::skip]
        let expected = [
            h,  h, 0.0, 0.0,
            h, -h, 0.0, 0.0,
            0.0, 0.0, h,  h,
            0.0, 0.0, h, -h,
        ];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(app.entry(k / 4, k % 4), Complex64::new(*e, 0.0));
        }
    }

    #[test]
    fn hadamard_blocks_repeat() {
        let app = hadamard_lr(n(2));
        assert_eq!(app.dim(), 8);
        for s0 in 1..4 {
            for (di, dj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                assert_eq!(app.entry(2 * s0 + di, 2 * s0 + dj), app.entry(di, dj));
            }
        }
    }

    #[test]
    fn builders_are_unitary() {
        for v in 1..=3 {
            assert!(check_unitary(&hadamard_lr(n(v)), EXACT_TOL).pass);
            assert!(check_unitary(&projective_separate(n(v)), EXACT_TOL).pass);
            assert!(check_unitary(&diagonal_all(n(v)), EXACT_TOL).pass);
            assert!(check_unitary(&haar_random(n(v), 11), SAMPLED_TOL).pass);
            assert!(check_unitary(&haar_random_separate(n(v), 11), SAMPLED_TOL).pass);
        }
        assert!(check_unitary(&uopt_n1(), EXACT_TOL).pass);
    }

    #[test]
    fn zeroed_row_fails_check() {
        let mut u = hadamard_lr(n(1)).into_matrix();
        for m in 0..4 {
            u[(2, m)] = ZERO;
        }
        let app = Apparatus::from_parts(n(1), u.clone());
        assert!(!check_unitary(&app, 1e-3).pass);
        assert!(matches!(
            Apparatus::new(n(1), u, SAMPLED_TOL),
            Err(LabError::NotUnitary { .. })
        ));
    }

    #[test]
    fn uopt_entries() {
        let u = uopt_n1();
        assert_eq!(u.entry(0, 0), Complex64::new(0.5, 0.0));
        assert_eq!(u.entry(3, 1), Complex64::new(-0.5, 0.0));
        assert!(u.matrix().iter().all(|z| (z.norm() - 0.5).abs() < 1e-15 && z.im == 0.0));
    }

    #[test]
    fn uopt_is_hadamard_after_diagonal() {
        let built = compose(&hadamard_lr(n(1)), &diagonal_rotation(n(1), &[0]).unwrap()).unwrap();
        assert!(max_diff(built.matrix(), uopt_n1().matrix()) < 1e-15);
    }

    #[test]
    fn diagonal_rotation_cases() {
        let empty = diagonal_rotation(n(2), &[]).unwrap();
        assert_eq!(empty.matrix(), &CMatrix::identity(8, 8));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d = diagonal_rotation(n(1), &[0]).unwrap();
        // output mode 1 = (|0,L⟩ + |1,L⟩)/√2, output mode 3 = (|0,L⟩ − |1,L⟩)/√2
        assert_eq!(d.entry(0, 0), Complex64::new(h, 0.0));
        assert_eq!(d.entry(0, 2), Complex64::new(h, 0.0));
        assert_eq!(d.entry(2, 2), Complex64::new(-h, 0.0));
        assert!(d.is_channel_separated());

        for v in 1..=3 {
            let all = diagonal_all(n(v));
            let twice = compose(&all, &all).unwrap();
            let id = CMatrix::identity(n(v).modes(), n(v).modes());
            assert!(max_diff(twice.matrix(), &id) < 1e-12);
        }

        assert!(matches!(
            diagonal_rotation(n(2), &[2]),
            Err(LabError::InvalidVariable { index: 2, n: 2 })
        ));
    }

    #[test]
    fn compose_identity_and_mismatch() {
        let a = haar_random(n(2), 3);
        let id = projective_separate(n(2));
        assert!(max_diff(compose(&a, &id).unwrap().matrix(), a.matrix()) < 1e-15);
        assert!(compose(&a, &hadamard_lr(n(1))).is_err());
    }

    #[test]
    fn compose_associative() {
        let (a, b, c) = (haar_random(n(2), 1), haar_random(n(2), 2), haar_random(n(2), 3));
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        assert!(max_diff(left.matrix(), right.matrix()) < 1e-12);
    }

    #[test]
    fn separate_blocks() {
        let id = CMatrix::identity(4, 4);
        let app = separate(&id, &id, n(2)).unwrap();
        assert_eq!(app, projective_separate(n(2)));

        let mut rng = seeded_rng(5);
        let app = separate(&haar_unitary(4, &mut rng), &haar_unitary(4, &mut rng), n(2)).unwrap();
        for i in 1..=8 {
            let split = lr_split(&app, ModeIndex::new(n(2), i).unwrap());
            assert!(split.alpha == ZERO || split.beta == ZERO);
        }
        assert!(app.is_channel_separated());

        let mut bad = id.clone();
        bad[(0, 0)] = Complex64::new(2.0, 0.0);
        assert!(matches!(separate(&bad, &id, n(2)), Err(LabError::NotUnitary { .. })));
    }

    #[test]
    fn haar_is_deterministic() {
        assert_eq!(haar_random(n(2), 99), haar_random(n(2), 99));
        assert_ne!(haar_random(n(2), 99), haar_random(n(2), 100));
    }

    #[test]
    fn lr_split_cases() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let split = lr_split(&hadamard_lr(n(1)), ModeIndex::new(n(1), 1).unwrap());
        assert_abs_diff_eq!(split.alpha.re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(split.beta.re, h, epsilon = 1e-15);
        assert_eq!(split.left, vec![Complex64::new(1.0, 0.0), ZERO]);
        assert_eq!(split.right, vec![Complex64::new(1.0, 0.0), ZERO]);

        let split = lr_split(&projective_separate(n(1)), ModeIndex::new(n(1), 1).unwrap());
        assert_eq!(split.alpha, Complex64::new(1.0, 0.0));
        assert_eq!(split.beta, ZERO);

        let app = haar_random(n(2), 17);
        for i in 1..=8 {
            let s = lr_split(&app, ModeIndex::new(n(2), i).unwrap());
            assert_abs_diff_eq!(s.alpha.norm_sqr() + s.beta.norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        for app in [hadamard_lr(n(1)), haar_random(n(2), 4), uopt_n1()] {
            let path = dir.path().join("app.json");
            save_apparatus(&app, &path).unwrap();
            let back = load_apparatus(&path).unwrap();
            assert_eq!(back, app);
        }
    }

    #[test]
    fn file_errors_are_distinct() {
        let p = Path::new("test.json");
        assert!(matches!(
            from_file_str("{ not json", p, SAMPLED_TOL),
            Err(LabError::Parse { .. })
        ));
        let three = r#"{"n": 1, "matrix": [[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]}"#;
        assert!(matches!(
            from_file_str(three, p, SAMPLED_TOL),
            Err(LabError::DimensionMismatch { expected: 4, found: 3 })
        ));
        let scaled = r#"{"n": 1, "matrix": [[[2,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#;
        assert!(matches!(
            from_file_str(scaled, p, SAMPLED_TOL),
            Err(LabError::NotUnitary { .. })
        ));
        assert!(matches!(
            load_apparatus(Path::new("/nonexistent/app.json")),
            Err(LabError::Io { .. })
        ));
    }
}
