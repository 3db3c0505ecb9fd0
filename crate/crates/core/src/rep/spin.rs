use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::RepError;
use crate::field::GaussRat;

/// A spin value `s`, stored as `2s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin(pub u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Exact matrices exist for `s ∈ {0, 1/2, 1}` only.
    pub fn is_exact(self) -> bool {
        self.0 <= 2
    }

    /// `−s(s+1)`, the value of `S²` under `[Sᵢ,Sⱼ] = ε_{ijk}S_k`.
    pub fn casimir(self) -> GaussRat {
        let t = self.0 as i64;
        GaussRat::from_frac(-t * (t + 2), 4)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Spin {
    type Err = RepError;
    fn from_str(s: &str) -> Result<Spin, RepError> {
        let bad = || RepError::BadSpin(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((n, "2")) => {
                let n: u32 = n.trim().parse().map_err(|_| bad())?;
                if n.is_multiple_of(2) {
                    return Err(bad());
                }
                Ok(Spin(n))
            }
            Some(_) => Err(bad()),
            None => Ok(Spin(2 * t.parse::<u32>().map_err(|_| bad())?)),
        }
    }
}

/// Square matrix over `ℚ(i)`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinBlock {
    n: usize,
    entries: Vec<GaussRat>,
}

impl SpinBlock {
    pub fn zero(n: usize) -> SpinBlock {
        SpinBlock { n, entries: vec![GaussRat::zero(); n * n] }
    }

    pub fn identity(n: usize) -> SpinBlock {
        let mut m = SpinBlock::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = GaussRat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> SpinBlock {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix");
        SpinBlock { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussRat {
        &self.entries[i * self.n + j]
    }

    pub fn mul(&self, o: &SpinBlock) -> SpinBlock {
        let n = self.n;
        let mut out = SpinBlock::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let t = a * o.get(k, j);
                    out.entries[i * n + j] += &t;
                }
            }
        }
        out
    }

    pub fn add(&self, o: &SpinBlock) -> SpinBlock {
        SpinBlock { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &SpinBlock) -> SpinBlock {
        SpinBlock { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn commutator(&self, o: &SpinBlock) -> SpinBlock {
        self.mul(o).sub(&o.mul(self))
    }

    /// `Some(c)` when the matrix is `c·id`.
    pub fn as_scalar(&self) -> Option<GaussRat> {
        let c = self.get(0, 0).clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { &c } else { &GaussRat::zero() };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }
}

/// `(S₁, S₂, S₃)` with `[Sᵢ,Sⱼ] = ε_{ijk}S_k`.
pub fn spin_matrices(s: Spin) -> Result<[SpinBlock; 3], RepError> {
    let q = GaussRat::from_frac;
    let z = GaussRat::zero;
    match s.0 {
        0 => Ok([SpinBlock::zero(1), SpinBlock::zero(1), SpinBlock::zero(1)]),
        1 => {
            // −(i/2)σₖ
            let h = q(1, 2);
            let ih = &GaussRat::i() * &h;
            Ok([
                SpinBlock::from_rows(vec![vec![z(), -&ih], vec![-&ih, z()]]),
                SpinBlock::from_rows(vec![vec![z(), -&h], vec![h.clone(), z()]]),
                SpinBlock::from_rows(vec![vec![-&ih, z()], vec![z(), ih.clone()]]),
            ])
        }
        2 => Ok(std::array::from_fn(|i| {
            SpinBlock::from_rows(
                (0..3).map(|j| (0..3).map(|k| GaussRat::from_int(-levi_civita(i, j, k))).collect()).collect(),
            )
        })),
        _ => Err(RepError::UnsupportedSpin(s)),
    }
}

/// `S₁² + S₂² + S₃²`.
pub fn spin_square(s: &[SpinBlock; 3]) -> SpinBlock {
    s[0].mul(&s[0]).add(&s[1].mul(&s[1])).add(&s[2].mul(&s[2]))
}

/// Floating-point spin matrices for any `s`, from the unitary ladder basis:
/// `Sᵢ = −i·Jᵢ` with Hermitian `Jᵢ`.
pub fn float_spin_matrices(s: Spin) -> [Vec<Complex64>; 3] {
    let n = s.dim();
    let sv = s.0 as f64 / 2.0;
    let mut jp = vec![Complex64::new(0.0, 0.0); n * n];
    let mut jz = vec![Complex64::new(0.0, 0.0); n * n];
    // basis index a ↔ m = s − a
    for a in 0..n {
        let m = sv - a as f64;
        jz[a * n + a] = Complex64::new(m, 0.0);
        if a > 0 {
            // J₊|m⟩ = √((s−m)(s+m+1)) |m+1⟩
            jp[(a - 1) * n + a] = Complex64::new(((sv - m) * (sv + m + 1.0)).sqrt(), 0.0);
        }
    }
    let jm: Vec<Complex64> = (0..n * n).map(|k| jp[(k % n) * n + k / n].conj()).collect();
    let i = Complex64::new(0.0, 1.0);
    let jx: Vec<Complex64> = jp.iter().zip(&jm).map(|(a, b)| (a + b) / 2.0).collect();
    let jy: Vec<Complex64> = jp.iter().zip(&jm).map(|(a, b)| (a - b) / (2.0 * i)).collect();
    [jx, jy, jz].map(|m| m.into_iter().map(|x| -i * x).collect())
}

pub(crate) fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}
