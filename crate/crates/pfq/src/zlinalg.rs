//! Exact integer matrices, Smith normal form, and canonical invariants
//! of finitely generated abelian groups.
//!
//! Everything here is over arbitrary-precision integers. Intermediate
//! entry growth during elimination is the classic failure mode for
//! machine-word implementations, and torsion orders in the intended
//! workloads exceed 64 bits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols));
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(1));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let t = q * self.get(src, c);
            let v = self.get(dst, c) - t;
            self.set(dst, c, v);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let t = q * self.get(r, src);
            let v = self.get(r, dst) - t;
            self.set(r, dst, v);
        }
    }
}

/// Diagonal of the Smith normal form of `m`: divisors e1 | e2 | ... with
/// zeros trailing, of length min(rows, cols).
///
/// Pivot selection: a unit entry with the least Markowitz fill-in cost
/// when one exists (elimination is then exact and entry growth stays
/// local), otherwise the smallest nonzero magnitude; ties broken by
/// lowest row then column index. Unconstrained smallest-pivot selection
/// suffers catastrophic coefficient explosion already on the ~100-row
/// relation matrices this crate produces.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    let mut divisors = Vec::with_capacity(n);
    let one_mag = BigInt::from(1);

    for t in 0..n {
        // nonzero counts per row and column of the trailing submatrix
        let mut row_nnz = vec![0usize; a.rows];
        let mut col_nnz = vec![0usize; a.cols];
        for r in t..a.rows {
            for c in t..a.cols {
                if !a.get(r, c).is_zero() {
                    row_nnz[r] += 1;
                    col_nnz[c] += 1;
                }
            }
        }
        let mut unit: Option<(usize, usize, usize)> = None; // (cost, r, c)
        let mut small: Option<(usize, usize)> = None;
        for r in t..a.rows {
            for c in t..a.cols {
                let v = a.get(r, c);
                if v.is_zero() {
                    continue;
                }
                if v.magnitude() == one_mag.magnitude() {
                    let cost = (row_nnz[r] - 1) * (col_nnz[c] - 1);
                    if unit.is_none_or(|(bc, _, _)| cost < bc) {
                        unit = Some((cost, r, c));
                    }
                } else if unit.is_none() {
                    let better = match small {
                        None => true,
                        Some((pr, pc)) => v.magnitude() < a.get(pr, pc).magnitude(),
                    };
                    if better {
                        small = Some((r, c));
                    }
                }
            }
        }
        let pivot = unit.map(|(_, r, c)| (r, c)).or(small);
        let Some((pr, pc)) = pivot else {
            // rest of the matrix is zero
            for _ in t..n {
                divisors.push(BigInt::zero());
            }
            return divisors;
        };
        a.swap_rows(t, pr);
        a.swap_cols(t, pc);

        if a.get(t, t).magnitude() == one_mag.magnitude() {
            // exact elimination; 1 divides everything that follows
            for r in t + 1..a.rows {
                if !a.get(r, t).is_zero() {
                    let q = a.get(r, t) / a.get(t, t);
                    a.row_axpy(r, t, &q);
                }
            }
            for c in t + 1..a.cols {
                if !a.get(t, c).is_zero() {
                    let q = a.get(t, c) / a.get(t, t);
                    a.col_axpy(c, t, &q);
                }
            }
            a.set(t, t, BigInt::from(1));
            divisors.push(BigInt::from(1));
            continue;
        }

        loop {
            // clear column t
            let mut dirty = false;
            for r in t + 1..a.rows {
                if a.get(r, t).is_zero() {
                    continue;
                }
                let (q, rem) = a.get(r, t).div_rem(a.get(t, t));
                a.row_axpy(r, t, &q);
                if !rem.is_zero() {
                    // remainder is smaller than the pivot; swap it up
                    a.swap_rows(t, r);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // clear row t
            for c in t + 1..a.cols {
                if a.get(t, c).is_zero() {
                    continue;
                }
                let (q, rem) = a.get(t, c).div_rem(a.get(t, t));
                a.col_axpy(c, t, &q);
                if !rem.is_zero() {
                    a.swap_cols(t, c);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // column may have been repopulated by the row pass
            let col_clear = (t + 1..a.rows).all(|r| a.get(r, t).is_zero());
            if col_clear {
                break;
            }
        }

        // enforce divisibility of the remaining block by the pivot
        loop {
            let mut fixed = true;
            'outer: for r in t + 1..a.rows {
                for c in t + 1..a.cols {
                    if !(a.get(r, c) % a.get(t, t)).is_zero() {
                        // fold the offending row into row t and redo
                        let one = BigInt::from(-1);
                        a.row_axpy(t, r, &one);
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
            // re-clear column t after the fold
            loop {
                let mut dirty = false;
                for r in t + 1..a.rows {
                    if a.get(r, t).is_zero() {
                        continue;
                    }
                    let (q, rem) = a.get(r, t).div_rem(a.get(t, t));
                    a.row_axpy(r, t, &q);
                    if !rem.is_zero() {
                        a.swap_rows(t, r);
                        dirty = true;
                    }
                }
                for c in t + 1..a.cols {
                    if a.get(t, c).is_zero() {
                        continue;
                    }
                    let (q, rem) = a.get(t, c).div_rem(a.get(t, t));
                    a.col_axpy(c, t, &q);
                    if !rem.is_zero() {
                        a.swap_cols(t, c);
                        dirty = true;
                    }
                }
                if !dirty && (t + 1..a.rows).all(|r| a.get(r, t).is_zero()) {
                    break;
                }
            }
        }

        let d = a.get(t, t).abs();
        a.set(t, t, d.clone());
        divisors.push(d);
    }
    divisors
}

/// Canonical form of a finitely generated abelian group: free rank plus
/// a divisor chain d1 | d2 | ... with every di >= 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Natural log of the torsion subgroup order; 0 when torsion-free.
    pub fn torsion_order_log(&self) -> f64 {
        self.torsion.iter().map(bigint_ln).sum()
    }

    /// Canonical string, e.g. `Z^12+Z/12`. Part of the cache contract.
    pub fn canonical_string(&self) -> String {
        let mut s = format!("Z^{}", self.free_rank);
        for d in &self.torsion {
            s.push_str(&format!("+Z/{}", d));
        }
        s
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split('+');
        let head = parts
            .next()
            .ok_or_else(|| Error::Validation("empty abelian invariants".into()))?;
        let rank: usize = head
            .strip_prefix("Z^")
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::Validation(format!("bad abelian invariants: {s}")))?;
        let mut torsion = Vec::new();
        for p in parts {
            let d: BigInt = p
                .strip_prefix("Z/")
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Validation(format!("bad abelian invariants: {s}")))?;
            if d < BigInt::from(2) {
                return Err(Error::Validation(format!("bad torsion divisor in {s}")));
            }
            torsion.push(d);
        }
        Ok(AbelianInvariants {
            free_rank: rank,
            torsion,
        })
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

fn bigint_ln(x: &BigInt) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v.ln();
        }
    }
    // shift down to 53 significant bits and add back the exponent
    let bits = x.bits();
    let shift = bits.saturating_sub(53);
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Invariants of the cokernel of `m` acting on Z^ngens (relators as rows).
pub fn abelian_invariants(m: &IntMatrix, ngens: usize) -> Result<AbelianInvariants> {
    if m.cols() != ngens && m.rows() != 0 {
        return Err(Error::Validation(format!(
            "relation matrix has {} columns, expected {}",
            m.cols(),
            ngens
        )));
    }
    let divisors = smith_normal_form(m);
    let nonzero: Vec<&BigInt> = divisors.iter().filter(|d| !d.is_zero()).collect();
    let free_rank = ngens - nonzero.len();
    let torsion = nonzero
        .into_iter()
        .filter(|d| **d > BigInt::from(1))
        .cloned()
        .collect();
    Ok(AbelianInvariants { free_rank, torsion })
}

/// Natural log of the torsion order of an abelian group.
pub fn torsion_order_log(a: &AbelianInvariants) -> f64 {
    a.torsion_order_log()
}

/// Row-style Hermite form of a full-column-rank matrix: returns an
/// n x n upper triangular basis with positive diagonal for the row
/// lattice of `m`. Used internally for finite-cover enumeration.
pub(crate) fn hermite_basis(m: &IntMatrix) -> Option<Vec<Vec<BigInt>>> {
    let n = m.cols();
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|r| (0..n).map(|c| m.get(r, c).clone()).collect())
        .collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for col in 0..n {
        loop {
            // smallest nonzero entry in this column among remaining rows
            let mut best: Option<usize> = None;
            for (i, row) in rows.iter().enumerate() {
                if row[col].is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => row[col].abs() < rows[b][col].abs(),
                };
                if better {
                    best = Some(i);
                }
            }
            let Some(b) = best else {
                return None; // rank deficient
            };
            let pivot_row = rows[b].clone();
            let mut all_clear = true;
            for (i, row) in rows.iter_mut().enumerate() {
                if i == b || row[col].is_zero() {
                    continue;
                }
                let q = row[col].div_rem(&pivot_row[col]).0;
                for c in 0..n {
                    let t = &q * &pivot_row[c];
                    row[c] = &row[c] - t;
                }
                if !row[col].is_zero() {
                    all_clear = false;
                }
            }
            if all_clear {
                let mut p = rows.remove(b);
                if p[col].is_negative() {
                    for v in p.iter_mut() {
                        *v = -v.clone();
                    }
                }
                basis.push(p);
                break;
            }
        }
    }
    Some(basis)
}

/// Primitive integer vector f with m . f = 0, when the kernel of the map
/// x -> m x has rank exactly 1. Used for cyclic covers.
pub(crate) fn primitive_kernel_vector(m: &IntMatrix) -> Option<Vec<BigInt>> {
    let n = m.cols();
    // column-reduce [m] recording column operations on an identity block
    let mut a = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut pivot_row = 0usize;
    let mut pivot_cols: Vec<bool> = vec![false; n];
    for r in 0..a.rows() {
        loop {
            let mut best: Option<usize> = None;
            for c in 0..n {
                if pivot_cols[c] || a.get(r, c).is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => a.get(r, c).abs() < a.get(r, b).abs(),
                };
                if better {
                    best = Some(c);
                }
            }
            let Some(b) = best else {
                break;
            };
            let mut done = true;
            for c in 0..n {
                if c == b || pivot_cols[c] || a.get(r, c).is_zero() {
                    continue;
                }
                let q = a.get(r, c).div_rem(a.get(r, b)).0;
                a.col_axpy(c, b, &q);
                u.col_axpy(c, b, &q);
                if !a.get(r, c).is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_cols[b] = true;
                pivot_row += 1;
                break;
            }
        }
        let _ = pivot_row;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !pivot_cols[c]).collect();
    if free.len() != 1 {
        return None;
    }
    let c = free[0];
    let mut f: Vec<BigInt> = (0..n).map(|r| u.get(r, c).clone()).collect();
    let mut g = BigInt::zero();
    for v in &f {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return None;
    }
    for v in f.iter_mut() {
        *v = &*v / &g;
    }
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_i64(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&IntMatrix::from_rows_i64(rows))
            .iter()
            .map(|d| d.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn snf_identity() {
        assert_eq!(
            snf_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
            vec![1, 1, 1]
        );
    }

    #[test]
    fn snf_diag_2_3() {
        assert_eq!(snf_i64(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn snf_2468() {
        assert_eq!(snf_i64(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn snf_empty_and_zero() {
        assert_eq!(snf_i64(&[]), Vec::<i64>::new());
        assert_eq!(snf_i64(&[vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    #[test]
    fn abelian_invariants_free() {
        let m = IntMatrix::zero(0, 2);
        let a = abelian_invariants(&m, 2).unwrap();
        assert_eq!(a, AbelianInvariants::free(2));
        assert_eq!(a.canonical_string(), "Z^2");
    }

    #[test]
    fn abelian_invariants_t05599_exponent_matrix() {
        let m = IntMatrix::from_rows_i64(&[vec![4, 7, -2], vec![5, -2, 3]]);
        let a = abelian_invariants(&m, 3).unwrap();
        // SNF of the exponent matrix: rank 2, divisors (1, 1); cokernel Z
        assert_eq!(a.free_rank, 1);
        assert!(a.torsion.is_empty());
    }

    #[test]
    fn torsion_log_values() {
        let a = AbelianInvariants {
            free_rank: 12,
            torsion: vec![BigInt::from(12)],
        };
        assert!((a.torsion_order_log() - 12f64.ln()).abs() < 1e-12);
        assert_eq!(AbelianInvariants::free(5).torsion_order_log(), 0.0);
        let b = AbelianInvariants {
            free_rank: 0,
            torsion: vec![BigInt::from(2), BigInt::from(6)],
        };
        assert!((b.torsion_order_log() - 12f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn canonical_string_round_trip() {
        for s in ["Z^0", "Z^3", "Z^12+Z/12", "Z^0+Z/2+Z/2+Z/4"] {
            assert_eq!(AbelianInvariants::parse(s).unwrap().canonical_string(), s);
        }
        assert!(AbelianInvariants::parse("Z^1+Z/1").is_err());
        assert!(AbelianInvariants::parse("garbage").is_err());
    }

    #[test]
    fn hermite_of_diag() {
        let m = IntMatrix::from_rows_i64(&[vec![2, 0], vec![0, 3], vec![2, 3]]);
        let h = hermite_basis(&m).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h[0][0], BigInt::from(2));
        assert_eq!(h[1][1], BigInt::from(3));
    }

    #[test]
    fn kernel_vector_rank_one() {
        let m = IntMatrix::from_rows_i64(&[vec![0, 1]]);
        let f = primitive_kernel_vector(&m).unwrap();
        assert_eq!(f, vec![BigInt::from(1), BigInt::from(0)]);
        let m2 = IntMatrix::from_rows_i64(&[vec![2, 4]]);
        let f2 = primitive_kernel_vector(&m2).unwrap();
        assert_eq!(f2.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![
            BigInt::from(2),
            BigInt::from(1)
        ]);
        // rank-2 kernel: not usable
        let m3 = IntMatrix::zero(0, 2);
        assert!(primitive_kernel_vector(&m3).is_none());
    }
}
