//! Coset tables and the subgroup constructions built on them:
//! exhaustive low-index enumeration, kernels of surjections onto
//! permutation groups, abelian and cyclic covers, and the abelianized
//! Reidemeister-Schreier relation matrix.

use num_bigint::BigInt;
use num_traits::{Euclid, Signed, ToPrimitive, Zero};
use std::collections::HashMap;

use crate::fpgroups::Presentation;
use crate::permgrp::{PermGroup, Permutation};
use crate::zlinalg::{self, AbelianInvariants, IntMatrix};
use crate::{Error, Result};

/// Default branch-node budget for low-index searches.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// A complete transitive action of a presentation's generators on the
/// cosets of a finite-index subgroup. Coset 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    ngens: usize,
    n: usize,
    /// fwd[g][c] = c . generator g
    fwd: Vec<Vec<usize>>,
    /// inv[g][c] = c . generator g^-1
    inv: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn new(ngens: usize, fwd: Vec<Vec<usize>>) -> Result<Self> {
        let n = fwd.first().map_or(0, |col| col.len());
        if fwd.len() != ngens || n == 0 {
            return Err(Error::Validation("malformed coset table".into()));
        }
        let mut inv = vec![vec![0usize; n]; ngens];
        for g in 0..ngens {
            if fwd[g].len() != n {
                return Err(Error::Validation("ragged coset table".into()));
            }
            let mut seen = vec![false; n];
            for c in 0..n {
                let d = fwd[g][c];
                if d >= n || seen[d] {
                    return Err(Error::Validation(format!(
                        "generator {g} does not act by a permutation"
                    )));
                }
                seen[d] = true;
                inv[g][d] = c;
            }
        }
        Ok(CosetTable { ngens, n, fwd, inv })
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Index of the subgroup, i.e. the number of cosets.
    pub fn index(&self) -> usize {
        self.n
    }

    /// Apply one signed letter (+g or -g, 1-based) to a coset.
    pub fn apply(&self, coset: usize, letter: i32) -> usize {
        let g = (letter.unsigned_abs() - 1) as usize;
        if letter > 0 {
            self.fwd[g][coset]
        } else {
            self.inv[g][coset]
        }
    }

    /// Trace a word from a coset.
    pub fn trace(&self, coset: usize, letters: &[i32]) -> usize {
        letters.iter().fold(coset, |c, &l| self.apply(c, l))
    }

    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = vec![0usize];
        while let Some(c) = queue.pop() {
            for g in 0..self.ngens {
                for d in [self.fwd[g][c], self.inv[g][c]] {
                    if !seen[d] {
                        seen[d] = true;
                        queue.push(d);
                    }
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Check all three table invariants against a presentation:
    /// permutation columns (by construction), relators acting trivially
    /// from every coset, and transitivity.
    pub fn validate(&self, p: &Presentation) -> Result<()> {
        if p.ngens() != self.ngens {
            return Err(Error::Validation("generator count mismatch".into()));
        }
        for r in p.relators() {
            for c in 0..self.n {
                if self.trace(c, r.letters()) != c {
                    return Err(Error::Validation(format!(
                        "relator does not act trivially from coset {c}"
                    )));
                }
            }
        }
        if !self.is_transitive() {
            return Err(Error::Validation("action is not transitive".into()));
        }
        Ok(())
    }

    pub fn forward_actions(&self) -> &[Vec<usize>] {
        &self.fwd
    }
}

/// Exhaustive enumeration of ALL subgroups of index <= max_index (not
/// merely up to conjugacy), one standardized table per subgroup.
///
/// Tables are emitted in the deterministic order of the backtracking
/// search: slots are filled lowest-first, candidate targets tried in
/// increasing order with "new coset" last, and forced deductions are
/// propagated by relator scanning before branching.
pub fn low_index_subgroups(
    p: &Presentation,
    max_index: usize,
    node_budget: u64,
) -> Result<Vec<CosetTable>> {
    if max_index < 1 {
        return Err(Error::Precondition("max_index must be >= 1".into()));
    }
    let mut search = LowIndexSearch::new(p, max_index, node_budget);
    search.run()?;
    Ok(search.found)
}

const EMPTY: usize = usize::MAX;

struct LowIndexSearch<'a> {
    p: &'a Presentation,
    ngens: usize,
    max_index: usize,
    node_budget: u64,
    nodes: u64,
    /// table[col][coset]; columns alternate g0, g0^-1, g1, g1^-1, ...
    table: Vec<Vec<usize>>,
    n: usize,
    /// trail of (col, coset) assignments for backtracking
    trail: Vec<(usize, usize)>,
    found: Vec<CosetTable>,
}

impl<'a> LowIndexSearch<'a> {
    fn new(p: &'a Presentation, max_index: usize, node_budget: u64) -> Self {
        let ngens = p.ngens();
        LowIndexSearch {
            p,
            ngens,
            max_index,
            node_budget,
            nodes: 0,
            table: vec![vec![EMPTY]; 2 * ngens],
            n: 1,
            trail: Vec::new(),
            found: Vec::new(),
        }
    }

    fn inverse_col(col: usize) -> usize {
        col ^ 1
    }

    fn letter_col(letter: i32) -> usize {
        let g = (letter.unsigned_abs() - 1) as usize;
        if letter > 0 {
            2 * g
        } else {
            2 * g + 1
        }
    }

    fn get(&self, col: usize, coset: usize) -> usize {
        self.table[col][coset]
    }

    /// Set sigma(coset, col) = target together with its inverse entry.
    /// Returns false on conflict.
    fn assign(&mut self, col: usize, coset: usize, target: usize) -> bool {
        let cur = self.get(col, coset);
        if cur != EMPTY {
            return cur == target;
        }
        let icol = Self::inverse_col(col);
        let icur = self.get(icol, target);
        if icur != EMPTY && icur != coset {
            return false;
        }
        self.table[col][coset] = target;
        self.trail.push((col, coset));
        if self.get(icol, target) == EMPTY {
            self.table[icol][target] = coset;
            self.trail.push((icol, target));
        }
        true
    }

    /// Scan every (coset, relator) pair to a fixpoint, deducing forced
    /// entries. Returns false on contradiction.
    fn propagate(&mut self) -> bool {
        loop {
            let mut deduced = false;
            for r in self.p.relators() {
                let letters = r.letters();
                for start in 0..self.n {
                    match self.scan(start, letters) {
                        ScanResult::Ok => {}
                        ScanResult::Dead => return false,
                        ScanResult::Deduced => deduced = true,
                    }
                }
            }
            if !deduced {
                return true;
            }
        }
    }

    fn scan(&mut self, start: usize, letters: &[i32]) -> ScanResult {
        // forward as far as defined
        let mut f = start;
        let mut fi = 0usize;
        while fi < letters.len() {
            let col = Self::letter_col(letters[fi]);
            let next = self.get(col, f);
            if next == EMPTY {
                break;
            }
            f = next;
            fi += 1;
        }
        if fi == letters.len() {
            return if f == start {
                ScanResult::Ok
            } else {
                ScanResult::Dead
            };
        }
        // backward from the end
        let mut b = start;
        let mut bi = letters.len();
        while bi > fi {
            let col = Self::inverse_col(Self::letter_col(letters[bi - 1]));
            let next = self.get(col, b);
            if next == EMPTY {
                break;
            }
            b = next;
            bi -= 1;
        }
        if bi == fi + 1 {
            // single gap: sigma(f, letters[fi]) = b is forced
            let col = Self::letter_col(letters[fi]);
            if self.assign(col, f, b) {
                ScanResult::Deduced
            } else {
                ScanResult::Dead
            }
        } else if bi == fi {
            if f == b {
                ScanResult::Ok
            } else {
                ScanResult::Dead
            }
        } else {
            ScanResult::Ok // gap too wide to deduce
        }
    }

    fn first_empty(&self) -> Option<(usize, usize)> {
        for coset in 0..self.n {
            for col in 0..2 * self.ngens {
                if self.get(col, coset) == EMPTY {
                    return Some((coset, col));
                }
            }
        }
        None
    }

    fn emit(&mut self) {
        let fwd: Vec<Vec<usize>> = (0..self.ngens)
            .map(|g| self.table[2 * g][..self.n].to_vec())
            .collect();
        self.found
            .push(CosetTable::new(self.ngens, fwd).expect("complete table is valid"));
    }

    fn run(&mut self) -> Result<()> {
        if !self.propagate() {
            return Ok(());
        }
        self.step()
    }

    fn step(&mut self) -> Result<()> {
        let Some((coset, col)) = self.first_empty() else {
            self.emit();
            return Ok(());
        };
        let n = self.n;
        let can_grow = n < self.max_index;
        let last = if can_grow { n } else { n - 1 };
        for target in 0..=last {
            self.nodes += 1;
            if self.nodes > self.node_budget {
                return Err(Error::BudgetExhausted(self.nodes));
            }
            let trail_mark = self.trail.len();
            let grew = target == n;
            if grew {
                self.n += 1;
                for c in self.table.iter_mut() {
                    c.push(EMPTY);
                }
            }
            if self.assign(col, coset, target) && self.propagate() {
                self.step()?;
            }
            // undo
            while self.trail.len() > trail_mark {
                let (c, s) = self.trail.pop().unwrap();
                self.table[c][s] = EMPTY;
            }
            if grew {
                self.n -= 1;
                for c in self.table.iter_mut() {
                    c.pop();
                }
            }
        }
        Ok(())
    }
}

enum ScanResult {
    Ok,
    Dead,
    Deduced,
}

/// Coset table of the kernel of the surjection sending generator i to
/// images[i]: the regular action of Q on itself, cosets in the
/// deterministic element order.
pub fn kernel_coset_table(
    p: &Presentation,
    images: &[Permutation],
    q: &PermGroup,
) -> Result<CosetTable> {
    if images.len() != p.ngens() {
        return Err(Error::Precondition(
            "one image per presentation generator required".into(),
        ));
    }
    for r in p.relators() {
        let mut acc = Permutation::identity(q.degree());
        for &l in r.letters() {
            let img = &images[(l.unsigned_abs() - 1) as usize];
            let factor = if l > 0 { img.clone() } else { img.inverse() };
            acc = acc.compose(&factor)?;
        }
        if !acc.is_identity() {
            return Err(Error::Precondition(
                "images do not satisfy all relators".into(),
            ));
        }
    }
    let elements = q.elements()?;
    let order = elements.len();
    let gen_group = PermGroup::new(images.to_vec())?;
    if gen_group.order()? != order as u64 {
        return Err(Error::Precondition(
            "images do not generate the target group".into(),
        ));
    }
    let index: HashMap<&[usize], usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.images(), i))
        .collect();
    let fwd: Vec<Vec<usize>> = images
        .iter()
        .map(|img| {
            elements
                .iter()
                .map(|e| index[e.compose(img).unwrap().images()])
                .collect()
        })
        .collect();
    CosetTable::new(p.ngens(), fwd)
}

/// Result of the maximal-abelian-cover construction.
pub enum AbelianCover {
    Table(CosetTable),
    /// H1 of the presentation is infinite; no finite cover exists.
    InfiniteH1,
}

/// Regular-action table of G -> H1(G) when H1 is finite.
/// `max_order` caps the cover size; exceeding it is an explicit error.
pub fn abelian_cover_table(p: &Presentation, max_order: u64) -> Result<AbelianCover> {
    let m = p.exponent_sum_matrix();
    let inv = zlinalg::abelian_invariants(&m, p.ngens())?;
    if !inv.is_finite() {
        return Ok(AbelianCover::InfiniteH1);
    }
    let order: BigInt = inv.torsion.iter().product();
    let order = if inv.torsion.is_empty() {
        BigInt::from(1)
    } else {
        order
    };
    if order > BigInt::from(max_order) {
        return Err(Error::BoundExceeded(format!(
            "abelian cover of order {order} exceeds cap {max_order}"
        )));
    }
    let basis = zlinalg::hermite_basis(&m)
        .ok_or_else(|| Error::Validation("finite H1 but rank-deficient basis".into()))?;
    quotient_action_table(p.ngens(), &basis)
}

/// Coset table of the kernel of G -> H1 = Z -> Z/n.
pub fn cyclic_cover_table(p: &Presentation, n: u64) -> Result<CosetTable> {
    if n < 2 {
        return Err(Error::Precondition("cyclic cover index must be >= 2".into()));
    }
    let m = p.exponent_sum_matrix();
    let inv = zlinalg::abelian_invariants(&m, p.ngens())?;
    if !inv.is_infinite_cyclic() {
        return Err(Error::Precondition(format!(
            "H1 is {}, not infinite cyclic",
            inv.canonical_string()
        )));
    }
    let f = if p.relators().is_empty() {
        // free of rank 1: the only generator maps to 1
        vec![BigInt::from(1)]
    } else {
        zlinalg::primitive_kernel_vector(&m)
            .ok_or_else(|| Error::Validation("H1 = Z but kernel vector not found".into()))?
    };
    let n_us = n as usize;
    let modn = |x: &BigInt| -> usize {
        let r = x % n as i64;
        let r = if r.is_negative() { r + n as i64 } else { r };
        r.to_usize().unwrap()
    };
    let steps: Vec<usize> = f.iter().map(modn).collect();
    let fwd: Vec<Vec<usize>> = steps
        .iter()
        .map(|&s| (0..n_us).map(|c| (c + s) % n_us).collect())
        .collect();
    CosetTable::new(p.ngens(), fwd)
}

/// Regular action of Z^ngens / (lattice spanned by basis rows), with
/// generator i acting by +e_i. Basis must be upper triangular with
/// positive diagonal (as produced by hermite_basis).
fn quotient_action_table(ngens: usize, basis: &[Vec<BigInt>]) -> Result<AbelianCover> {
    // Top-down pass: row i only touches columns >= i, and later rows
    // renormalize those, so each v[i] ends in [0, basis[i][i]).
    let reduce = |mut v: Vec<BigInt>| -> Vec<BigInt> {
        for i in 0..ngens {
            let d = &basis[i][i];
            let q = v[i].div_euclid(d);
            if !q.is_zero() {
                for c in 0..ngens {
                    let t = &q * &basis[i][c];
                    v[c] = &v[c] - t;
                }
            }
        }
        v
    };
    let zero: Vec<BigInt> = vec![BigInt::zero(); ngens];
    let mut reps: Vec<Vec<BigInt>> = vec![zero.clone()];
    let mut seen: HashMap<Vec<BigInt>, ()> = HashMap::new();
    seen.insert(zero, ());
    let mut head = 0usize;
    while head < reps.len() {
        let cur = reps[head].clone();
        head += 1;
        for g in 0..ngens {
            let mut next = cur.clone();
            next[g] += 1;
            let next = reduce(next);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), ());
                reps.push(next);
            }
        }
    }
    reps.sort();
    let index: HashMap<&Vec<BigInt>, usize> =
        reps.iter().enumerate().map(|(i, r)| (r, i)).collect();
    let n = reps.len();
    let mut fwd = vec![vec![0usize; n]; ngens];
    for (ci, rep) in reps.iter().enumerate() {
        for g in 0..ngens {
            let mut next = rep.clone();
            next[g] += 1;
            let next = reduce(next);
            fwd[g][ci] = index[&next];
        }
    }
    // renumber so the zero class is coset 0, preserving relative order
    let zero_idx = index[&reduce(vec![BigInt::zero(); ngens])];
    if zero_idx != 0 {
        // zero reduces to the lex-minimal rep only when all reps are
        // nonnegative, which reduce() guarantees; keep a hard check
        return Err(Error::Validation("zero class not first".into()));
    }
    Ok(AbelianCover::Table(CosetTable::new(ngens, fwd)?))
}

/// Integer relation matrix whose cokernel is H1 of the subgroup at the
/// table's base coset, via abelianized Reidemeister-Schreier rewriting.
///
/// Columns are indexed by non-tree (coset, generator) pairs in
/// lexicographic order; the spanning tree is breadth-first from coset 0
/// in generator order. Rows are (coset, relator) pairs.
pub fn abelianized_reidemeister_schreier(p: &Presentation, t: &CosetTable) -> Result<IntMatrix> {
    t.validate(p)?;
    let n = t.index();
    let ngens = t.ngens();

    // BFS spanning tree: tree edges recorded as positive-direction
    // (coset, generator) pairs
    let mut tree = vec![vec![false; n]; ngens];
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for g in 0..ngens {
            let d = t.forward_actions()[g][c];
            if !visited[d] {
                visited[d] = true;
                tree[g][c] = true;
                queue.push_back(d);
            }
            let b = t.apply(c, -((g + 1) as i32));
            if !visited[b] {
                visited[b] = true;
                tree[g][b] = true; // edge b --g--> c, positive at b
                queue.push_back(b);
            }
        }
    }

    let mut col_of: HashMap<(usize, usize), usize> = HashMap::new();
    for c in 0..n {
        for g in 0..ngens {
            if !tree[g][c] {
                let next = col_of.len();
                col_of.insert((c, g), next);
            }
        }
    }
    let ncols = col_of.len();

    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n * p.relators().len());
    for r in p.relators() {
        for start in 0..n {
            let mut row = vec![0i64; ncols];
            let mut cur = start;
            for &l in r.letters() {
                let g = (l.unsigned_abs() - 1) as usize;
                if l > 0 {
                    if let Some(&col) = col_of.get(&(cur, g)) {
                        row[col] += 1;
                    }
                    cur = t.forward_actions()[g][cur];
                } else {
                    let prev = t.apply(cur, l);
                    if let Some(&col) = col_of.get(&(prev, g)) {
                        row[col] -= 1;
                    }
                    cur = prev;
                }
            }
            debug_assert_eq!(cur, start);
            rows.push(row);
        }
    }
    Ok(if rows.is_empty() {
        IntMatrix::zero(0, ncols)
    } else {
        IntMatrix::from_rows_i64(&rows)
    })
}

/// H1 of the subgroup at the table's base coset.
pub fn subgroup_h1(p: &Presentation, t: &CosetTable) -> Result<AbelianInvariants> {
    let m = abelianized_reidemeister_schreier(p, t)?;
    let ncols = t.index() * t.ngens() - (t.index() - 1);
    zlinalg::abelian_invariants(&m, ncols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroups::Word;

    fn pres(name: &str, ngens: usize, relators: &[&[i32]]) -> Presentation {
        Presentation::new(
            name,
            ngens,
            relators
                .iter()
                .map(|ls| Word::new(ls.to_vec()).unwrap())
                .collect(),
            None,
        )
        .unwrap()
    }

    fn f2() -> Presentation {
        pres("F2", 2, &[])
    }

    #[test]
    fn low_index_f2_to_3() {
        let tables = low_index_subgroups(&f2(), 3, DEFAULT_NODE_BUDGET).unwrap();
        let mut by_index = [0usize; 4];
        for t in &tables {
            by_index[t.index()] += 1;
            t.validate(&f2()).unwrap();
        }
        assert_eq!(&by_index[1..], &[1, 3, 13]);
        assert_eq!(tables.len(), 17);
    }

    #[test]
    fn low_index_infinite_cyclic() {
        let z = pres("Z", 1, &[]);
        let tables = low_index_subgroups(&z, 5, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(tables.len(), 5);
        let mut sizes: Vec<usize> = tables.iter().map(|t| t.index()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn low_index_trivial_group() {
        let t = pres("T", 1, &[&[1]]);
        let tables = low_index_subgroups(&t, 5, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(tables.len(), 1);
        assert_eq!(tables[0].index(), 1);
    }

    #[test]
    fn low_index_budget_error() {
        assert!(matches!(
            low_index_subgroups(&f2(), 4, 10),
            Err(Error::BudgetExhausted(_))
        ));
    }

    #[test]
    fn hall_recursion_oracle_rank2() {
        // Hall: N_n = n (n!)^{r-1} - sum_{i<n} ((n-i)!)^{r-1} N_i
        fn hall(rank: u32, up_to: usize) -> Vec<u64> {
            let fact = |k: usize| -> u64 { (1..=k as u64).product::<u64>().max(1) };
            let mut n_counts: Vec<u64> = vec![0; up_to + 1];
            for n in 1..=up_to {
                let mut v = n as u64 * fact(n).pow(rank - 1);
                for i in 1..n {
                    v -= fact(n - i).pow(rank - 1) * n_counts[i];
                }
                n_counts[n] = v;
            }
            n_counts[1..].to_vec()
        }
        assert_eq!(hall(2, 5), vec![1, 3, 13, 71, 461]);
        assert_eq!(hall(3, 4), vec![1, 7, 97, 2143]);

        let tables = low_index_subgroups(&f2(), 5, DEFAULT_NODE_BUDGET).unwrap();
        let mut by_index = [0u64; 6];
        for t in &tables {
            by_index[t.index()] += 1;
        }
        assert_eq!(&by_index[1..], hall(2, 5).as_slice());

        let f3 = pres("F3", 3, &[]);
        let tables = low_index_subgroups(&f3, 4, DEFAULT_NODE_BUDGET).unwrap();
        let mut by_index = [0u64; 5];
        for t in &tables {
            by_index[t.index()] += 1;
        }
        assert_eq!(&by_index[1..], hall(3, 4).as_slice());
    }

    #[test]
    fn kernel_table_cyclic() {
        let z = pres("Z", 1, &[]);
        let rot = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let q = PermGroup::new(vec![rot.clone()]).unwrap();
        let t = kernel_coset_table(&z, &[rot], &q).unwrap();
        assert_eq!(t.index(), 3);
        t.validate(&z).unwrap();
        // regular action: fixed-point-free
        assert!((0..3).all(|c| t.apply(c, 1) != c));
    }

    #[test]
    fn kernel_table_rejects_bad_images() {
        let p = pres("C2", 1, &[&[1, 1]]);
        let rot = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let q = PermGroup::new(vec![rot.clone()]).unwrap();
        // order-3 image violates the relator a^2
        assert!(kernel_coset_table(&p, &[rot], &q).is_err());
        // non-generating image tuple
        let q2 = PermGroup::new(vec![Permutation::from_cycles(2, &[&[0, 1]]).unwrap()]).unwrap();
        let z = pres("Z", 1, &[]);
        assert!(kernel_coset_table(&z, &[Permutation::identity(2)], &q2).is_err());
    }

    #[test]
    fn abelian_cover_examples() {
        let c5 = pres("C5", 1, &[&[1, 1, 1, 1, 1]]);
        match abelian_cover_table(&c5, 10_000).unwrap() {
            AbelianCover::Table(t) => {
                assert_eq!(t.index(), 5);
                t.validate(&c5).unwrap();
            }
            AbelianCover::InfiniteH1 => panic!("H1(C5) is finite"),
        }
        assert!(matches!(
            abelian_cover_table(&f2(), 10_000).unwrap(),
            AbelianCover::InfiniteH1
        ));
        // Klein-type: <a,b | a^2, b^2, (ab)^2>
        let k = pres("K", 2, &[&[1, 1], &[2, 2], &[1, 2, 1, 2]]);
        match abelian_cover_table(&k, 10_000).unwrap() {
            AbelianCover::Table(t) => {
                assert_eq!(t.index(), 4);
                t.validate(&k).unwrap();
            }
            AbelianCover::InfiniteH1 => panic!("H1(K) is Z/2 x Z/2"),
        }
    }

    #[test]
    fn cyclic_cover_examples() {
        let z = pres("Z", 1, &[]);
        let t = cyclic_cover_table(&z, 4).unwrap();
        assert_eq!(t.index(), 4);
        // <a,b | [a,b] b>: exponent matrix [[0,1]], H1 = Z
        let p = pres("P", 2, &[&[1, 2, -1, -2, 2]]);
        let t = cyclic_cover_table(&p, 2).unwrap();
        assert_eq!(t.index(), 2);
        t.validate(&p).unwrap();
        assert!(cyclic_cover_table(&f2(), 3).is_err());
    }

    #[test]
    fn rs_matrix_free_groups() {
        for t in low_index_subgroups(&f2(), 4, DEFAULT_NODE_BUDGET).unwrap() {
            let h1 = subgroup_h1(&f2(), &t).unwrap();
            assert_eq!(h1, AbelianInvariants::free(t.index() + 1));
        }
    }

    #[test]
    fn rs_matrix_index2_in_c6() {
        let c6 = pres("C6", 1, &[&[1; 6]]);
        let tables = low_index_subgroups(&c6, 2, DEFAULT_NODE_BUDGET).unwrap();
        let t2 = tables.iter().find(|t| t.index() == 2).unwrap();
        let h1 = subgroup_h1(&c6, t2).unwrap();
        assert_eq!(h1.canonical_string(), "Z^0+Z/3");
    }

    #[test]
    fn kernel_h1_f2_onto_c2() {
        // all three index-2 subgroups of F2 are free of rank 3
        let tables = low_index_subgroups(&f2(), 2, DEFAULT_NODE_BUDGET).unwrap();
        let rank3 = tables
            .iter()
            .filter(|t| t.index() == 2)
            .map(|t| subgroup_h1(&f2(), t).unwrap())
            .collect::<Vec<_>>();
        assert_eq!(rank3.len(), 3);
        assert!(rank3.iter().all(|a| *a == AbelianInvariants::free(3)));
    }
}
