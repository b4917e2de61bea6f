//! Surjection enumeration onto finite permutation groups, with kernel
//! deduplication and kernel abelianization.
//!
//! The search assigns generator images depth-first: conjugacy-class
//! representatives for the first generator, one representative per
//! orbit of the first image's centralizer for the second, and all of Q
//! for the rest. Each relator is checked at the shallowest depth where
//! all of its generators are assigned.

use crate::cosets::{self, CosetTable};
use crate::fpgroups::Presentation;
use crate::permgrp::{PermGroup, Permutation};
use crate::zlinalg::AbelianInvariants;
use crate::{Error, Result};

/// Default work budget for one surjection search. Work is counted in
/// group multiplications, which dominate everything else.
pub const DEFAULT_WORK_BUDGET: u64 = 100_000_000;

/// A relator-respecting generating tuple in the target group.
#[derive(Clone, Debug)]
pub struct Surjection {
    pub images: Vec<Permutation>,
}

/// One representative per kernel: two surjections share a kernel
/// exactly when mapping one image tuple to the other extends to an
/// automorphism of the target.
#[derive(Clone, Debug)]
pub struct KernelClass {
    pub representative: Surjection,
}

/// Instrumentation for one search.
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchStats {
    /// Full image tuples reached (before the surjectivity test).
    pub leaves: u64,
    /// Tuples that passed relators and generated the target.
    pub surjections: u64,
    /// Group multiplications performed.
    pub work: u64,
    /// The a-priori leaf bound: |classes of Q| * |Q|^(d-1).
    pub leaf_bound: u64,
}

struct Search<'a> {
    q: &'a PermGroup,
    order: usize,
    identity: usize,
    inverse: Vec<usize>,
    /// relators as letter slices, grouped by the depth at which they
    /// become fully assigned (max generator index, 1-based)
    relators_at: Vec<Vec<&'a [i32]>>,
    work_budget: u64,
    stats: SearchStats,
    assigned: Vec<usize>,
    reps: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn mul(&mut self, a: usize, b: usize) -> Result<usize> {
        self.stats.work += 1;
        if self.stats.work > self.work_budget {
            return Err(Error::BudgetExhausted(self.stats.work));
        }
        Ok(self.q.data()?.mul(a, b))
    }

    fn relator_holds(&mut self, letters: &[i32]) -> Result<bool> {
        let mut acc = self.identity;
        for &l in letters {
            let img = self.assigned[(l.unsigned_abs() - 1) as usize];
            let f = if l > 0 { img } else { self.inverse[img] };
            acc = self.mul(acc, f)?;
        }
        Ok(acc == self.identity)
    }

    fn relators_hold_at(&mut self, depth: usize) -> Result<bool> {
        let rels = std::mem::take(&mut self.relators_at[depth]);
        let mut ok = true;
        for letters in &rels {
            if !self.relator_holds(letters)? {
                ok = false;
                break;
            }
        }
        self.relators_at[depth] = rels;
        Ok(ok)
    }

    /// Minimal element index of each orbit of Q under conjugation by
    /// the centralizer of x, in increasing order.
    fn centralizer_orbit_reps(&mut self, x: usize) -> Result<Vec<usize>> {
        let cent = self.q.centralizer_idx(x)?;
        let cgens = self.q.data()?.small_generating_set(&cent);
        let mut seen = vec![false; self.order];
        let mut reps = Vec::new();
        for start in 0..self.order {
            if seen[start] {
                continue;
            }
            reps.push(start);
            seen[start] = true;
            let mut orbit = vec![start];
            let mut head = 0;
            while head < orbit.len() {
                let e = orbit[head];
                head += 1;
                for &c in &cgens {
                    self.stats.work += 3;
                    if self.stats.work > self.work_budget {
                        return Err(Error::BudgetExhausted(self.stats.work));
                    }
                    let f = self.q.data()?.conj(e, c);
                    if !seen[f] {
                        seen[f] = true;
                        orbit.push(f);
                    }
                }
            }
        }
        Ok(reps)
    }

    fn descend(&mut self, depth: usize, ngens: usize) -> Result<()> {
        if depth == ngens {
            self.stats.leaves += 1;
            let covered = self
                .q
                .data()?
                .closure(&self.assigned)
                .iter()
                .filter(|&&b| b)
                .count();
            self.stats.work += self.order as u64;
            if covered == self.order {
                self.stats.surjections += 1;
                self.record_if_new_kernel()?;
            }
            return Ok(());
        }
        let candidates: Vec<usize> = if depth == 0 {
            self.q.class_reps_idx()?.into_iter().map(|(r, _)| r).collect()
        } else if depth == 1 {
            self.centralizer_orbit_reps(self.assigned[0])?
        } else {
            (0..self.order).collect()
        };
        for c in candidates {
            self.assigned[depth] = c;
            if self.relators_hold_at(depth + 1)? {
                self.descend(depth + 1, ngens)?;
            }
        }
        Ok(())
    }

    fn record_if_new_kernel(&mut self) -> Result<()> {
        for i in 0..self.reps.len() {
            let rep = self.reps[i].clone();
            if self.q.extend_to_automorphism_idx(&rep, &self.assigned)? {
                return Ok(());
            }
        }
        self.reps.push(self.assigned.clone());
        Ok(())
    }
}

fn run_search(
    p: &Presentation,
    q: &PermGroup,
    work_budget: u64,
) -> Result<(Vec<KernelClass>, SearchStats)> {
    let d = q.data()?;
    let order = d.elements.len();
    let identity = d.identity;
    let inverse = d.inverse.clone();
    let ngens = p.ngens();
    let mut relators_at: Vec<Vec<&[i32]>> = vec![Vec::new(); ngens + 1];
    for r in p.relators() {
        let max_gen = r
            .letters()
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap();
        relators_at[max_gen].push(r.letters());
    }
    let nclasses = q.class_reps_idx()?.len() as u64;
    let leaf_bound = (order as u64)
        .checked_pow(ngens.saturating_sub(1) as u32)
        .and_then(|x| x.checked_mul(nclasses))
        .unwrap_or(u64::MAX);
    let mut s = Search {
        q,
        order,
        identity,
        inverse,
        relators_at,
        work_budget,
        stats: SearchStats {
            leaf_bound,
            ..SearchStats::default()
        },
        assigned: vec![0; ngens],
        reps: Vec::new(),
    };
    s.descend(0, ngens)?;
    debug_assert!(s.stats.leaves <= s.stats.leaf_bound);
    let elements = q.elements()?;
    let classes = s
        .reps
        .iter()
        .map(|idx| KernelClass {
            representative: Surjection {
                images: idx.iter().map(|&i| elements[i].clone()).collect(),
            },
        })
        .collect();
    Ok((classes, s.stats))
}

/// All surjections P ->> Q up to kernel, one representative each, in
/// deterministic search order.
pub fn enumerate_surjections(p: &Presentation, q: &PermGroup) -> Result<Vec<KernelClass>> {
    Ok(run_search(p, q, DEFAULT_WORK_BUDGET)?.0)
}

/// As enumerate_surjections, with an explicit work budget and the
/// search instrumentation returned alongside the classes.
pub fn enumerate_surjections_with_stats(
    p: &Presentation,
    q: &PermGroup,
    work_budget: u64,
) -> Result<(Vec<KernelClass>, SearchStats)> {
    run_search(p, q, work_budget)
}

/// Total number of surjective homomorphisms P ->> Q, not deduped, by
/// exhaustive enumeration of all |Q|^d image tuples.
pub fn count_surjections_raw(p: &Presentation, q: &PermGroup) -> Result<u64> {
    let d = q.data()?;
    let order = d.elements.len();
    let ngens = p.ngens();
    let tuples = (order as u64)
        .checked_pow(ngens as u32)
        .filter(|&t| t <= 10_000_000)
        .ok_or_else(|| {
            Error::BoundExceeded(format!(
                "raw count over {order}^{ngens} tuples is out of range"
            ))
        })?;
    let relators: Vec<&[i32]> = p.relators().iter().map(|r| r.letters()).collect();
    let mut assigned = vec![0usize; ngens];
    let mut count = 0u64;
    for t in 0..tuples {
        let mut x = t;
        for a in assigned.iter_mut() {
            *a = (x % order as u64) as usize;
            x /= order as u64;
        }
        let ok = relators.iter().all(|letters| {
            let mut acc = d.identity;
            for &l in *letters {
                let img = assigned[(l.unsigned_abs() - 1) as usize];
                let f = if l > 0 { img } else { d.inverse[img] };
                acc = d.mul(acc, f);
            }
            acc == d.identity
        });
        if ok && d.closure(&assigned).iter().filter(|&&b| b).count() == order {
            count += 1;
        }
    }
    Ok(count)
}

/// H1 of the kernel of each surjection class, as a sorted multiset.
pub fn kernel_cover_invariants(
    p: &Presentation,
    q: &PermGroup,
) -> Result<Vec<AbelianInvariants>> {
    let classes = enumerate_surjections(p, q)?;
    let mut out = Vec::with_capacity(classes.len());
    for k in &classes {
        let t = kernel_table(p, q, k)?;
        out.push(cosets::subgroup_h1(p, &t)?);
    }
    out.sort_by(|a, b| a.canonical_string().cmp(&b.canonical_string()));
    Ok(out)
}

/// Coset table of one kernel class's kernel.
pub fn kernel_table(p: &Presentation, q: &PermGroup, k: &KernelClass) -> Result<CosetTable> {
    cosets::kernel_coset_table(p, &k.representative.images, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpgroups::{parse_corpus, Word};
    use crate::permgrp::catalog;

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

    /// Brute-force oracle, independent of the search: walk every image
    /// tuple with plain permutation arithmetic and count the ones that
    /// satisfy all relators and generate.
    fn brute_surjections(p: &Presentation, q: &PermGroup) -> Vec<Vec<Permutation>> {
        let elements: Vec<Permutation> = q.elements().unwrap().to_vec();
        let order = elements.len();
        let ngens = p.ngens();
        let mut found = Vec::new();
        let mut assigned = vec![0usize; ngens];
        let total = (order as u64).pow(ngens as u32);
        'outer: for t in 0..total {
            let mut x = t;
            for a in assigned.iter_mut() {
                *a = (x % order as u64) as usize;
                x /= order as u64;
            }
            let images: Vec<&Permutation> = assigned.iter().map(|&i| &elements[i]).collect();
            for r in p.relators() {
                let mut acc = Permutation::identity(q.degree());
                for &l in r.letters() {
                    let g = images[(l.unsigned_abs() - 1) as usize];
                    let f = if l > 0 { g.clone() } else { g.inverse() };
                    acc = acc.compose(&f).unwrap();
                }
                if !acc.is_identity() {
                    continue 'outer;
                }
            }
            // naive closure over Permutation values
            let mut sub: Vec<Permutation> = vec![Permutation::identity(q.degree())];
            let mut head = 0;
            while head < sub.len() {
                let e = sub[head].clone();
                head += 1;
                for g in &images {
                    let f = e.compose(g).unwrap();
                    if !sub.contains(&f) {
                        sub.push(f);
                    }
                }
            }
            if sub.len() == order {
                found.push(images.into_iter().cloned().collect());
            }
        }
        found
    }

    #[test]
    fn f2_onto_a5_matches_brute_force() {
        let f2 = pres("F2", 2, &[]);
        let a5 = &catalog("A5").unwrap().group;
        let brute = brute_surjections(&f2, a5);
        assert_eq!(brute.len(), 2280);
        assert_eq!(count_surjections_raw(&f2, a5).unwrap(), 2280);
        let (classes, stats) = enumerate_surjections_with_stats(&f2, a5, u64::MAX).unwrap();
        // Aut(A5) = S5 acts freely on generating pairs: 2280 / 120 = 19
        assert_eq!(classes.len(), 19);
        assert_eq!(brute.len(), classes.len() * 120);
        assert!(stats.leaves <= stats.leaf_bound);
        assert_eq!(stats.leaf_bound, 5 * 60);
    }

    #[test]
    fn dedup_soundness_small() {
        let c2 = PermGroup::new(vec![Permutation::from_cycles(2, &[&[0, 1]]).unwrap()]).unwrap();
        let f2 = pres("F2", 2, &[]);
        let brute = brute_surjections(&f2, &c2);
        assert_eq!(brute.len(), 3);
        let classes = enumerate_surjections(&f2, &c2).unwrap();
        assert_eq!(classes.len(), 3);
        // reps pairwise inequivalent
        for i in 0..classes.len() {
            for j in 0..classes.len() {
                if i != j {
                    assert!(!c2
                        .extend_to_automorphism(
                            &classes[i].representative.images,
                            &classes[j].representative.images
                        )
                        .unwrap());
                }
            }
        }
        // every brute surjection equivalent to exactly one rep
        for s in &brute {
            let hits = classes
                .iter()
                .filter(|k| {
                    c2.extend_to_automorphism(&k.representative.images, s)
                        .unwrap()
                })
                .count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn single_generator_cannot_surject_a5() {
        let z = pres("Z", 1, &[]);
        let a5 = &catalog("A5").unwrap().group;
        assert!(enumerate_surjections(&z, a5).unwrap().is_empty());
        let t = pres("T", 1, &[&[1]]);
        assert_eq!(count_surjections_raw(&t, a5).unwrap(), 0);
    }

    #[test]
    fn f2_onto_c2_cover_invariants() {
        let c2 = PermGroup::new(vec![Permutation::from_cycles(2, &[&[0, 1]]).unwrap()]).unwrap();
        let f2 = pres("F2", 2, &[]);
        let inv = kernel_cover_invariants(&f2, &c2).unwrap();
        assert_eq!(inv.len(), 3);
        assert!(inv.iter().all(|a| *a == AbelianInvariants::free(3)));
    }

    #[test]
    fn no_surjection_gives_empty_multiset() {
        let z = pres("Z", 1, &[]);
        let a5 = &catalog("A5").unwrap().group;
        assert!(kernel_cover_invariants(&z, a5).unwrap().is_empty());
    }

    #[test]
    fn t05599_onto_a5() {
        let text = r#"{"name":"t05599","gens":3,"relators":["aabbbbbaabbCC","aaaaacccBB"]}"#;
        let p = parse_corpus(text).unwrap().remove(0);
        let a5 = &catalog("A5").unwrap().group;
        let (classes, stats) = enumerate_surjections_with_stats(&p, a5, u64::MAX).unwrap();
        assert_eq!(classes.len(), 1);
        assert!(stats.leaves <= stats.leaf_bound);
        let inv = kernel_cover_invariants(&p, a5).unwrap();
        assert_eq!(inv.len(), 1);
        assert_eq!(inv[0].canonical_string(), "Z^12+Z/2");
        // raw count is a positive multiple of the class count
        let raw = count_surjections_raw(&p, a5).unwrap();
        assert!(raw >= 1);
        assert_eq!(raw % classes.len() as u64, 0);
    }

    #[test]
    fn conjugation_invariance() {
        // replace a by (b a B) throughout the relator set
        let r1: &[i32] = &[1, 1, 2, -1, 2, 2];
        let conj = |letters: &[i32]| -> Vec<i32> {
            letters
                .iter()
                .flat_map(|&l| {
                    if l == 1 {
                        vec![2, 1, -2]
                    } else if l == -1 {
                        vec![2, -1, -2]
                    } else {
                        vec![l]
                    }
                })
                .collect()
        };
        let p1 = pres("p1", 2, &[r1]);
        let p2 = Presentation::new(
            "p2",
            2,
            vec![Word::new(conj(r1)).unwrap()],
            None,
        )
        .unwrap();
        let a5 = &catalog("A5").unwrap().group;
        let k1 = enumerate_surjections(&p1, a5).unwrap();
        let k2 = enumerate_surjections(&p2, a5).unwrap();
        assert_eq!(k1.len(), k2.len());
        let i1 = kernel_cover_invariants(&p1, a5).unwrap();
        let i2 = kernel_cover_invariants(&p2, a5).unwrap();
        assert_eq!(i1, i2);
    }

    #[test]
    fn budget_error() {
        let f2 = pres("F2", 2, &[]);
        let a5 = &catalog("A5").unwrap().group;
        assert!(matches!(
            enumerate_surjections_with_stats(&f2, a5, 50),
            Err(Error::BudgetExhausted(_))
        ));
    }
}
