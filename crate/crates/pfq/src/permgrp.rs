//! Finite permutation groups by explicit element enumeration, and the
//! bundled catalog of the 13 smallest non-abelian simple groups.
//!
//! The composition convention is apply-left-factor-first:
//! `compose(p, q)` maps x to q(p(x)).
//!
//! There are no stabilizer chains here. The largest group this crate
//! ever touches has order 6072, so exhaustive enumeration is exact,
//! simple, and fast enough.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Deserialize;

use crate::{Error, Result};

/// Default cap on `group_order` closure computations.
pub const ORDER_BOUND: u64 = 10_000_000;
/// Default cap on full element enumeration.
pub const ENUM_BOUND: u64 = 100_000;

/// A permutation of {0, ..., degree-1}; `images[i]` is the image of i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::Validation(format!(
                    "images {images:?} are not a bijection"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Build from disjoint-cycle notation on 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cyc in cycles {
            for i in 0..cyc.len() {
                let from = cyc[i];
                let to = cyc[(i + 1) % cyc.len()];
                if from >= degree || to >= degree {
                    return Err(Error::Validation("cycle point out of range".into()));
                }
                images[from] = to;
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Apply `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.images.len()];
        let mut ord: u64 = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p];
                len += 1;
            }
            ord = num_integer::lcm(ord, len);
        }
        ord
    }
}

pub(crate) struct GroupData {
    /// All elements, sorted by image array.
    pub elements: Vec<Permutation>,
    pub index: HashMap<Vec<usize>, usize>,
    pub inverse: Vec<usize>,
    pub identity: usize,
}

impl GroupData {
    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.index.get(p.images()).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let p = self.elements[a].compose(&self.elements[b]).unwrap();
        self.index[p.images()]
    }

    /// b^-1 a b
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inverse[b], a), b)
    }

    /// Subgroup generated by the given element indices.
    pub fn closure(&self, gens: &[usize]) -> Vec<bool> {
        let mut in_sub = vec![false; self.elements.len()];
        in_sub[self.identity] = true;
        let mut queue = vec![self.identity];
        while let Some(e) = queue.pop() {
            for &g in gens {
                let f = self.mul(e, g);
                if !in_sub[f] {
                    in_sub[f] = true;
                    queue.push(f);
                }
            }
        }
        in_sub
    }

    /// A small generating set for the subgroup whose membership is given.
    pub fn small_generating_set(&self, members: &[usize]) -> Vec<usize> {
        let mut gens: Vec<usize> = Vec::new();
        let mut have = vec![false; self.elements.len()];
        have[self.identity] = true;
        for &m in members {
            if !have[m] {
                gens.push(m);
                have = self.closure(&gens);
            }
        }
        gens
    }
}

/// A finite permutation group given by generators, with eagerly cached
/// element data on first use.
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    data: OnceLock<std::result::Result<GroupData, String>>,
}

impl PermGroup {
    pub fn new(generators: Vec<Permutation>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::Validation(
                "a permutation group needs at least one generator".into(),
            ));
        };
        let degree = first.degree();
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::Validation(
                "all generators must share the same degree".into(),
            ));
        }
        Ok(PermGroup {
            degree,
            generators,
            data: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    fn build_data(&self, bound: u64) -> std::result::Result<GroupData, String> {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let id = Permutation::identity(self.degree);
        let mut elements = vec![id.clone()];
        seen.insert(id.images().to_vec(), 0);
        let mut head = 0usize;
        while head < elements.len() {
            let cur = elements[head].clone();
            head += 1;
            for g in &self.generators {
                let next = cur.compose(g).unwrap();
                if !seen.contains_key(next.images()) {
                    if elements.len() as u64 >= bound {
                        return Err(format!("group order exceeds bound {bound}"));
                    }
                    seen.insert(next.images().to_vec(), elements.len());
                    elements.push(next);
                }
            }
        }
        elements.sort();
        let index: HashMap<Vec<usize>, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.images().to_vec(), i))
            .collect();
        let inverse: Vec<usize> = elements
            .iter()
            .map(|e| index[e.inverse().images()])
            .collect();
        let identity = index[Permutation::identity(self.degree).images()];
        Ok(GroupData {
            elements,
            index,
            inverse,
            identity,
        })
    }

    pub(crate) fn data(&self) -> Result<&GroupData> {
        self.data
            .get_or_init(|| self.build_data(ENUM_BOUND))
            .as_ref()
            .map_err(|e| Error::BoundExceeded(e.clone()))
    }

    /// Exact group order.
    pub fn order(&self) -> Result<u64> {
        if let Some(Ok(d)) = self.data.get() {
            return Ok(d.elements.len() as u64);
        }
        // count-only closure with the wider order bound
        let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
        let id = Permutation::identity(self.degree);
        seen.insert(id.images().to_vec());
        let mut queue = vec![id];
        while let Some(cur) = queue.pop() {
            for g in &self.generators {
                let next = cur.compose(g).unwrap();
                if !seen.contains(next.images()) {
                    if seen.len() as u64 >= ORDER_BOUND {
                        return Err(Error::BoundExceeded(format!(
                            "group order exceeds bound {ORDER_BOUND}"
                        )));
                    }
                    seen.insert(next.images().to_vec());
                    queue.push(next);
                }
            }
        }
        Ok(seen.len() as u64)
    }

    /// All elements in deterministic order (sorted by image arrays).
    pub fn elements(&self) -> Result<&[Permutation]> {
        Ok(&self.data()?.elements)
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        Ok(p.degree() == self.degree && self.data()?.index_of(p).is_some())
    }

    /// Whether the action on {0, ..., degree-1} has a single orbit.
    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.degree];
        seen[0] = true;
        let mut queue = vec![0usize];
        while let Some(p) = queue.pop() {
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    queue.push(q);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    pub(crate) fn class_reps_idx(&self) -> Result<Vec<(usize, usize)>> {
        let d = self.data()?;
        let n = d.elements.len();
        let ngens = self.generators.len();
        let gen_idx: Vec<usize> = (0..ngens)
            .map(|g| d.index[self.generators[g].images()])
            .collect();
        let mut classified = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if classified[start] {
                continue;
            }
            let mut orbit = vec![start];
            classified[start] = true;
            let mut head = 0;
            while head < orbit.len() {
                let e = orbit[head];
                head += 1;
                for &g in &gen_idx {
                    let c = d.conj(e, g);
                    if !classified[c] {
                        classified[c] = true;
                        orbit.push(c);
                    }
                }
            }
            out.push((start, orbit.len()));
        }
        Ok(out)
    }

    /// Conjugacy classes as (minimal representative, class size), in
    /// the deterministic element order.
    pub fn conjugacy_classes(&self) -> Result<Vec<(Permutation, usize)>> {
        let d = self.data()?;
        Ok(self
            .class_reps_idx()?
            .into_iter()
            .map(|(i, s)| (d.elements[i].clone(), s))
            .collect())
    }

    pub(crate) fn centralizer_idx(&self, x: usize) -> Result<Vec<usize>> {
        let d = self.data()?;
        Ok((0..d.elements.len())
            .filter(|&g| d.mul(g, x) == d.mul(x, g))
            .collect())
    }

    /// All elements commuting with x; errors if x is not in the group.
    pub fn centralizer(&self, x: &Permutation) -> Result<Vec<Permutation>> {
        let d = self.data()?;
        let xi = d
            .index_of(x)
            .ok_or_else(|| Error::Precondition("element is not in the group".into()))?;
        Ok(self
            .centralizer_idx(xi)?
            .into_iter()
            .map(|i| d.elements[i].clone())
            .collect())
    }

    /// True iff |G| > 1 and the normal closure of every nonidentity
    /// conjugacy class representative is the whole group.
    pub fn is_simple(&self) -> Result<bool> {
        let d = self.data()?;
        let n = d.elements.len();
        if n <= 1 {
            return Ok(false);
        }
        let gen_idx: Vec<usize> = self
            .generators
            .iter()
            .map(|g| d.index[g.images()])
            .collect();
        for (rep, _) in self.class_reps_idx()? {
            if rep == d.identity {
                continue;
            }
            // normal closure: close the generating set under conjugation
            let mut t = vec![rep];
            let mut members = d.closure(&t);
            loop {
                let mut grew = false;
                let snapshot = t.clone();
                for &x in &snapshot {
                    for &g in &gen_idx {
                        let c = d.conj(x, g);
                        if !members[c] {
                            t.push(c);
                            members = d.closure(&t);
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            if members.iter().filter(|&&b| b).count() < n {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Decide whether src[i] -> dst[i] extends to an automorphism of
    /// this group. `src` must generate; errors otherwise.
    pub fn extend_to_automorphism(&self, src: &[Permutation], dst: &[Permutation]) -> Result<bool> {
        if src.len() != dst.len() {
            return Err(Error::Precondition(
                "src and dst tuples must have equal length".into(),
            ));
        }
        let d = self.data()?;
        let n = d.elements.len();
        let src_idx: Vec<usize> = src
            .iter()
            .map(|p| {
                d.index_of(p)
                    .ok_or_else(|| Error::Precondition("src element not in group".into()))
            })
            .collect::<Result<_>>()?;
        if d.closure(&src_idx).iter().filter(|&&b| b).count() < n {
            return Err(Error::Precondition("src does not generate the group".into()));
        }
        let mut dst_idx = Vec::with_capacity(dst.len());
        for p in dst {
            match d.index_of(p) {
                Some(i) => dst_idx.push(i),
                None => return Ok(false),
            }
        }
        self.extend_to_automorphism_idx(&src_idx, &dst_idx)
    }

    pub(crate) fn extend_to_automorphism_idx(
        &self,
        src_idx: &[usize],
        dst_idx: &[usize],
    ) -> Result<bool> {
        let d = self.data()?;
        let n = d.elements.len();
        let mut phi: Vec<Option<usize>> = vec![None; n];
        phi[d.identity] = Some(d.identity);
        let mut queue = vec![d.identity];
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            let pe = phi[e].unwrap();
            for (k, &s) in src_idx.iter().enumerate() {
                let f = d.mul(e, s);
                let img = d.mul(pe, dst_idx[k]);
                match phi[f] {
                    None => {
                        phi[f] = Some(img);
                        queue.push(f);
                    }
                    Some(prev) => {
                        if prev != img {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        // src generates, so phi is total; bijectivity == dst generates
        let mut hit = vec![false; n];
        for v in phi.iter().flatten() {
            if hit[*v] {
                return Ok(false);
            }
            hit[*v] = true;
        }
        Ok(true)
    }
}

/// The canonical names of the 13 catalog groups, in order of group order.
pub const CATALOG_NAMES: [&str; 13] = [
    "A5",
    "PSL(2,7)",
    "A6",
    "PSL(2,8)",
    "PSL(2,11)",
    "PSL(2,13)",
    "PSL(2,17)",
    "A7",
    "PSL(2,19)",
    "PSL(2,16)",
    "PSL(3,3)",
    "PSU(3,3)",
    "PSL(2,23)",
];

/// A validated entry of the simple-group catalog.
pub struct SimpleCatalogEntry {
    pub name: String,
    pub order: u64,
    pub min_index: usize,
    pub group: PermGroup,
}

#[derive(Deserialize)]
struct RawCatalogEntry {
    name: String,
    order: u64,
    min_index: usize,
    generators: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawCatalog {
    groups: Vec<RawCatalogEntry>,
}

static CATALOG_JSON: &str = include_str!("../data/simple_catalog.json");

fn raw_catalog() -> &'static HashMap<String, RawCatalogEntry> {
    static RAW: OnceLock<HashMap<String, RawCatalogEntry>> = OnceLock::new();
    RAW.get_or_init(|| {
        let raw: RawCatalog =
            serde_json::from_str(CATALOG_JSON).expect("bundled catalog is valid JSON");
        raw.groups.into_iter().map(|g| (g.name.clone(), g)).collect()
    })
}

fn catalog_cache() -> &'static Mutex<HashMap<String, Arc<SimpleCatalogEntry>>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<SimpleCatalogEntry>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Look up a catalog group by name. The bundled generators are not
/// taken on faith: order, degree, transitivity, and simplicity are all
/// verified the first time an entry is loaded.
pub fn catalog(name: &str) -> Result<Arc<SimpleCatalogEntry>> {
    if let Some(e) = catalog_cache().lock().unwrap().get(name) {
        return Ok(e.clone());
    }
    let raw = raw_catalog()
        .get(name)
        .ok_or_else(|| Error::UnknownCatalogGroup(name.to_string()))?;
    let corrupt = |msg: String| Error::CatalogCorrupt {
        name: name.to_string(),
        msg,
    };
    let gens = raw
        .generators
        .iter()
        .map(|im| Permutation::new(im.clone()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| corrupt(e.to_string()))?;
    let group = PermGroup::new(gens).map_err(|e| corrupt(e.to_string()))?;
    if group.degree() != raw.min_index {
        return Err(corrupt(format!(
            "degree {} does not match min index {}",
            group.degree(),
            raw.min_index
        )));
    }
    let order = group.order().map_err(|e| corrupt(e.to_string()))?;
    if order != raw.order {
        return Err(corrupt(format!(
            "computed order {order} does not match expected {}",
            raw.order
        )));
    }
    if !group.is_transitive() {
        return Err(corrupt("action is not transitive".into()));
    }
    if !group.is_simple().map_err(|e| corrupt(e.to_string()))? {
        return Err(corrupt("group is not simple".into()));
    }
    let entry = Arc::new(SimpleCatalogEntry {
        name: raw.name.clone(),
        order: raw.order,
        min_index: raw.min_index,
        group,
    });
    catalog_cache()
        .lock()
        .unwrap()
        .insert(name.to_string(), entry.clone());
    Ok(entry)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a5() -> PermGroup {
        PermGroup::new(vec![
            Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
            Permutation::from_cycles(5, &[&[2, 3, 4]]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn compose_and_inverse() {
        let id = Permutation::identity(4);
        let p = Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        assert_eq!(id.compose(&p).unwrap(), p);
        assert_eq!(p.compose(&id).unwrap(), p);
        assert_eq!(
            p.inverse(),
            Permutation::from_cycles(4, &[&[0, 2, 1]]).unwrap()
        );
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        // apply-left-first: (0 1) then (1 2) sends 0 -> 2, 2 -> 1, 1 -> 0
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        assert_eq!(
            a.compose(&b).unwrap(),
            Permutation::from_cycles(3, &[&[0, 2, 1]]).unwrap()
        );
        assert!(matches!(
            a.compose(&id).unwrap_err(),
            Error::DegreeMismatch(3, 4)
        ));
    }

    #[test]
    fn orders() {
        assert_eq!(a5().order().unwrap(), 60);
        let trivial = PermGroup::new(vec![Permutation::identity(3)]).unwrap();
        assert_eq!(trivial.order().unwrap(), 1);
        let c2 = PermGroup::new(vec![Permutation::from_cycles(2, &[&[0, 1]]).unwrap()]).unwrap();
        assert_eq!(c2.elements().unwrap().len(), 2);
        assert_eq!(a5().elements().unwrap().len(), 60);
    }

    #[test]
    fn conjugacy_classes_a5() {
        let g = a5();
        let classes = g.conjugacy_classes().unwrap();
        let mut sizes: Vec<usize> = classes.iter().map(|(_, s)| *s).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 12, 12, 15, 20]);
        assert_eq!(sizes.iter().sum::<usize>(), 60);
    }

    #[test]
    fn conjugacy_classes_psl27() {
        // PSL(2,7) as GL(3,2) on the 7 nonzero vectors would do, but the
        // catalog is exercised elsewhere; use a direct generator set on
        // the projective line action via the catalog file instead.
        let e = catalog("PSL(2,7)").unwrap();
        assert_eq!(e.group.conjugacy_classes().unwrap().len(), 6);
    }

    #[test]
    fn centralizers_in_a5() {
        let g = a5();
        let id = Permutation::identity(5);
        assert_eq!(g.centralizer(&id).unwrap().len(), 60);
        let five = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(g.centralizer(&five).unwrap().len(), 5);
        let dt = Permutation::from_cycles(5, &[&[0, 1], &[2, 3]]).unwrap();
        assert_eq!(g.centralizer(&dt).unwrap().len(), 4);
        // class size * centralizer size = |G|
        for (rep, size) in g.conjugacy_classes().unwrap() {
            assert_eq!(size * g.centralizer(&rep).unwrap().len(), 60);
        }
        let outside = Permutation::from_cycles(5, &[&[0, 1]]).unwrap();
        assert!(g.centralizer(&outside).is_err());
    }

    #[test]
    fn simplicity() {
        assert!(a5().is_simple().unwrap());
        let c4 = PermGroup::new(vec![Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap()])
            .unwrap();
        assert!(!c4.is_simple().unwrap());
        let s3 = PermGroup::new(vec![
            Permutation::from_cycles(3, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
        ])
        .unwrap();
        assert!(!s3.is_simple().unwrap());
    }

    #[test]
    fn automorphism_extension() {
        let g = a5();
        let src = g.generators().to_vec();
        assert!(g.extend_to_automorphism(&src, &src).unwrap());
        // inner automorphism
        let c = Permutation::from_cycles(5, &[&[0, 1], &[2, 4]]).unwrap();
        let conj: Vec<Permutation> = src
            .iter()
            .map(|p| c.inverse().compose(p).unwrap().compose(&c).unwrap())
            .collect();
        assert!(g.extend_to_automorphism(&src, &conj).unwrap());
        // order mismatch (5-cycle vs 3-cycle) cannot extend
        let bad = vec![src[1].clone(), src[0].clone()];
        assert!(!g.extend_to_automorphism(&src, &bad).unwrap());
        // non-generating src is a precondition error
        let id5 = Permutation::identity(5);
        assert!(g
            .extend_to_automorphism(&[id5.clone()], &[id5])
            .is_err());
    }

    #[test]
    fn catalog_spot_checks() {
        let a5 = catalog("A5").unwrap();
        assert_eq!((a5.order, a5.min_index), (60, 5));
        let psu = catalog("PSU(3,3)").unwrap();
        assert_eq!((psu.order, psu.min_index), (6048, 28));
        let psl216 = catalog("PSL(2,16)").unwrap();
        assert_eq!((psl216.order, psl216.min_index), (4080, 17));
        assert!(matches!(
            catalog("PSL(2,14)"),
            Err(Error::UnknownCatalogGroup(_))
        ));
    }
}
