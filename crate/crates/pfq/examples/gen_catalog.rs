//! Regenerates data/simple_catalog.json, the bundled permutation
//! generators for the 13 simple groups in the catalog.
//!
//!     cargo run --release --example gen_catalog
//!
//! Constructions:
//!   - A5/A6/A7: standard 3-cycle + long-cycle generators.
//!   - PSL(2,q), q in {8,13,16,17,19,23}: SL(2,q) on the projective
//!     line (degree q+1) generated by a transvection, a diagonal
//!     torus element, and the Weyl element.
//!   - PSL(2,7) at degree 7: as GL(3,2) acting on the 7 nonzero
//!     vectors of F_2^3.
//!   - PSL(2,11) at degree 11: the action on cosets of an A5
//!     subgroup, found deterministically inside the degree-12 copy.
//!   - PSL(3,3): SL(3,3) on the 13 points of PG(2,3), generated by
//!     elementary transvections.
//!   - PSU(3,3) at degree 28: SU(3,3) on the isotropic points of the
//!     Hermitian form u^T J v^sigma over GF(9), J antidiagonal.

use pfq::permgrp::{PermGroup, Permutation};
use std::fmt::Write as _;

/// Small finite field GF(p^k) with full lookup tables. Elements are
/// encoded as base-p digit strings packed into 0..q.
struct Gf {
    q: usize,
    add: Vec<Vec<u16>>,
    mul: Vec<Vec<u16>>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl Gf {
    /// `modpoly` are the coefficients c0..c_{k-1} of the monic
    /// irreducible x^k + c_{k-1} x^{k-1} + ... + c0.
    fn new(p: u64, k: usize, modpoly: &[u64]) -> Gf {
        assert_eq!(modpoly.len(), k);
        let q = p.pow(k as u32) as usize;
        let digits = |mut x: usize| -> Vec<u64> {
            let mut d = vec![0u64; k];
            for di in d.iter_mut() {
                *di = (x as u64) % p;
                x /= p as usize;
            }
            d
        };
        let pack = |d: &[u64]| -> usize {
            let mut x = 0usize;
            for &di in d.iter().rev() {
                x = x * p as usize + di as usize;
            }
            x
        };
        let polymul = |a: &[u64], b: &[u64]| -> Vec<u64> {
            let mut prod = vec![0u64; 2 * k];
            for (i, &ai) in a.iter().enumerate() {
                for (j, &bj) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + ai * bj) % p;
                }
            }
            // reduce by x^k = -modpoly
            for i in (k..2 * k).rev() {
                let c = prod[i];
                if c == 0 {
                    continue;
                }
                prod[i] = 0;
                for (j, &mj) in modpoly.iter().enumerate() {
                    let idx = i - k + j;
                    prod[idx] = (prod[idx] + (p - mj % p) * c) % p;
                }
            }
            prod.truncate(k);
            prod
        };
        let mut add = vec![vec![0u16; q]; q];
        let mut mul = vec![vec![0u16; q]; q];
        let mut neg = vec![0u16; q];
        for a in 0..q {
            let da = digits(a);
            let dn: Vec<u64> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a] = pack(&dn) as u16;
            for b in 0..q {
                let db = digits(b);
                let ds: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a][b] = pack(&ds) as u16;
                mul[a][b] = pack(&polymul(&da, &db)) as u16;
            }
        }
        let mut inv = vec![0u16; q];
        for a in 1..q {
            for b in 1..q {
                if mul[a][b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
        }
        Gf { q, add, mul, neg, inv }
    }

    fn prime(p: u64) -> Gf {
        Gf::new(p, 1, &[0])
    }

    fn a(&self, x: usize, y: usize) -> usize {
        self.add[x][y] as usize
    }
    fn m(&self, x: usize, y: usize) -> usize {
        self.mul[x][y] as usize
    }
    fn n(&self, x: usize) -> usize {
        self.neg[x] as usize
    }
    fn i(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    fn pow(&self, mut x: usize, mut e: u64) -> usize {
        let mut r = 1usize;
        while e > 0 {
            if e & 1 == 1 {
                r = self.m(r, x);
            }
            x = self.m(x, x);
            e >>= 1;
        }
        r
    }

    fn primitive_element(&self) -> usize {
        'outer: for a in 2..self.q {
            let mut x = a;
            for _ in 1..self.q - 1 {
                if x == 1 {
                    continue 'outer;
                }
                x = self.m(x, a);
            }
            if x == 1 {
                return a;
            }
        }
        panic!("no primitive element");
    }
}

type Mat2 = [[usize; 2]; 2];
type Mat3 = [[usize; 3]; 3];

/// Points of the projective line over GF(q): [x:1] for each x, then [1:0].
fn projective_line(f: &Gf) -> Vec<[usize; 2]> {
    let mut pts: Vec<[usize; 2]> = (0..f.q).map(|x| [x, 1]).collect();
    pts.push([1, 0]);
    pts
}

fn normalize2(f: &Gf, v: [usize; 2]) -> [usize; 2] {
    if v[1] != 0 {
        let s = f.i(v[1]);
        [f.m(v[0], s), 1]
    } else {
        [1, 0]
    }
}

fn mat2_act(f: &Gf, v: [usize; 2], m: &Mat2) -> [usize; 2] {
    // row vector times matrix
    let x = f.a(f.m(v[0], m[0][0]), f.m(v[1], m[1][0]));
    let y = f.a(f.m(v[0], m[0][1]), f.m(v[1], m[1][1]));
    normalize2(f, [x, y])
}

fn perm_on_line(f: &Gf, pts: &[[usize; 2]], m: &Mat2) -> Permutation {
    let index = |v: [usize; 2]| pts.iter().position(|&p| p == v).unwrap();
    Permutation::new(pts.iter().map(|&v| index(mat2_act(f, v, m))).collect()).unwrap()
}

fn psl2_generators(f: &Gf) -> Vec<Permutation> {
    let pts = projective_line(f);
    let alpha = f.primitive_element();
    let t: Mat2 = [[1, 1], [0, 1]];
    let d: Mat2 = [[alpha, 0], [0, f.i(alpha)]];
    let w: Mat2 = [[0, 1], [f.n(1), 0]];
    vec![
        perm_on_line(f, &pts, &t),
        perm_on_line(f, &pts, &d),
        perm_on_line(f, &pts, &w),
    ]
}

fn mat3_act_row(f: &Gf, v: [usize; 3], m: &Mat3) -> [usize; 3] {
    let mut out = [0usize; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = 0usize;
        for i in 0..3 {
            acc = f.a(acc, f.m(v[i], m[i][j]));
        }
        *o = acc;
    }
    out
}

fn transvections3() -> Vec<Mat3> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let mut m: Mat3 = [[0; 3]; 3];
            for (d, row) in m.iter_mut().enumerate() {
                row[d] = 1;
            }
            m[i][j] = 1;
            out.push(m);
        }
    }
    out
}

/// GL(3,2) on the 7 nonzero vectors of F_2^3.
fn psl27_generators() -> Vec<Permutation> {
    let f = Gf::prime(2);
    let pts: Vec<[usize; 3]> = (1..8usize)
        .map(|x| [x & 1, (x >> 1) & 1, (x >> 2) & 1])
        .collect();
    let index = |v: [usize; 3]| pts.iter().position(|&p| p == v).unwrap();
    transvections3()
        .iter()
        .map(|m| {
            Permutation::new(pts.iter().map(|&v| index(mat3_act_row(&f, v, m))).collect())
                .unwrap()
        })
        .collect()
}

/// SL(3,3) on the 13 points of PG(2,3).
fn psl33_generators() -> Vec<Permutation> {
    let f = Gf::prime(3);
    let mut pts: Vec<[usize; 3]> = Vec::new();
    for a in 0..3usize {
        for b in 0..3usize {
            for c in 0..3usize {
                let v = [a, b, c];
                if v == [0, 0, 0] {
                    continue;
                }
                // normalize: last nonzero coordinate = 1
                let lead = (0..3).rev().find(|&i| v[i] != 0).unwrap();
                if v[lead] == 1 && !pts.contains(&v) {
                    pts.push(v);
                }
            }
        }
    }
    assert_eq!(pts.len(), 13);
    let normalize = |f: &Gf, v: [usize; 3]| -> [usize; 3] {
        let lead = (0..3).rev().find(|&i| v[i] != 0).unwrap();
        let s = f.i(v[lead]);
        [f.m(v[0], s), f.m(v[1], s), f.m(v[2], s)]
    };
    let index = |v: [usize; 3]| pts.iter().position(|&p| p == v).unwrap();
    transvections3()
        .iter()
        .map(|m| {
            Permutation::new(
                pts.iter()
                    .map(|&v| index(normalize(&f, mat3_act_row(&f, v, m))))
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}

/// PSL(2,11) in its exceptional degree-11 action on cosets of A5.
fn psl211_degree11_generators() -> Vec<Permutation> {
    let f = Gf::prime(11);
    let gens12 = psl2_generators(&f);
    let g = PermGroup::new(gens12.clone()).unwrap();
    let elements = g.elements().unwrap().to_vec();
    assert_eq!(elements.len(), 660);

    // deterministic search for an A5 subgroup: first (involution,
    // order-5) pair generating a subgroup of order 60
    let mut sub: Option<Vec<Permutation>> = None;
    'search: for a in &elements {
        if a.order() != 2 {
            continue;
        }
        for b in &elements {
            if b.order() != 5 {
                continue;
            }
            let h = PermGroup::new(vec![a.clone(), b.clone()]).unwrap();
            if h.order().unwrap() == 60 {
                sub = Some(h.elements().unwrap().to_vec());
                break 'search;
            }
        }
    }
    let sub = sub.expect("A5 subgroup in PSL(2,11)");

    // right cosets Hx, ordered by minimal member
    let mut coset_of: std::collections::HashMap<Vec<usize>, usize> = Default::default();
    let mut nc = 0usize;
    let mut reps: Vec<Permutation> = Vec::new();
    for e in &elements {
        if coset_of.contains_key(e.images()) {
            continue;
        }
        for h in &sub {
            let m = h.compose(e).unwrap();
            coset_of.insert(m.images().to_vec(), nc);
        }
        reps.push(e.clone());
        nc += 1;
    }
    assert_eq!(nc, 11);
    gens12
        .iter()
        .map(|gen| {
            Permutation::new(
                reps.iter()
                    .map(|r| coset_of[r.compose(gen).unwrap().images()])
                    .collect(),
            )
            .unwrap()
        })
        .collect()
}

/// SU(3,3) on the 28 isotropic points of PG(2,9).
fn psu33_generators() -> Vec<Permutation> {
    let f = Gf::new(3, 2, &[1, 0]); // GF(9) = F3[x]/(x^2+1)
    let sigma = |x: usize| f.pow(x, 3);
    // Hermitian form u^T J v^sigma with J the antidiagonal identity
    let phi_self = |v: [usize; 3]| -> usize {
        // u1*s(u3) + u2*s(u2) + u3*s(u1)
        let mut acc = f.m(v[0], sigma(v[2]));
        acc = f.a(acc, f.m(v[1], sigma(v[1])));
        f.a(acc, f.m(v[2], sigma(v[0])))
    };
    let normalize = |v: [usize; 3]| -> [usize; 3] {
        let lead = (0..3).find(|&i| v[i] != 0).unwrap();
        let s = f.i(v[lead]);
        [f.m(v[0], s), f.m(v[1], s), f.m(v[2], s)]
    };
    let mut pts: Vec<[usize; 3]> = Vec::new();
    for a in 0..f.q {
        for b in 0..f.q {
            for c in 0..f.q {
                let v = [a, b, c];
                if v == [0, 0, 0] || phi_self(v) != 0 {
                    continue;
                }
                let nv = normalize(v);
                if !pts.contains(&nv) {
                    pts.push(nv);
                }
            }
        }
    }
    assert_eq!(pts.len(), 28);

    let mat_mul = |a: &Mat3, b: &Mat3| -> Mat3 {
        let mut c: Mat3 = [[0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0usize;
                for (k, brow) in b.iter().enumerate() {
                    acc = f.a(acc, f.m(a[i][k], brow[j]));
                }
                c[i][j] = acc;
            }
        }
        c
    };
    let det3 = |m: &Mat3| -> usize {
        let term = |i: usize, j: usize, k: usize| f.m(m[0][i], f.m(m[1][j], m[2][k]));
        let pos = f.a(f.a(term(0, 1, 2), term(1, 2, 0)), term(2, 0, 1));
        let neg = f.a(f.a(term(2, 1, 0), term(1, 0, 2)), term(0, 2, 1));
        f.a(pos, f.n(neg))
    };
    let j_mat: Mat3 = [[0, 0, 1], [0, 1, 0], [1, 0, 0]];
    let preserves_form = |m: &Mat3| -> bool {
        let mt: Mat3 = [
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ];
        let mut ms: Mat3 = [[0; 3]; 3];
        for i in 0..3 {
            for jj in 0..3 {
                ms[i][jj] = sigma(m[i][jj]);
            }
        }
        mat_mul(&mat_mul(&mt, &j_mat), &ms) == j_mat
    };

    let mut gens_mats: Vec<Mat3> = Vec::new();
    for a in 0..f.q {
        for b in 0..f.q {
            for c in 0..f.q {
                let m: Mat3 = [[1, a, b], [0, 1, c], [0, 0, 1]];
                if preserves_form(&m) && det3(&m) == 1 {
                    gens_mats.push(m);
                }
            }
        }
    }
    assert_eq!(gens_mats.len(), 27);
    let w: Mat3 = [
        [0, 0, f.n(1)],
        [0, f.n(1), 0],
        [f.n(1), 0, 0],
    ];
    assert!(preserves_form(&w) && det3(&w) == 1);
    gens_mats.push(w);

    let act = |v: [usize; 3], m: &Mat3| -> [usize; 3] {
        // column vector: u -> M u
        let mut out = [0usize; 3];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0usize;
            for k in 0..3 {
                acc = f.a(acc, f.m(m[i][k], v[k]));
            }
            *o = acc;
        }
        normalize(out)
    };
    let index = |v: [usize; 3]| pts.iter().position(|&p| p == v).unwrap();
    let all: Vec<Permutation> = gens_mats
        .iter()
        .map(|m| Permutation::new(pts.iter().map(|&v| index(act(v, m))).collect()).unwrap())
        .collect();
    // trim to a small generating set for a compact data file
    let full = PermGroup::new(all.clone()).unwrap();
    let target = full.order().unwrap();
    let mut chosen: Vec<Permutation> = Vec::new();
    let mut cur_order = 1u64;
    for p in &all {
        if cur_order == target {
            break;
        }
        let mut cand = chosen.clone();
        cand.push(p.clone());
        let o = PermGroup::new(cand.clone()).unwrap().order().unwrap();
        if o > cur_order {
            chosen = cand;
            cur_order = o;
        }
    }
    assert_eq!(cur_order, target, "PSU(3,3) generating set incomplete");
    chosen
}

fn alternating_generators(n: usize) -> Vec<Permutation> {
    let three = Permutation::from_cycles(n, &[&[0, 1, 2]]).unwrap();
    let long: Vec<usize> = if n % 2 == 1 {
        (0..n).collect()
    } else {
        (1..n).collect()
    };
    let cycle = Permutation::from_cycles(n, &[&long]).unwrap();
    vec![three, cycle]
}

fn main() {
    let entries: Vec<(&str, u64, usize, Vec<Permutation>)> = vec![
        ("A5", 60, 5, alternating_generators(5)),
        ("PSL(2,7)", 168, 7, psl27_generators()),
        ("A6", 360, 6, alternating_generators(6)),
        ("PSL(2,8)", 504, 9, psl2_generators(&Gf::new(2, 3, &[1, 1, 0]))),
        ("PSL(2,11)", 660, 11, psl211_degree11_generators()),
        ("PSL(2,13)", 1092, 14, psl2_generators(&Gf::prime(13))),
        ("PSL(2,17)", 2448, 18, psl2_generators(&Gf::prime(17))),
        ("A7", 2520, 7, alternating_generators(7)),
        ("PSL(2,19)", 3420, 20, psl2_generators(&Gf::prime(19))),
        (
            "PSL(2,16)",
            4080,
            17,
            psl2_generators(&Gf::new(2, 4, &[1, 1, 0, 0])),
        ),
        ("PSL(3,3)", 5616, 13, psl33_generators()),
        ("PSU(3,3)", 6048, 28, psu33_generators()),
        ("PSL(2,23)", 6072, 24, psl2_generators(&Gf::prime(23))),
    ];

    let mut out = String::from("{\n  \"groups\": [\n");
    for (i, (name, order, min_index, gens)) in entries.iter().enumerate() {
        let g = PermGroup::new(gens.clone()).unwrap();
        let computed = g.order().unwrap();
        assert_eq!(
            computed, *order,
            "{name}: computed order {computed}, expected {order}"
        );
        assert_eq!(g.degree(), *min_index, "{name}: wrong degree");
        assert!(g.is_transitive(), "{name}: action not transitive");
        eprintln!("{name}: order {computed}, degree {min_index} ok");

        let gen_strs: Vec<String> = gens
            .iter()
            .map(|p| {
                let imgs: Vec<String> = p.images().iter().map(|x| x.to_string()).collect();
                format!("[{}]", imgs.join(","))
            })
            .collect();
        write!(
            out,
            "    {{\"name\": \"{name}\", \"order\": {order}, \"min_index\": {min_index}, \"generators\": [{}]}}",
            gen_strs.join(", ")
        )
        .unwrap();
        out.push_str(if i + 1 < entries.len() { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");

    let path = format!(
        "{}/data/simple_catalog.json",
        env!("CARGO_MANIFEST_DIR")
    );
    std::fs::write(&path, out).unwrap();
    eprintln!("wrote {path}");
}
