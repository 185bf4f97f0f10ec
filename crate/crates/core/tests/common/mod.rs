//! Dense reference implementations used as oracles by the test suites.
#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use chowglue::{Coefficient, GradedPoly, Monomial, VarTable};

pub fn to_rational(c: &Coefficient) -> BigRational {
    let (n, d) = c.to_fraction();
    BigRational::new(n, d)
}

/// Dense integer row of `p` over the monomials of its degree, scaled by a
/// unit so every entry is integral.
fn integer_row(p: &GradedPoly, monos: &[Monomial]) -> Vec<BigInt> {
    let q: Vec<BigRational> = monos.iter().map(|m| to_rational(&p.coefficient_of(m))).collect();
    let lcm = q.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    q.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect()
}

/// Row echelon form over Z by repeated Euclidean steps on each column.
fn integer_echelon(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> Vec<(usize, Vec<BigInt>)> {
    let mut out = Vec::new();
    for c in 0..ncols {
        loop {
            let mut best: Option<usize> = None;
            for (i, r) in rows.iter().enumerate() {
                if !r[c].is_zero() && best.is_none_or(|b| r[c].abs() < rows[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            let pivot = rows.swap_remove(b);
            let mut done = true;
            for r in rows.iter_mut() {
                if r[c].is_zero() {
                    continue;
                }
                let q = r[c].div_floor(&pivot[c]);
                for k in c..ncols {
                    let t = &q * &pivot[k];
                    r[k] -= t;
                }
                if !r[c].is_zero() {
                    done = false;
                }
            }
            if done {
                out.push((c, pivot));
                break;
            }
            rows.push(pivot);
        }
    }
    out
}

/// Membership of `p` in the Z[1/6]-ideal generated by `gens`, by dense
/// integer elimination of the degree slice.
pub fn dense_member(p: &GradedPoly, gens: &[GradedPoly]) -> bool {
    let t = p.table();
    if p.is_zero() {
        return true;
    }
    let d = p.homogeneous_degree().unwrap();
    let monos = t.monomials_of_degree(d);
    let mut rows = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let e = g.homogeneous_degree().unwrap();
        if e > d {
            continue;
        }
        for m in t.monomials_of_degree(d - e) {
            rows.push(integer_row(&g.mul_monomial(&m, &Coefficient::one()), &monos));
        }
    }
    let ech = integer_echelon(rows, monos.len());
    // v ∈ Z[1/6]·L iff 6^k v ∈ L for some k
    let six = BigInt::from(6).pow(64u32);
    let mut v: Vec<BigInt> = integer_row(p, &monos).into_iter().map(|x| x * &six).collect();
    for (c, r) in &ech {
        if v[*c].is_zero() {
            continue;
        }
        let (q, rem) = v[*c].div_rem(&r[*c]);
        if !rem.is_zero() {
            return false;
        }
        for k in *c..monos.len() {
            let t = &q * &r[k];
            v[k] -= t;
        }
    }
    v.iter().all(Zero::is_zero)
}

fn small_coefficient<R: Rng>(rng: &mut R) -> Coefficient {
    let n: i64 = rng.random_range(-7..=7);
    let a: u32 = rng.random_range(0..=1);
    let b: u32 = rng.random_range(0..=1);
    Coefficient::from_parts(n, a, b)
}

pub fn random_poly<R: Rng>(rng: &mut R, t: &Arc<VarTable>, d: u32, density: f64) -> GradedPoly {
    let mut terms = Vec::new();
    for m in t.monomials_of_degree(d) {
        if rng.random_bool(density) {
            terms.push((m, small_coefficient(rng)));
        }
    }
    GradedPoly::from_terms(t, terms)
}

/// Generators and a target polynomial. A third of the targets are random,
/// the rest combinations of the generators; for half of those one generator
/// is afterwards multiplied by 5 or 7, so the target stays in the rational
/// span but usually leaves the Z[1/6]-span.
pub fn random_instance<R: Rng>(rng: &mut R) -> (GradedPoly, Vec<GradedPoly>) {
    let nvars = rng.random_range(2..=3);
    let vars: Vec<(String, u32)> = (0..nvars).map(|i| (format!("x{i}"), rng.random_range(1..=2))).collect();
    let t = VarTable::new(&vars).unwrap();
    let ngens = rng.random_range(1..=3);
    let mut gens: Vec<GradedPoly> = (0..ngens)
        .map(|_| {
            let d = rng.random_range(1..=3);
            random_poly(rng, &t, d, 0.6)
        })
        .filter(|g| !g.is_zero())
        .collect();
    let d = rng.random_range(2..=5);
    let kind = rng.random_range(0..3);
    if kind == 0 {
        return (random_poly(rng, &t, d, 0.5), gens);
    }
    let mut p = GradedPoly::zero(&t);
    for g in &gens {
        let e = g.homogeneous_degree().unwrap();
        if e <= d {
            p = p.add(&random_poly(rng, &t, d - e, 0.5).mul(g));
        }
    }
    if kind == 2 && !gens.is_empty() {
        let q: i64 = if rng.random_bool(0.5) { 5 } else { 7 };
        gens[0] = gens[0].scale(&Coefficient::from_int(q));
    }
    (p, gens)
}
