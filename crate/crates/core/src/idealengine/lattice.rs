//! Echelon bases of row lattices over Z[1/6] without coefficient blow-up.
//!
//! Inserting rows one at a time with gcd steps produces enormous
//! intermediate entries on the slices met in practice. Instead a rank
//! profile modulo a large prime picks candidate independent rows, which are
//! eliminated exactly using unit pivots only; entries then stay bounded by
//! minors. Every other row is checked for membership, and only rows that
//! still escape (or whose leads are not units) go through gcd insertion.

use rayon::prelude::*;

use super::echelon::{Echelon, Row, SparseVec};
use crate::exactnum::{mulmod, powmod, Coefficient};

const P: u64 = (1 << 61) - 1;

fn inv_p(a: u64) -> u64 {
    powmod(a, P - 2, P)
}

/// `a - f·b` modulo `P`.
fn axpy_p(a: &[(u32, u64)], f: u64, b: &[(u32, u64)]) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            let v = P - mulmod(f, b[j].1, P);
            if v != P {
                out.push((b[j].0, v % P));
            }
            j += 1;
        } else {
            let v = (a[i].1 + P - mulmod(f, b[j].1, P)) % P;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Indices of rows independent modulo `P`, in insertion order.
fn rank_profile(ncols: usize, rows: &[SparseVec]) -> Vec<usize> {
    let mut pivot: Vec<Option<usize>> = vec![None; ncols];
    let mut store: Vec<Vec<(u32, u64)>> = Vec::new();
    let mut picked = Vec::new();
    for (k, r) in rows.iter().enumerate() {
        if store.len() == ncols {
            break;
        }
        let mut v: Vec<(u32, u64)> = r.iter().map(|(c, x)| (*c, x.mod_prime(P))).filter(|e| e.1 != 0).collect();
        while let Some(&(c, x)) = v.first() {
            match pivot[c as usize] {
                Some(pr) => v = axpy_p(&v, x, &store[pr]),
                None => {
                    let inv = inv_p(x);
                    let v: Vec<(u32, u64)> = v.iter().map(|&(c, y)| (c, mulmod(y, inv, P))).collect();
                    pivot[c as usize] = Some(store.len());
                    store.push(v);
                    picked.push(k);
                    break;
                }
            }
        }
    }
    picked
}

/// Echelon basis, in canonical form, of the Z[1/6]-span of `rows` (each
/// tagged with a provenance id, recorded when `track` is set).
pub fn lattice_echelon(ncols: usize, rows: Vec<(u32, SparseVec)>, track: bool) -> Echelon {
    let (ids, rows): (Vec<u32>, Vec<SparseVec>) = rows.into_iter().filter(|(_, r)| !r.is_empty()).unzip();
    let make = |k: usize| Row {
        entries: rows[k].clone(),
        prov: if track { vec![(ids[k], Coefficient::one())] } else { Vec::new() },
    };
    let pick = rank_profile(ncols, &rows);
    let mut e = Echelon::new(ncols, track);
    let mut deferred: Vec<Row> = Vec::new();
    for &k in &pick {
        if let Some(r) = e.try_insert_unit(make(k)) {
            deferred.push(r);
        }
    }
    loop {
        let before = deferred.len();
        deferred = deferred.into_iter().filter_map(|r| e.try_insert_unit(r)).collect();
        if deferred.len() == before {
            break;
        }
    }
    let mut picked = vec![false; rows.len()];
    pick.iter().for_each(|&k| picked[k] = true);
    let escaped: Vec<usize> = (0..rows.len()).into_par_iter().filter(|&k| !picked[k] && !e.contains(&rows[k])).collect();
    for k in escaped {
        if let Some(r) = e.try_insert_unit(make(k)) {
            deferred.push(r);
        }
    }
    loop {
        let before = deferred.len();
        deferred = deferred.into_iter().filter_map(|r| e.try_insert_unit(r)).collect();
        if deferred.len() == before {
            break;
        }
    }
    for r in deferred {
        e.insert_row(r);
    }
    e.canonicalize();
    e
}
