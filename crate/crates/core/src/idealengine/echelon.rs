//! Incremental sparse row echelon form over the Euclidean domain Z[1/6].
//!
//! Rows are inserted one at a time; every operation applied is unimodular
//! over Z[1/6], so the row lattice is exactly the span of the inserted rows.
//! Pivots are normalized to positive integers coprime to 6. Each row may
//! carry a provenance vector recording it as a combination of the inserted
//! rows.

use crate::exactnum::Coefficient;

pub type SparseVec = Vec<(u32, Coefficient)>;

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct Row {
    pub entries: SparseVec,
    pub prov: SparseVec,
}

impl Row {
    pub fn lead(&self) -> Option<u32> {
        self.entries.first().map(|e| e.0)
    }
}

#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<Row>,
    pivot: Vec<u32>,
    track: bool,
}

/// `a - f·b` on sparse vectors.
pub fn axpy(a: &SparseVec, f: &Coefficient, b: &SparseVec) -> SparseVec {
    if f.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (ca, cb) = (a[i].0, b[j].0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(&b[j].1 * f)));
            j += 1;
        } else {
            let v = &a[i].1 - &(&b[j].1 * f);
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(c, v)| (*c, -(v * f))));
    out
}

/// `f·a + g·b`.
pub fn lincomb(f: &Coefficient, a: &SparseVec, g: &Coefficient, b: &SparseVec) -> SparseVec {
    let fa = scale(a, f);
    axpy(&fa, &-g, b)
}

pub fn scale(a: &SparseVec, f: &Coefficient) -> SparseVec {
    if f.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(c, v)| (*c, v * f)).collect()
}

impl Echelon {
    pub fn new(ncols: usize, track: bool) -> Echelon {
        Echelon { ncols, rows: Vec::new(), pivot: vec![NONE; ncols], track }
    }

    /// Wraps rows that are already in echelon form with normalized pivots.
    pub fn from_rows(ncols: usize, rows: Vec<Row>, track: bool) -> Echelon {
        let mut pivot = vec![NONE; ncols];
        for (i, r) in rows.iter().enumerate() {
            let c = r.lead().expect("nonzero row") as usize;
            debug_assert_eq!(pivot[c], NONE);
            pivot[c] = i as u32;
        }
        Echelon { ncols, rows, pivot, track }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn tracks(&self) -> bool {
        self.track
    }

    pub fn pivot_row(&self, col: u32) -> Option<&Row> {
        match self.pivot[col as usize] {
            NONE => None,
            r => Some(&self.rows[r as usize]),
        }
    }

    /// True when every pivot is 1, i.e. the lattice is saturated in its
    /// rational span.
    pub fn all_pivots_unit(&self) -> bool {
        self.rows.iter().all(|r| r.entries[0].1.is_one())
    }

    fn normalize(row: &mut Row) {
        let u = row.entries[0].1.unit_part();
        if !u.is_one() {
            let inv = u.inverse().unwrap();
            row.entries = scale(&row.entries, &inv);
            row.prov = scale(&row.prov, &inv);
        }
    }

    /// Inserts a row with the given provenance id (ignored when not tracking).
    /// Returns true if the lattice grew.
    pub fn insert(&mut self, entries: SparseVec, id: u32) -> bool {
        let prov = if self.track { vec![(id, Coefficient::one())] } else { Vec::new() };
        self.insert_row(Row { entries, prov })
    }

    pub fn insert_row(&mut self, mut row: Row) -> bool {
        let mut grew = false;
        loop {
            let Some(c) = row.lead() else {
                return grew;
            };
            let pr = self.pivot[c as usize];
            if pr == NONE {
                Self::normalize(&mut row);
                self.pivot[c as usize] = self.rows.len() as u32;
                self.rows.push(row);
                return true;
            }
            let p_row = &self.rows[pr as usize];
            let p = p_row.entries[0].1.clone();
            let x = row.entries[0].1.clone();
            if let Some(q) = x.checked_div(&p) {
                row.entries = axpy(&row.entries, &q, &p_row.entries);
                if self.track {
                    row.prov = axpy(&row.prov, &q, &p_row.prov);
                }
                continue;
            }
            // Euclidean step: replace the pivot row by the gcd combination.
            let (g, s, t) = x.xgcd(&p);
            let pg = p.checked_div(&g).unwrap();
            let xg = x.checked_div(&g).unwrap();
            let mut new_pivot = Row {
                entries: lincomb(&s, &row.entries, &t, &p_row.entries),
                prov: if self.track { lincomb(&s, &row.prov, &t, &p_row.prov) } else { Vec::new() },
            };
            let rest = Row {
                entries: lincomb(&pg, &row.entries, &-&xg, &p_row.entries),
                prov: if self.track { lincomb(&pg, &row.prov, &-&xg, &p_row.prov) } else { Vec::new() },
            };
            debug_assert_eq!(new_pivot.lead(), Some(c));
            Self::normalize(&mut new_pivot);
            self.rows[pr as usize] = new_pivot;
            grew = true;
            row = rest;
        }
    }

    /// Reduces `row` and appends it if its leading coefficient is a unit.
    /// Returns the reduced row when its lead is not a unit; the echelon is
    /// then unchanged.
    pub fn try_insert_unit(&mut self, mut row: Row) -> Option<Row> {
        loop {
            let c = row.lead()?;
            let pr = self.pivot[c as usize];
            if pr == NONE {
                if !row.entries[0].1.is_unit() {
                    return Some(row);
                }
                Self::normalize(&mut row);
                self.pivot[c as usize] = self.rows.len() as u32;
                self.rows.push(row);
                return None;
            }
            let p_row = &self.rows[pr as usize];
            let Some(q) = row.entries[0].1.checked_div(&p_row.entries[0].1) else {
                return Some(row);
            };
            row.entries = axpy(&row.entries, &q, &p_row.entries);
            if self.track {
                row.prov = axpy(&row.prov, &q, &p_row.prov);
            }
        }
    }

    /// Reduces `v` by the pivots. Returns the residual (empty iff `v` lies in
    /// the lattice) and, when tracking, the combination of inserted rows that
    /// was subtracted.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut v = v.clone();
        let mut combo: SparseVec = Vec::new();
        let mut stuck: SparseVec = Vec::new();
        while let Some((c, x)) = v.first().cloned() {
            let pr = self.pivot[c as usize];
            let q = if pr == NONE { None } else { x.checked_div(&self.rows[pr as usize].entries[0].1) };
            match q {
                Some(q) => {
                    let row = &self.rows[pr as usize];
                    v = axpy(&v, &q, &row.entries);
                    if self.track {
                        combo = axpy(&combo, &-&q, &row.prov);
                    }
                }
                None => {
                    stuck.push(v.remove(0));
                }
            }
        }
        (stuck, combo)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Brings the echelon into canonical Hermite form for rows whose pivot
    /// column is at least `from`: entries above those pivots are reduced to
    /// their Euclidean remainder.
    pub fn canonicalize_from(&mut self, from: u32) {
        let mut order: Vec<(u32, usize)> =
            self.rows.iter().enumerate().map(|(i, r)| (r.entries[0].0, i)).collect();
        order.sort();
        for &(col, pi) in &order {
            if col < from {
                continue;
            }
            let p = self.rows[pi].entries[0].1.clone();
            for &(lead, ri) in &order {
                if lead >= col {
                    break;
                }
                if lead < from {
                    continue;
                }
                let Ok(k) = self.rows[ri].entries.binary_search_by_key(&col, |e| e.0) else {
                    continue;
                };
                let x = self.rows[ri].entries[k].1.clone();
                let (q, _) = x.euclidean_divide(&p).unwrap();
                if q.is_zero() {
                    continue;
                }
                let (pe, pp) = (self.rows[pi].entries.clone(), self.rows[pi].prov.clone());
                let r = &mut self.rows[ri];
                r.entries = axpy(&r.entries, &q, &pe);
                if self.track {
                    r.prov = axpy(&r.prov, &q, &pp);
                }
            }
        }
    }

    pub fn canonicalize(&mut self) {
        self.canonicalize_from(0)
    }

    /// Rows sorted by pivot column.
    pub fn sorted_rows(&self) -> Vec<&Row> {
        let mut v: Vec<&Row> = self.rows.iter().collect();
        v.sort_by_key(|r| r.entries[0].0);
        v
    }
}
