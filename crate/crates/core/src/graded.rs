//! Exact linear algebra on graded pieces `e(top) · A_d · e(bottom)`.
//!
//! Spans are tracked by an incremental sparse echelon form over the basis
//! diagrams themselves, so no piece has to be enumerated up front. Ideal
//! pieces are truncated by word length and the truncation is reported.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cartan::LabelId;
use crate::klr::{BasisDiagram, Element, KlrAlgebra, KlrError, Terms};
use crate::symgroup::Perm;
use crate::Coeff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("term outside the enumerated piece: {0}")]
    OutOfPiece(String),
    #[error("elements span more than one graded piece")]
    MixedPieces,
    #[error(transparent)]
    Klr(#[from] KlrError),
}

/// `(bottom, top, degree)` of a homogeneous piece.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PieceKey {
    pub bottom: Vec<LabelId>,
    pub top: Vec<LabelId>,
    pub degree: i64,
}

impl PieceKey {
    pub fn of(d: &BasisDiagram, alg: &KlrAlgebra) -> Self {
        PieceKey { bottom: d.bottom.clone(), top: d.top(), degree: d.degree(alg.datum()) }
    }
}

/// Explicit list of the basis diagrams of one piece.
#[derive(Clone, Debug)]
pub struct GradedPieceBasis {
    pub key: PieceKey,
    pub diagrams: Vec<BasisDiagram>,
    index: HashMap<BasisDiagram, usize>,
}

impl GradedPieceBasis {
    pub fn enumerate(alg: &KlrAlgebra, bottom: &[LabelId], top: &[LabelId], degree: i64) -> Result<Self, GradedError> {
        if bottom.len() != top.len() {
            return Err(KlrError::LengthMismatch(bottom.len(), top.len()).into());
        }
        let n = bottom.len();
        let mut diagrams = Vec::new();
        for w in Perm::all(n) {
            let d0 = BasisDiagram { bottom: bottom.to_vec(), perm: w, exps: vec![0; n] };
            if d0.top() != top {
                continue;
            }
            let rest = degree - d0.degree(alg.datum());
            if rest < 0 {
                continue;
            }
            let weights: Vec<i64> = top.iter().map(|&l| alg.datum().dot(l, l)).collect();
            let mut exps = vec![0u32; n];
            dot_vectors(&weights, 0, rest, &mut exps, &mut |a| {
                diagrams.push(BasisDiagram { exps: a.to_vec(), ..d0.clone() });
            });
        }
        diagrams.sort();
        let index = diagrams.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        Ok(GradedPieceBasis {
            key: PieceKey { bottom: bottom.to_vec(), top: top.to_vec(), degree },
            diagrams,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    pub fn coordinatize(&self, e: &Element) -> Result<Vec<Coeff>, GradedError> {
        let mut v = vec![Coeff::zero(); self.diagrams.len()];
        for (d, c) in e.terms() {
            let &i = self.index.get(d).ok_or_else(|| GradedError::OutOfPiece(format!("{d:?}")))?;
            v[i] = c.clone();
        }
        Ok(v)
    }
}

fn dot_vectors(weights: &[i64], pos: usize, left: i64, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if pos == weights.len() {
        if left == 0 {
            f(cur);
        }
        return;
    }
    let mut a = 0;
    while a as i64 * weights[pos] <= left {
        cur[pos] = a;
        dot_vectors(weights, pos + 1, left - a as i64 * weights[pos], cur, f);
        a += 1;
    }
    cur[pos] = 0;
}

/// Incremental row echelon form over basis diagrams. Every stored row has
/// leading coefficient 1 at its pivot, the smallest diagram in its support.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<BasisDiagram, Terms>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns the (possibly zero)
    /// remainder.
    fn reduce(&self, mut v: Terms) -> Terms {
        let mut floor: Option<BasisDiagram> = None;
        loop {
            let next = match &floor {
                None => v.keys().next().cloned(),
                Some(f) => v.range(f.clone()..).find(|(k, _)| *k != f).map(|(k, _)| k.clone()),
            };
            let Some(lead) = next else {
                return v;
            };
            if let Some(row) = self.rows.get(&lead) {
                let c = v[&lead].clone();
                for (d, rc) in row {
                    let entry = v.entry(d.clone()).or_insert_with(Coeff::zero);
                    *entry -= &c * rc;
                    if entry.is_zero() {
                        v.remove(d);
                    }
                }
            }
            floor = Some(lead);
        }
    }

    /// Adds a vector; returns whether it enlarged the span.
    pub fn insert_terms(&mut self, v: Terms) -> bool {
        let rem = self.reduce(v);
        let mut leading = None;
        for (d, c) in &rem {
            if self.rows.contains_key(d) {
                continue;
            }
            leading = Some((d.clone(), c.clone()));
            break;
        }
        let Some((pivot, c)) = leading else {
            return false;
        };
        let inv = Coeff::one() / c;
        let row: Terms = rem.into_iter().map(|(d, x)| (d, x * &inv)).collect();
        // keep the invariant that the pivot is the smallest key of its row
        let row = self.reduce_below(row, &pivot);
        self.rows.insert(pivot, row);
        true
    }

    /// Clears all entries smaller than `pivot` that sit on existing pivots.
    fn reduce_below(&self, mut row: Terms, pivot: &BasisDiagram) -> Terms {
        loop {
            let Some(first) = row.keys().next().cloned() else {
                return row;
            };
            if &first == pivot {
                return row;
            }
            let other = self.rows.get(&first).expect("remainder only keeps pivots below the new pivot");
            let c = row[&first].clone();
            for (d, rc) in other {
                let entry = row.entry(d.clone()).or_insert_with(Coeff::zero);
                *entry -= &c * rc;
                if entry.is_zero() {
                    row.remove(d);
                }
            }
        }
    }

    pub fn insert(&mut self, e: &Element) -> bool {
        self.insert_terms(e.terms().map(|(d, c)| (d.clone(), c.clone())).collect())
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.reduce(e.terms().map(|(d, c)| (d.clone(), c.clone())).collect()).is_empty()
    }

    /// A basis of the span, as elements of `alg` on `n` strands.
    pub fn basis(&self, alg: &KlrAlgebra, n: usize) -> Vec<Element> {
        self.rows
            .values()
            .map(|row| alg.from_terms(n, row.iter().map(|(d, c)| (d.clone(), c.clone()))).expect("rows come from elements of alg"))
            .collect()
    }
}

/// The piece of a nonzero single-piece element; `MixedPieces` otherwise.
pub fn piece_of(alg: &KlrAlgebra, e: &Element) -> Result<Option<PieceKey>, GradedError> {
    let mut key: Option<PieceKey> = None;
    for (d, _) in e.terms() {
        let k = PieceKey::of(d, alg);
        match &key {
            None => key = Some(k),
            Some(prev) if *prev != k => return Err(GradedError::MixedPieces),
            _ => {}
        }
    }
    Ok(key)
}

/// Dimension of the span of elements lying in one common piece.
pub fn rank(alg: &KlrAlgebra, elements: &[Element]) -> Result<usize, GradedError> {
    let mut key: Option<PieceKey> = None;
    let mut ech = Echelon::new();
    for e in elements {
        if let Some(k) = piece_of(alg, e)? {
            match &key {
                None => key = Some(k),
                Some(prev) if *prev != k => return Err(GradedError::MixedPieces),
                _ => {}
            }
        }
        ech.insert(e);
    }
    Ok(ech.rank())
}

/// Splits an element into its graded-piece components.
pub fn split_pieces(alg: &KlrAlgebra, e: &Element) -> BTreeMap<PieceKey, Element> {
    let mut parts: BTreeMap<PieceKey, Vec<(BasisDiagram, Coeff)>> = BTreeMap::new();
    for (d, c) in e.terms() {
        parts.entry(PieceKey::of(d, alg)).or_default().push((d.clone(), c.clone()));
    }
    parts
        .into_iter()
        .map(|(k, t)| (k, alg.from_terms(e.n(), t).expect("terms come from an element of alg")))
        .collect()
}

/// Bases of the spans of a family of elements, per graded piece.
#[derive(Clone, Debug, Default)]
pub struct PieceSpans {
    pieces: BTreeMap<PieceKey, Echelon>,
}

impl PieceSpans {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds every component of `e`; returns whether any span grew.
    pub fn insert(&mut self, alg: &KlrAlgebra, e: &Element) -> bool {
        let mut grew = false;
        for (k, part) in split_pieces(alg, e) {
            grew |= self.pieces.entry(k).or_default().insert(&part);
        }
        grew
    }

    pub fn rank(&self, key: &PieceKey) -> usize {
        self.pieces.get(key).map_or(0, Echelon::rank)
    }

    pub fn keys(&self) -> impl Iterator<Item = &PieceKey> {
        self.pieces.keys()
    }

    pub fn echelon(&self, key: &PieceKey) -> Option<&Echelon> {
        self.pieces.get(key)
    }

    pub fn basis(&self, alg: &KlrAlgebra, key: &PieceKey) -> Vec<Element> {
        self.pieces.get(key).map_or_else(Vec::new, |e| e.basis(alg, key.bottom.len()))
    }

    /// Every stored basis element across all pieces.
    pub fn all_basis(&self, alg: &KlrAlgebra) -> Vec<Element> {
        self.pieces.iter().flat_map(|(k, e)| e.basis(alg, k.bottom.len())).collect()
    }
}

/// Span of all products of at most `max_len` factors from `gens`, piece by
/// piece. `gens` should contain the relevant idempotents.
pub fn word_span(alg: &KlrAlgebra, gens: &[Element], max_len: usize) -> Result<PieceSpans, GradedError> {
    let mut spans = PieceSpans::new();
    if max_len == 0 {
        return Ok(spans);
    }
    let mut frontier = Vec::new();
    for g in gens {
        if spans.insert(alg, g) {
            frontier.push(g.clone());
        }
    }
    for _ in 1..max_len {
        let level = spans.all_basis(alg);
        let mut grew = false;
        for g in gens {
            for b in &level {
                let p = alg.mul(g, b)?;
                grew |= spans.insert(alg, &p);
            }
        }
        if !grew {
            break;
        }
    }
    Ok(spans)
}

/// Span of `u · g · v` for ideal generators `g` and words `u`, `v` in
/// `gens`, with at most `max_len` factors in total (the generator counts as
/// one factor). Monotone in `max_len`.
pub fn ideal_span(
    alg: &KlrAlgebra,
    gens: &[Element],
    ideal: &[Element],
    max_len: usize,
) -> Result<PieceSpans, GradedError> {
    let mut spans = PieceSpans::new();
    if max_len == 0 {
        return Ok(spans);
    }
    for g in ideal {
        spans.insert(alg, g);
    }
    for _ in 1..max_len {
        let level = spans.all_basis(alg);
        let mut next = spans.clone();
        let mut grew = false;
        for g in gens {
            for b in &level {
                grew |= next.insert(alg, &alg.mul(g, b)?);
                grew |= next.insert(alg, &alg.mul(b, g)?);
            }
        }
        spans = next;
        if !grew {
            break;
        }
    }
    Ok(spans)
}

/// Spanning set of the degree-`key` piece of the two-sided ideal, truncated
/// at word length `max_len`.
pub fn ideal_piece(
    alg: &KlrAlgebra,
    gens: &[Element],
    ideal: &[Element],
    key: &PieceKey,
    max_len: usize,
) -> Result<Vec<Element>, GradedError> {
    Ok(ideal_span(alg, gens, ideal, max_len)?.basis(alg, key))
}

/// `dim(A) − dim(A ∩ I)` computed as `rank(A ∪ I) − rank(I)`.
pub fn quotient_dim(alg: &KlrAlgebra, algebra: &[Element], ideal: &[Element]) -> Result<usize, GradedError> {
    let i_rank = rank(alg, ideal)?;
    let mut all = algebra.to_vec();
    all.extend_from_slice(ideal);
    Ok(rank(alg, &all)? - i_rank)
}

/// One line of a dimension table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientRow {
    pub piece: PieceLabel,
    pub rank: usize,
    pub ideal_rank: usize,
    pub quotient: usize,
    pub truncation_l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PieceLabel {
    pub left: String,
    pub right: String,
    pub degree: i64,
}

/// Quotient dimensions for every piece of the algebra span with
/// `|degree| ≤ max_degree`, for each truncation length in `lengths`. The
/// algebra span is computed once at `algebra_len`.
pub fn quotient_sweep(
    alg: &KlrAlgebra,
    gens: &[Element],
    ideal: &[Element],
    algebra_len: usize,
    lengths: &[usize],
    max_degree: i64,
    name: &dyn Fn(&[LabelId]) -> String,
) -> Result<Vec<QuotientRow>, GradedError> {
    let algebra = word_span(alg, gens, algebra_len)?;
    let keys: Vec<PieceKey> = algebra.keys().filter(|k| k.degree <= max_degree).cloned().collect();
    let mut rows = Vec::new();
    for &l in lengths {
        let ideal_spans = ideal_span(alg, gens, ideal, l)?;
        for k in &keys {
            let a = algebra.basis(alg, k);
            let i = ideal_spans.basis(alg, k);
            let ideal_rank = i.len();
            let quotient = quotient_dim(alg, &a, &i)?;
            rows.push(QuotientRow {
                piece: PieceLabel { left: name(&k.top), right: name(&k.bottom), degree: k.degree },
                rank: a.len(),
                ideal_rank,
                quotient,
                truncation_l: l,
            });
        }
    }
    rows.sort_by(|a, b| (&a.piece, a.truncation_l).cmp(&(&b.piece, b.truncation_l)));
    Ok(rows)
}

/// Pieces whose quotient dimension increased somewhere along the sweep.
pub fn monotonicity_violations(rows: &[QuotientRow]) -> Vec<(PieceLabel, usize, usize)> {
    let mut out = Vec::new();
    for w in rows.windows(2) {
        if w[0].piece == w[1].piece && w[1].quotient > w[0].quotient {
            out.push((w[1].piece.clone(), w[0].quotient, w[1].quotient));
        }
    }
    out
}

/// Pieces whose last three truncation lengths give the same quotient.
pub fn converged_pieces(rows: &[QuotientRow]) -> Vec<PieceLabel> {
    let mut by_piece: BTreeMap<&PieceLabel, Vec<usize>> = BTreeMap::new();
    for r in rows {
        by_piece.entry(&r.piece).or_default().push(r.quotient);
    }
    by_piece
        .into_iter()
        .filter(|(_, q)| q.len() >= 3 && q[q.len() - 3..].windows(2).all(|w| w[0] == w[1]))
        .map(|(p, _)| p.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanDatum, ScalarParams};
    use crate::klr::Gen;
    use crate::rational::int;

    fn a1() -> KlrAlgebra {
        let d = CartanDatum::a1();
        let p = ScalarParams::trivial(&d);
        KlrAlgebra::new(d, p)
    }

    #[test]
    fn coordinates() {
        let alg = a1();
        let b = GradedPieceBasis::enumerate(&alg, &[0, 0], &[0, 0], 0).unwrap();
        assert_eq!(b.len(), 3);
        let e = alg.idempotent(&[0, 0]).unwrap();
        let v = b.coordinatize(&e).unwrap();
        assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 1);
        assert!(b.coordinatize(&alg.zero(2)).unwrap().iter().all(|c| c.is_zero()));
        let b2 = GradedPieceBasis::enumerate(&alg, &[0, 0], &[0, 0], 2).unwrap();
        let x = &alg.gen_x(1, &[0, 0]).unwrap() + &alg.gen_x(2, &[0, 0]).unwrap();
        let v = b2.coordinatize(&x).unwrap();
        assert_eq!(v.iter().filter(|c| **c == int(1)).count(), 2);
        assert!(matches!(b.coordinatize(&x), Err(GradedError::OutOfPiece(_))));
    }

    #[test]
    fn ranks() {
        let alg = a1();
        let e = alg.idempotent(&[0, 0]).unwrap();
        assert_eq!(rank(&alg, std::slice::from_ref(&e)).unwrap(), 1);
        let x = alg.gen_x(1, &[0, 0]).unwrap();
        assert_eq!(rank(&alg, &[x.clone(), x.scale(&int(2))]).unwrap(), 1);
        let b = GradedPieceBasis::enumerate(&alg, &[0, 0], &[0, 0], 0).unwrap();
        let elems: Vec<Element> = b.diagrams.iter().map(|d| alg.diagram(d.clone()).unwrap()).collect();
        assert_eq!(rank(&alg, &elems).unwrap(), 3);
        assert_eq!(rank(&alg, &[e, x]), Err(GradedError::MixedPieces));
    }

    #[test]
    fn echelon_handles_dependent_combinations() {
        let alg = a1();
        let n = |w: &[Gen]| alg.normalize(w, &[0, 0]).unwrap();
        let a = n(&[Gen::X(1), Gen::Psi(1)]);
        let b = n(&[Gen::Psi(1), Gen::X(1)]);
        let c = n(&[Gen::Psi(1), Gen::X(2)]);
        // ψx_1 − ψx_2 lies in the span of x_2ψ − x_1ψ and e
        let mut ech = Echelon::new();
        assert!(ech.insert(&b));
        assert!(ech.insert(&c));
        assert!(ech.insert(&a));
        assert_eq!(ech.rank(), 3);
        assert!(ech.contains(&alg.idempotent(&[0, 0]).unwrap()));
        assert!(!ech.insert(&(&b - &c)));
    }

    #[test]
    fn quotient_edges() {
        let alg = a1();
        let b = GradedPieceBasis::enumerate(&alg, &[0, 0], &[0, 0], 0).unwrap();
        let elems: Vec<Element> = b.diagrams.iter().map(|d| alg.diagram(d.clone()).unwrap()).collect();
        assert_eq!(quotient_dim(&alg, &elems, &elems).unwrap(), 0);
        assert_eq!(quotient_dim(&alg, &elems, &[]).unwrap(), 3);
        assert!(ideal_piece(&alg, &elems, &[], &b.key, 3).unwrap().is_empty());
    }

    #[test]
    fn ideal_contains_generator() {
        let alg = a1();
        let e = alg.idempotent(&[0, 0]).unwrap();
        let x = alg.gen_x(1, &[0, 0]).unwrap();
        let gens = vec![e.clone(), x.clone(), alg.gen_psi(1, &[0, 0]).unwrap()];
        let key = piece_of(&alg, &x).unwrap().unwrap();
        let piece = ideal_piece(&alg, &gens, std::slice::from_ref(&x), &key, 1).unwrap();
        assert_eq!(rank(&alg, &piece).unwrap(), 1);
        let mut ech = Echelon::new();
        for p in &piece {
            ech.insert(p);
        }
        assert!(ech.contains(&x));
        let wider = ideal_piece(&alg, &gens, &[x], &key, 3).unwrap();
        assert!(wider.len() >= piece.len());
    }

    #[test]
    fn word_span_matches_oracle_a1() {
        let alg = a1();
        let seq = [0, 0];
        let gens = vec![
            alg.idempotent(&seq).unwrap(),
            alg.gen_x(1, &seq).unwrap(),
            alg.gen_x(2, &seq).unwrap(),
            alg.gen_psi(1, &seq).unwrap(),
        ];
        let spans = word_span(&alg, &gens, 5).unwrap();
        for d in -2..=4 {
            let key = PieceKey { bottom: seq.to_vec(), top: seq.to_vec(), degree: d };
            assert_eq!(spans.rank(&key) as u64, alg.dim_oracle(&seq, &seq, d).unwrap(), "degree {d}");
        }
    }
}
