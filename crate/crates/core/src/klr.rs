//! The quiver Hecke algebra `R_n(Q)` over a Cartan datum with fixed scalar
//! parameters.
//!
//! Every element is kept in normal form: a combination of basis diagrams
//! `x^a ψ_ŵ e(i)` where `ŵ` is the canonical reduced word of `w` and the
//! dots sit at the top. Products are computed by left-multiplying
//! generators onto normal forms; the only non-trivial step,
//! `ψ_k · ψ_ŵ e(i)`, is memoized per algebra.
//!
//! Conventions: a diagram's permutation `w` maps bottom positions to top
//! positions, so the top sequence is `act(w⁻¹, bottom)`; the dot exponent
//! `a_j` sits on top position `j`.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cartan::{CartanDatum, LabelId, ScalarParams};
use crate::symgroup::{moves_to_canonical, moves_to_front, BraidMove, Perm};
use crate::Coeff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KlrError {
    #[error("unknown label id {0}")]
    UnknownLabel(usize),
    #[error("index {index} out of range for {n} strands")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("elements belong to different algebras or strand counts")]
    ContextMismatch,
    #[error("sequence lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
}

/// One normal-form diagram `x^a ψ_ŵ e(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisDiagram {
    pub bottom: Vec<LabelId>,
    pub perm: Perm,
    pub exps: Vec<u32>,
}

impl BasisDiagram {
    pub fn idempotent(bottom: Vec<LabelId>) -> Self {
        let n = bottom.len();
        BasisDiagram { bottom, perm: Perm::identity(n), exps: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.bottom.len()
    }

    pub fn top(&self) -> Vec<LabelId> {
        self.perm.inverse().act(&self.bottom).expect("diagram lengths agree")
    }

    pub fn crossings(&self) -> usize {
        self.perm.length()
    }

    pub fn degree(&self, datum: &CartanDatum) -> i64 {
        let top = self.top();
        let dots: i64 = self
            .exps
            .iter()
            .zip(&top)
            .map(|(&a, &l)| a as i64 * datum.dot(l, l))
            .sum();
        let cross: i64 = self.perm.inversions().map(|(p, q)| datum.dot(self.bottom[p], self.bottom[q])).sum();
        dots - cross
    }
}

pub(crate) type Terms = BTreeMap<BasisDiagram, Coeff>;

fn add_term(terms: &mut Terms, d: BasisDiagram, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match terms.entry(d) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn add_scaled(into: &mut Terms, from: &Terms, scale: &Coeff) {
    for (d, c) in from {
        add_term(into, d.clone(), c * scale);
    }
}

/// A monomial in the dot variables: `(position (0-based), exponent)` pairs.
type Monomial = Vec<(usize, u32)>;

fn monomial_times(poly: &[(Coeff, Monomial)], terms: &Terms) -> Terms {
    let mut out = Terms::new();
    for (d, c) in terms {
        for (pc, mono) in poly {
            let mut nd = d.clone();
            for &(pos, e) in mono {
                nd.exps[pos] += e;
            }
            add_term(&mut out, nd, c * pc);
        }
    }
    out
}

/// A generator token for [`KlrAlgebra::normalize`]: `x_j` or `ψ_k`
/// (1-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    X(usize),
    Psi(usize),
}

/// A finite combination of basis diagrams with nonzero rational
/// coefficients, all on the same number of strands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    algebra: u64,
    n: usize,
    terms: Terms,
}

impl Element {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebra_id(&self) -> u64 {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisDiagram, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &BasisDiagram) -> Coeff {
        self.terms.get(d).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> Element {
        let mut out = self.with_terms(Terms::new());
        add_scaled(&mut out.terms, &self.terms, c);
        out
    }

    pub fn same_context(&self, other: &Element) -> bool {
        self.algebra == other.algebra && self.n == other.n
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element, KlrError> {
        if !self.same_context(other) {
            return Err(KlrError::ContextMismatch);
        }
        let mut out = self.clone();
        add_scaled(&mut out.terms, &other.terms, &Coeff::one());
        Ok(out)
    }

    /// Distinct `(bottom, top)` boundary pairs in the support.
    pub fn boundaries(&self) -> Vec<(Vec<LabelId>, Vec<LabelId>)> {
        let mut v: Vec<_> = self.terms.keys().map(|d| (d.bottom.clone(), d.top())).collect();
        v.sort();
        v.dedup();
        v
    }

    pub(crate) fn with_terms(&self, terms: Terms) -> Element {
        Element { algebra: self.algebra, n: self.n, terms }
    }
}

impl Add for &Element {
    type Output = Element;

    /// Panics if the operands live in different algebras.
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("adding elements of different algebras")
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.checked_add(&-rhs).expect("subtracting elements of different algebras")
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(&-Coeff::one())
    }
}

type CrossKey = (usize, Perm, Vec<LabelId>);

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// `R_n(Q)` for every `n`, over a fixed datum and parameter set.
pub struct KlrAlgebra {
    id: u64,
    datum: CartanDatum,
    params: ScalarParams,
    cache: Mutex<HashMap<CrossKey, Arc<Terms>>>,
}

impl std::fmt::Debug for KlrAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KlrAlgebra").field("id", &self.id).field("datum", &self.datum).finish()
    }
}

impl KlrAlgebra {
    pub fn new(datum: CartanDatum, params: ScalarParams) -> Self {
        KlrAlgebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            datum,
            params,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn params(&self) -> &ScalarParams {
        &self.params
    }

    /// Number of memoized crossing products.
    pub fn cache_len(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    fn check_labels(&self, seq: &[LabelId]) -> Result<(), KlrError> {
        match seq.iter().find(|&&l| l >= self.datum.len()) {
            Some(&l) => Err(KlrError::UnknownLabel(l)),
            None => Ok(()),
        }
    }

    fn check_context(&self, e: &Element) -> Result<(), KlrError> {
        if e.algebra != self.id {
            return Err(KlrError::ContextMismatch);
        }
        Ok(())
    }

    pub fn zero(&self, n: usize) -> Element {
        Element { algebra: self.id, n, terms: Terms::new() }
    }

    /// The element consisting of a single diagram with coefficient 1.
    pub fn diagram(&self, d: BasisDiagram) -> Result<Element, KlrError> {
        self.check_labels(&d.bottom)?;
        if d.exps.len() != d.bottom.len() {
            return Err(KlrError::LengthMismatch(d.bottom.len(), d.exps.len()));
        }
        if d.perm.degree() != d.bottom.len() {
            return Err(KlrError::LengthMismatch(d.bottom.len(), d.perm.degree()));
        }
        let n = d.n();
        let mut terms = Terms::new();
        terms.insert(d, Coeff::one());
        Ok(Element { algebra: self.id, n, terms })
    }

    /// Builds an element from explicit diagrams and coefficients.
    pub fn from_terms(
        &self,
        n: usize,
        terms: impl IntoIterator<Item = (BasisDiagram, Coeff)>,
    ) -> Result<Element, KlrError> {
        let mut out = self.zero(n);
        for (d, c) in terms {
            self.check_labels(&d.bottom)?;
            if d.n() != n || d.exps.len() != n || d.perm.degree() != n {
                return Err(KlrError::LengthMismatch(n, d.n()));
            }
            add_term(&mut out.terms, d, c);
        }
        Ok(out)
    }

    pub fn idempotent(&self, seq: &[LabelId]) -> Result<Element, KlrError> {
        self.check_labels(seq)?;
        self.diagram(BasisDiagram::idempotent(seq.to_vec()))
    }

    /// `x_j e(seq)`.
    pub fn gen_x(&self, j: usize, seq: &[LabelId]) -> Result<Element, KlrError> {
        let e = self.idempotent(seq)?;
        self.x_times(j, &e)
    }

    /// `ψ_k e(seq)`.
    pub fn gen_psi(&self, k: usize, seq: &[LabelId]) -> Result<Element, KlrError> {
        let e = self.idempotent(seq)?;
        self.psi_times(k, &e)
    }

    /// Left multiplication by `x_j`.
    pub fn x_times(&self, j: usize, e: &Element) -> Result<Element, KlrError> {
        self.check_context(e)?;
        if j == 0 || j > e.n {
            return Err(KlrError::IndexOutOfRange { index: j, n: e.n });
        }
        let mut terms = Terms::new();
        for (d, c) in &e.terms {
            let mut nd = d.clone();
            nd.exps[j - 1] += 1;
            terms.insert(nd, c.clone());
        }
        Ok(e.with_terms(terms))
    }

    /// Left multiplication by `ψ_k`.
    pub fn psi_times(&self, k: usize, e: &Element) -> Result<Element, KlrError> {
        self.check_context(e)?;
        if k == 0 || k >= e.n {
            return Err(KlrError::IndexOutOfRange { index: k, n: e.n });
        }
        Ok(e.with_terms(self.psi_terms(k, &e.terms)))
    }

    /// Left multiplication by a dot monomial given by exponents on top
    /// positions.
    pub fn dots_times(&self, exps: &[u32], e: &Element) -> Result<Element, KlrError> {
        self.check_context(e)?;
        if exps.len() != e.n {
            return Err(KlrError::LengthMismatch(exps.len(), e.n));
        }
        let mut terms = Terms::new();
        for (d, c) in &e.terms {
            let mut nd = d.clone();
            for (a, b) in nd.exps.iter_mut().zip(exps) {
                *a += b;
            }
            terms.insert(nd, c.clone());
        }
        Ok(e.with_terms(terms))
    }

    /// The product `a · b` (`a` on top of `b`).
    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, KlrError> {
        self.check_context(a)?;
        self.check_context(b)?;
        if a.n != b.n {
            return Err(KlrError::ContextMismatch);
        }
        let mut by_top: HashMap<Vec<LabelId>, Terms> = HashMap::new();
        for (d, c) in &b.terms {
            by_top.entry(d.top()).or_default().insert(d.clone(), c.clone());
        }
        let mut out = Terms::new();
        for (d, c) in &a.terms {
            let Some(sub) = by_top.get(&d.bottom) else {
                continue;
            };
            let mut cur = sub.clone();
            for &k in d.perm.canonical_word().iter().rev() {
                cur = self.psi_terms(k, &cur);
            }
            for (d2, c2) in cur {
                let mut nd = d2;
                for (x, y) in nd.exps.iter_mut().zip(&d.exps) {
                    *x += y;
                }
                add_term(&mut out, nd, c * c2);
            }
        }
        Ok(a.with_terms(out))
    }

    /// Normal form of a word of generators applied to `e(bottom)`; the
    /// leftmost token is applied last.
    pub fn normalize(&self, word: &[Gen], bottom: &[LabelId]) -> Result<Element, KlrError> {
        let mut cur = self.idempotent(bottom)?;
        for g in word.iter().rev() {
            cur = match *g {
                Gen::X(j) => self.x_times(j, &cur)?,
                Gen::Psi(k) => self.psi_times(k, &cur)?,
            };
        }
        Ok(cur)
    }

    /// The common degree of all terms: `Ok(None)` for zero,
    /// `Err(NotHomogeneous)` if terms disagree.
    pub fn degree_of(&self, e: &Element) -> Result<Option<i64>, NotHomogeneous> {
        let mut deg = None;
        for d in e.terms.keys() {
            let dd = d.degree(&self.datum);
            match deg {
                None => deg = Some(dd),
                Some(x) if x != dd => return Err(NotHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// `ψ_w e(seq)` along the canonical word of `w`.
    pub fn psi_w(&self, w: &Perm, seq: &[LabelId]) -> Result<Element, KlrError> {
        if w.degree() != seq.len() {
            return Err(KlrError::LengthMismatch(w.degree(), seq.len()));
        }
        let word: Vec<Gen> = w.canonical_word().into_iter().map(Gen::Psi).collect();
        self.normalize(&word, seq)
    }

    /// `e_n = x_1^{n-1} x_2^{n-2} ⋯ x_{n-1} ψ_{w_0} e(i,…,i)`.
    pub fn nilhecke_en(&self, n: usize, label: LabelId) -> Result<Element, KlrError> {
        self.check_labels(&[label])?;
        let mut word = Vec::new();
        for j in 1..n {
            word.extend(std::iter::repeat_n(Gen::X(j), n - j));
        }
        word.extend(Perm::longest(n).canonical_word().into_iter().map(Gen::Psi));
        self.normalize(&word, &vec![label; n])
    }

    /// If `e_n² = c·e_n`, returns `c` (equal to 1 exactly when `e_n` is an
    /// idempotent).
    pub fn nilhecke_scaling(&self, n: usize, label: LabelId) -> Result<Option<Coeff>, KlrError> {
        let e = self.nilhecke_en(n, label)?;
        let sq = self.mul(&e, &e)?;
        let (d, c) = e.terms().next().expect("e_n is a single diagram");
        let ratio = sq.coeff(d) / c;
        Ok((sq == e.scale(&ratio)).then_some(ratio))
    }

    /// Counts the basis diagrams with bottom `bottom`, top `top` and degree
    /// `degree`, by enumerating permutations and counting dot vectors.
    pub fn dim_oracle(&self, bottom: &[LabelId], top: &[LabelId], degree: i64) -> Result<u64, KlrError> {
        if bottom.len() != top.len() {
            return Err(KlrError::LengthMismatch(bottom.len(), top.len()));
        }
        self.check_labels(bottom)?;
        self.check_labels(top)?;
        let n = bottom.len();
        let weights: Vec<i64> = top.iter().map(|&l| self.datum.dot(l, l)).collect();
        let mut total = 0u64;
        for w in Perm::all(n) {
            let winv = w.inverse();
            if (0..n).any(|m| bottom[winv.image(m)] != top[m]) {
                continue;
            }
            let cross: i64 = w.inversions().map(|(p, q)| self.datum.dot(bottom[p], bottom[q])).sum();
            let rest = degree + cross;
            if rest < 0 {
                continue;
            }
            total += count_weighted_compositions(&weights, rest as usize);
        }
        Ok(total)
    }

    /// Every sequence in `I^n`, lexicographically.
    pub fn sequences(&self, n: usize) -> Vec<Vec<LabelId>> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|s| {
                    (0..self.datum.len()).map(move |l| {
                        let mut t = s.clone();
                        t.push(l);
                        t
                    })
                })
                .collect();
        }
        out
    }

    /// Horizontal juxtaposition `a ⊗ b`.
    pub fn tensor(&self, a: &Element, b: &Element) -> Result<Element, KlrError> {
        self.check_context(a)?;
        self.check_context(b)?;
        let mut terms = Terms::new();
        for (da, ca) in &a.terms {
            for (db, cb) in &b.terms {
                let d = BasisDiagram {
                    bottom: da.bottom.iter().chain(&db.bottom).copied().collect(),
                    perm: da.perm.direct_sum(&db.perm),
                    exps: da.exps.iter().chain(&db.exps).copied().collect(),
                };
                add_term(&mut terms, d, ca * cb);
            }
        }
        Ok(Element { algebra: self.id, n: a.n + b.n, terms })
    }

    // ---- rewriting core -------------------------------------------------

    fn psi_terms(&self, k: usize, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for (d, c) in terms {
            let top = d.top();
            let (p, q) = (d.exps[k - 1], d.exps[k]);
            let crossed = self.cross(k, &d.perm, &d.bottom);
            let mut swapped = d.exps.clone();
            swapped.swap(k - 1, k);
            for (d2, c2) in crossed.iter() {
                let mut nd = d2.clone();
                for (x, y) in nd.exps.iter_mut().zip(&swapped) {
                    *x += y;
                }
                add_term(&mut out, nd, c * c2);
            }
            // ψ_k f = (s_k f) ψ_k + r ∂_k f  on equal labels
            if top[k - 1] == top[k] && p != q {
                let r = self.params.r(top[k - 1]);
                let (lo, hi, sign) = if p > q { (q, p, 1) } else { (p, q, -1) };
                let coef = c * r * crate::rational::int(sign);
                for u in 0..hi - lo {
                    let mut nd = d.clone();
                    nd.exps[k - 1] = lo + u;
                    nd.exps[k] = hi - 1 - u;
                    add_term(&mut out, nd, coef.clone());
                }
            }
        }
        out
    }

    /// Normal form of `ψ_k ψ_ŵ e(bottom)`.
    fn cross(&self, k: usize, w: &Perm, bottom: &[LabelId]) -> Arc<Terms> {
        let key: CrossKey = (k, w.clone(), bottom.to_vec());
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let n = w.degree();
        let canon = w.canonical_word();
        let result = if !w.has_left_descent(k) {
            let mut word = Vec::with_capacity(canon.len() + 1);
            word.push(k);
            word.extend_from_slice(&canon);
            self.reduced_word_nf(n, &word, bottom)
        } else {
            // rewrite ψ_ŵ as ψ_k ψ_t + corrections, then ψ_k² by the quadratic relation
            let (moves, fronted) = moves_to_front(&canon, k);
            let (_, corr) = self.apply_moves(n, &canon, &moves, bottom);
            let tail = &fronted[1..];
            let base = self.word_nf(n, tail, bottom);
            let mid = word_top(n, tail, bottom);
            let mut res = monomial_times(&self.quadratic(k, &mid), &base);
            add_scaled(&mut res, &self.psi_terms(k, &corr), &Coeff::one());
            res
        };
        let result = Arc::new(result);
        self.cache.lock().unwrap().insert(key, result.clone());
        result
    }

    /// Normal form of `ψ_word e(bottom)` for an arbitrary word.
    fn word_nf(&self, n: usize, word: &[usize], bottom: &[LabelId]) -> Terms {
        let mut cur = Terms::new();
        cur.insert(BasisDiagram::idempotent(bottom.to_vec()), Coeff::one());
        for &k in word.iter().rev() {
            cur = self.psi_terms(k, &cur);
        }
        debug_assert!(cur.keys().all(|d| d.n() == n));
        cur
    }

    /// Normal form of `ψ_word e(bottom)` for a reduced word, via braid moves
    /// to the canonical word.
    fn reduced_word_nf(&self, n: usize, word: &[usize], bottom: &[LabelId]) -> Terms {
        let moves = moves_to_canonical(n, word).expect("word indices within range");
        let (fin, mut corr) = self.apply_moves(n, word, &moves, bottom);
        let perm = Perm::from_word(n, &fin).expect("word indices within range");
        add_term(&mut corr, BasisDiagram { bottom: bottom.to_vec(), perm, exps: vec![0; n] }, Coeff::one());
        corr
    }

    /// Applies the moves to `word`, returning the final word and the
    /// accumulated correction: `ψ_word e = ψ_final e + correction`.
    fn apply_moves(&self, n: usize, word: &[usize], moves: &[BraidMove], bottom: &[LabelId]) -> (Vec<usize>, Terms) {
        let mut cur = word.to_vec();
        let mut corr = Terms::new();
        for &m in moves {
            if let BraidMove::Braid(p) = m {
                let (a, b) = (cur[p], cur[p + 1]);
                let j = a.min(b);
                let below = &cur[p + 3..];
                let rhs = self.braid_rhs(j, &word_top(n, below, bottom));
                if !rhs.is_empty() {
                    let inner = self.word_nf(n, below, bottom);
                    let mut t = monomial_times(&rhs, &inner);
                    for &l in cur[..p].iter().rev() {
                        t = self.psi_terms(l, &t);
                    }
                    let sign = crate::rational::int(if a < b { 1 } else { -1 });
                    add_scaled(&mut corr, &t, &sign);
                }
            }
            m.apply(&mut cur);
        }
        (cur, corr)
    }

    /// `ψ_k² e(seq)` as a polynomial.
    fn quadratic(&self, k: usize, seq: &[LabelId]) -> Vec<(Coeff, Monomial)> {
        let (a, b) = (seq[k - 1], seq[k]);
        let (p, q) = (k - 1, k);
        if a == b {
            return Vec::new();
        }
        if self.datum.dot(a, b) == 0 {
            return vec![(self.params.t(a, b).clone(), Vec::new())];
        }
        let mut poly = vec![
            (self.params.t(a, b).clone(), vec![(p, (-self.datum.cartan(a, b)) as u32)]),
            (self.params.t(b, a).clone(), vec![(q, (-self.datum.cartan(b, a)) as u32)]),
        ];
        for (sp, sq, v) in self.params.s_terms(a, b) {
            poly.push((v.clone(), vec![(p, sp), (q, sq)]));
        }
        poly
    }

    /// `(ψ_j ψ_{j+1} ψ_j − ψ_{j+1} ψ_j ψ_{j+1}) e(seq)` as a polynomial.
    fn braid_rhs(&self, j: usize, seq: &[LabelId]) -> Vec<(Coeff, Monomial)> {
        let (a, b, c) = (seq[j - 1], seq[j], seq[j + 1]);
        let cab = self.datum.cartan(a, b);
        if a != c || cab + 1 > 0 {
            return Vec::new();
        }
        let r = self.params.r(a);
        let t = self.params.t(a, b);
        let m = (-cab - 1) as u32;
        let mut poly = Vec::new();
        for d1 in 0..=m {
            poly.push((r * t, vec![(j - 1, d1), (j + 1, m - d1)]));
        }
        for (p, q, s) in self.params.s_terms(a, b) {
            for k1 in 0..p {
                poly.push((r * s, vec![(j - 1, k1), (j, q), (j + 1, p - 1 - k1)]));
            }
        }
        poly
    }
}

/// Top sequence of `ψ_word e(bottom)`.
fn word_top(n: usize, word: &[usize], bottom: &[LabelId]) -> Vec<LabelId> {
    Perm::from_word(n, word)
        .expect("word indices within range")
        .inverse()
        .act(bottom)
        .expect("lengths agree")
}

/// Number of `a ∈ Z_{≥0}^k` with `Σ a_m w_m = total` (all weights positive).
fn count_weighted_compositions(weights: &[i64], total: usize) -> u64 {
    let mut ways = vec![0u64; total + 1];
    ways[0] = 1;
    for &w in weights {
        let w = w as usize;
        for s in w..=total {
            ways[s] += ways[s - w];
        }
    }
    ways[total]
}

/// Marker for elements whose terms have different degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("element is not homogeneous")]
pub struct NotHomogeneous;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{ExtendedDatum, SKey};
    use crate::rational::int;

    fn a1() -> KlrAlgebra {
        let d = CartanDatum::a1();
        let p = ScalarParams::trivial(&d);
        KlrAlgebra::new(d, p)
    }

    fn a2() -> KlrAlgebra {
        let d = CartanDatum::a2();
        let p = ScalarParams::trivial(&d);
        KlrAlgebra::new(d, p)
    }

    fn ext_a1() -> (ExtendedDatum, KlrAlgebra) {
        let x = ExtendedDatum::new(&CartanDatum::a1()).unwrap();
        let p = x.specialized_params(&BTreeMap::new()).unwrap();
        let alg = KlrAlgebra::new(x.datum().clone(), p);
        (x, alg)
    }

    fn dg(bottom: &[usize], perm: &[usize], exps: &[u32]) -> BasisDiagram {
        BasisDiagram {
            bottom: bottom.to_vec(),
            perm: Perm::from_one_line(perm).unwrap(),
            exps: exps.to_vec(),
        }
    }

    fn elem(alg: &KlrAlgebra, n: usize, terms: &[(i64, BasisDiagram)]) -> Element {
        alg.from_terms(n, terms.iter().map(|(c, d)| (d.clone(), int(*c)))).unwrap()
    }

    #[test]
    fn idempotents() {
        let alg = a2();
        let e = alg.idempotent(&[0, 1]).unwrap();
        assert_eq!(alg.degree_of(&e), Ok(Some(0)));
        let unit = alg.idempotent(&[]).unwrap();
        assert_eq!(alg.mul(&unit, &unit).unwrap(), unit);
        assert!(matches!(alg.idempotent(&[5]), Err(KlrError::UnknownLabel(5))));
    }

    #[test]
    fn generator_degrees() {
        let alg = a1();
        assert_eq!(alg.degree_of(&alg.gen_x(1, &[0]).unwrap()), Ok(Some(2)));
        assert_eq!(alg.degree_of(&alg.gen_psi(1, &[0, 0]).unwrap()), Ok(Some(-2)));
        let (x, ext) = ext_a1();
        assert_eq!(ext.degree_of(&ext.gen_psi(1, &[x.bar(0), 0]).unwrap()), Ok(Some(1)));
        assert!(matches!(alg.gen_x(2, &[0]), Err(KlrError::IndexOutOfRange { .. })));
        assert!(matches!(alg.gen_psi(1, &[0]), Err(KlrError::IndexOutOfRange { .. })));
    }

    #[test]
    fn psi_squared_same_label_vanishes() {
        let alg = a1();
        let psi = alg.gen_psi(1, &[0, 0]).unwrap();
        assert!(alg.mul(&psi, &psi).unwrap().is_zero());
    }

    #[test]
    fn dot_slide_example() {
        let alg = a1();
        let psi = alg.gen_psi(1, &[0, 0]).unwrap();
        let x1 = alg.gen_x(1, &[0, 0]).unwrap();
        let got = alg.mul(&psi, &x1).unwrap();
        let want = elem(&alg, 2, &[(1, dg(&[0, 0], &[2, 1], &[0, 1])), (1, dg(&[0, 0], &[1, 2], &[0, 0]))]);
        assert_eq!(got, want);
        let via_word = alg.normalize(&[Gen::Psi(1), Gen::X(1)], &[0, 0]).unwrap();
        assert_eq!(via_word, want);
    }

    #[test]
    fn psi_squared_a2() {
        let alg = a2();
        let psi = alg.gen_psi(1, &[0, 1]).unwrap();
        let top = alg.gen_psi(1, &[1, 0]).unwrap();
        let got = alg.mul(&top, &psi).unwrap();
        let want = elem(&alg, 2, &[(1, dg(&[0, 1], &[1, 2], &[1, 0])), (1, dg(&[0, 1], &[1, 2], &[0, 1]))]);
        assert_eq!(got, want);
    }

    #[test]
    fn psi_squared_dashed_solid() {
        let (x, alg) = ext_a1();
        let b = x.bar(0);
        let got = alg.normalize(&[Gen::Psi(1), Gen::Psi(1)], &[b, 0]).unwrap();
        let want = elem(&alg, 2, &[(-1, dg(&[b, 0], &[1, 2], &[1, 0])), (1, dg(&[b, 0], &[1, 2], &[0, 1]))]);
        assert_eq!(got, want);
    }

    #[test]
    fn braid_with_s_parameter() {
        let d = CartanDatum::affine_a1();
        let mut s = BTreeMap::new();
        s.insert(SKey { i: 0, j: 1, p: 1, q: 1 }, int(1));
        s.insert(SKey { i: 1, j: 0, p: 1, q: 1 }, int(1));
        let p = ScalarParams::new(&d, &BTreeMap::new(), &BTreeMap::new(), &s).unwrap();
        let alg = KlrAlgebra::new(d, p);
        let seq = [0, 1, 0];
        let lhs = alg.normalize(&[Gen::Psi(1), Gen::Psi(2), Gen::Psi(1)], &seq).unwrap();
        let rhs = alg.normalize(&[Gen::Psi(2), Gen::Psi(1), Gen::Psi(2)], &seq).unwrap();
        // hand expansion: r t (x_1 + x_3) + r s^{11} x_2 with c(1,2) = -2
        let want = elem(
            &alg,
            3,
            &[
                (1, dg(&seq, &[1, 2, 3], &[1, 0, 0])),
                (1, dg(&seq, &[1, 2, 3], &[0, 0, 1])),
                (1, dg(&seq, &[1, 2, 3], &[0, 1, 0])),
            ],
        );
        assert_eq!(&lhs - &rhs, want);
    }

    #[test]
    fn normalize_examples() {
        let alg = a1();
        let e = alg.normalize(&[], &[0, 0]).unwrap();
        assert_eq!(e, alg.idempotent(&[0, 0]).unwrap());
        let w0 = alg.normalize(&[Gen::Psi(1), Gen::Psi(2), Gen::Psi(1)], &[0, 0, 0]).unwrap();
        assert_eq!(w0, elem(&alg, 3, &[(1, dg(&[0, 0, 0], &[3, 2, 1], &[0, 0, 0]))]));
        let other = alg.normalize(&[Gen::Psi(2), Gen::Psi(1), Gen::Psi(2)], &[0, 0, 0]).unwrap();
        assert_eq!(w0, other);
        assert!(matches!(alg.normalize(&[Gen::Psi(3)], &[0, 0, 0]), Err(KlrError::IndexOutOfRange { .. })));
    }

    #[test]
    fn degree_examples() {
        let alg = a1();
        let x1psi = alg.normalize(&[Gen::X(1), Gen::Psi(1)], &[0, 0]).unwrap();
        assert_eq!(alg.degree_of(&x1psi), Ok(Some(0)));
        let mixed = &alg.gen_x(1, &[0]).unwrap() + &alg.idempotent(&[0]).unwrap();
        assert_eq!(alg.degree_of(&mixed), Err(NotHomogeneous));
        assert_eq!(alg.degree_of(&alg.zero(2)), Ok(None));
    }

    #[test]
    fn psi_w_examples() {
        let alg = a1();
        assert_eq!(alg.psi_w(&Perm::identity(2), &[0, 0]).unwrap(), alg.idempotent(&[0, 0]).unwrap());
        assert_eq!(
            alg.psi_w(&Perm::simple(2, 1).unwrap(), &[0, 0]).unwrap(),
            alg.gen_psi(1, &[0, 0]).unwrap()
        );
        let w0 = alg.psi_w(&Perm::longest(3), &[0, 0, 0]).unwrap();
        assert_eq!(w0.len(), 1);
        assert!(matches!(alg.psi_w(&Perm::identity(2), &[0]), Err(KlrError::LengthMismatch(..))));
    }

    #[test]
    fn nilhecke_small() {
        let alg = a1();
        assert_eq!(alg.nilhecke_en(1, 0).unwrap(), alg.idempotent(&[0]).unwrap());
        let e2 = alg.nilhecke_en(2, 0).unwrap();
        assert_eq!(e2, elem(&alg, 2, &[(1, dg(&[0, 0], &[2, 1], &[1, 0]))]));
        assert_eq!(alg.mul(&e2, &e2).unwrap(), e2);
        let e3 = alg.nilhecke_en(3, 0).unwrap();
        assert_eq!(alg.degree_of(&e3), Ok(Some(0)));
        assert_eq!(alg.mul(&e3, &e3).unwrap(), e3);
    }

    #[test]
    fn nilhecke_scaling_with_r() {
        let d = CartanDatum::a1();
        let mut r = BTreeMap::new();
        r.insert(0, int(3));
        let p = ScalarParams::new(&d, &BTreeMap::new(), &r, &BTreeMap::new()).unwrap();
        let alg = KlrAlgebra::new(d, p);
        assert_eq!(alg.nilhecke_scaling(2, 0).unwrap(), Some(int(3)));
        assert_eq!(alg.nilhecke_scaling(1, 0).unwrap(), Some(int(1)));
    }

    #[test]
    fn dim_oracle_examples() {
        let alg = a1();
        assert_eq!(alg.dim_oracle(&[0, 0], &[0, 0], 0).unwrap(), 3);
        assert_eq!(alg.dim_oracle(&[0], &[0], 4).unwrap(), 1);
        let a = a2();
        for d in -4..6 {
            assert_eq!(a.dim_oracle(&[0, 0], &[0, 1], d).unwrap(), 0);
        }
        assert!(alg.dim_oracle(&[0], &[0, 0], 0).is_err());
    }

    #[test]
    fn mismatched_idempotents_annihilate() {
        let alg = a2();
        let a = alg.idempotent(&[0, 1]).unwrap();
        let b = alg.idempotent(&[1, 0]).unwrap();
        assert!(alg.mul(&a, &b).unwrap().is_zero());
        assert_eq!(alg.mul(&a, &a).unwrap(), a);
    }

    #[test]
    fn context_mismatch() {
        let a = a1();
        let b = a1();
        let ea = a.idempotent(&[0]).unwrap();
        let eb = b.idempotent(&[0]).unwrap();
        assert_eq!(a.mul(&ea, &eb), Err(KlrError::ContextMismatch));
        let e2 = a.idempotent(&[0, 0]).unwrap();
        assert_eq!(a.mul(&ea, &e2), Err(KlrError::ContextMismatch));
    }

    #[test]
    fn tensor_agrees_with_product_of_embeddings() {
        let alg = a2();
        let e2 = alg.normalize(&[Gen::X(1), Gen::Psi(1)], &[0, 0]).unwrap();
        let psi = alg.normalize(&[Gen::Psi(1), Gen::X(2)], &[1, 0]).unwrap();
        let t = alg.tensor(&e2, &psi).unwrap();
        let left = alg.tensor(&e2, &alg.idempotent(&[0, 1]).unwrap()).unwrap();
        let right = alg.tensor(&alg.idempotent(&[0, 0]).unwrap(), &psi).unwrap();
        assert_eq!(alg.mul(&left, &right).unwrap(), t);
        let word = alg
            .normalize(&[Gen::X(1), Gen::Psi(1), Gen::Psi(3), Gen::X(4)], &[0, 0, 1, 0])
            .unwrap();
        assert_eq!(word, t);
    }

    #[test]
    fn weighted_compositions() {
        assert_eq!(count_weighted_compositions(&[2, 2], 4), 3);
        assert_eq!(count_weighted_compositions(&[2, 4], 4), 2);
        assert_eq!(count_weighted_compositions(&[2], 3), 0);
        assert_eq!(count_weighted_compositions(&[], 0), 1);
    }
}
