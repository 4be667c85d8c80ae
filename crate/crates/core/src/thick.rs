//! Thick dashed strands and the subalgebra `S_C(λ,ν)`.
//!
//! A thick strand with multiplicity vector `λ_k` expands to consecutive
//! blocks of barred strands, one block per color in declaration order,
//! carrying the nilHecke idempotent `e_n` of that block. Every thick
//! element is stored as its ambient expansion; products and equality are
//! delegated to [`KlrAlgebra`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::cartan::{ExtendedDatum, LabelId};
use crate::klr::{Element, KlrAlgebra, KlrError};
use crate::rational::int;
use crate::Coeff;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThickError {
    #[error("thick label has no nonzero multiplicity")]
    EmptyThickLabel,
    #[error("label id {0} is not a solid label of the base datum")]
    NotSolid(LabelId),
    #[error("index {index} out of range (1..={max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("color {color} does not occur in thick label {k}")]
    ColorAbsent { k: usize, color: LabelId },
    #[error("sequence {0} is not in Seq(λ,ν)")]
    NotInSeq(String),
    #[error("elements belong to different thick contexts")]
    ContextMismatch,
    #[error("algebra is not built over the extended datum")]
    DatumMismatch,
    #[error(transparent)]
    Klr(#[from] KlrError),
}

/// A nonzero multiplicity vector `λ_k = Σ λ_k^{(i)} ī`, keyed by solid id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiplicity(BTreeMap<LabelId, u32>);

impl Multiplicity {
    pub fn new(entries: impl IntoIterator<Item = (LabelId, u32)>) -> Result<Self, ThickError> {
        let mut map = BTreeMap::new();
        for (i, m) in entries {
            if m > 0 {
                *map.entry(i).or_insert(0) += m;
            }
        }
        if map.is_empty() {
            return Err(ThickError::EmptyThickLabel);
        }
        Ok(Multiplicity(map))
    }

    pub fn single(color: LabelId, m: u32) -> Result<Self, ThickError> {
        Self::new([(color, m)])
    }

    /// `|λ_k|`.
    pub fn size(&self) -> usize {
        self.0.values().map(|&m| m as usize).sum()
    }

    pub fn get(&self, color: LabelId) -> u32 {
        self.0.get(&color).copied().unwrap_or(0)
    }

    /// Colors with nonzero multiplicity, in declaration order.
    pub fn colors(&self) -> impl Iterator<Item = (LabelId, u32)> + '_ {
        self.0.iter().map(|(&i, &m)| (i, m))
    }

    /// Every multiplicity vector over `n_colors` colors with total in
    /// `1..=max_total`.
    pub fn all_up_to(n_colors: usize, max_total: u32) -> Vec<Multiplicity> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n_colors];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Multiplicity>) {
            if pos == cur.len() {
                if let Ok(m) = Multiplicity::new(cur.iter().copied().enumerate()) {
                    out.push(m);
                }
                return;
            }
            for v in 0..=left {
                cur[pos] = v;
                rec(pos + 1, left - v, cur, out);
            }
            cur[pos] = 0;
        }
        rec(0, max_total, &mut cur, &mut out);
        out.sort_by_key(|m| (m.size(), m.clone()));
        out
    }
}

/// One entry of a mixed sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThickLabel {
    Solid(LabelId),
    /// The `k`-th (0-based) thick label of `λ`.
    Thick(usize),
}

impl ThickLabel {
    pub fn is_thick(self) -> bool {
        matches!(self, ThickLabel::Thick(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThickSeq(pub Vec<ThickLabel>);

impl ThickSeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The sequence with entries `j`, `j+1` (1-based) exchanged.
    pub fn swapped(&self, j: usize) -> ThickSeq {
        let mut v = self.0.clone();
        v.swap(j - 1, j);
        ThickSeq(v)
    }
}

/// Per-color block of a thick strand inside the ambient expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymmetricBlock {
    pub color: LabelId,
    /// First ambient position, 0-based.
    pub start: usize,
    pub len: usize,
}

/// How `Ψ_j` acts on a pair of neighbouring entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingKind {
    SolidSolid,
    ThickSolid,
    SolidThick,
    ThickThick,
}

/// All sequences with the thick labels `0..m` in order and each entry of
/// `nu` used once. With `ordered_nu` the solid entries keep the order of
/// `nu`; otherwise every distinct arrangement of the multiset appears.
pub fn enumerate_seq(lambda: &[Multiplicity], nu: &[LabelId], ordered_nu: bool) -> Result<Vec<ThickSeq>, ThickError> {
    if lambda.iter().any(|m| m.size() == 0) {
        return Err(ThickError::EmptyThickLabel);
    }
    let m = lambda.len();
    let total = m + nu.len();
    let solid_orders: Vec<Vec<LabelId>> = if ordered_nu {
        vec![nu.to_vec()]
    } else {
        distinct_permutations(nu)
    };
    let mut out = Vec::new();
    for slots in combinations(total, m) {
        for order in &solid_orders {
            let mut seq = Vec::with_capacity(total);
            let (mut k, mut s) = (0, 0);
            for pos in 0..total {
                if slots.contains(&pos) {
                    seq.push(ThickLabel::Thick(k));
                    k += 1;
                } else {
                    seq.push(ThickLabel::Solid(order[s]));
                    s += 1;
                }
            }
            out.push(ThickSeq(seq));
        }
    }
    Ok(out)
}

fn distinct_permutations(items: &[LabelId]) -> Vec<Vec<LabelId>> {
    fn rec(left: &mut BTreeMap<LabelId, usize>, cur: &mut Vec<LabelId>, n: usize, out: &mut Vec<Vec<LabelId>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let keys: Vec<LabelId> = left.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect();
        for k in keys {
            *left.get_mut(&k).unwrap() -= 1;
            cur.push(k);
            rec(left, cur, n, out);
            cur.pop();
            *left.get_mut(&k).unwrap() += 1;
        }
    }
    let mut counts = BTreeMap::new();
    for &i in items {
        *counts.entry(i).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    rec(&mut counts, &mut Vec::new(), items.len(), &mut out);
    out
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// An element of `S_C(λ,ν)`, held as its ambient expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThickElement {
    context: u64,
    ambient: Element,
}

impl ThickElement {
    pub fn ambient(&self) -> &Element {
        &self.ambient
    }

    pub fn context_id(&self) -> u64 {
        self.context
    }

    pub fn is_zero(&self) -> bool {
        self.ambient.is_zero()
    }

    pub fn scale(&self, c: &Coeff) -> ThickElement {
        ThickElement { context: self.context, ambient: self.ambient.scale(c) }
    }

    pub fn checked_add(&self, other: &ThickElement) -> Result<ThickElement, ThickError> {
        if self.context != other.context {
            return Err(ThickError::ContextMismatch);
        }
        let ambient = self.ambient.checked_add(&other.ambient)?;
        Ok(ThickElement { context: self.context, ambient })
    }
}

impl std::ops::Add for &ThickElement {
    type Output = ThickElement;

    fn add(self, rhs: &ThickElement) -> ThickElement {
        self.checked_add(rhs).expect("adding elements of different thick contexts")
    }
}

impl std::ops::Sub for &ThickElement {
    type Output = ThickElement;

    fn sub(self, rhs: &ThickElement) -> ThickElement {
        self.checked_add(&rhs.scale(&-Coeff::one()))
            .expect("subtracting elements of different thick contexts")
    }
}

static NEXT_CONTEXT_ID: AtomicU64 = AtomicU64::new(1);

/// `S_C(λ,ν)` inside `R_{|λ|+ℓ}` over the extended datum.
pub struct ThickContext {
    id: u64,
    ext: ExtendedDatum,
    alg: Arc<KlrAlgebra>,
    lambda: Vec<Multiplicity>,
    nu: Vec<LabelId>,
    seqs: Vec<ThickSeq>,
    index: HashMap<ThickSeq, usize>,
    by_expansion: HashMap<Vec<LabelId>, usize>,
    thick_idem: Vec<Element>,
    seq_idem: Vec<Element>,
}

impl fmt::Debug for ThickContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ThickContext")
            .field("lambda", &self.lambda)
            .field("nu", &self.nu)
            .field("seqs", &self.seqs.len())
            .finish()
    }
}

impl ThickContext {
    pub fn new(
        ext: ExtendedDatum,
        alg: Arc<KlrAlgebra>,
        lambda: Vec<Multiplicity>,
        nu: Vec<LabelId>,
        ordered_nu: bool,
    ) -> Result<Self, ThickError> {
        if alg.datum() != ext.datum() {
            return Err(ThickError::DatumMismatch);
        }
        let n_base = ext.base_len();
        for m in &lambda {
            if let Some((c, _)) = m.colors().find(|&(c, _)| c >= n_base) {
                return Err(ThickError::NotSolid(c));
            }
        }
        if let Some(&bad) = nu.iter().find(|&&i| i >= n_base) {
            return Err(ThickError::NotSolid(bad));
        }
        let seqs = enumerate_seq(&lambda, &nu, ordered_nu)?;
        let mut ctx = ThickContext {
            id: NEXT_CONTEXT_ID.fetch_add(1, Ordering::Relaxed),
            ext,
            alg,
            lambda,
            nu,
            index: HashMap::new(),
            by_expansion: HashMap::new(),
            thick_idem: Vec::new(),
            seq_idem: Vec::new(),
            seqs: Vec::new(),
        };
        ctx.thick_idem = (0..ctx.lambda.len())
            .map(|k| ctx.build_thick_idempotent(k))
            .collect::<Result<_, _>>()?;
        for (pos, s) in seqs.iter().enumerate() {
            ctx.index.insert(s.clone(), pos);
            ctx.by_expansion.insert(ctx.expand(s), pos);
            let mut e = ctx.alg.idempotent(&[])?;
            for &l in &s.0 {
                let piece = match l {
                    ThickLabel::Solid(i) => ctx.alg.idempotent(&[i])?,
                    ThickLabel::Thick(k) => ctx.thick_idem[k].clone(),
                };
                e = ctx.alg.tensor(&e, &piece)?;
            }
            ctx.seq_idem.push(e);
        }
        ctx.seqs = seqs;
        Ok(ctx)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn algebra(&self) -> &Arc<KlrAlgebra> {
        &self.alg
    }

    pub fn extended(&self) -> &ExtendedDatum {
        &self.ext
    }

    pub fn lambda(&self) -> &[Multiplicity] {
        &self.lambda
    }

    pub fn nu(&self) -> &[LabelId] {
        &self.nu
    }

    pub fn seqs(&self) -> &[ThickSeq] {
        &self.seqs
    }

    pub fn seq_index(&self, s: &ThickSeq) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Number of ambient strands `|λ| + ℓ`.
    pub fn ambient_len(&self) -> usize {
        self.lambda.iter().map(Multiplicity::size).sum::<usize>() + self.nu.len()
    }

    fn check_seq(&self, s: &ThickSeq) -> Result<usize, ThickError> {
        self.seq_index(s).ok_or_else(|| ThickError::NotInSeq(self.seq_name(s)))
    }

    pub fn seq_name(&self, s: &ThickSeq) -> String {
        let parts: Vec<String> = s
            .0
            .iter()
            .map(|&l| match l {
                ThickLabel::Solid(i) => self.ext.datum().label(i).to_string(),
                ThickLabel::Thick(k) => format!("L{}", k + 1),
            })
            .collect();
        format!("({})", parts.join(","))
    }

    /// The ambient label sequence.
    pub fn expand(&self, s: &ThickSeq) -> Vec<LabelId> {
        let mut out = Vec::new();
        for &l in &s.0 {
            match l {
                ThickLabel::Solid(i) => out.push(i),
                ThickLabel::Thick(k) => {
                    for (c, m) in self.lambda[k].colors() {
                        out.extend(std::iter::repeat_n(self.ext.bar(c), m as usize));
                    }
                }
            }
        }
        out
    }

    /// The sequence whose expansion is `labels`, if any.
    pub fn seq_of_expansion(&self, labels: &[LabelId]) -> Option<&ThickSeq> {
        self.by_expansion.get(labels).map(|&p| &self.seqs[p])
    }

    /// First ambient position (0-based) of every entry.
    fn offsets(&self, s: &ThickSeq) -> Vec<usize> {
        let mut out = Vec::with_capacity(s.len());
        let mut pos = 0;
        for &l in &s.0 {
            out.push(pos);
            pos += self.entry_size(l);
        }
        out
    }

    fn entry_size(&self, l: ThickLabel) -> usize {
        match l {
            ThickLabel::Solid(_) => 1,
            ThickLabel::Thick(k) => self.lambda[k].size(),
        }
    }

    /// Color blocks of thick label `k` (0-based) inside `s`.
    pub fn blocks(&self, k: usize, s: &ThickSeq) -> Vec<SymmetricBlock> {
        let offsets = self.offsets(s);
        let Some(entry) = s.0.iter().position(|&l| l == ThickLabel::Thick(k)) else {
            return Vec::new();
        };
        let mut start = offsets[entry];
        let mut out = Vec::new();
        for (color, m) in self.lambda[k].colors() {
            out.push(SymmetricBlock { color, start, len: m as usize });
            start += m as usize;
        }
        out
    }

    fn wrap(&self, ambient: Element) -> ThickElement {
        ThickElement { context: self.id, ambient }
    }

    pub fn zero(&self) -> ThickElement {
        self.wrap(self.alg.zero(self.ambient_len()))
    }

    fn check(&self, e: &ThickElement) -> Result<(), ThickError> {
        if e.context != self.id {
            return Err(ThickError::ContextMismatch);
        }
        Ok(())
    }

    /// `e_{λ_k}` on `|λ_k|` strands (`k` 0-based).
    pub fn thick_idempotent(&self, k: usize) -> Result<&Element, ThickError> {
        self.thick_idem
            .get(k)
            .ok_or(ThickError::IndexOutOfRange { index: k + 1, max: self.lambda.len() })
    }

    fn build_thick_idempotent(&self, k: usize) -> Result<Element, ThickError> {
        let mut e = self.alg.idempotent(&[])?;
        for (c, m) in self.lambda[k].colors() {
            let block = self.alg.nilhecke_en(m as usize, self.ext.bar(c))?;
            e = self.alg.tensor(&e, &block)?;
        }
        Ok(e)
    }

    pub fn seq_idempotent(&self, s: &ThickSeq) -> Result<ThickElement, ThickError> {
        let pos = self.check_seq(s)?;
        Ok(self.wrap(self.seq_idem[pos].clone()))
    }

    /// `y_j e(s)`: the dot on a solid entry, zero on a thick one.
    pub fn y_dot(&self, j: usize, s: &ThickSeq) -> Result<ThickElement, ThickError> {
        let pos = self.check_seq(s)?;
        if j == 0 || j > s.len() {
            return Err(ThickError::IndexOutOfRange { index: j, max: s.len() });
        }
        match s.0[j - 1] {
            ThickLabel::Thick(_) => Ok(self.zero()),
            ThickLabel::Solid(_) => {
                let alpha = self.offsets(s)[j - 1] + 1;
                Ok(self.wrap(self.alg.x_times(alpha, &self.seq_idem[pos])?))
            }
        }
    }

    /// `E_{k,d}^{(color)} e(s)`: the `d`-th elementary symmetric polynomial
    /// in the dots of the `color` block of thick label `k` (both 1-based).
    pub fn esym_dot(&self, k: usize, color: LabelId, d: usize, s: &ThickSeq) -> Result<ThickElement, ThickError> {
        let pos = self.check_seq(s)?;
        if k == 0 || k > self.lambda.len() {
            return Err(ThickError::IndexOutOfRange { index: k, max: self.lambda.len() });
        }
        let mult = self.lambda[k - 1].get(color) as usize;
        if mult == 0 {
            return Err(ThickError::ColorAbsent { k, color });
        }
        if d > mult {
            return Err(ThickError::IndexOutOfRange { index: d, max: mult });
        }
        let block = self
            .blocks(k - 1, s)
            .into_iter()
            .find(|b| b.color == color)
            .expect("color present in block layout");
        let base = &self.seq_idem[pos];
        let mut acc = self.alg.zero(base.n());
        for subset in combinations(block.len, d) {
            let mut exps = vec![0u32; base.n()];
            for p in subset {
                exps[block.start + p] = 1;
            }
            acc = acc.checked_add(&self.alg.dots_times(&exps, base)?)?;
        }
        Ok(self.wrap(acc))
    }

    pub fn crossing_kind(&self, j: usize, s: &ThickSeq) -> Result<CrossingKind, ThickError> {
        if j == 0 || j >= s.len() {
            return Err(ThickError::IndexOutOfRange { index: j, max: s.len().saturating_sub(1) });
        }
        Ok(match (s.0[j - 1].is_thick(), s.0[j].is_thick()) {
            (false, false) => CrossingKind::SolidSolid,
            (true, false) => CrossingKind::ThickSolid,
            (false, true) => CrossingKind::SolidThick,
            (true, true) => CrossingKind::ThickThick,
        })
    }

    /// `Ψ_j e(s)`. Two neighbouring thick entries give zero.
    pub fn thick_crossing(&self, j: usize, s: &ThickSeq) -> Result<ThickElement, ThickError> {
        let kind = self.crossing_kind(j, s)?;
        let pos = self.check_seq(s)?;
        let p = self.offsets(s)[j - 1] + 1;
        let word: Vec<usize> = match kind {
            CrossingKind::SolidSolid => vec![p],
            CrossingKind::ThickSolid => {
                let m = self.entry_size(s.0[j - 1]);
                (p..p + m).collect()
            }
            CrossingKind::SolidThick => {
                let m = self.entry_size(s.0[j]);
                (p..p + m).rev().collect()
            }
            CrossingKind::ThickThick => {
                log::warn!("thick-thick crossing at {j} in {} is zero by definition", self.seq_name(s));
                return Ok(self.zero());
            }
        };
        let mut cur = self.seq_idem[pos].clone();
        for &k in word.iter().rev() {
            cur = self.alg.psi_times(k, &cur)?;
        }
        Ok(self.wrap(cur))
    }

    /// Product of crossings `Ψ_{j_0} ⋯ Ψ_{j_r} e(s)`.
    pub fn crossing_word(&self, word: &[usize], s: &ThickSeq) -> Result<ThickElement, ThickError> {
        let mut cur_seq = s.clone();
        let mut acc = self.seq_idempotent(s)?;
        for &j in word.iter().rev() {
            let g = self.thick_crossing(j, &cur_seq)?;
            acc = self.mul(&g, &acc)?;
            cur_seq = cur_seq.swapped(j);
        }
        Ok(acc)
    }

    pub fn mul(&self, a: &ThickElement, b: &ThickElement) -> Result<ThickElement, ThickError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.alg.mul(&a.ambient, &b.ambient)?))
    }

    /// `a^k`, with `a^0` the idempotent `e(s)`.
    pub fn pow(&self, a: &ThickElement, k: u32, s: &ThickSeq) -> Result<ThickElement, ThickError> {
        let mut acc = self.seq_idempotent(s)?;
        for _ in 0..k {
            acc = self.mul(a, &acc)?;
        }
        Ok(acc)
    }

    /// Re-wraps an ambient element as a member of this context.
    pub fn from_ambient(&self, e: Element) -> Result<ThickElement, ThickError> {
        if e.algebra_id() != self.alg.id() || e.n() != self.ambient_len() {
            return Err(ThickError::ContextMismatch);
        }
        Ok(self.wrap(e))
    }

    /// Every generator instance with its label and bottom sequence:
    /// idempotents, solid dots, symmetric dots and non-thick-thick crossings.
    pub fn generators(&self) -> Result<Vec<Generator>, ThickError> {
        let mut out = Vec::new();
        for s in &self.seqs {
            let name = self.seq_name(s);
            out.push(Generator { name: format!("e{name}"), bottom: s.clone(), value: self.seq_idempotent(s)? });
            for j in 1..=s.len() {
                if !s.0[j - 1].is_thick() {
                    out.push(Generator { name: format!("y{j}e{name}"), bottom: s.clone(), value: self.y_dot(j, s)? });
                }
            }
            for (k, lam) in self.lambda.iter().enumerate() {
                for (c, m) in lam.colors() {
                    for d in 1..=m as usize {
                        out.push(Generator {
                            name: format!("E[{},{},{d}]e{name}", k + 1, self.ext.datum().label(c)),
                            bottom: s.clone(),
                            value: self.esym_dot(k + 1, c, d, s)?,
                        });
                    }
                }
            }
            for j in 1..s.len() {
                if self.crossing_kind(j, s)? != CrossingKind::ThickThick {
                    out.push(Generator {
                        name: format!("Psi{j}e{name}"),
                        bottom: s.clone(),
                        value: self.thick_crossing(j, s)?,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Generators of the two-sided ideal of the quotient: every symmetric
    /// dot `E_{k,d}^{(i)} e(s)` and every idempotent `e(s)` whose first
    /// entry is solid.
    pub fn quotient_ideal_generators(&self) -> Result<Vec<Generator>, ThickError> {
        let mut out = Vec::new();
        for s in &self.seqs {
            let name = self.seq_name(s);
            for (k, lam) in self.lambda.iter().enumerate() {
                for (c, m) in lam.colors() {
                    for d in 1..=m as usize {
                        out.push(Generator {
                            name: format!("E[{},{},{d}]e{name}", k + 1, self.ext.datum().label(c)),
                            bottom: s.clone(),
                            value: self.esym_dot(k + 1, c, d, s)?,
                        });
                    }
                }
            }
            if matches!(s.0.first(), Some(ThickLabel::Solid(_))) {
                out.push(Generator { name: format!("e{name}"), bottom: s.clone(), value: self.seq_idempotent(s)? });
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub bottom: ThickSeq,
    pub value: ThickElement,
}

/// Which side of a two-sided identity: `Left` starts with the solid strand
/// on the left of the thick one at the bottom for slides and double
/// crossings, and with the thick strand leftmost for braids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// One instance of the local relations between thick and solid strands.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropositionCase {
    /// A solid dot slides through a thick-solid crossing.
    SolidDotSlide { thick: Multiplicity, i: LabelId, side: Side },
    /// A symmetric dot `E_d^{(color)}` slides through a crossing.
    SymDotSlide { thick: Multiplicity, i: LabelId, color: LabelId, d: u32, side: Side },
    /// A thick and a solid strand crossing twice.
    DoubleCrossing { thick: Multiplicity, i: LabelId, side: Side },
    /// Braid with the thick strand outermost.
    Braid { thick: Multiplicity, i: LabelId, j: LabelId, side: Side },
    /// Braid with the thick strand in the middle.
    BraidThickMiddle { thick: Multiplicity, i: LabelId, j: LabelId },
}

impl PropositionCase {
    pub fn thick(&self) -> &Multiplicity {
        match self {
            PropositionCase::SolidDotSlide { thick, .. }
            | PropositionCase::SymDotSlide { thick, .. }
            | PropositionCase::DoubleCrossing { thick, .. }
            | PropositionCase::Braid { thick, .. }
            | PropositionCase::BraidThickMiddle { thick, .. } => thick,
        }
    }

    /// A stable identifier, e.g. `double-crossing/left/L=[1:2]/i=1`.
    pub fn id(&self, ext: &ExtendedDatum) -> String {
        let name = |l: LabelId| ext.datum().label(l).to_string();
        let lam: Vec<String> = self.thick().colors().map(|(c, m)| format!("{}:{m}", name(c))).collect();
        let lam = format!("L=[{}]", lam.join(","));
        let side = |s: &Side| match s {
            Side::Left => "left",
            Side::Right => "right",
        };
        match self {
            PropositionCase::SolidDotSlide { i, side: s, .. } => {
                format!("solid-dot-slide/{}/{lam}/i={}", side(s), name(*i))
            }
            PropositionCase::SymDotSlide { i, color, d, side: s, .. } => {
                format!("sym-dot-slide/{}/{lam}/i={}/E{d}^{}", side(s), name(*i), name(*color))
            }
            PropositionCase::DoubleCrossing { i, side: s, .. } => {
                format!("double-crossing/{}/{lam}/i={}", side(s), name(*i))
            }
            PropositionCase::Braid { i, j, side: s, .. } => {
                format!("braid/{}/{lam}/i={}/j={}", side(s), name(*i), name(*j))
            }
            PropositionCase::BraidThickMiddle { i, j, .. } => {
                format!("braid-thick-middle/{lam}/i={}/j={}", name(*i), name(*j))
            }
        }
    }

    /// Every case for thick labels of total multiplicity `1..=max_total`,
    /// all solid labels and all colors.
    pub fn all(ext: &ExtendedDatum, max_total: u32) -> Vec<PropositionCase> {
        let n = ext.base_len();
        let mut out = Vec::new();
        for thick in Multiplicity::all_up_to(n, max_total) {
            for i in 0..n {
                for side in [Side::Left, Side::Right] {
                    out.push(PropositionCase::SolidDotSlide { thick: thick.clone(), i, side });
                    for (color, m) in thick.colors() {
                        for d in 1..=m {
                            out.push(PropositionCase::SymDotSlide { thick: thick.clone(), i, color, d, side });
                        }
                    }
                    out.push(PropositionCase::DoubleCrossing { thick: thick.clone(), i, side });
                    for j in 0..n {
                        out.push(PropositionCase::Braid { thick: thick.clone(), i, j, side });
                    }
                }
                for j in 0..n {
                    out.push(PropositionCase::BraidThickMiddle { thick: thick.clone(), i, j });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PropositionReport {
    pub id: String,
    pub lhs: ThickElement,
    pub rhs: ThickElement,
    /// `lhs − rhs`; zero iff the identity holds.
    pub difference: ThickElement,
}

impl PropositionReport {
    pub fn holds(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Expands both sides of the case ambiently and compares them.
pub fn verify_proposition(
    ext: &ExtendedDatum,
    alg: &Arc<KlrAlgebra>,
    case: &PropositionCase,
) -> Result<PropositionReport, ThickError> {
    use PropositionCase as P;
    use ThickLabel::{Solid, Thick};
    let thick = case.thick().clone();
    let nu = match *case {
        P::Braid { i, j, .. } | P::BraidThickMiddle { i, j, .. } => vec![i, j],
        P::SolidDotSlide { i, .. } | P::SymDotSlide { i, .. } | P::DoubleCrossing { i, .. } => vec![i],
    };
    let ctx = ThickContext::new(ext.clone(), alg.clone(), vec![thick.clone()], nu, false)?;
    let seq = |v: &[ThickLabel]| ThickSeq(v.to_vec());
    let (lhs, rhs) = match *case {
        P::SolidDotSlide { i, side: Side::Left, .. } => {
            let s = seq(&[Solid(i), Thick(0)]);
            let lhs = ctx.mul(&ctx.thick_crossing(1, &s)?, &ctx.y_dot(1, &s)?)?;
            let rhs = ctx.mul(&ctx.y_dot(2, &s.swapped(1))?, &ctx.thick_crossing(1, &s)?)?;
            (lhs, rhs)
        }
        P::SolidDotSlide { i, side: Side::Right, .. } => {
            let s = seq(&[Thick(0), Solid(i)]);
            let lhs = ctx.mul(&ctx.y_dot(1, &s.swapped(1))?, &ctx.thick_crossing(1, &s)?)?;
            let rhs = ctx.mul(&ctx.thick_crossing(1, &s)?, &ctx.y_dot(2, &s)?)?;
            (lhs, rhs)
        }
        P::SymDotSlide { i, color, d, side, .. } => {
            let s = match side {
                Side::Left => seq(&[Thick(0), Solid(i)]),
                Side::Right => seq(&[Solid(i), Thick(0)]),
            };
            let t = s.swapped(1);
            let d = d as usize;
            let lhs = ctx.mul(&ctx.thick_crossing(1, &s)?, &ctx.esym_dot(1, color, d, &s)?)?;
            let rhs = ctx.mul(&ctx.esym_dot(1, color, d, &t)?, &ctx.thick_crossing(1, &s)?)?;
            (lhs, rhs)
        }
        P::DoubleCrossing { i, side, .. } => {
            let s = match side {
                Side::Left => seq(&[Solid(i), Thick(0)]),
                Side::Right => seq(&[Thick(0), Solid(i)]),
            };
            let lhs = ctx.crossing_word(&[1, 1], &s)?;
            let m = thick.get(i);
            let solid_pos = if side == Side::Left { 1 } else { 2 };
            let y = ctx.y_dot(solid_pos, &s)?;
            let mut rhs = ctx.zero();
            for e_deg in 0..=m {
                let y_deg = m - e_deg;
                let e = if e_deg == 0 {
                    ctx.seq_idempotent(&s)?
                } else {
                    ctx.esym_dot(1, i, e_deg as usize, &s)?
                };
                let term = ctx.mul(&ctx.pow(&y, y_deg, &s)?, &e)?;
                let sign = if e_deg % 2 == 0 { 1 } else { -1 };
                rhs = &rhs + &term.scale(&int(sign));
            }
            (lhs, rhs)
        }
        P::Braid { i, j, side, .. } => {
            let s = match side {
                Side::Left => seq(&[Thick(0), Solid(i), Solid(j)]),
                Side::Right => seq(&[Solid(j), Solid(i), Thick(0)]),
            };
            (ctx.crossing_word(&[1, 2, 1], &s)?, ctx.crossing_word(&[2, 1, 2], &s)?)
        }
        P::BraidThickMiddle { i, j, .. } => {
            let s = seq(&[Solid(i), Thick(0), Solid(j)]);
            let lhs = &ctx.crossing_word(&[1, 2, 1], &s)? - &ctx.crossing_word(&[2, 1, 2], &s)?;
            let mut rhs = ctx.zero();
            let m = thick.get(i);
            if i == j && m > 0 {
                let y1 = ctx.y_dot(1, &s)?;
                let y3 = ctx.y_dot(3, &s)?;
                for c in 0..m {
                    for a in 0..m - c {
                        let b = m - 1 - c - a;
                        let e = if c == 0 { ctx.seq_idempotent(&s)? } else { ctx.esym_dot(1, i, c as usize, &s)? };
                        let term = ctx.mul(&ctx.mul(&ctx.pow(&y1, a, &s)?, &ctx.pow(&y3, b, &s)?)?, &e)?;
                        let sign = if c % 2 == 0 { 1 } else { -1 };
                        rhs = &rhs + &term.scale(&int(sign));
                    }
                }
            }
            (lhs, rhs)
        }
    };
    let difference = &lhs - &rhs;
    Ok(PropositionReport { id: case.id(ext), lhs, rhs, difference })
}

/// Distinct sequences appearing as bottoms of the given generators.
pub fn bottoms(gens: &[Generator]) -> BTreeSet<ThickSeq> {
    gens.iter().map(|g| g.bottom.clone()).collect()
}
