//! Cartan data, scalar parameters, and the doubled ("extended") datum used
//! for thick dashed strands.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::Coeff;

/// Index of a label inside a [`CartanDatum`], in declaration order.
pub type LabelId = usize;

/// A label name. Barred labels carry a tag instead of a mangled name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelName {
    pub name: String,
    pub barred: bool,
}

impl LabelName {
    pub fn solid(name: impl Into<String>) -> Self {
        LabelName { name: name.into(), barred: false }
    }

    pub fn barred(name: impl Into<String>) -> Self {
        LabelName { name: name.into(), barred: true }
    }

    /// Parses the surface form: `~name` is barred.
    pub fn parse(text: &str) -> Self {
        match text.strip_prefix('~') {
            Some(rest) => LabelName::barred(rest),
            None => LabelName::solid(text),
        }
    }
}

impl fmt::Display for LabelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "~{}", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("form has {rows} rows but {labels} labels were declared")]
    DimensionMismatch { labels: usize, rows: usize },
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("form is not symmetric at ({0}, {1})")]
    NonSymmetric(String, String),
    #[error("{0}·{0} must be a strictly positive even integer")]
    DiagonalNotPositiveEven(String),
    #[error("2({0}·{1})/({0}·{0}) must be a non-positive integer")]
    OffDiagonalNotNonpositiveInteger(String, String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("scalar parameter {0} must be nonzero")]
    ZeroUnit(String),
    #[error("scalar parameter constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("residual parameter t({0},{1}) is forced by the specialization")]
    ResidualOverridesForcedEntry(String, String),
}

/// A finite label set with a symmetric bilinear form satisfying the usual
/// evenness and non-positivity conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    labels: Vec<LabelName>,
    form: Vec<Vec<i64>>,
}

impl CartanDatum {
    pub fn new(labels: Vec<LabelName>, form: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = labels.len();
        if form.len() != n {
            return Err(CartanError::DimensionMismatch { labels: n, rows: form.len() });
        }
        if let Some(row) = form.iter().find(|row| row.len() != n) {
            return Err(CartanError::DimensionMismatch { labels: n, rows: row.len() });
        }
        for (a, la) in labels.iter().enumerate() {
            if labels[..a].contains(la) {
                return Err(CartanError::DuplicateLabel(la.to_string()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if form[i][j] != form[j][i] {
                    return Err(CartanError::NonSymmetric(
                        labels[i].to_string(),
                        labels[j].to_string(),
                    ));
                }
            }
        }
        for i in 0..n {
            let ii = form[i][i];
            if ii <= 0 || ii % 2 != 0 {
                return Err(CartanError::DiagonalNotPositiveEven(labels[i].to_string()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let num = 2 * form[i][j];
                if num > 0 || num % form[i][i] != 0 {
                    return Err(CartanError::OffDiagonalNotNonpositiveInteger(
                        labels[i].to_string(),
                        labels[j].to_string(),
                    ));
                }
            }
        }
        Ok(CartanDatum { labels, form })
    }

    /// Convenience constructor for solid labels given by name.
    pub fn from_names<S: AsRef<str>>(names: &[S], form: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let labels = names.iter().map(|s| LabelName::solid(s.as_ref())).collect();
        CartanDatum::new(labels, form)
    }

    /// The one-label datum with `i·i = 2`.
    pub fn a1() -> Self {
        CartanDatum::from_names(&["1"], vec![vec![2]]).unwrap()
    }

    pub fn a2() -> Self {
        CartanDatum::from_names(&["1", "2"], vec![vec![2, -1], vec![-1, 2]]).unwrap()
    }

    /// Two labels with `1·2 = -2` (the affine A_1 form).
    pub fn affine_a1() -> Self {
        CartanDatum::from_names(&["1", "2"], vec![vec![2, -2], vec![-2, 2]]).unwrap()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[LabelName] {
        &self.labels
    }

    pub fn label(&self, id: LabelId) -> &LabelName {
        &self.labels[id]
    }

    pub fn form(&self) -> &[Vec<i64>] {
        &self.form
    }

    pub fn index_of(&self, name: &LabelName) -> Option<LabelId> {
        self.labels.iter().position(|l| l == name)
    }

    /// Resolves a label from its surface text (`~` prefix for barred).
    pub fn resolve(&self, text: &str) -> Result<LabelId, CartanError> {
        self.index_of(&LabelName::parse(text))
            .ok_or_else(|| CartanError::UnknownLabel(text.to_string()))
    }

    /// The bilinear form `i·j`.
    #[inline]
    pub fn dot(&self, i: LabelId, j: LabelId) -> i64 {
        self.form[i][j]
    }

    /// `c(i,j) = 2(i·j)/(i·i)`.
    #[inline]
    pub fn cartan(&self, i: LabelId, j: LabelId) -> i64 {
        2 * self.form[i][j] / self.form[i][i]
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.len()).map(|i| (0..self.len()).map(|j| self.cartan(i, j)).collect()).collect()
    }
}

/// Key of an `s^{pq}(i,j)` entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SKey {
    pub i: LabelId,
    pub j: LabelId,
    pub p: u32,
    pub q: u32,
}

/// The scalar parameters `t(i,j)`, `r(i)` and `s^{pq}(i,j)`, fully
/// instantiated to exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarParams {
    t: Vec<Vec<Coeff>>,
    r: Vec<Coeff>,
    s: BTreeMap<SKey, Coeff>,
}

impl ScalarParams {
    /// Installs the given entries over the defaults (`t ≡ 1`, `r ≡ 1`,
    /// `s ≡ 0`) and checks every constraint.
    pub fn new(
        datum: &CartanDatum,
        t: &BTreeMap<(LabelId, LabelId), Coeff>,
        r: &BTreeMap<LabelId, Coeff>,
        s: &BTreeMap<SKey, Coeff>,
    ) -> Result<Self, CartanError> {
        let n = datum.len();
        let name = |i: LabelId| -> Result<String, CartanError> {
            if i < n {
                Ok(datum.label(i).to_string())
            } else {
                Err(CartanError::UnknownLabel(format!("#{i}")))
            }
        };
        let mut tt = vec![vec![Coeff::one(); n]; n];
        for (&(i, j), v) in t {
            let (ni, nj) = (name(i)?, name(j)?);
            if v.is_zero() {
                return Err(CartanError::ZeroUnit(format!("t({ni},{nj})")));
            }
            tt[i][j] = v.clone();
        }
        let mut rr = vec![Coeff::one(); n];
        for (&i, v) in r {
            let ni = name(i)?;
            if v.is_zero() {
                return Err(CartanError::ZeroUnit(format!("r({ni})")));
            }
            rr[i] = v.clone();
        }
        for i in 0..n {
            if !tt[i][i].is_one() {
                return Err(CartanError::ConstraintViolation(format!(
                    "t({0},{0}) must equal 1",
                    datum.label(i)
                )));
            }
            for j in 0..n {
                if datum.dot(i, j) == 0 && tt[i][j] != tt[j][i] {
                    return Err(CartanError::ConstraintViolation(format!(
                        "t({0},{1}) must equal t({1},{0}) since {0}·{1} = 0",
                        datum.label(i),
                        datum.label(j)
                    )));
                }
            }
        }
        let mut ss = BTreeMap::new();
        for (key, v) in s {
            let (ni, nj) = (name(key.i)?, name(key.j)?);
            if v.is_zero() {
                continue;
            }
            if key.i == key.j || key.p == 0 || key.q == 0 {
                return Err(CartanError::ConstraintViolation(format!(
                    "s^{{{},{}}}({ni},{nj}) requires i ≠ j and p, q > 0",
                    key.p, key.q
                )));
            }
            let lhs = key.p as i64 * datum.dot(key.i, key.i) + key.q as i64 * datum.dot(key.j, key.j);
            if lhs != -2 * datum.dot(key.i, key.j) {
                return Err(CartanError::ConstraintViolation(format!(
                    "s^{{{p},{q}}}({ni},{nj}) is supported only when p({ni}·{ni}) + q({nj}·{nj}) = -2({ni}·{nj}), got {lhs} vs {}",
                    -2 * datum.dot(key.i, key.j),
                    p = key.p,
                    q = key.q
                )));
            }
            ss.insert(*key, v.clone());
        }
        for (key, v) in &ss {
            let mirror = SKey { i: key.j, j: key.i, p: key.q, q: key.p };
            if ss.get(&mirror) != Some(v) {
                return Err(CartanError::ConstraintViolation(format!(
                    "s^{{{p},{q}}}({i},{j}) must equal s^{{{q},{p}}}({j},{i})",
                    p = key.p,
                    q = key.q,
                    i = datum.label(key.i),
                    j = datum.label(key.j)
                )));
            }
        }
        Ok(ScalarParams { t: tt, r: rr, s: ss })
    }

    /// All defaults: `t ≡ 1`, `r ≡ 1`, `s ≡ 0`.
    pub fn trivial(datum: &CartanDatum) -> Self {
        ScalarParams::new(datum, &BTreeMap::new(), &BTreeMap::new(), &BTreeMap::new())
            .expect("default parameters always validate")
    }

    pub fn t(&self, i: LabelId, j: LabelId) -> &Coeff {
        &self.t[i][j]
    }

    pub fn r(&self, i: LabelId) -> &Coeff {
        &self.r[i]
    }

    /// `s^{pq}(i,j)`; absent entries read as zero.
    pub fn s(&self, i: LabelId, j: LabelId, p: u32, q: u32) -> Coeff {
        self.s.get(&SKey { i, j, p, q }).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Nonzero `s^{pq}(i,j)` entries for a fixed pair, as `(p, q, value)`.
    pub fn s_terms(&self, i: LabelId, j: LabelId) -> impl Iterator<Item = (u32, u32, &Coeff)> + '_ {
        self.s.iter().filter(move |(k, _)| k.i == i && k.j == j).map(|(k, v)| (k.p, k.q, v))
    }

    pub fn s_entries(&self) -> &BTreeMap<SKey, Coeff> {
        &self.s
    }
}

/// The doubled datum on `I ∪ Ī`. Solid labels keep their ids `0..N`; the
/// barred copy of `i` has id `N + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedDatum {
    base: CartanDatum,
    datum: CartanDatum,
}

impl ExtendedDatum {
    pub fn new(base: &CartanDatum) -> Result<Self, CartanError> {
        let n = base.len();
        let mut labels: Vec<LabelName> = base.labels().to_vec();
        labels.extend(base.labels().iter().map(|l| LabelName::barred(l.name.clone())));
        let mut form = vec![vec![0i64; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                form[i][j] = base.dot(i, j);
            }
            let ii = base.dot(i, i);
            form[n + i][n + i] = ii;
            form[i][n + i] = -ii / 2;
            form[n + i][i] = -ii / 2;
        }
        let datum = CartanDatum::new(labels, form)?;
        Ok(ExtendedDatum { base: base.clone(), datum })
    }

    pub fn base(&self) -> &CartanDatum {
        &self.base
    }

    pub fn datum(&self) -> &CartanDatum {
        &self.datum
    }

    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    pub fn bar(&self, i: LabelId) -> LabelId {
        debug_assert!(i < self.base_len());
        self.base_len() + i
    }

    pub fn is_barred(&self, id: LabelId) -> bool {
        id >= self.base_len()
    }

    /// The solid label underlying `id` (identity on solid labels).
    pub fn unbar(&self, id: LabelId) -> LabelId {
        if self.is_barred(id) {
            id - self.base_len()
        } else {
            id
        }
    }

    /// The specialized parameters: `t(k̄,k) = -1`, `t(k,k̄) = 1`, `t = 1`
    /// wherever the form vanishes, `r ≡ 1`, `s ≡ 0`. The residual map may
    /// only supply `t(i,j)` for solid `i ≠ j` with `i·j < 0`.
    pub fn specialized_params(
        &self,
        residual: &BTreeMap<(LabelId, LabelId), Coeff>,
    ) -> Result<ScalarParams, CartanError> {
        let n = self.base_len();
        let mut t = BTreeMap::new();
        for k in 0..n {
            t.insert((n + k, k), -Coeff::one());
            t.insert((k, n + k), Coeff::one());
        }
        for (&(i, j), v) in residual {
            let free = i < n && j < n && i != j && self.base.dot(i, j) < 0;
            if !free {
                let name = |x: LabelId| {
                    if x < self.datum.len() {
                        self.datum.label(x).to_string()
                    } else {
                        format!("#{x}")
                    }
                };
                return Err(CartanError::ResidualOverridesForcedEntry(name(i), name(j)));
            }
            t.insert((i, j), v.clone());
        }
        ScalarParams::new(&self.datum, &t, &BTreeMap::new(), &BTreeMap::new())
    }
}
