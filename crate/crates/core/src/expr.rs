//! Text syntax for algebra elements.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := (atom | rat | '(' expr ')') ['^' uint]
//! atom   := 'e(' [label (',' label)*] ')' | 'x' uint | 'psi' uint
//!         | 'y' uint | 'E[' uint ',' label ',' uint ']' | 'Psi' uint
//! rat    := uint ['/' uint]
//! label  := ['~'] name          (thick labels are L1..Lm)
//! ```
//!
//! Products are evaluated right to left starting from the rightmost
//! idempotent, so every product needs one (or a default sequence).

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::cartan::LabelId;
use crate::klr::{BasisDiagram, Element, KlrAlgebra, KlrError};
use crate::rational::{format_coeff, int};
use crate::thick::{ThickContext, ThickElement, ThickError, ThickLabel, ThickSeq};
use crate::Coeff;

const MAX_POWER: u32 = 64;
const MAX_DEPTH: usize = 128;
const MAX_WORDS: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: expected {}, found {found}", .expected.join(" or "))]
    Syntax { pos: usize, expected: Vec<&'static str>, found: String },
    #[error("unknown atom `{name}` at byte {pos}")]
    UnknownAtom { pos: usize, name: String },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownAtom { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("product has no idempotent on its right and no default sequence is set")]
    MissingIdempotent,
    #[error("thick atom `{0}` needs a (λ,ν) context")]
    NoThickContext(String),
    #[error("sequence {0} is not a thick sequence of the context")]
    NotInSubalgebra(String),
    #[error("expression expands to more than {MAX_WORDS} words")]
    TooLarge,
    #[error(transparent)]
    Klr(#[from] KlrError),
    #[error(transparent)]
    Thick(#[from] ThickError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Idem(Vec<String>),
    X(usize),
    Psi(usize),
    Y(usize),
    Esym { k: usize, color: String, d: usize },
    ThickPsi(usize),
    Scalar(Coeff),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Atom(Atom),
    Group(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub kind: FactorKind,
    pub power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub negated: bool,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, depth: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.syntax(&["'+'", "'-'", "'*'", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn syntax(&self, expected: &[&'static str]) -> ParseError {
        let found = match self.s.get(self.pos) {
            None => "end of input".to_string(),
            Some(&b) if b.is_ascii_graphic() => format!("'{}'", b as char),
            Some(&b) => format!("byte 0x{b:02x}"),
        };
        ParseError::Syntax { pos: self.pos, expected: expected.to_vec(), found }
    }

    fn eat(&mut self, b: u8, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&[what]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let negated = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        terms.push(self.term(negated)?);
        loop {
            let negated = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => break,
            };
            self.pos += 1;
            terms.push(self.term(negated)?);
        }
        Ok(Expr { terms })
    }

    fn term(&mut self, negated: bool) -> Result<Term, ParseError> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(Term { negated, factors })
    }

    fn factor(&mut self) -> Result<Factor, ParseError> {
        let kind = match self.peek() {
            Some(b'(') => {
                if self.depth >= MAX_DEPTH {
                    return Err(self.syntax(&["shallower nesting"]));
                }
                self.pos += 1;
                self.depth += 1;
                let e = self.expr()?;
                self.depth -= 1;
                self.eat(b')', "')'")?;
                FactorKind::Group(e)
            }
            Some(b) if b.is_ascii_digit() => FactorKind::Atom(Atom::Scalar(self.rational()?)),
            Some(b) if b.is_ascii_alphabetic() => FactorKind::Atom(self.atom()?),
            _ => return Err(self.syntax(&["atom", "number", "'('"])),
        };
        let mut power = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let at = self.pos;
            power = self.uint("exponent")? as u32;
            if power > MAX_POWER {
                self.pos = at;
                return Err(self.syntax(&["exponent at most 64"]));
            }
        }
        Ok(Factor { kind, power })
    }

    fn uint(&mut self, what: &'static str) -> Result<usize, ParseError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax(&[what]));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        digits.parse::<u32>().map(|v| v as usize).map_err(|_| {
            self.pos = start;
            self.syntax(&["smaller number"])
        })
    }

    fn rational(&mut self) -> Result<Coeff, ParseError> {
        let num = self.uint("number")?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let at = self.pos;
            let den = self.uint("denominator")?;
            if den == 0 {
                self.pos = at;
                return Err(self.syntax(&["nonzero denominator"]));
            }
            return Ok(Coeff::new((num as i64).into(), (den as i64).into()));
        }
        Ok(int(num as i64))
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii letters").to_string();
        Ok(match name.as_str() {
            "e" => {
                self.eat(b'(', "'('")?;
                let mut labels = Vec::new();
                if self.peek() != Some(b')') {
                    labels.push(self.label()?);
                    while self.peek() == Some(b',') {
                        self.pos += 1;
                        labels.push(self.label()?);
                    }
                }
                self.eat(b')', "')'")?;
                Atom::Idem(labels)
            }
            "x" => Atom::X(self.index()?),
            "psi" => Atom::Psi(self.index()?),
            "y" => Atom::Y(self.index()?),
            "Psi" => Atom::ThickPsi(self.index()?),
            "E" => {
                self.eat(b'[', "'['")?;
                let k = self.index()?;
                self.eat(b',', "','")?;
                let color = self.label()?;
                self.eat(b',', "','")?;
                let d = self.index()?;
                self.eat(b']', "']'")?;
                Atom::Esym { k, color, d }
            }
            _ => return Err(ParseError::UnknownAtom { pos: start, name }),
        })
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        self.ws();
        let at = self.pos;
        let v = self.uint("index")?;
        if v == 0 {
            self.pos = at;
            return Err(self.syntax(&["positive index"]));
        }
        Ok(v)
    }

    fn label(&mut self) -> Result<String, ParseError> {
        self.ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'~') {
            self.pos += 1;
        }
        let body = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
            self.pos += 1;
        }
        if body == self.pos {
            return Err(self.syntax(&["label"]));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii label").to_string())
    }
}

/// What an expression is evaluated against.
#[derive(Clone, Copy)]
pub struct EvalContext<'a> {
    pub algebra: &'a KlrAlgebra,
    pub thick: Option<&'a ThickContext>,
    /// Idempotent used when a product has none on its right.
    pub default_seq: Option<&'a [LabelId]>,
}

impl<'a> EvalContext<'a> {
    pub fn ambient(algebra: &'a KlrAlgebra) -> Self {
        EvalContext { algebra, thick: None, default_seq: None }
    }

    pub fn thick(ctx: &'a ThickContext) -> Self {
        EvalContext { algebra: ctx.algebra(), thick: Some(ctx), default_seq: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Ambient(Element),
    Thick(ThickElement),
}

impl Value {
    pub fn ambient(&self) -> &Element {
        match self {
            Value::Ambient(e) => e,
            Value::Thick(t) => t.ambient(),
        }
    }
}

type Word = (Coeff, Vec<Atom>);

fn expand_expr(e: &Expr) -> Result<Vec<Word>, EvalError> {
    let mut out = Vec::new();
    for t in &e.terms {
        let mut acc: Vec<Word> = vec![(if t.negated { -Coeff::one() } else { Coeff::one() }, Vec::new())];
        for f in &t.factors {
            let base = match &f.kind {
                FactorKind::Atom(Atom::Scalar(c)) => vec![(c.clone(), Vec::new())],
                FactorKind::Atom(a) => vec![(Coeff::one(), vec![a.clone()])],
                FactorKind::Group(g) => expand_expr(g)?,
            };
            for _ in 0..f.power {
                acc = product(&acc, &base)?;
            }
        }
        out.extend(acc);
        if out.len() > MAX_WORDS {
            return Err(EvalError::TooLarge);
        }
    }
    Ok(out)
}

fn product(a: &[Word], b: &[Word]) -> Result<Vec<Word>, EvalError> {
    if a.len().saturating_mul(b.len()) > MAX_WORDS {
        return Err(EvalError::TooLarge);
    }
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (ca, wa) in a {
        for (cb, wb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            out.push((ca * cb, w));
        }
    }
    Ok(out)
}

pub fn evaluate(ast: &Expr, ctx: &EvalContext<'_>) -> Result<Value, EvalError> {
    let words = expand_expr(ast)?;
    let mut total: Option<Element> = None;
    for (c, word) in &words {
        if c.is_zero() {
            continue;
        }
        let Some(v) = eval_word(word, ctx)? else {
            return Err(EvalError::MissingIdempotent);
        };
        let v = v.scale(c);
        total = Some(match total {
            None => v,
            Some(t) => t.checked_add(&v)?,
        });
    }
    let total = match total {
        Some(t) => t,
        None => ctx.algebra.zero(default_len(ctx)),
    };
    Ok(match ctx.thick {
        Some(t) => Value::Thick(t.from_ambient(total)?),
        None => Value::Ambient(total),
    })
}

fn default_len(ctx: &EvalContext<'_>) -> usize {
    match (ctx.default_seq, ctx.thick) {
        (Some(s), _) => s.len(),
        (None, Some(t)) => t.ambient_len(),
        (None, None) => 0,
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str, ctx: &EvalContext<'_>) -> Result<Value, ExprError> {
    let ast = parse(text)?;
    Ok(evaluate(&ast, ctx)?)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn eval_word(word: &[Atom], ctx: &EvalContext<'_>) -> Result<Option<Element>, EvalError> {
    let alg = ctx.algebra;
    let mut cur: Option<Element> = None;
    for atom in word.iter().rev() {
        if let Atom::Idem(labels) = atom {
            let e = idempotent(labels, ctx)?;
            cur = Some(match cur {
                None => e,
                Some(c) => alg.mul(&e, &c)?,
            });
            continue;
        }
        let c = match cur.take() {
            Some(c) => c,
            None => match ctx.default_seq {
                Some(s) => alg.idempotent(s)?,
                None => return Err(EvalError::MissingIdempotent),
            },
        };
        cur = Some(match atom {
            Atom::X(j) => alg.x_times(*j, &c)?,
            Atom::Psi(k) => alg.psi_times(*k, &c)?,
            Atom::Y(_) | Atom::Esym { .. } | Atom::ThickPsi(_) => thick_left(atom, &c, ctx)?,
            Atom::Idem(_) | Atom::Scalar(_) => unreachable!("handled above or expanded away"),
        });
    }
    if cur.is_none() {
        if let Some(s) = ctx.default_seq {
            cur = Some(alg.idempotent(s)?);
        }
    }
    Ok(cur)
}

fn atom_name(atom: &Atom) -> String {
    match atom {
        Atom::Y(j) => format!("y{j}"),
        Atom::ThickPsi(j) => format!("Psi{j}"),
        Atom::Esym { k, color, d } => format!("E[{k},{color},{d}]"),
        other => format!("{other:?}"),
    }
}

/// Left multiplication by the thick generator summed over all sequences.
fn thick_left(atom: &Atom, c: &Element, ctx: &EvalContext<'_>) -> Result<Element, EvalError> {
    let thick = ctx.thick.ok_or_else(|| EvalError::NoThickContext(atom_name(atom)))?;
    let alg = ctx.algebra;
    let mut tops: Vec<Vec<LabelId>> = c.terms().map(|(d, _)| d.top()).collect();
    tops.sort();
    tops.dedup();
    let mut acc = alg.zero(c.n());
    for top in tops {
        let seq = thick
            .seq_of_expansion(&top)
            .ok_or_else(|| EvalError::NotInSubalgebra(labels_text(alg, &top)))?
            .clone();
        let g = match atom {
            Atom::Y(j) => thick.y_dot(*j, &seq)?,
            Atom::ThickPsi(j) => thick.thick_crossing(*j, &seq)?,
            Atom::Esym { k, color, d } => {
                let datum = thick.extended().datum();
                let id = datum.resolve(color).map_err(|_| EvalError::UnknownLabel(color.clone()))?;
                thick.esym_dot(*k, thick.extended().unbar(id), *d, &seq)?
            }
            _ => unreachable!("only thick atoms reach here"),
        };
        acc = acc.checked_add(&alg.mul(g.ambient(), c)?)?;
    }
    Ok(acc)
}

fn idempotent(labels: &[String], ctx: &EvalContext<'_>) -> Result<Element, EvalError> {
    if let Some(thick) = ctx.thick {
        if let Some(seq) = thick_seq(labels, thick) {
            return Ok(thick.seq_idempotent(&seq)?.ambient().clone());
        }
    }
    let datum = ctx.algebra.datum();
    let ids = labels
        .iter()
        .map(|l| datum.resolve(l).map_err(|_| EvalError::UnknownLabel(l.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ctx.algebra.idempotent(&ids)?)
}

/// Reads `labels` as a thick sequence of the context, if it is one.
fn thick_seq(labels: &[String], thick: &ThickContext) -> Option<ThickSeq> {
    let datum = thick.extended().datum();
    let mut out = Vec::with_capacity(labels.len());
    for l in labels {
        let thick_k = l
            .strip_prefix('L')
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k >= 1 && k <= thick.lambda().len());
        match thick_k {
            Some(k) => out.push(ThickLabel::Thick(k - 1)),
            None => {
                let id = datum.resolve(l).ok()?;
                if thick.extended().is_barred(id) {
                    return None;
                }
                out.push(ThickLabel::Solid(id));
            }
        }
    }
    let seq = ThickSeq(out);
    thick.seq_index(&seq).map(|_| seq)
}

fn labels_text(alg: &KlrAlgebra, seq: &[LabelId]) -> String {
    let parts: Vec<String> = seq.iter().map(|&l| alg.datum().label(l).to_string()).collect();
    format!("({})", parts.join(","))
}

/// The word `x^a ψ_ŵ e(i)` of one basis diagram, e.g. `x2*psi1*e(1,1)`.
pub fn diagram_text(alg: &KlrAlgebra, d: &BasisDiagram) -> String {
    let mut parts = Vec::new();
    for (j, &a) in d.exps.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(format!("x{}", j + 1)),
            _ => parts.push(format!("x{}^{a}", j + 1)),
        }
    }
    for k in d.perm.canonical_word() {
        parts.push(format!("psi{k}"));
    }
    parts.push(format!("e{}", labels_text(alg, &d.bottom)));
    parts.join("*")
}

/// Canonical text: terms ordered by degree, then longer permutations first,
/// then permutation, dots and bottom sequence.
pub fn print(alg: &KlrAlgebra, e: &Element) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&BasisDiagram, &Coeff)> = e.terms().collect();
    terms.sort_by(|(a, _), (b, _)| {
        let key = |d: &BasisDiagram| (d.degree(alg.datum()), std::cmp::Reverse(d.crossings()));
        key(a).cmp(&key(b)).then_with(|| (&a.perm, &a.exps, &a.bottom).cmp(&(&b.perm, &b.exps, &b.bottom)))
    });
    let mut out = String::new();
    for (pos, (d, c)) in terms.into_iter().enumerate() {
        let negative = c < &Coeff::zero();
        let mag = if negative { -c.clone() } else { c.clone() };
        match (pos, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !mag.is_one() {
            out.push_str(&format_coeff(&mag));
            out.push('*');
        }
        out.push_str(&diagram_text(alg, d));
    }
    out
}

pub struct Printed<'a>(pub &'a KlrAlgebra, pub &'a Element);

impl fmt::Display for Printed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self.0, self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{CartanDatum, ExtendedDatum, ScalarParams};
    use crate::thick::Multiplicity;
    use std::collections::BTreeMap;
    use std::sync::Arc;

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

    fn ev(alg: &KlrAlgebra, s: &str) -> Element {
        eval_str(s, &EvalContext::ambient(alg)).unwrap().ambient().clone()
    }

    #[test]
    fn parse_shapes() {
        let e = parse("psi1 * x1 * e(1,1)").unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].factors.len(), 3);
        let e = parse("x1^3 * e(1) + 2/3 * e(1)").unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.terms[1].factors[0].kind, FactorKind::Atom(Atom::Scalar(Coeff::new(2.into(), 3.into()))));
        let e = parse("Psi1 * E[1,1,1] * e(L1,1)").unwrap();
        assert_eq!(e.terms[0].factors.len(), 3);
        match parse("psi * e(1)") {
            Err(ParseError::Syntax { pos, expected, .. }) => {
                assert_eq!(pos, 4);
                assert_eq!(expected, vec!["index"]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("foo1*e(1)"), Err(ParseError::UnknownAtom { pos: 0, .. })));
        assert!(parse("").is_err());
        assert!(parse("x1^100*e(1)").is_err());
        assert!(parse("1/0*e(1)").is_err());
    }

    #[test]
    fn evaluation_examples() {
        let alg = a1();
        assert!(ev(&alg, "psi1*psi1*e(1,1)").is_zero());
        assert_eq!(ev(&alg, "x1*psi1*e(1,1) - psi1*x2*e(1,1)"), alg.idempotent(&[0, 0]).unwrap());
        let b = a2();
        assert!(ev(&b, "e(1,2)*e(2,1)").is_zero());
        assert_eq!(ev(&alg, "(x1 + x2)^2*e(1,1)"), ev(&alg, "x1^2*e(1,1) + 2*x1*x2*e(1,1) + x2^2*e(1,1)"));
        assert_eq!(
            eval_str("x1", &EvalContext::ambient(&alg)),
            Err(ExprError::Eval(EvalError::MissingIdempotent))
        );
        let seq = [0usize];
        let ctx = EvalContext { algebra: &alg, thick: None, default_seq: Some(&seq) };
        assert_eq!(eval_str("x1", &ctx).unwrap().ambient(), &alg.gen_x(1, &[0]).unwrap());
        assert!(matches!(
            eval_str("e(3)", &EvalContext::ambient(&alg)),
            Err(ExprError::Eval(EvalError::UnknownLabel(_)))
        ));
    }

    #[test]
    fn printing() {
        let alg = a1();
        assert_eq!(print(&alg, &alg.idempotent(&[0, 0]).unwrap()), "e(1,1)");
        assert_eq!(print(&alg, &alg.zero(2)), "0");
        let e = ev(&alg, "psi1*x1*e(1,1)");
        assert_eq!(print(&alg, &e), "x2*psi1*e(1,1) + e(1,1)");
        assert_eq!(ev(&alg, &print(&alg, &e)), e);
        let neg = ev(&alg, "-2/3*x1^2*e(1) + e(1)");
        assert_eq!(print(&alg, &neg), "e(1) - 2/3*x1^2*e(1)");
        assert_eq!(ev(&alg, &print(&alg, &neg)), neg);
    }

    #[test]
    fn thick_expressions() {
        let x = ExtendedDatum::new(&CartanDatum::a1()).unwrap();
        let p = x.specialized_params(&BTreeMap::new()).unwrap();
        let alg = Arc::new(KlrAlgebra::new(x.datum().clone(), p));
        let ctx = ThickContext::new(x, alg.clone(), vec![Multiplicity::single(0, 1).unwrap()], vec![0], false).unwrap();
        let ec = EvalContext::thick(&ctx);
        let v = eval_str("Psi1*Psi1*e(1,L1)", &ec).unwrap();
        let w = eval_str("y1*e(1,L1) - E[1,1,1]*e(1,L1)", &ec).unwrap();
        assert_eq!(v, w);
        let printed = print(&alg, v.ambient());
        assert_eq!(eval_str(&printed, &ec).unwrap(), v);
        assert!(matches!(
            eval_str("y1*e(1)", &EvalContext::ambient(&alg)),
            Err(ExprError::Eval(EvalError::NoThickContext(_)))
        ));
    }
}
