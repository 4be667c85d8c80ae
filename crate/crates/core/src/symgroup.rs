//! Permutations of `n` strands, reduced words and the canonical (lex-least)
//! reduced word.
//!
//! Composition follows `(uv)(k) = u(v(k))`. A word `j_0 j_1 … j_r` of simple
//! transpositions denotes the product `s_{j_0} s_{j_1} ⋯ s_{j_r}`; generator
//! indices are 1-based (`s_j` swaps `j` and `j+1`).

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),
    #[error("length mismatch: permutation on {perm} points, sequence of length {seq}")]
    LengthMismatch { perm: usize, seq: usize },
    #[error("generator s_{gen} out of range for {n} strands")]
    GeneratorOutOfRange { gen: usize, n: usize },
}

/// A bijection of `{1..n}`, stored 0-based in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    /// From 1-based one-line notation.
    pub fn from_one_line(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotAPermutation(n));
            }
            seen[v - 1] = true;
        }
        Ok(Perm(images.iter().map(|&v| (v - 1) as u8).collect()))
    }

    /// The simple transposition `s_j` on `n` points.
    pub fn simple(n: usize, j: usize) -> Result<Self, PermError> {
        if j == 0 || j >= n {
            return Err(PermError::GeneratorOutOfRange { gen: j, n });
        }
        let mut p = Perm::identity(n);
        p.0.swap(j - 1, j);
        Ok(p)
    }

    /// Product of simple transpositions along a word.
    pub fn from_word(n: usize, word: &[usize]) -> Result<Self, PermError> {
        let mut p = Perm::identity(n);
        for &j in word {
            p = p.compose(&Perm::simple(n, j)?);
        }
        Ok(p)
    }

    /// The order-reversing permutation.
    pub fn longest(n: usize) -> Self {
        Perm((0..n as u8).rev().collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Image of the 0-based point `k`.
    #[inline]
    pub fn image(&self, k: usize) -> usize {
        self.0[k] as usize
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &v)| k == v as usize)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&v| self.0[v as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (k, &v) in self.0.iter().enumerate() {
            inv[v as usize] = k as u8;
        }
        Perm(inv)
    }

    /// `s_j ∘ self`: swaps the values `j` and `j+1` (1-based `j`).
    pub fn left_mul_simple(&self, j: usize) -> Perm {
        let (a, b) = ((j - 1) as u8, j as u8);
        Perm(
            self.0
                .iter()
                .map(|&v| if v == a { b } else if v == b { a } else { v })
                .collect(),
        )
    }

    /// Number of inversions, which is the length of any reduced word.
    pub fn length(&self) -> usize {
        let n = self.0.len();
        let mut count = 0;
        for p in 0..n {
            for q in p + 1..n {
                if self.0[p] > self.0[q] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Inversion pairs `(p, q)`, 0-based, `p < q` and `w(p) > w(q)`.
    pub fn inversions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.0.len();
        (0..n).flat_map(move |p| {
            (p + 1..n).filter(move |&q| self.0[p] > self.0[q]).map(move |q| (p, q))
        })
    }

    /// Whether `l(s_j w) < l(w)` (1-based `j`): the value `j+1` sits before
    /// `j` in one-line notation.
    pub fn has_left_descent(&self, j: usize) -> bool {
        let inv = |v: usize| self.0.iter().position(|&x| x as usize == v).unwrap();
        inv(j) < inv(j - 1)
    }

    pub fn left_descents(&self) -> Vec<usize> {
        (1..self.degree()).filter(|&j| self.has_left_descent(j)).collect()
    }

    /// The lexicographically least reduced word. Its first letter is the
    /// smallest left descent; the rest is the canonical word of `s_j w`.
    pub fn canonical_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut w = self.clone();
        while let Some(j) = (1..w.degree()).find(|&j| w.has_left_descent(j)) {
            word.push(j);
            w = w.left_mul_simple(j);
        }
        word
    }

    /// Every reduced word of `w`, in lexicographic order.
    pub fn reduced_words(&self) -> Vec<Vec<usize>> {
        if self.is_identity() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for j in self.left_descents() {
            for mut rest in self.left_mul_simple(j).reduced_words() {
                rest.insert(0, j);
                out.push(rest);
            }
        }
        out
    }

    /// `act(w, s)_k = s_{w(k)}`.
    pub fn act<T: Clone>(&self, seq: &[T]) -> Result<Vec<T>, PermError> {
        if seq.len() != self.degree() {
            return Err(PermError::LengthMismatch { perm: self.degree(), seq: seq.len() });
        }
        Ok(self.0.iter().map(|&v| seq[v as usize].clone()).collect())
    }

    /// All permutations of `n` points in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    /// Direct sum `self ⊕ other`, with `other` acting on the points after
    /// those of `self`.
    pub fn direct_sum(&self, other: &Perm) -> Perm {
        let off = self.degree() as u8;
        Perm(self.0.iter().copied().chain(other.0.iter().map(|&v| v + off)).collect())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.one_line())
    }
}

/// One step of a rewrite between reduced words of the same permutation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BraidMove {
    /// Swap the letters at `pos` and `pos + 1` (distant generators).
    Commute(usize),
    /// Replace `a b a` starting at `pos` by `b a b`.
    Braid(usize),
}

impl BraidMove {
    pub fn apply(self, word: &mut [usize]) {
        match self {
            BraidMove::Commute(p) => {
                debug_assert!(word[p].abs_diff(word[p + 1]) > 1);
                word.swap(p, p + 1);
            }
            BraidMove::Braid(p) => {
                let (a, b) = (word[p], word[p + 1]);
                debug_assert!(a.abs_diff(b) == 1 && word[p + 2] == a);
                word[p] = b;
                word[p + 1] = a;
                word[p + 2] = b;
            }
        }
    }
}

/// Moves turning the reduced word `word` into one that starts with `j`,
/// where `j` must be a left descent of the word's permutation. Positions
/// are shifted by `offset`. Returns the resulting word.
fn front(word: &[usize], j: usize, offset: usize, moves: &mut Vec<BraidMove>) -> Vec<usize> {
    assert!(!word.is_empty(), "s_{j} is not a left descent");
    let s = word[0];
    if s == j {
        return word.to_vec();
    }
    if s.abs_diff(j) > 1 {
        let rest = front(&word[1..], j, offset + 1, moves);
        moves.push(BraidMove::Commute(offset));
        let mut out = vec![j, s];
        out.extend_from_slice(&rest[1..]);
        out
    } else {
        let r1 = front(&word[1..], j, offset + 1, moves);
        let r2 = front(&r1[1..], s, offset + 2, moves);
        moves.push(BraidMove::Braid(offset));
        let mut out = vec![j, s, j];
        out.extend_from_slice(&r2[1..]);
        out
    }
}

/// Braid/commutation moves taking the reduced word `word` to a reduced word
/// starting with `j`.
pub fn moves_to_front(word: &[usize], j: usize) -> (Vec<BraidMove>, Vec<usize>) {
    let mut moves = Vec::new();
    let out = front(word, j, 0, &mut moves);
    (moves, out)
}

/// Braid/commutation moves taking the reduced word `word` (on `n` strands)
/// to the canonical reduced word of the same permutation.
pub fn moves_to_canonical(n: usize, word: &[usize]) -> Result<Vec<BraidMove>, PermError> {
    let target = Perm::from_word(n, word)?.canonical_word();
    debug_assert_eq!(target.len(), word.len(), "word is not reduced");
    let mut moves = Vec::new();
    let mut cur = word.to_vec();
    for p in 0..cur.len() {
        if cur[p] != target[p] {
            let out = front(&cur[p..], target[p], p, &mut moves);
            cur.truncate(p);
            cur.extend(out);
        }
    }
    debug_assert_eq!(cur, target);
    Ok(moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, VecDeque};

    /// Every reduced word of `w`, by brute-force search over words whose
    /// length equals the inversion count.
    fn reduced_words(w: &Perm) -> BTreeSet<Vec<usize>> {
        let n = w.degree();
        let len = w.length();
        let mut out = BTreeSet::new();
        let mut queue = VecDeque::from([(Perm::identity(n), Vec::<usize>::new())]);
        while let Some((p, word)) = queue.pop_front() {
            if word.len() == len {
                if &p == w {
                    out.insert(word);
                }
                continue;
            }
            for j in 1..n {
                let q = p.compose(&Perm::simple(n, j).unwrap());
                if q.length() == p.length() + 1 {
                    let mut wd = word.clone();
                    wd.push(j);
                    queue.push_back((q, wd));
                }
            }
        }
        out
    }

    #[test]
    fn lengths() {
        assert_eq!(Perm::identity(3).length(), 0);
        assert_eq!(Perm::simple(2, 1).unwrap().length(), 1);
        assert_eq!(Perm::longest(3).length(), 3);
        assert_eq!(Perm::longest(4).one_line(), vec![4, 3, 2, 1]);
        assert_eq!(Perm::longest(4).length(), 6);
        assert!(Perm::longest(1).is_identity());
        assert_eq!(Perm::longest(2).one_line(), vec![2, 1]);
    }

    #[test]
    fn public_reduced_words_agree() {
        for n in 0..=4 {
            for w in Perm::all(n) {
                let got: BTreeSet<Vec<usize>> = w.reduced_words().into_iter().collect();
                assert_eq!(got, reduced_words(&w));
            }
        }
    }

    #[test]
    fn canonical_words_small() {
        assert!(Perm::identity(3).canonical_word().is_empty());
        assert_eq!(Perm::longest(3).canonical_word(), vec![1, 2, 1]);
        // (1 3) in S_3 is the longest element too
        let t13 = Perm::from_one_line(&[3, 2, 1]).unwrap();
        assert_eq!(reduced_words(&t13).into_iter().next().unwrap(), vec![1, 2, 1]);
        assert_eq!(t13.canonical_word(), vec![1, 2, 1]);
    }

    #[test]
    fn canonical_word_matches_brute_force() {
        for n in 0..=5 {
            for w in Perm::all(n) {
                let words = reduced_words(&w);
                let least = words.iter().next().unwrap();
                let cw = w.canonical_word();
                assert_eq!(&cw, least, "{w:?}");
                assert_eq!(cw.len(), w.length());
                assert_eq!(Perm::from_word(n, &cw).unwrap(), w);
            }
        }
    }

    #[test]
    fn moves_reach_canonical_from_every_reduced_word() {
        for n in 0..=5 {
            for w in Perm::all(n) {
                let target = w.canonical_word();
                for word in reduced_words(&w) {
                    let moves = moves_to_canonical(n, &word).unwrap();
                    let mut cur = word.clone();
                    for m in moves {
                        m.apply(&mut cur);
                        assert_eq!(Perm::from_word(n, &cur).unwrap(), w);
                    }
                    assert_eq!(cur, target);
                }
            }
        }
    }

    #[test]
    fn moves_to_front_every_descent() {
        for n in 2..=5 {
            for w in Perm::all(n) {
                let cw = w.canonical_word();
                for j in w.left_descents() {
                    let (moves, out) = moves_to_front(&cw, j);
                    let mut cur = cw.clone();
                    for m in moves {
                        m.apply(&mut cur);
                    }
                    assert_eq!(cur, out);
                    assert_eq!(out[0], j);
                    assert_eq!(Perm::from_word(n, &out).unwrap(), w);
                }
            }
        }
    }

    #[test]
    fn act_examples() {
        let id = Perm::identity(2);
        assert_eq!(id.act(&[1, 2]).unwrap(), vec![1, 2]);
        let s1 = Perm::simple(2, 1).unwrap();
        assert_eq!(s1.act(&[1, 2]).unwrap(), vec![2, 1]);
        assert_eq!(Perm::longest(3).act(&['a', 'b', 'c']).unwrap(), vec!['c', 'b', 'a']);
        assert!(matches!(id.act(&[1]), Err(PermError::LengthMismatch { .. })));
    }

    #[test]
    fn all_counts() {
        assert_eq!(Perm::all(0).len(), 1);
        assert_eq!(Perm::all(4).len(), 24);
    }

    #[test]
    fn descents_agree_with_length() {
        for w in Perm::all(4) {
            for j in 1..4 {
                let shorter = w.left_mul_simple(j).length() < w.length();
                assert_eq!(shorter, w.has_left_descent(j));
                assert_eq!(w.left_mul_simple(j), Perm::simple(4, j).unwrap().compose(&w));
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn perm(n: usize) -> impl Strategy<Value = Perm> {
            Just((1..=n).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::from_one_line(&v).unwrap())
        }

        proptest! {
            // The sequence action is a right action: act(uv) = act(v) ∘ act(u).
            #[test]
            fn act_composes(u in perm(5), v in perm(5), s in proptest::collection::vec(0u8..4, 5)) {
                let lhs = u.compose(&v).act(&s).unwrap();
                let rhs = v.act(&u.act(&s).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn inverse_roundtrip(u in perm(6)) {
                prop_assert!(u.compose(&u.inverse()).is_identity());
                prop_assert_eq!(u.inverse().length(), u.length());
            }
        }
    }
}
