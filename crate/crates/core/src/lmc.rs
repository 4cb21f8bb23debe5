//! Labelled Markov chains: the chains built from a matrix and from one of
//! its factorizations, backward matrices, rank, and initialized trace
//! equivalence.
//!
//! Words are lists of letter indices into the chain's label list. A
//! distribution is a nonnegative row vector summing to 1.

use crate::exact::{sum, Field, Rational};
use crate::linalg::FieldMatrix;
use crate::reductions::Factorization;
use crate::{Error, Result};

/// Label of the final letter emitted forever by the gadget's sink state.
pub const CHECK: &str = "✓";

/// `(n, Σ, μ)` with `Σ_σ μ(σ)` row-stochastic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lmc {
    n: usize,
    labels: Vec<String>,
    mu: Vec<FieldMatrix<Rational>>,
}

impl Lmc {
    pub fn new(n: usize, labels: Vec<String>, mu: Vec<FieldMatrix<Rational>>) -> Result<Self> {
        if labels.len() != mu.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels but {} transition matrices",
                labels.len(),
                mu.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DimensionMismatch(format!("duplicate label {l:?}")));
            }
        }
        let mut total = FieldMatrix::<Rational>::zeros(n, n);
        for m in &mu {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "transition matrix of shape {:?}, expected {n}x{n}",
                    m.shape()
                )));
            }
            if let Some((row, col)) = m.find_negative() {
                return Err(Error::NegativeEntry { row, col });
            }
            for i in 0..n {
                for j in 0..n {
                    total.set(i, j, total.get(i, j).clone() + m.get(i, j));
                }
            }
        }
        if !total.is_row_stochastic() {
            return Err(Error::NotStochastic("transition matrices do not sum to a row-stochastic matrix".into()));
        }
        Ok(Lmc { n, labels, mu })
    }

    pub fn state_count(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn transitions(&self) -> &[FieldMatrix<Rational>] {
        &self.mu
    }

    pub fn letter(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLetter(label.to_string()))
    }

    /// Letter indices of a word given by labels.
    pub fn word(&self, labels: &[&str]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.letter(l)).collect()
    }

    fn mu(&self, letter: usize) -> Result<&FieldMatrix<Rational>> {
        self.mu.get(letter).ok_or_else(|| Error::UnknownLetter(format!("#{letter}")))
    }

    /// `Pr_i(w)` for every state `i`, i.e. `μ(w) · 1`.
    pub fn backward_column(&self, word: &[usize]) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::one(); self.n];
        for &l in word.iter().rev() {
            v = self.mu(l)?.mul_vec(&v)?;
        }
        Ok(v)
    }

    /// `π · μ(w)`.
    pub fn forward(&self, pi: &[Rational], word: &[usize]) -> Result<Vec<Rational>> {
        check_distribution(pi, self.n)?;
        let mut v = pi.to_vec();
        for &l in word {
            v = self.mu(l)?.vec_mul(&v)?;
        }
        Ok(v)
    }
}

/// The point distribution on state `i` of an `n`-state chain.
pub fn dirac(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn check_distribution(pi: &[Rational], n: usize) -> Result<()> {
    if pi.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "distribution of length {}, expected {n}",
            pi.len()
        )));
    }
    if pi.iter().any(Rational::is_negative) || sum(pi) != Rational::one() {
        return Err(Error::NotStochastic("initial distribution".into()));
    }
    Ok(())
}

/// `π · μ(w) · 1`.
pub fn word_prob(lmc: &Lmc, pi: &[Rational], word: &[usize]) -> Result<Rational> {
    Ok(sum(&lmc.forward(pi, word)?))
}

fn gadget_labels(m: usize, n: usize) -> Vec<String> {
    (1..=m)
        .map(|i| format!("a{i}"))
        .chain((1..=n).map(|j| format!("b{j}")))
        .chain(std::iter::once(CHECK.to_string()))
        .collect()
}

/// The `(m+2)`-state chain of a column-stochastic `n x m` matrix: from state
/// 0 letter `a_i` leads to state `i` with probability `1/m`, from state `i`
/// letter `b_j` leads to the sink `m+1` with probability `M_{j,i}`, and the
/// sink loops on `✓`.
pub fn gadget_lmc(m: &FieldMatrix<Rational>) -> Result<Lmc> {
    if !m.is_column_stochastic() {
        return Err(Error::NotStochastic("gadget matrix must be column-stochastic".into()));
    }
    let (rows, cols) = m.shape();
    let states = cols + 2;
    let sink = cols + 1;
    let share = Rational::new(1, cols as i64);
    let mut mu = Vec::with_capacity(cols + rows + 1);
    for i in 1..=cols {
        let mut t = FieldMatrix::zeros(states, states);
        t.set(0, i, share.clone());
        mu.push(t);
    }
    for j in 0..rows {
        let mut t = FieldMatrix::zeros(states, states);
        for i in 0..cols {
            t.set(i + 1, sink, m.get(j, i).clone());
        }
        mu.push(t);
    }
    let mut check = FieldMatrix::zeros(states, states);
    check.set(sink, sink, Rational::one());
    mu.push(check);
    Lmc::new(states, gadget_labels(cols, rows), mu)
}

/// The `(d+2)`-state chain of a factorization `W H` into column-stochastic
/// factors: `a_i` leads from 0 to `l` with probability `H_{l,i}/m` and
/// `b_j` leads from `l` to the sink with probability `W_{j,l}`.
pub fn covering_lmc(w: &FieldMatrix<Rational>, h: &FieldMatrix<Rational>) -> Result<Lmc> {
    if !w.is_column_stochastic() || !h.is_column_stochastic() {
        return Err(Error::NotStochastic("covering factors must be column-stochastic".into()));
    }
    if w.cols() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "W has {} columns but H has {} rows",
            w.cols(),
            h.rows()
        )));
    }
    let (n, d, m) = (w.rows(), w.cols(), h.cols());
    let states = d + 2;
    let sink = d + 1;
    let share = Rational::new(1, m as i64);
    let mut mu = Vec::with_capacity(m + n + 1);
    for i in 0..m {
        let mut t = FieldMatrix::zeros(states, states);
        for l in 0..d {
            t.set(0, l + 1, h.get(l, i).clone() * &share);
        }
        mu.push(t);
    }
    for j in 0..n {
        let mut t = FieldMatrix::zeros(states, states);
        for l in 0..d {
            t.set(l + 1, sink, w.get(j, l).clone());
        }
        mu.push(t);
    }
    let mut check = FieldMatrix::zeros(states, states);
    check.set(sink, sink, Rational::one());
    mu.push(check);
    Lmc::new(states, gadget_labels(m, n), mu)
}

/// Incrementally reduced spanning set; `insert` reports whether the vector
/// was new.
struct Span {
    reduced: Vec<(Vec<Rational>, usize)>,
}

impl Span {
    fn new() -> Self {
        Span { reduced: Vec::new() }
    }

    fn insert(&mut self, v: &[Rational]) -> bool {
        let mut r = v.to_vec();
        for (row, pivot) in &self.reduced {
            if !r[*pivot].is_zero() {
                let f = r[*pivot].clone();
                for (x, y) in r.iter_mut().zip(row) {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
        let Some(pivot) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pivot].inv().expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = x.clone() * &inv;
        }
        self.reduced.push((r, pivot));
        true
    }

    fn dim(&self) -> usize {
        self.reduced.len()
    }
}

/// Rank of the backward matrix: the dimension of the smallest space holding
/// the all-ones vector and closed under every `μ(σ)`.
pub fn lmc_rank(lmc: &Lmc) -> usize {
    let mut span = Span::new();
    let ones = vec![Rational::one(); lmc.n];
    span.insert(&ones);
    let mut queue = vec![ones];
    while let Some(v) = queue.pop() {
        for m in &lmc.mu {
            let next = m.mul_vec(&v).expect("square transitions");
            if span.insert(&next) {
                queue.push(next);
            }
        }
    }
    span.dim()
}

/// Columns `Pr_i(w)` for the given words.
pub fn backward_slice(lmc: &Lmc, words: &[Vec<usize>]) -> Result<FieldMatrix<Rational>> {
    let cols = words.iter().map(|w| lmc.backward_column(w)).collect::<Result<Vec<_>>>()?;
    if cols.is_empty() {
        return Ok(FieldMatrix::zeros(lmc.n, 0));
    }
    FieldMatrix::from_columns(&cols)
}

/// The row-stochastic `(m+2) x (d+2)` matrix sending each gadget state to a
/// covering distribution: 1 in both corners and `Hᵀ` in the middle.
pub fn cover_witness(h: &FieldMatrix<Rational>) -> Result<FieldMatrix<Rational>> {
    if !h.is_column_stochastic() {
        return Err(Error::NotStochastic("H must be column-stochastic".into()));
    }
    let (d, m) = h.shape();
    let mut a = FieldMatrix::zeros(m + 2, d + 2);
    a.set(0, 0, Rational::one());
    a.set(m + 1, d + 1, Rational::one());
    for i in 0..m {
        for l in 0..d {
            a.set(i + 1, l + 1, h.get(l, i).clone());
        }
    }
    Ok(a)
}

/// Whether `Pr¹_{π1}(w) = Pr²_{π2}(w)` for every word `w`.
///
/// Grows a basis of the span of `(π1 μ1(w), π2 μ2(w))` by extending basis
/// vectors letter by letter; the span is reached within `n1 + n2`
/// insertions and equality is linear, so checking the basis suffices.
pub fn lmc_equivalent(l1: &Lmc, pi1: &[Rational], l2: &Lmc, pi2: &[Rational]) -> Result<bool> {
    if l1.labels != l2.labels {
        return Err(Error::AlphabetMismatch);
    }
    check_distribution(pi1, l1.n)?;
    check_distribution(pi2, l2.n)?;
    let joined = |a: &[Rational], b: &[Rational]| -> Vec<Rational> { a.iter().chain(b).cloned().collect() };
    let start = joined(pi1, pi2);
    let mut span = Span::new();
    span.insert(&start);
    let mut queue = vec![start];
    while let Some(v) = queue.pop() {
        let (a, b) = v.split_at(l1.n);
        if sum(a) != sum(b) {
            return Ok(false);
        }
        for (m1, m2) in l1.mu.iter().zip(&l2.mu) {
            let next = joined(&m1.vec_mul(a)?, &m2.vec_mul(b)?);
            if span.insert(&next) {
                queue.push(next);
            }
        }
    }
    Ok(true)
}

/// Whether `A` witnesses that `covering` covers `gadget`: `A` is
/// row-stochastic and every gadget state `i` is trace equivalent to the
/// covering distribution `e_i A`. Linearity in the initial distribution
/// extends this to every distribution.
pub fn check_cover(gadget: &Lmc, covering: &Lmc, a: &FieldMatrix<Rational>) -> Result<bool> {
    if a.shape() != (gadget.n, covering.n) {
        return Err(Error::DimensionMismatch(format!(
            "witness of shape {:?}, expected {}x{}",
            a.shape(),
            gadget.n,
            covering.n
        )));
    }
    if !a.is_nonnegative() || !a.is_row_stochastic() {
        return Ok(false);
    }
    for i in 0..gadget.n {
        if !lmc_equivalent(gadget, &dirac(gadget.n, i), covering, a.row(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A factorization of the gadget matrix `m` read off a covering chain and
/// its witness: `W_{j,l} = Pr'_l(b_j)` and `H_{l,i} = A_{i,l}` over the
/// covering states that gadget states `1..=m` use. The product is checked
/// against `m`.
pub fn extract_nmf(
    m: &FieldMatrix<Rational>,
    covering: &Lmc,
    a: &FieldMatrix<Rational>,
) -> Result<Factorization<Rational>> {
    let (rows, cols) = m.shape();
    if a.rows() != cols + 2 || a.cols() != covering.n {
        return Err(Error::DimensionMismatch(format!(
            "witness of shape {:?} for a {rows}x{cols} matrix",
            a.shape()
        )));
    }
    let used: Vec<usize> = (0..covering.n)
        .filter(|&l| (1..=cols).any(|i| !a.get(i, l).is_zero()))
        .collect();
    let mut w = FieldMatrix::zeros(rows, used.len());
    for j in 0..rows {
        let letter = covering.letter(&format!("b{}", j + 1))?;
        let col = covering.backward_column(&[letter])?;
        for (k, &l) in used.iter().enumerate() {
            w.set(j, k, col[l].clone());
        }
    }
    let h = a.select_rows(&(1..=cols).collect::<Vec<_>>()).select_columns(&used).transpose();
    let f = Factorization::new(w, h)?;
    if &f.product()? != m {
        return Err(Error::Degenerate("extracted factors do not reproduce the matrix".into()));
    }
    Ok(f)
}

/// Brute-force `Pr(w)` for every word of length at most `len`, in
/// shortlex order.
pub fn word_probabilities(lmc: &Lmc, pi: &[Rational], len: usize) -> Result<Vec<Rational>> {
    let mut out = Vec::new();
    let mut layer = vec![pi.to_vec()];
    check_distribution(pi, lmc.n)?;
    for depth in 0..=len {
        out.extend(layer.iter().map(|v| sum(v)));
        if depth == len {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() * lmc.mu.len());
        for v in &layer {
            for m in &lmc.mu {
                next.push(m.vec_mul(v)?);
            }
        }
        layer = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::linalg::column_stochastic_normalize;

    fn small_chains() -> (Lmc, Lmc) {
        let m = data::small_stochastic_matrix();
        let gadget = gadget_lmc(&m).unwrap();
        let covering = covering_lmc(&FieldMatrix::identity(2), &m).unwrap();
        (gadget, covering)
    }

    #[test]
    fn small_chain_word_probability() {
        let (g, c) = small_chains();
        assert_eq!(g.state_count(), 5);
        assert_eq!(c.state_count(), 4);
        let w = g.word(&["a1", "b1"]).unwrap();
        assert_eq!(word_prob(&g, &dirac(5, 0), &w).unwrap(), Rational::new(1, 12));
        assert_eq!(word_prob(&c, &dirac(4, 0), &w).unwrap(), Rational::new(1, 12));
        assert_eq!(word_prob(&g, &dirac(5, 0), &[]).unwrap(), Rational::one());
        assert!(lmc_equivalent(&g, &dirac(5, 0), &c, &dirac(4, 0)).unwrap());
    }

    #[test]
    fn unknown_letter() {
        let (g, _) = small_chains();
        assert_eq!(g.word(&["c"]), Err(Error::UnknownLetter("c".into())));
        assert!(matches!(word_prob(&g, &dirac(5, 0), &[99]), Err(Error::UnknownLetter(_))));
    }

    #[test]
    fn ranks() {
        let (g, c) = small_chains();
        assert_eq!(lmc_rank(&g), 4);
        assert_eq!(lmc_rank(&c), 4);
        let cube = column_stochastic_normalize(&data::cube_matrix()).unwrap().normalized;
        let g = gadget_lmc(&cube).unwrap();
        assert_eq!(g.state_count(), 10);
        assert_eq!(lmc_rank(&g), 6);
        let c = covering_lmc(&FieldMatrix::identity(6), &cube).unwrap();
        assert_eq!(c.state_count(), 8);
        assert_eq!(lmc_rank(&c), 8);
    }

    #[test]
    fn trivial_gadget() {
        let g = gadget_lmc(&FieldMatrix::identity(1)).unwrap();
        assert_eq!(g.state_count(), 3);
        let w = g.word(&["a1", "b1", CHECK, CHECK]).unwrap();
        assert_eq!(word_prob(&g, &dirac(3, 0), &w).unwrap(), Rational::one());
    }

    #[test]
    fn slices() {
        let (g, c) = small_chains();
        let eps = backward_slice(&g, &[vec![]]).unwrap();
        assert_eq!(eps.column(0), vec![Rational::one(); 5]);
        let bs: Vec<Vec<usize>> = (1..=2).map(|j| g.word(&[&format!("b{j}")]).unwrap()).collect();
        let slice = backward_slice(&g, &bs).unwrap();
        let m = data::small_stochastic_matrix();
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(slice.get(i + 1, j), m.get(j, i));
            }
        }
        let slice = backward_slice(&c, &bs).unwrap();
        assert_eq!(slice.get(1, 0), &Rational::one());
        assert_eq!(slice.get(2, 0), &Rational::zero());
    }

    #[test]
    fn witnesses() {
        let (g, c) = small_chains();
        let m = data::small_stochastic_matrix();
        let a = cover_witness(&m).unwrap();
        assert_eq!(a.shape(), (5, 4));
        assert!(a.is_row_stochastic());
        assert!(check_cover(&g, &c, &a).unwrap());
        let f = extract_nmf(&m, &c, &a).unwrap();
        assert_eq!(f.w, FieldMatrix::identity(2));
        assert_eq!(f.h, m);

        let mut bad = a.clone();
        bad.set(1, 1, bad.get(1, 1).clone() * Rational::new(9, 10));
        bad.set(1, 2, bad.get(1, 2).clone() * Rational::new(9, 10));
        assert!(!check_cover(&g, &c, &bad).unwrap());
        assert!(check_cover(&g, &c, &FieldMatrix::zeros(4, 4)).is_err());
    }

    #[test]
    fn perturbed_covering_detected() {
        let m = data::small_stochastic_matrix();
        let g = gadget_lmc(&m).unwrap();
        let mut h = m.clone();
        h.set(0, 0, Rational::new(1, 4) + Rational::new(1, 100));
        h.set(1, 0, Rational::new(3, 4) - Rational::new(1, 100));
        let c = covering_lmc(&FieldMatrix::identity(2), &h).unwrap();
        assert!(!lmc_equivalent(&g, &dirac(5, 0), &c, &dirac(4, 0)).unwrap());
    }

    #[test]
    fn paz_cover() {
        let cube = column_stochastic_normalize(&data::cube_matrix()).unwrap().normalized;
        let g = gadget_lmc(&cube).unwrap();
        let c = covering_lmc(&FieldMatrix::identity(6), &cube).unwrap();
        let a = cover_witness(&cube).unwrap();
        assert_eq!(a.shape(), (10, 8));
        assert!(check_cover(&g, &c, &a).unwrap());
    }

    #[test]
    fn alphabet_mismatch() {
        let (g, _) = small_chains();
        let other = gadget_lmc(&FieldMatrix::identity(1)).unwrap();
        assert_eq!(
            lmc_equivalent(&g, &dirac(5, 0), &other, &dirac(3, 0)),
            Err(Error::AlphabetMismatch)
        );
    }

    #[test]
    fn not_stochastic_rejected() {
        let m = FieldMatrix::from_rows(vec![vec![Rational::new(1, 2)]]).unwrap();
        assert!(matches!(gadget_lmc(&m), Err(Error::NotStochastic(_))));
    }
}
