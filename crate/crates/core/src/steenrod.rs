//! The mod 2 Steenrod algebra in the admissible basis.
//!
//! Elements are sums of admissible monomials `Sq^{i1} ... Sq^{ik}` with
//! `i_j >= 2 i_{j+1}`. Products are normalized with the Adem relations
//!
//! ```text
//! Sq^a Sq^b = sum_{c=0}^{a/2} binom(b-c-1, a-2c) Sq^{a+b-c} Sq^c      (a < 2b)
//! ```
//!
//! [`SteenrodAlgebra`] holds precomputed basis and product tables up to a
//! fixed degree; the free functions work on symbolic elements.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Error, Result};

/// `binom(n, k) mod 2` for `n, k >= 0` by Lucas's theorem.
#[inline]
pub fn lucas_binom_mod2(n: u64, k: u64) -> bool {
    k <= n && (k & !n) == 0
}

pub fn is_admissible(word: &[u32]) -> bool {
    word.iter().all(|&e| e > 0) && word.windows(2).all(|w| w[0] >= 2 * w[1])
}

/// An admissible monomial; the empty sequence is the unit `Sq^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct AdmissibleMonomial(Vec<u32>);

impl AdmissibleMonomial {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if !is_admissible(&exponents) {
            return arg_err(format!("{exponents:?} is not admissible"));
        }
        Ok(Self(exponents))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for AdmissibleMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Sq0");
        }
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "Sq{e}")?;
        }
        Ok(())
    }
}

/// A homogeneous element: a set of distinct admissible monomials of one degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SteenrodElement {
    degree: u32,
    terms: BTreeSet<AdmissibleMonomial>,
}

impl SteenrodElement {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeSet::new(),
        }
    }

    pub fn unit() -> Self {
        Self::from_monomial(AdmissibleMonomial::unit())
    }

    /// `Sq^i` (the unit when `i == 0`).
    pub fn sq(i: u32) -> Self {
        if i == 0 {
            Self::unit()
        } else {
            Self::from_monomial(AdmissibleMonomial(vec![i]))
        }
    }

    pub fn from_monomial(m: AdmissibleMonomial) -> Self {
        Self {
            degree: m.degree(),
            terms: BTreeSet::from([m]),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeSet<AdmissibleMonomial> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn toggle(&mut self, m: AdmissibleMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// Sum of two elements of the same degree (symmetric difference of terms).
    pub fn add(&self, other: &SteenrodElement) -> Result<SteenrodElement> {
        if self.degree != other.degree {
            return arg_err(format!(
                "cannot add elements of degrees {} and {}",
                self.degree, other.degree
            ));
        }
        let mut out = self.clone();
        for m in &other.terms {
            out.toggle(m.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for SteenrodElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for SteenrodElement {
    type Err = Error;

    /// Parses the rendering produced by `Display`. Non-admissible words are
    /// rejected rather than normalized, so parsing is the exact inverse of
    /// printing. A zero element parses with degree 0.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(0));
        }
        let mut out: Option<SteenrodElement> = None;
        for term in s.split(" + ") {
            let mut word = Vec::new();
            for factor in term.split(' ') {
                let e = factor
                    .strip_prefix("Sq")
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad factor {factor:?} in {s:?}")))?;
                word.push(e);
            }
            let m = if word == [0] {
                AdmissibleMonomial::unit()
            } else {
                AdmissibleMonomial::new(word).map_err(|e| Error::Parse(e.to_string()))?
            };
            match &mut out {
                None => out = Some(Self::from_monomial(m)),
                Some(acc) => {
                    if acc.degree != m.degree() {
                        return Err(Error::Parse(format!("inhomogeneous element {s:?}")));
                    }
                    if acc.terms.contains(&m) {
                        return Err(Error::Parse(format!("repeated term {m} in {s:?}")));
                    }
                    acc.terms.insert(m);
                }
            }
        }
        out.ok_or_else(|| Error::Parse("empty element".into()))
    }
}

type Pair = (u32, u32);

fn adem_cache() -> &'static RwLock<HashMap<Pair, Arc<[Pair]>>> {
    static CACHE: OnceLock<RwLock<HashMap<Pair, Arc<[Pair]>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The Adem expansion of `Sq^a Sq^b` for `0 < a < 2b`, as pairs `(x, y)`
/// meaning `Sq^x Sq^y` (with `y == 0` meaning the single factor `Sq^x`).
/// Every pair returned is admissible.
fn adem_pair(a: u32, b: u32) -> Arc<[Pair]> {
    debug_assert!(a > 0 && a < 2 * b);
    if let Some(hit) = adem_cache().read().unwrap().get(&(a, b)) {
        return hit.clone();
    }
    let terms: Arc<[Pair]> = (0..=a / 2)
        .filter(|&c| lucas_binom_mod2((b - c - 1) as u64, (a - 2 * c) as u64))
        .map(|c| (a + b - c, c))
        .collect();
    adem_cache().write().unwrap().insert((a, b), terms.clone());
    terms
}

// Sq^r times an admissible word, as a list of admissible words.
type LeftSqMemo = HashMap<(u32, Vec<u32>), Arc<[Vec<u32>]>>;

thread_local! {
    static LEFT_SQ_MEMO: RefCell<LeftSqMemo> = RefCell::new(HashMap::new());
}

fn toggle_word(set: &mut BTreeSet<Vec<u32>>, w: Vec<u32>) {
    if !set.remove(&w) {
        set.insert(w);
    }
}

/// `Sq^i · m` for an admissible word `m`, as a set of admissible words.
fn left_sq(i: u32, m: &[u32]) -> Arc<[Vec<u32>]> {
    if i == 0 {
        return Arc::from(vec![m.to_vec()]);
    }
    if m.is_empty() || i >= 2 * m[0] {
        let mut w = Vec::with_capacity(m.len() + 1);
        w.push(i);
        w.extend_from_slice(m);
        return Arc::from(vec![w]);
    }
    let key = (i, m.to_vec());
    if let Some(hit) = LEFT_SQ_MEMO.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let (b, tail) = (m[0], &m[1..]);
    let mut acc = BTreeSet::new();
    for &(x, y) in adem_pair(i, b).iter() {
        let inner: Arc<[Vec<u32>]> = if y == 0 {
            Arc::from(vec![tail.to_vec()])
        } else {
            left_sq(y, tail)
        };
        for w in inner.iter() {
            for z in left_sq(x, w).iter() {
                toggle_word(&mut acc, z.clone());
            }
        }
    }
    let result: Arc<[Vec<u32>]> = acc.into_iter().collect();
    LEFT_SQ_MEMO.with(|c| c.borrow_mut().insert(key, result.clone()));
    result
}

fn words_to_element(degree: u32, words: BTreeSet<Vec<u32>>) -> SteenrodElement {
    SteenrodElement {
        degree,
        terms: words.into_iter().map(AdmissibleMonomial).collect(),
    }
}

/// Rewrites an arbitrary word `Sq^{w1} ... Sq^{wk}` in the admissible basis.
/// Zero entries are `Sq^0` and drop out.
pub fn adem_normalize(word: &[u32]) -> SteenrodElement {
    let degree = word.iter().sum();
    let mut current: BTreeSet<Vec<u32>> = BTreeSet::from([Vec::new()]);
    for &letter in word.iter().rev().filter(|&&e| e > 0) {
        let mut next = BTreeSet::new();
        for m in &current {
            for w in left_sq(letter, m).iter() {
                toggle_word(&mut next, w.clone());
            }
        }
        current = next;
    }
    words_to_element(degree, current)
}

pub fn multiply(a: &SteenrodElement, b: &SteenrodElement) -> SteenrodElement {
    let degree = a.degree + b.degree;
    let mut acc = BTreeSet::new();
    for m in &a.terms {
        for n in &b.terms {
            let mut current: BTreeSet<Vec<u32>> = BTreeSet::from([n.0.clone()]);
            for &letter in m.0.iter().rev() {
                let mut next = BTreeSet::new();
                for w in &current {
                    for z in left_sq(letter, w).iter() {
                        toggle_word(&mut next, z.clone());
                    }
                }
                current = next;
            }
            for w in current {
                toggle_word(&mut acc, w);
            }
        }
    }
    words_to_element(degree, acc)
}

fn admissible_sequences(n: u32, max_first: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for first in 1..=n.min(max_first) {
        prefix.push(first);
        admissible_sequences(n - first, first / 2, prefix, out);
        prefix.pop();
    }
}

/// All admissible monomials of degree `n`, ordered lexicographically by exponents.
pub fn basis(n: u32) -> Vec<AdmissibleMonomial> {
    let mut out = Vec::new();
    admissible_sequences(n, n, &mut Vec::new(), &mut out);
    out.sort();
    out.into_iter().map(AdmissibleMonomial).collect()
}

/// Products of basis monomials with `deg(left) = a`, `deg(right) = b`.
struct ProductBlock {
    dim_right: usize,
    offsets: Vec<u32>,
    data: Vec<u16>,
}

/// Basis and multiplication tables of the algebra through a fixed degree.
///
/// `product(a, i, b, j)` lists the basis indices (in degree `a + b`) of the
/// product of the `i`-th monomial of degree `a` with the `j`-th of degree `b`.
pub struct SteenrodAlgebra {
    max_degree: u32,
    basis: Vec<Vec<AdmissibleMonomial>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    products: Vec<Vec<ProductBlock>>,
}

impl fmt::Debug for SteenrodAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SteenrodAlgebra")
            .field("max_degree", &self.max_degree)
            .finish()
    }
}

impl SteenrodAlgebra {
    pub fn new(max_degree: u32) -> Self {
        let basis: Vec<Vec<AdmissibleMonomial>> = (0..=max_degree).map(basis).collect();
        let index: Vec<HashMap<Vec<u32>, usize>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, m)| (m.0.clone(), i)).collect())
            .collect();
        let mut alg = Self {
            max_degree,
            basis,
            index,
            products: Vec::with_capacity(max_degree as usize + 1),
        };
        for a in 0..=max_degree {
            let mut row = Vec::with_capacity((max_degree - a) as usize + 1);
            for b in 0..=max_degree - a {
                row.push(alg.build_block(a, b));
            }
            alg.products.push(row);
        }
        alg
    }

    fn build_block(&self, a: u32, b: u32) -> ProductBlock {
        let dim_left = self.dim(a);
        let dim_right = self.dim(b);
        let mut offsets = Vec::with_capacity(dim_left * dim_right + 1);
        let mut data = Vec::new();
        offsets.push(0);
        let target_index = &self.index[(a + b) as usize];
        for theta in &self.basis[a as usize] {
            for (j, phi) in self.basis[b as usize].iter().enumerate() {
                let mut entry: BTreeSet<usize> = BTreeSet::new();
                match theta.0.split_first() {
                    None => {
                        entry.insert(j);
                    }
                    Some((&first, [])) => {
                        for w in left_sq(first, &phi.0).iter() {
                            entry.insert(target_index[w]);
                        }
                    }
                    Some((&first, rest)) => {
                        // theta = Sq^first · rest, and rest·phi is already tabulated.
                        let rest_deg = a - first;
                        let rest_idx = self.index[rest_deg as usize][rest];
                        let sq_idx = self.index[first as usize][&vec![first]];
                        let mid_deg = rest_deg + b;
                        for &psi in self.products[rest_deg as usize][b as usize].get(rest_idx, j) {
                            for &k in self.products[first as usize][mid_deg as usize]
                                .get(sq_idx, psi as usize)
                            {
                                let k = k as usize;
                                if !entry.remove(&k) {
                                    entry.insert(k);
                                }
                            }
                        }
                    }
                }
                data.extend(entry.into_iter().map(|k| k as u16));
                offsets.push(data.len() as u32);
            }
        }
        ProductBlock {
            dim_right,
            offsets,
            data,
        }
    }

    /// A process-wide table covering at least `max_degree`.
    pub fn shared(max_degree: u32) -> Arc<SteenrodAlgebra> {
        static SHARED: OnceLock<Mutex<Option<Arc<SteenrodAlgebra>>>> = OnceLock::new();
        let slot = SHARED.get_or_init(|| Mutex::new(None));
        let mut guard = slot.lock().unwrap();
        if let Some(alg) = guard.as_ref() {
            if alg.max_degree >= max_degree {
                return alg.clone();
            }
        }
        let alg = Arc::new(SteenrodAlgebra::new(max_degree));
        *guard = Some(alg.clone());
        alg
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    #[inline]
    pub fn dim(&self, n: u32) -> usize {
        self.basis[n as usize].len()
    }

    pub fn basis(&self, n: u32) -> &[AdmissibleMonomial] {
        &self.basis[n as usize]
    }

    pub fn index_of(&self, m: &AdmissibleMonomial) -> Option<usize> {
        self.index.get(m.degree() as usize)?.get(&m.0).copied()
    }

    #[inline]
    pub fn product(&self, a: u32, i: usize, b: u32, j: usize) -> &[u16] {
        self.products[a as usize][b as usize].get(i, j)
    }
}

impl ProductBlock {
    #[inline]
    fn get(&self, i: usize, j: usize) -> &[u16] {
        let k = i * self.dim_right + j;
        &self.data[self.offsets[k] as usize..self.offsets[k + 1] as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> SteenrodElement {
        s.parse().unwrap()
    }

    #[test]
    fn adem_examples() {
        assert!(adem_normalize(&[1, 1]).is_zero());
        assert_eq!(adem_normalize(&[2, 2]), el("Sq3 Sq1"));
        assert_eq!(adem_normalize(&[3]), el("Sq3"));
        // Sq^1 Sq^2 = Sq^3
        assert_eq!(multiply(&el("Sq1"), &el("Sq2")), el("Sq3"));
        assert_eq!(multiply(&el("Sq2"), &el("Sq3")), adem_normalize(&[2, 3]));
    }

    #[test]
    fn unit_is_identity() {
        let x = el("Sq4 Sq2 + Sq6");
        assert_eq!(multiply(&SteenrodElement::unit(), &x), x);
        assert_eq!(multiply(&x, &SteenrodElement::unit()), x);
    }

    #[test]
    fn basis_small_degrees() {
        assert_eq!(basis(0), vec![AdmissibleMonomial::unit()]);
        let b3: Vec<String> = basis(3).iter().map(|m| m.to_string()).collect();
        assert_eq!(b3, vec!["Sq2 Sq1", "Sq3"]);
    }

    #[test]
    fn render_and_parse() {
        let x = el("Sq3 Sq1 + Sq4");
        assert_eq!(x.to_string(), "Sq3 Sq1 + Sq4");
        assert_eq!(el("Sq0"), SteenrodElement::unit());
        assert!("Sq1 Sq1".parse::<SteenrodElement>().is_err());
        assert!("Sq1 + Sq2".parse::<SteenrodElement>().is_err());
        assert!("Sq4 + Sq4".parse::<SteenrodElement>().is_err());
    }

    #[test]
    fn adding_across_degrees_is_an_error() {
        assert!(el("Sq1").add(&el("Sq2")).is_err());
        assert!(el("Sq2").add(&el("Sq2")).unwrap().is_zero());
    }

    #[test]
    fn table_agrees_with_symbolic_products() {
        let alg = SteenrodAlgebra::new(12);
        for a in 0..=6 {
            for b in 0..=6 {
                for (i, x) in alg.basis(a).iter().enumerate() {
                    for (j, y) in alg.basis(b).iter().enumerate() {
                        let expect = multiply(
                            &SteenrodElement::from_monomial(x.clone()),
                            &SteenrodElement::from_monomial(y.clone()),
                        );
                        let got: BTreeSet<AdmissibleMonomial> = alg
                            .product(a, i, b, j)
                            .iter()
                            .map(|&k| alg.basis(a + b)[k as usize].clone())
                            .collect();
                        assert_eq!(&got, expect.terms(), "{x} * {y}");
                    }
                }
            }
        }
    }
}
