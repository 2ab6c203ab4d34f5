//! Finitely generated graded modules over the Steenrod algebra, given by an
//! F2 basis ("cells") and the action of each `Sq^r` on that basis.
//!
//! The builders here produce the cohomology of spheres and of stunted real,
//! complex and quaternionic projective spectra. For `KP_bot^top` the basis is
//! `u^k` (`bot <= k <= top`) in degree `d·k` and the action is the binomial
//! formula coming from the total Steenrod square of the Thom class of `k`
//! copies of the tautological line bundle:
//!
//! ```text
//! Sq^{d·j}(u^k) = binom(k, j) u^{k+j}
//! ```
//!
//! with all other squares acting trivially when `d > 1`. Negative `k` is
//! handled by reading `(1+x)^k` as a formal power series over F2.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{arg_err, Error, Result};
use crate::f2linalg::{BitMatrix, BitVector};
use crate::steenrod::{lucas_binom_mod2, AdmissibleMonomial};

/// The coefficient of `x^j` in `(1+x)^k` over F2, for any integer `k`.
pub fn binom_mod2(k: i64, j: i64) -> bool {
    assert!(j >= 0, "binom_mod2 needs j >= 0, got {j}");
    if k >= 0 {
        return lucas_binom_mod2(k as u64, j as u64);
    }
    // (1+x)^{2^L} = 1 + x^{2^L}, so (1+x)^k and (1+x)^{k mod 2^L} agree below x^{2^L}.
    let mut modulus: i64 = 1;
    while modulus <= j {
        modulus <<= 1;
    }
    lucas_binom_mod2(k.rem_euclid(modulus) as u64, j as u64)
}

/// The real division algebras, with `d_K` their real dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub const ALL: [Field; 3] = [Field::R, Field::C, Field::H];

    pub fn dim(self) -> i32 {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        })
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(Field::R),
            "C" | "c" => Ok(Field::C),
            "H" | "h" => Ok(Field::H),
            _ => Err(Error::Parse(format!("unknown field {s:?} (expected R, C or H)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ActionEntry {
    r: u32,
    from: usize,
    to: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ModuleJson {
    window: [i32; 2],
    cells: Vec<Cell>,
    action: Vec<ActionEntry>,
    truncation_degree: Option<i32>,
}

/// A graded module with a finite basis.
///
/// Cells are ordered by degree and then by construction order. `action`
/// stores only nonzero values of `Sq^r` (`r > 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    window: (i32, i32),
    cells: Vec<Cell>,
    action: BTreeMap<(u32, usize), Vec<usize>>,
    truncation_degree: Option<i32>,
}

impl GradedModule {
    /// Assembles a module from raw parts, checking that each action value lands
    /// in the right degree. Adem compatibility is a separate check.
    pub fn from_parts(
        window: (i32, i32),
        cells: Vec<Cell>,
        action: BTreeMap<(u32, usize), Vec<usize>>,
        truncation_degree: Option<i32>,
    ) -> Result<Self> {
        if cells.windows(2).any(|w| w[0].degree > w[1].degree) {
            return arg_err("cells must be sorted by degree");
        }
        for c in &cells {
            if c.degree < window.0 || c.degree > window.1 {
                return arg_err(format!("cell {} outside window {window:?}", c.label));
            }
        }
        let mut clean = BTreeMap::new();
        for (&(r, from), to) in &action {
            if r == 0 || from >= cells.len() {
                return arg_err(format!("bad action key (r={r}, from={from})"));
            }
            let mut to = to.clone();
            to.sort_unstable();
            if to.windows(2).any(|w| w[0] == w[1]) {
                return arg_err(format!("repeated target in Sq{r} of cell {from}"));
            }
            for &t in &to {
                if t >= cells.len() || cells[t].degree != cells[from].degree + r as i32 {
                    return arg_err(format!("Sq{r} of cell {from} lands in wrong degree"));
                }
            }
            if !to.is_empty() {
                clean.insert((r, from), to);
            }
        }
        Ok(Self {
            window,
            cells,
            action: clean,
            truncation_degree,
        })
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn truncation_degree(&self) -> Option<i32> {
        self.truncation_degree
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.cells.first().map(|c| c.degree)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.cells.last().map(|c| c.degree)
    }

    /// Indices of the cells in degree `t`, in basis order.
    pub fn cells_in_degree(&self, t: i32) -> std::ops::Range<usize> {
        let lo = self.cells.partition_point(|c| c.degree < t);
        let hi = self.cells.partition_point(|c| c.degree <= t);
        lo..hi
    }

    pub fn dim_in_degree(&self, t: i32) -> usize {
        self.cells_in_degree(t).len()
    }

    /// `Sq^r` applied to a cell, for `r > 0`.
    pub fn act(&self, r: u32, cell: usize) -> &[usize] {
        debug_assert!(r > 0, "Sq0 is the identity; use act_on_cells");
        self.action.get(&(r, cell)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `Sq^r` applied to a sum of cells, as a sorted list of cells.
    pub fn act_on_cells(&self, r: u32, cells: &[usize]) -> Vec<usize> {
        if r == 0 {
            let mut out = cells.to_vec();
            out.sort_unstable();
            return out;
        }
        let mut acc = std::collections::BTreeSet::new();
        for &c in cells {
            for &t in self.act(r, c) {
                if !acc.remove(&t) {
                    acc.insert(t);
                }
            }
        }
        acc.into_iter().collect()
    }

    /// An admissible monomial applied to a single cell (rightmost factor first).
    pub fn act_monomial(&self, m: &AdmissibleMonomial, cell: usize) -> Vec<usize> {
        let mut current = vec![cell];
        for &r in m.exponents().iter().rev() {
            current = self.act_on_cells(r, &current);
            if current.is_empty() {
                break;
            }
        }
        current
    }

    /// Checks every Adem relation `Sq^a Sq^b = sum ...` (`0 < a < 2b`) on every cell.
    /// Returns the first violation as `(a, b, cell)`.
    pub fn adem_violation(&self) -> Option<(u32, u32, usize)> {
        let (Some(lo), Some(hi)) = (self.min_degree(), self.max_degree()) else {
            return None;
        };
        let span = (hi - lo).max(0) as u32;
        for b in 1..=span {
            for a in 1..(2 * b) {
                if a + b > span {
                    break;
                }
                for cell in 0..self.cells.len() {
                    let lhs = self.act_on_cells(a, &self.act_on_cells(b, &[cell]));
                    let mut rhs = std::collections::BTreeSet::new();
                    for c in 0..=a / 2 {
                        if lucas_binom_mod2((b - c - 1) as u64, (a - 2 * c) as u64) {
                            let inner = self.act_on_cells(c, &[cell]);
                            for t in self.act_on_cells(a + b - c, &inner) {
                                if !rhs.remove(&t) {
                                    rhs.insert(t);
                                }
                            }
                        }
                    }
                    if lhs != rhs.into_iter().collect::<Vec<_>>() {
                        return Some((a, b, cell));
                    }
                }
            }
        }
        None
    }

    /// Same cells (ignoring labels) and the same action table.
    pub fn same_structure(&self, other: &GradedModule) -> bool {
        self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(a, b)| a.degree == b.degree)
            && self.action == other.action
    }

    /// Same action table after shifting every degree by `shift`.
    pub fn isomorphic_with_shift(&self, other: &GradedModule, shift: i32) -> bool {
        self.cells.len() == other.cells.len()
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(a, b)| a.degree + shift == b.degree)
            && self.action == other.action
    }

    /// The same module with every degree raised by `n`.
    pub fn shifted(&self, n: i32) -> GradedModule {
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let label = if c.label == format!("S{}", c.degree) {
                    format!("S{}", c.degree + n)
                } else {
                    c.label.clone()
                };
                Cell {
                    label,
                    degree: c.degree + n,
                }
            })
            .collect();
        GradedModule {
            window: (self.window.0 + n, self.window.1 + n),
            cells,
            action: self.action.clone(),
            truncation_degree: self.truncation_degree.map(|h| h + n),
        }
    }

    /// The action table as `(r, from) -> to`.
    pub fn action_table(&self) -> &BTreeMap<(u32, usize), Vec<usize>> {
        &self.action
    }

    /// The span of cells `first..` (a submodule, since squares raise degree).
    fn upper_span(&self, first: usize) -> GradedModule {
        let cells = self.cells[first..].to_vec();
        let lo = cells.first().map_or(self.window.0, |c| c.degree);
        let action = self
            .action
            .iter()
            .filter(|((_, from), _)| *from >= first)
            .map(|(&(r, from), to)| ((r, from - first), to.iter().map(|t| t - first).collect()))
            .collect();
        GradedModule {
            window: (lo, self.window.1),
            cells,
            action,
            truncation_degree: self.truncation_degree,
        }
    }

    /// The quotient by the span of cells `split..`.
    fn lower_quotient(&self, split: usize) -> GradedModule {
        let cells = self.cells[..split].to_vec();
        let hi = cells.last().map_or(self.window.0, |c| c.degree);
        let action = self
            .action
            .iter()
            .filter(|((_, from), _)| *from < split)
            .filter_map(|(&key, to)| {
                let kept: Vec<usize> = to.iter().copied().filter(|&t| t < split).collect();
                (!kept.is_empty()).then_some((key, kept))
            })
            .collect();
        GradedModule {
            window: (self.window.0, hi),
            cells,
            action,
            truncation_degree: None,
        }
    }

    pub fn to_json(&self) -> String {
        let json = ModuleJson {
            window: [self.window.0, self.window.1],
            cells: self.cells.clone(),
            action: self
                .action
                .iter()
                .map(|(&(r, from), to)| ActionEntry {
                    r,
                    from,
                    to: to.clone(),
                })
                .collect(),
            truncation_degree: self.truncation_degree,
        };
        serde_json::to_string(&json).expect("module serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let json: ModuleJson = serde_json::from_str(s)?;
        let mut action = BTreeMap::new();
        for e in json.action {
            if action.insert((e.r, e.from), e.to).is_some() {
                return Err(Error::Parse(format!("duplicate action entry Sq{} on {}", e.r, e.from)));
            }
        }
        Self::from_parts(
            (json.window[0], json.window[1]),
            json.cells,
            action,
            json.truncation_degree,
        )
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }
}

/// `Σ^n F2`: one class in degree `n`.
pub fn sphere_module(degree: i32) -> GradedModule {
    GradedModule {
        window: (degree, degree),
        cells: vec![Cell {
            label: format!("S{degree}"),
            degree,
        }],
        action: BTreeMap::new(),
        truncation_degree: None,
    }
}

/// Cohomology of `KP_bot^top`, keeping only cells in degrees `<= hi_degree`.
///
/// If cells above `hi_degree` had to be dropped, the truncation degree is
/// recorded so that Ext consumers know how far the module can be trusted.
pub fn stunted_module(field: Field, bot: i32, top: i32, hi_degree: i32) -> Result<GradedModule> {
    if bot > top {
        return arg_err(format!("stunted module needs bot <= top, got {bot} > {top}"));
    }
    let d = field.dim();
    let last = top.min(hi_degree.div_euclid(d));
    let truncation_degree = (last < top).then_some(hi_degree);
    let cells: Vec<Cell> = (bot..=last)
        .map(|k| Cell {
            label: format!("u^{k}"),
            degree: d * k,
        })
        .collect();
    let mut action = BTreeMap::new();
    for (i, k) in (bot..=last).enumerate() {
        for j in 1..=(last - k) {
            if binom_mod2(k as i64, j as i64) {
                action.insert(((d * j) as u32, i), vec![i + j as usize]);
            }
        }
    }
    let lo = if bot <= last { d * bot } else { hi_degree };
    Ok(GradedModule {
        window: (lo, hi_degree.max(lo)),
        cells,
        action,
        truncation_degree,
    })
}

/// A degree-shifting linear map between modules that should commute with
/// the Steenrod action. `blocks[t]` has one row per source cell of degree `t`
/// and one column per target cell of degree `t + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: GradedModule,
    pub target: GradedModule,
    pub shift: i32,
    blocks: BTreeMap<i32, BitMatrix>,
}

impl ModuleMap {
    /// Builds a map from the image of each source cell (as target cell indices).
    pub fn from_cell_images(
        source: GradedModule,
        target: GradedModule,
        shift: i32,
        images: &[Vec<usize>],
    ) -> Result<Self> {
        if images.len() != source.len() {
            return arg_err("one image per source cell required");
        }
        let mut blocks = BTreeMap::new();
        let degrees: std::collections::BTreeSet<i32> = source.cells.iter().map(|c| c.degree).collect();
        for t in degrees {
            let src = source.cells_in_degree(t);
            let tgt = target.cells_in_degree(t + shift);
            let mut m = BitMatrix::zeros(src.len(), tgt.len());
            for (row, c) in src.clone().enumerate() {
                for &img in &images[c] {
                    if !tgt.contains(&img) {
                        return arg_err(format!("image of cell {c} has the wrong degree"));
                    }
                    let col = img - tgt.start;
                    m.set(row, col, !m.get(row, col));
                }
            }
            blocks.insert(t, m);
        }
        let map = Self {
            source,
            target,
            shift,
            blocks,
        };
        if let Some((r, cell)) = map.action_violation() {
            return arg_err(format!("map does not commute with Sq{r} on source cell {cell}"));
        }
        Ok(map)
    }

    pub fn identity(m: &GradedModule) -> Self {
        let images: Vec<Vec<usize>> = (0..m.len()).map(|i| vec![i]).collect();
        Self::from_cell_images(m.clone(), m.clone(), 0, &images).expect("identity is a module map")
    }

    pub fn block(&self, t: i32) -> Option<&BitMatrix> {
        self.blocks.get(&t)
    }

    /// Image of a source cell as a vector over the target cells in its degree.
    pub fn apply_cell(&self, cell: usize) -> BitVector {
        let t = self.source.cells[cell].degree;
        let row = cell - self.source.cells_in_degree(t).start;
        self.blocks[&t].row(row).clone()
    }

    /// Image of a vector over the source cells in degree `t`.
    pub fn apply(&self, t: i32, v: &BitVector) -> Result<BitVector> {
        match self.blocks.get(&t) {
            Some(m) => m.vec_mul(v),
            None => Ok(BitVector::zeros(self.target.dim_in_degree(t + self.shift))),
        }
    }

    fn cells_to_vector(&self, t: i32, cells: &[usize], in_target: bool) -> BitVector {
        let module = if in_target { &self.target } else { &self.source };
        let range = module.cells_in_degree(t);
        let mut v = BitVector::zeros(range.len());
        for &c in cells {
            v.flip(c - range.start);
        }
        v
    }

    /// Finds `(r, cell)` with `f(Sq^r x) != Sq^r f(x)`, if any.
    pub fn action_violation(&self) -> Option<(u32, usize)> {
        let max_r = match (self.source.min_degree(), self.target.max_degree()) {
            (Some(lo), Some(hi)) => (hi - lo - self.shift).max(0) as u32,
            _ => 0,
        };
        for cell in 0..self.source.len() {
            let t = self.source.cells[cell].degree;
            let image = self.apply_cell(cell);
            let tgt_start = self.target.cells_in_degree(t + self.shift).start;
            let image_cells: Vec<usize> = image.iter_ones().map(|i| i + tgt_start).collect();
            for r in 1..=max_r {
                let lhs_cells = self.source.act(r, cell);
                let lhs = self
                    .apply(t + r as i32, &self.cells_to_vector(t + r as i32, lhs_cells, false))
                    .expect("block shapes are consistent");
                let rhs_cells = self.target.act_on_cells(r, &image_cells);
                let rhs = self.cells_to_vector(t + self.shift + r as i32, &rhs_cells, true);
                if lhs != rhs {
                    return Some((r, cell));
                }
            }
        }
        None
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if !self.target.same_structure(&other.source) {
            return arg_err("composition of maps with mismatched modules");
        }
        let images: Vec<Vec<usize>> = (0..self.source.len())
            .map(|c| {
                let t = self.source.cells[c].degree + self.shift;
                let v = self.apply_cell(c);
                let mid = other.apply(t, &v).expect("shapes agree");
                let start = other.target.cells_in_degree(t + other.shift).start;
                mid.iter_ones().map(|i| i + start).collect()
            })
            .collect();
        ModuleMap::from_cell_images(
            self.source.clone(),
            other.target.clone(),
            self.shift + other.shift,
            &images,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(BitMatrix::is_zero)
    }
}

/// Splits `m` at basis position `split_cell`: `incl` embeds the span of the
/// cells at positions `>= split_cell` and `quot` projects onto the quotient
/// spanned by the cells below it.
pub fn skeletal_maps(m: &GradedModule, split_cell: usize) -> Result<(ModuleMap, ModuleMap)> {
    if split_cell >= m.len() {
        return arg_err(format!(
            "split cell {split_cell} out of range for a module with {} cells",
            m.len()
        ));
    }
    let upper = m.upper_span(split_cell);
    let lower = m.lower_quotient(split_cell);
    let incl_images: Vec<Vec<usize>> = (0..upper.len()).map(|i| vec![i + split_cell]).collect();
    let quot_images: Vec<Vec<usize>> = (0..m.len())
        .map(|i| if i < split_cell { vec![i] } else { vec![] })
        .collect();
    let incl = ModuleMap::from_cell_images(upper, m.clone(), 0, &incl_images)?;
    let quot = ModuleMap::from_cell_images(m.clone(), lower, 0, &quot_images)?;
    Ok((incl, quot))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        for k in -20..20 {
            assert!(binom_mod2(k, 0));
        }
        for j in 0..40 {
            assert!(binom_mod2(-1, j));
        }
        assert!(!binom_mod2(-2, 1));
        assert!(binom_mod2(-2, 2));
    }

    #[test]
    fn negative_binomials_match_power_series() {
        // (1+x)^{-k} computed by inverting (1+x)^k as a power series mod x^64.
        for k in 1..12i64 {
            let mut pos = [false; 64];
            for (j, slot) in pos.iter_mut().enumerate() {
                *slot = binom_mod2(k, j as i64);
            }
            let mut inv = [false; 64];
            inv[0] = true;
            for n in 1..64 {
                let mut acc = false;
                for j in 1..=n {
                    acc ^= pos[j] & inv[n - j];
                }
                inv[n] = acc;
            }
            for (j, &want) in inv.iter().enumerate() {
                assert_eq!(binom_mod2(-k, j as i64), want, "k={k} j={j}");
            }
        }
    }

    #[test]
    fn sphere_modules() {
        let m = sphere_module(-4);
        assert_eq!(m.len(), 1);
        assert_eq!(m.cells()[0].degree, -4);
        assert!(m.action_table().is_empty());
    }

    #[test]
    fn quaternionic_sparsity() {
        let m = stunted_module(Field::H, -4, -1, 0).unwrap();
        let degrees: Vec<i32> = m.cells().iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![-16, -12, -8, -4]);
    }

    #[test]
    fn stunted_actions() {
        let m = stunted_module(Field::H, -2, 0, 0).unwrap();
        assert!(m.act(4, 0).is_empty());
        assert_eq!(m.act(8, 0), &[2]);
        let c = stunted_module(Field::C, 1, 2, 4).unwrap();
        assert_eq!(c.act(2, 0), &[1]);
    }

    #[test]
    fn stunted_bad_range() {
        assert!(stunted_module(Field::C, 2, 1, 10).is_err());
    }

    #[test]
    fn truncation_is_recorded() {
        let m = stunted_module(Field::C, -2, 5, 4).unwrap();
        assert_eq!(m.truncation_degree(), Some(4));
        assert_eq!(m.max_degree(), Some(4));
        let full = stunted_module(Field::C, -2, 5, 10).unwrap();
        assert_eq!(full.truncation_degree(), None);
    }

    #[test]
    fn stunted_modules_satisfy_adem() {
        for field in Field::ALL {
            for bot in -9..3 {
                let m = stunted_module(field, bot, bot + 8, 100).unwrap();
                assert_eq!(m.adem_violation(), None, "{field} bot={bot}");
            }
        }
    }

    #[test]
    fn adem_violation_is_detected() {
        // Sq1 Sq1 = 0 fails if Sq1 acts twice in a row nontrivially.
        let cells = (0..3)
            .map(|i| Cell {
                label: format!("x{i}"),
                degree: i,
            })
            .collect();
        let action = BTreeMap::from([((1, 0), vec![1]), ((1, 1), vec![2])]);
        let m = GradedModule::from_parts((0, 2), cells, action, None).unwrap();
        assert_eq!(m.adem_violation(), Some((1, 1, 0)));
    }

    #[test]
    fn even_fields_kill_odd_squares() {
        for (field, modulus) in [(Field::C, 2u32), (Field::H, 4u32)] {
            let m = stunted_module(field, -7, 7, 100).unwrap();
            for &(r, _) in m.action_table().keys() {
                assert_eq!(r % modulus, 0);
            }
        }
    }

    #[test]
    fn skeletal_split_two_cell() {
        let m = stunted_module(Field::C, -2, -1, -2).unwrap();
        let (incl, quot) = skeletal_maps(&m, 1).unwrap();
        assert!(quot.target.same_structure(&sphere_module(-4)));
        assert!(incl.source.same_structure(&sphere_module(-2)));
        assert!(incl.then(&quot).unwrap().is_zero());
    }

    #[test]
    fn skeletal_split_bottom_cell() {
        let m = stunted_module(Field::R, -3, 2, 2).unwrap();
        let (incl, quot) = skeletal_maps(&m, 1).unwrap();
        assert_eq!(incl.source.len(), m.len() - 1);
        assert_eq!(quot.target.len(), 1);
        assert!(incl.then(&quot).unwrap().is_zero());
        assert!(skeletal_maps(&m, m.len()).is_err());
    }

    #[test]
    fn non_module_map_is_rejected() {
        let m = stunted_module(Field::R, -1, 0, 0).unwrap();
        // Sending u^-1 to itself but u^0 to zero breaks Sq1 u^-1 = u^0.
        let bad = ModuleMap::from_cell_images(m.clone(), m.clone(), 0, &[vec![0], vec![]]);
        assert!(bad.is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = stunted_module(Field::C, -3, 4, 6).unwrap();
        let s = m.to_json();
        let back = GradedModule::from_json(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), s);
    }
}
