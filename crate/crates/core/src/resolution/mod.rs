//! Minimal free resolutions over the Steenrod algebra.
//!
//! Level `s` of a resolution is a free module `F_s` on generators of
//! internal degree `t_g`. An element of `F_s` in degree `t` is stored as a
//! bit vector with one block per generator of degree `<= t` (in generator
//! order), the block of `g` being the admissible basis of `A` in degree
//! `t - t_g`. Generators of one degree are unit blocks at the end, so the
//! generator order is "by degree, then by discovery".
//!
//! `F_0 -> M` is the augmentation; for `s >= 1` the differential of a
//! generator is an element of `F_{s-1}` in the generator's degree.

mod cache;
mod lift;

pub use cache::{CacheHeader, FORMAT_VERSION};
pub use lift::{induced_ext_map, induced_ext_map_perturbed, yoneda_product, ClassLift, ExtMap};

use std::fmt;
use std::ops::Range;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Error, Result};
use crate::f2linalg::{BitVector, Echelon};
use crate::gradedmod::GradedModule;
use crate::steenrod::{SteenrodAlgebra, SteenrodElement};

/// A class in `Ext^{s,t}`, written in the basis of generators of `F_s` in degree `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtClass {
    pub s: u32,
    pub t: i32,
    pub coords: BitVector,
}

impl ExtClass {
    pub fn stem(&self) -> i32 {
        self.t - self.s as i32
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add(&self, other: &ExtClass) -> Result<ExtClass> {
        if (self.s, self.t, self.coords.len()) != (other.s, other.t, other.coords.len()) {
            return arg_err("adding Ext classes in different bidegrees");
        }
        let mut coords = self.coords.clone();
        coords.xor_assign(&other.coords);
        Ok(ExtClass {
            s: self.s,
            t: self.t,
            coords,
        })
    }
}

impl fmt::Display for ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})[{}]", self.s, self.t, self.coords)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub degree: i32,
}

/// Cell images of every admissible monomial, for acting on the module.
#[derive(Debug)]
struct ModuleAction {
    // [k][monomial][cell] -> cells in degree(cell) + k
    table: Vec<Vec<Vec<Vec<usize>>>>,
}

impl ModuleAction {
    fn new(module: &GradedModule, alg: &SteenrodAlgebra, max_k: u32) -> Self {
        let mut table: Vec<Vec<Vec<Vec<usize>>>> = Vec::with_capacity(max_k as usize + 1);
        for k in 0..=max_k {
            let mut per_mono = Vec::with_capacity(alg.dim(k));
            for m in alg.basis(k) {
                let per_cell = match m.exponents().split_first() {
                    None => (0..module.len()).map(|c| vec![c]).collect(),
                    // Sq^first applied to the already tabulated tail.
                    Some((&first, rest)) => {
                        let tail_deg = k - first;
                        let tail = crate::steenrod::AdmissibleMonomial::new(rest.to_vec())
                            .expect("tail of an admissible monomial is admissible");
                        let tail_idx = alg.index_of(&tail).expect("tail in basis");
                        (0..module.len())
                            .map(|c| {
                                let mid = &table[tail_deg as usize][tail_idx][c];
                                module.act_on_cells(first, mid)
                            })
                            .collect()
                    }
                };
                per_mono.push(per_cell);
            }
            table.push(per_mono);
        }
        Self { table }
    }

    #[inline]
    fn act(&self, k: u32, theta: usize, cell: usize) -> &[usize] {
        &self.table[k as usize][theta][cell]
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Level {
    degrees: Vec<i32>,
    d: Vec<BitVector>,
    // offsets[t - t_min] has one entry per generator of degree <= t plus the total.
    offsets: Vec<Vec<usize>>,
}

/// A minimal free resolution of a module, exact through `(s_max, t_max)`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    module: GradedModule,
    s_max: u32,
    t_min: i32,
    t_max: i32,
    algebra: Arc<SteenrodAlgebra>,
    action: Arc<ModuleAction>,
    levels: Vec<Level>,
    solvers: Vec<Vec<OnceLock<Echelon>>>,
}

/// The largest `t_max` a resolution of `m` may be asked for.
pub fn safe_t_max(m: &GradedModule) -> Option<i32> {
    m.truncation_degree()
}

fn offsets_for(alg: &SteenrodAlgebra, degrees: &[i32], t: i32) -> Vec<usize> {
    let mut out = Vec::with_capacity(degrees.len() + 1);
    let mut acc = 0;
    out.push(0);
    for &dg in degrees.iter().take_while(|&&dg| dg <= t) {
        acc += alg.dim((t - dg) as u32);
        out.push(acc);
    }
    out
}

/// Splits a bit position of a free-module element into (generator, basis index).
#[inline]
fn locate(offsets: &[usize], bit: usize) -> (usize, usize) {
    let g = offsets.partition_point(|&o| o <= bit) - 1;
    (g, bit - offsets[g])
}

/// Computes a minimal resolution of `m` through homological degree `s_max`
/// and internal degree `t_max`.
pub fn minimal_resolution(m: &GradedModule, s_max: u32, t_max: i32) -> Result<FreeResolution> {
    if let Some(bound) = safe_t_max(m) {
        if t_max > bound {
            return Err(Error::Window {
                message: format!("t_max {t_max} exceeds the module's trusted range"),
                safe_bound: bound as i64,
            });
        }
    }
    let t_min = m.min_degree().unwrap_or(m.window().0);
    let span = (t_max - t_min).max(0) as u32;
    let algebra = SteenrodAlgebra::shared(span);
    let action = Arc::new(ModuleAction::new(m, &algebra, span));
    let mut res = FreeResolution {
        module: m.clone(),
        s_max,
        t_min,
        t_max,
        algebra,
        action,
        levels: Vec::with_capacity(s_max as usize + 1),
        solvers: Vec::with_capacity(s_max as usize + 1),
    };
    let mut prev_kernels: Vec<Vec<BitVector>> = Vec::new();
    for s in 0..=s_max {
        let kernels = res.build_level(s, std::mem::take(&mut prev_kernels));
        prev_kernels = kernels;
    }
    Ok(res)
}

impl FreeResolution {
    fn t_range(&self) -> Range<i32> {
        self.t_min..self.t_max + 1
    }

    fn num_t(&self) -> usize {
        self.t_range().len()
    }

    /// Builds level `s` and returns the kernel of `d_s` in each degree.
    fn build_level(&mut self, s: u32, candidates_per_t: Vec<Vec<BitVector>>) -> Vec<Vec<BitVector>> {
        let nt = self.num_t();
        let mut level = Level {
            degrees: Vec::new(),
            d: Vec::new(),
            offsets: Vec::with_capacity(nt),
        };
        let mut solvers = Vec::with_capacity(nt);
        let mut kernels = Vec::with_capacity(nt);
        let mut candidates_per_t = candidates_per_t.into_iter();
        for t in self.t_range() {
            let target_dim = self.target_dim(s, t);
            let old = offsets_for(&self.algebra, &level.degrees, t);
            let old_dim = *old.last().unwrap();
            let rows: Vec<BitVector> = (0..old_dim)
                .into_par_iter()
                .map(|r| {
                    let (g, theta) = locate(&old, r);
                    let k = (t - level.degrees[g]) as u32;
                    let mut out = BitVector::zeros(target_dim);
                    self.act_on_target(s, k, theta, &level.d[g], level.degrees[g], &mut out);
                    out
                })
                .collect();
            let mut ech = Echelon::new(target_dim, old_dim);
            let mut kernel = Vec::new();
            for (i, row) in rows.into_iter().enumerate() {
                if let Some(c) = ech.push(row, BitVector::unit(old_dim, i)) {
                    kernel.push(c);
                }
            }
            let candidates: Vec<BitVector> = if s == 0 {
                (0..target_dim).map(|i| BitVector::unit(target_dim, i)).collect()
            } else {
                candidates_per_t.next().unwrap_or_default()
            };
            let mut width = old_dim;
            for cand in candidates {
                ech.set_combo_width(width + 1);
                if ech.push(cand.clone(), BitVector::unit(width + 1, width)).is_none() {
                    level.degrees.push(t);
                    level.d.push(cand);
                    width += 1;
                } else {
                    ech.set_combo_width(width);
                }
            }
            for k in &mut kernel {
                k.resize(width);
            }
            let offsets = offsets_for(&self.algebra, &level.degrees, t);
            debug_assert_eq!(*offsets.last().unwrap(), width);
            level.offsets.push(offsets);
            let cell = OnceLock::new();
            let _ = cell.set(ech);
            solvers.push(cell);
            kernels.push(kernel);
        }
        self.levels.push(level);
        self.solvers.push(solvers);
        kernels
    }

    /// Dimension of the target of `d_s` (the module for `s = 0`) in degree `t`.
    fn target_dim(&self, s: u32, t: i32) -> usize {
        if s == 0 {
            self.module.dim_in_degree(t)
        } else {
            self.free_dim(s - 1, t)
        }
    }

    /// `theta · x` for `x` in the target of `d_s` in degree `from_t`, added into `out`.
    fn act_on_target(&self, s: u32, k: u32, theta: usize, x: &BitVector, from_t: i32, out: &mut BitVector) {
        if s == 0 {
            let src = self.module.cells_in_degree(from_t).start;
            let dst = self.module.cells_in_degree(from_t + k as i32).start;
            for c in x.iter_ones() {
                for &img in self.action.act(k, theta, src + c) {
                    out.flip(img - dst);
                }
            }
        } else {
            self.act_on_free(s - 1, k, theta, x, from_t, out);
        }
    }

    /// `theta · x` for `x` in `F_s` of degree `from_t`, added into `out` (degree `from_t + k`).
    pub(crate) fn act_on_free(&self, s: u32, k: u32, theta: usize, x: &BitVector, from_t: i32, out: &mut BitVector) {
        if x.is_empty() {
            return;
        }
        let level = &self.levels[s as usize];
        let src = self.offsets(s, from_t);
        let dst = self.offsets(s, from_t + k as i32);
        for bit in x.iter_ones() {
            let (g, j) = locate(src, bit);
            let e = (from_t - level.degrees[g]) as u32;
            for &m in self.algebra.product(k, theta, e, j) {
                out.flip(dst[g] + m as usize);
            }
        }
    }

    fn offsets(&self, s: u32, t: i32) -> &[usize] {
        static EMPTY: [usize; 1] = [0];
        if t < self.t_min {
            return &EMPTY;
        }
        &self.levels[s as usize].offsets[(t - self.t_min) as usize]
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn s_max(&self) -> u32 {
        self.s_max
    }

    pub fn t_min(&self) -> i32 {
        self.t_min
    }

    pub fn t_max(&self) -> i32 {
        self.t_max
    }

    pub fn algebra(&self) -> &SteenrodAlgebra {
        &self.algebra
    }

    pub fn contains(&self, s: u32, t: i32) -> bool {
        s <= self.s_max && t <= self.t_max
    }

    fn check_bidegree(&self, s: u32, t: i32) -> Result<()> {
        if s > self.s_max {
            return Err(Error::Window {
                message: format!("s = {s} beyond the resolution"),
                safe_bound: self.s_max as i64,
            });
        }
        if t > self.t_max {
            return Err(Error::Window {
                message: format!("t = {t} beyond the resolution"),
                safe_bound: self.t_max as i64,
            });
        }
        Ok(())
    }

    /// Dimension of `F_s` in degree `t`.
    pub fn free_dim(&self, s: u32, t: i32) -> usize {
        *self.offsets(s, t).last().unwrap()
    }

    /// Generator indices of level `s` in degree `t`.
    pub fn gen_range(&self, s: u32, t: i32) -> Range<usize> {
        let degrees = &self.levels[s as usize].degrees;
        degrees.partition_point(|&d| d < t)..degrees.partition_point(|&d| d <= t)
    }

    /// `dim Ext^{s,t}`, i.e. the number of generators in that bidegree.
    pub fn num_gens(&self, s: u32, t: i32) -> usize {
        if s > self.s_max || t > self.t_max {
            return 0;
        }
        self.gen_range(s, t).len()
    }

    pub fn ext_dim(&self, s: u32, t: i32) -> Result<usize> {
        self.check_bidegree(s, t)?;
        Ok(self.num_gens(s, t))
    }

    pub fn gen_degrees(&self, s: u32) -> &[i32] {
        &self.levels[s as usize].degrees
    }

    /// Generators of level `s`, labelled `g{s}_{t}_{index}`.
    pub fn generators(&self, s: u32) -> Vec<Generator> {
        let degrees = self.gen_degrees(s);
        let mut out = Vec::with_capacity(degrees.len());
        let mut idx = 0;
        for (i, &t) in degrees.iter().enumerate() {
            if i > 0 && degrees[i - 1] == t {
                idx += 1;
            } else {
                idx = 0;
            }
            out.push(Generator {
                label: format!("g{s}_{t}_{idx}"),
                degree: t,
            });
        }
        out
    }

    /// Labels of the generators in bidegree `(s, t)`.
    pub fn labels(&self, s: u32, t: i32) -> Vec<String> {
        (0..self.num_gens(s, t)).map(|i| format!("g{s}_{t}_{i}")).collect()
    }

    /// Image of generator `g` of level `s` under the differential (the
    /// augmentation for `s = 0`).
    pub fn differential(&self, s: u32, g: usize) -> &BitVector {
        &self.levels[s as usize].d[g]
    }

    /// The differential of a generator written as one Steenrod element per
    /// generator of the level below (all zero-degree-free by minimality).
    pub fn differential_entries(&self, s: u32, g: usize) -> Result<Vec<SteenrodElement>> {
        if s == 0 {
            return arg_err("level 0 maps to the module, not to a free module");
        }
        let t = self.gen_degrees(s)[g];
        let below = self.gen_degrees(s - 1);
        let offsets = self.offsets(s - 1, t);
        let mut out: Vec<SteenrodElement> = below
            .iter()
            .map(|&d| SteenrodElement::zero((t - d).max(0) as u32))
            .collect();
        for bit in self.differential(s, g).iter_ones() {
            let (h, j) = locate(offsets, bit);
            let e = (t - below[h]) as u32;
            let term = SteenrodElement::from_monomial(self.algebra.basis(e)[j].clone());
            out[h] = out[h].add(&term)?;
        }
        Ok(out)
    }

    /// The basis vector of `Ext^{s,t}` for the `i`-th generator in that bidegree.
    pub fn basis_class(&self, s: u32, t: i32, i: usize) -> Result<ExtClass> {
        self.check_bidegree(s, t)?;
        let n = self.num_gens(s, t);
        if i >= n {
            return arg_err(format!("Ext^({s},{t}) has dimension {n}, no generator {i}"));
        }
        Ok(ExtClass {
            s,
            t,
            coords: BitVector::unit(n, i),
        })
    }

    pub fn zero_class(&self, s: u32, t: i32) -> Result<ExtClass> {
        self.check_bidegree(s, t)?;
        Ok(ExtClass {
            s,
            t,
            coords: BitVector::zeros(self.num_gens(s, t)),
        })
    }

    /// Validates that `c` has the right shape for this resolution.
    pub fn check_class(&self, c: &ExtClass) -> Result<()> {
        self.check_bidegree(c.s, c.t)?;
        if c.coords.len() != self.num_gens(c.s, c.t) {
            return arg_err(format!(
                "class at ({}, {}) has {} coordinates, expected {}",
                c.s,
                c.t,
                c.coords.len(),
                self.num_gens(c.s, c.t)
            ));
        }
        Ok(())
    }

    /// `d_s(x)` for `x` in `F_s` of degree `t` (the augmentation for `s = 0`).
    pub fn apply_differential(&self, s: u32, t: i32, x: &BitVector) -> Result<BitVector> {
        self.check_bidegree(s, t)?;
        if x.len() != self.free_dim(s, t) {
            return arg_err("element has the wrong length for F_s in this degree");
        }
        let level = &self.levels[s as usize];
        let offsets = self.offsets(s, t);
        let mut out = BitVector::zeros(self.target_dim(s, t));
        for bit in x.iter_ones() {
            let (g, theta) = locate(offsets, bit);
            let k = (t - level.degrees[g]) as u32;
            self.act_on_target(s, k, theta, &level.d[g], level.degrees[g], &mut out);
        }
        Ok(out)
    }

    /// Solver for `d_s` in degree `t`: spans the image of `F_s` in the target
    /// and writes preimages in the basis of `F_s`.
    pub(crate) fn solver(&self, s: u32, t: i32) -> &Echelon {
        self.solvers[s as usize][(t - self.t_min) as usize].get_or_init(|| {
            let target_dim = self.target_dim(s, t);
            let dim = self.free_dim(s, t);
            let offsets = self.offsets(s, t);
            let level = &self.levels[s as usize];
            let rows: Vec<BitVector> = (0..dim)
                .into_par_iter()
                .map(|r| {
                    let (g, theta) = locate(offsets, r);
                    let k = (t - level.degrees[g]) as u32;
                    let mut out = BitVector::zeros(target_dim);
                    self.act_on_target(s, k, theta, &level.d[g], level.degrees[g], &mut out);
                    out
                })
                .collect();
            let mut ech = Echelon::new(target_dim, dim);
            for (i, row) in rows.into_iter().enumerate() {
                ech.push(row, BitVector::unit(dim, i));
            }
            ech
        })
    }

    /// Preimage of `y` under `d_s` in degree `t`, if `y` is in the image.
    pub fn preimage(&self, s: u32, t: i32, y: &BitVector) -> Result<Option<BitVector>> {
        self.check_bidegree(s, t)?;
        if t < self.t_min {
            return Ok(y.is_zero().then(|| BitVector::zeros(0)));
        }
        if y.len() != self.target_dim(s, t) {
            return arg_err("target vector has the wrong length");
        }
        Ok(self.solver(s, t).solve(y))
    }

    /// Checks `d ∘ d = 0` on every generator (enough, as the maps are A-linear).
    pub fn check_d_squared(&self) -> Result<()> {
        for s in 1..=self.s_max {
            let degrees = self.gen_degrees(s);
            let bad = (0..degrees.len()).into_par_iter().find_first(|&g| {
                let dd = self
                    .apply_differential(s - 1, degrees[g], self.differential(s, g))
                    .expect("generator degrees are in range");
                !dd.is_zero()
            });
            if let Some(g) = bad {
                return Err(Error::Internal(format!("d∘d != 0 on generator {g} of level {s}")));
            }
        }
        Ok(())
    }

    /// Checks that no differential has a unit coefficient.
    pub fn check_minimal(&self) -> Result<()> {
        for s in 1..=self.s_max {
            for (g, &t) in self.gen_degrees(s).iter().enumerate() {
                let offsets = self.offsets(s - 1, t);
                let same = self.gen_range(s - 1, t);
                for h in same {
                    if self.differential(s, g).get(offsets[h]) {
                        return Err(Error::Internal(format!(
                            "unit coefficient in d(g{s}_{t}) on generator {h}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks exactness in the window by comparing ranks: `F_0 -> M` is onto and
    /// `ker d_s = im d_{s+1}` for `s < s_max`.
    pub fn check_exact(&self) -> Result<()> {
        for t in self.t_range() {
            if self.solver(0, t).rank() != self.module.dim_in_degree(t) {
                return Err(Error::Internal(format!("augmentation not onto in degree {t}")));
            }
            for s in 0..self.s_max {
                let kernel = self.free_dim(s, t) - self.solver(s, t).rank();
                let image = self.solver(s + 1, t).rank();
                if kernel != image {
                    return Err(Error::Internal(format!("homology at ({s}, {t})")));
                }
            }
        }
        Ok(())
    }

    /// The resolution of the module shifted up by `n` degrees.
    pub fn suspend(&self, n: i32) -> FreeResolution {
        let mut out = self.clone();
        out.module = self.module.shifted(n);
        out.t_min += n;
        out.t_max += n;
        for level in &mut out.levels {
            for d in &mut level.degrees {
                *d += n;
            }
        }
        out
    }

    /// Number of stored bidegrees, a proxy for memory use.
    pub fn bidegree_count(&self) -> usize {
        (self.s_max as usize + 1) * self.num_t()
    }

    pub(crate) fn level_data(&self) -> &[Level] {
        &self.levels
    }

    /// Reassembles a resolution from stored generators and differentials.
    /// Solvers are rebuilt lazily.
    pub(crate) fn from_parts(
        module: GradedModule,
        s_max: u32,
        t_max: i32,
        levels: Vec<(Vec<i32>, Vec<BitVector>)>,
    ) -> Result<FreeResolution> {
        let t_min = module.min_degree().unwrap_or(module.window().0);
        let span = (t_max - t_min).max(0) as u32;
        let algebra = SteenrodAlgebra::shared(span);
        let action = Arc::new(ModuleAction::new(&module, &algebra, span));
        if levels.len() != s_max as usize + 1 {
            return Err(Error::Parse("wrong number of levels".into()));
        }
        let nt = (t_min..t_max + 1).len();
        let mut built = Vec::with_capacity(levels.len());
        for (s, (degrees, d)) in levels.into_iter().enumerate() {
            if degrees.len() != d.len() || degrees.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Parse(format!("level {s} is malformed")));
            }
            if degrees.iter().any(|&t| t < t_min || t > t_max) {
                return Err(Error::Parse(format!("level {s} has a generator outside the window")));
            }
            let offsets = (t_min..t_max + 1).map(|t| offsets_for(&algebra, &degrees, t)).collect();
            built.push(Level { degrees, d, offsets });
        }
        let res = FreeResolution {
            module,
            s_max,
            t_min,
            t_max,
            algebra,
            action,
            levels: built,
            solvers: (0..=s_max).map(|_| (0..nt).map(|_| OnceLock::new()).collect()).collect(),
        };
        for s in 0..=s_max {
            for (g, &t) in res.gen_degrees(s).iter().enumerate() {
                if res.differential(s, g).len() != res.target_dim(s, t) {
                    return Err(Error::Parse(format!("differential of g{s}_{t} has the wrong length")));
                }
            }
        }
        Ok(res)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedmod::{sphere_module, stunted_module, Field};

    #[test]
    fn sphere_low_degrees() {
        let r = minimal_resolution(&sphere_module(0), 3, 13).unwrap();
        assert_eq!(r.num_gens(0, 0), 1);
        for t in 0..=13 {
            let expect = usize::from([1, 2, 4, 8].contains(&t));
            assert_eq!(r.num_gens(1, t), expect, "t={t}");
        }
        assert_eq!(r.num_gens(2, 4), 1);
        r.check_d_squared().unwrap();
        r.check_minimal().unwrap();
        r.check_exact().unwrap();
    }

    #[test]
    fn suspension_shifts_generators() {
        let r0 = minimal_resolution(&sphere_module(0), 4, 16).unwrap();
        let r5 = minimal_resolution(&sphere_module(-5), 4, 11).unwrap();
        for s in 0..=4 {
            assert_eq!(
                r5.gen_degrees(s),
                r0.gen_degrees(s).iter().map(|t| t - 5).collect::<Vec<_>>()
            );
        }
        let shifted = r0.suspend(-5);
        assert_eq!(shifted.labels(1, -3), vec!["g1_-3_0".to_string()]);
    }

    #[test]
    fn truncated_window_is_rejected() {
        let m = stunted_module(Field::C, -2, 10, 8).unwrap();
        match minimal_resolution(&m, 2, 9) {
            Err(Error::Window { safe_bound, .. }) => assert_eq!(safe_bound, 8),
            other => panic!("unexpected {other:?}"),
        }
        assert!(minimal_resolution(&m, 2, 8).is_ok());
    }

    #[test]
    fn stunted_checks() {
        let m = stunted_module(Field::R, -3, 6, 6).unwrap();
        let r = minimal_resolution(&m, 4, 6).unwrap();
        r.check_d_squared().unwrap();
        r.check_minimal().unwrap();
        r.check_exact().unwrap();
        // Ext^0 is dual to the A-indecomposables of the module.
        assert_eq!(r.num_gens(0, -3), 1);
        assert_eq!(r.num_gens(0, -1), 1);
    }

    #[test]
    fn differential_entries_have_positive_degree() {
        let r = minimal_resolution(&sphere_module(0), 3, 10).unwrap();
        for s in 1..=3 {
            for g in 0..r.gen_degrees(s).len() {
                for e in r.differential_entries(s, g).unwrap() {
                    assert!(e.is_zero() || e.degree() > 0);
                }
            }
        }
        let d = r.differential_entries(1, 1).unwrap();
        assert_eq!(d[0].to_string(), "Sq2");
    }
}
