//! Algebraic (Adams E2) Mahowald invariants over towers of stunted
//! projective spectra.
//!
//! Stage `N` of a tower is `X_N = KP_{-N}^{top}`. The class dual to the
//! `u^{-1}` cell is never hit by the Steenrod action, so it gives a class
//! `ι_N` in `Ext^{0,-d}(X_N)` that restricts to `ι_{N-1}` at every stage;
//! `α · ι_N` is the E2 shadow of the composite `S^{-d} -> KP_{-N}` detecting
//! `α` on the `-1` cell. The invariant is read off at the first `N` where this
//! class is nonzero, by solving `j_N(γ) = α · ι_N` for sphere classes `γ` on
//! the bottom cell.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Error, Result};
use crate::f2linalg::{kernel_basis, solve, BitMatrix, BitVector};
use crate::gradedmod::{skeletal_maps, sphere_module, stunted_module, Field, GradedModule, ModuleMap};
use crate::resolution::{
    induced_ext_map, induced_ext_map_perturbed, minimal_resolution, ClassLift, ExtClass, ExtMap,
    FreeResolution,
};

/// Coset enumeration stops at this many elements.
pub const MAX_COSET: usize = 1 << 16;

/// Default bound on the number of stored bidegrees in a tower.
pub const DEFAULT_BIDEGREE_BUDGET: usize = 200_000;

pub fn default_n_max(field: Field) -> u32 {
    match field {
        Field::R => 16,
        Field::C => 10,
        Field::H => 6,
    }
}

/// Chart window of a tower: filtrations `0..=s_max`, stems up to `stem_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerWindow {
    pub s_max: u32,
    pub stem_max: i32,
}

impl TowerWindow {
    pub fn t_max(&self) -> i32 {
        self.stem_max + self.s_max as i32
    }
}

/// One stage `X_N` of a tower with its resolution and maps.
pub struct Stage {
    pub n: u32,
    pub module: GradedModule,
    pub resolution: FreeResolution,
    /// Resolution of the bottom cell, a sphere in degree `-d·N`.
    pub bottom: FreeResolution,
    /// `j_N: Ext(bottom) -> Ext(X_N)`.
    pub j: ExtMap,
    /// `q_N: Ext(X_N) -> Ext(X_1)`.
    pub q: ExtMap,
    j_map: ModuleMap,
    q_map: ModuleMap,
}

pub struct Tower {
    pub field: Field,
    pub n_max: u32,
    pub top: i32,
    pub window: TowerWindow,
    pub sphere: FreeResolution,
    stages: Vec<Stage>,
    // restrictions[N-1] is r_N: Ext(X_{N+1}) -> Ext(X_N)
    restrictions: Vec<(ModuleMap, ExtMap)>,
}

fn bidegree_estimate(field: Field, n_max: u32, window: TowerWindow) -> usize {
    let d = field.dim();
    let rows = window.s_max as usize + 1;
    let t_max = window.t_max();
    let mut total = rows * (t_max + d * n_max as i32 + 1).max(0) as usize;
    for n in 1..=n_max as i32 {
        // stage resolution plus its bottom-cell copy of the sphere
        total += rows * (t_max + d * n + 1) as usize;
        total += rows * (t_max + d * n_max as i32 + 1) as usize;
    }
    total
}

pub fn build_tower(field: Field, n_max: u32, window: TowerWindow) -> Result<Tower> {
    build_tower_with_budget(field, n_max, window, DEFAULT_BIDEGREE_BUDGET)
}

/// Computes (or loads) a minimal resolution of a module to `(s_max, t_max)`.
pub type Resolver<'a> = &'a (dyn Fn(&GradedModule, u32, i32) -> Result<FreeResolution> + Sync);

pub fn build_tower_with_budget(field: Field, n_max: u32, window: TowerWindow, budget: usize) -> Result<Tower> {
    build_tower_with(field, n_max, window, None, budget, &minimal_resolution)
}

/// Like [`build_tower_with_budget`], taking every resolution from `resolve`.
/// `top` raises the top cell index above the smallest one the window needs.
pub fn build_tower_with(
    field: Field,
    n_max: u32,
    window: TowerWindow,
    top: Option<i32>,
    budget: usize,
    resolve: Resolver<'_>,
) -> Result<Tower> {
    if n_max < 1 {
        return arg_err("a tower needs N_max >= 1");
    }
    if window.s_max < 1 {
        return arg_err("a tower needs s_max >= 1");
    }
    let count = bidegree_estimate(field, n_max, window);
    if count > budget {
        return Err(Error::Resource(format!(
            "tower over {field} with N_max = {n_max}, s_max = {}, stem_max = {} needs {count} bidegrees (budget {budget})",
            window.s_max, window.stem_max
        )));
    }
    let d = field.dim();
    let t_max = window.t_max();
    let needed = (t_max + d - 1).div_euclid(d).max(0);
    let top = match top {
        Some(top) if top < needed => {
            return Err(Error::Window {
                message: format!("top cell {top} does not cover internal degree {t_max}"),
                safe_bound: needed as i64,
            })
        }
        Some(top) => top,
        None => needed,
    };
    let hi = d * top;
    let sphere_t_max = t_max + d * n_max as i32;

    let (sphere, resolved) = rayon::join(
        || resolve(&sphere_module(0), window.s_max, sphere_t_max),
        || {
            (1..=n_max)
                .into_par_iter()
                .map(|n| {
                    let m = stunted_module(field, -(n as i32), top, hi)?;
                    let r = resolve(&m, window.s_max, t_max)?;
                    Ok((m, r))
                })
                .collect::<Result<Vec<_>>>()
        },
    );
    let sphere = sphere?;
    let resolved = resolved?;
    let x1 = &resolved[0].1;

    let stages = resolved
        .par_iter()
        .enumerate()
        .map(|(i, (m, r))| {
            let n = i as u32 + 1;
            let bottom = sphere.suspend(-d * n as i32);
            let (_, j_map) = skeletal_maps(m, 1)?;
            let j = induced_ext_map(&j_map, &bottom, r)?;
            let q_map = if n == 1 {
                ModuleMap::identity(m)
            } else {
                skeletal_maps(m, n as usize - 1)?.0
            };
            let q = induced_ext_map(&q_map, r, x1)?;
            Ok(Stage {
                n,
                module: m.clone(),
                resolution: r.clone(),
                bottom,
                j,
                q,
                j_map,
                q_map,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let restrictions = (1..n_max as usize)
        .into_par_iter()
        .map(|n| {
            let upper = &resolved[n];
            let (incl, _) = skeletal_maps(&upper.0, 1)?;
            let e = induced_ext_map(&incl, &upper.1, &resolved[n - 1].1)?;
            Ok((incl, e))
        })
        .collect::<Result<Vec<_>>>()?;

    let tower = Tower {
        field,
        n_max,
        top,
        window,
        sphere,
        stages,
        restrictions,
    };
    tower.check_ladder()?;
    Ok(tower)
}

impl Tower {
    pub fn stage(&self, n: u32) -> &Stage {
        &self.stages[n as usize - 1]
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// `r_n: Ext(X_{n+1}) -> Ext(X_n)`.
    pub fn restriction(&self, n: u32) -> &ExtMap {
        &self.restrictions[n as usize - 1].1
    }

    /// The class dual to the `u^{-1}` cell of `X_n`.
    pub fn iota(&self, n: u32) -> Result<ExtClass> {
        let r = &self.stage(n).resolution;
        let t = -self.field.dim();
        if r.num_gens(0, t) != 1 {
            return Err(Error::Internal(format!(
                "Ext^(0,{t}) of stage {n} has dimension {}",
                r.num_gens(0, t)
            )));
        }
        r.basis_class(0, t, 0)
    }

    /// Checks `q_N ∘ r_N == q_{N+1}`.
    pub fn check_ladder(&self) -> Result<()> {
        for n in 1..self.n_max {
            let composite = self.restriction(n).then(&self.stage(n).q)?;
            if composite != self.stage(n + 1).q {
                return Err(Error::Internal(format!("ladder does not commute at N = {n}")));
            }
        }
        Ok(())
    }

    /// `d∘d = 0`, minimality and exactness of every resolution in the tower.
    pub fn check_resolutions(&self) -> Result<()> {
        self.sphere.check_d_squared()?;
        self.sphere.check_minimal()?;
        for st in &self.stages {
            st.resolution.check_d_squared()?;
            st.resolution.check_minimal()?;
            st.resolution.check_exact()?;
        }
        Ok(())
    }

    /// Recomputes every map of the tower from a perturbed chain-map lift and
    /// compares. Returns the number of maps checked.
    pub fn check_lift_independence(&self, seed: u64) -> Result<usize> {
        let x1 = &self.stage(1).resolution;
        let mut checked = 0;
        for st in &self.stages {
            let j = induced_ext_map_perturbed(&st.j_map, &st.bottom, &st.resolution, seed ^ st.n as u64)?;
            let q = induced_ext_map_perturbed(&st.q_map, &st.resolution, x1, seed.wrapping_add(st.n as u64))?;
            if j != st.j || q != st.q {
                return Err(Error::Internal(format!("induced map depends on the lift at N = {}", st.n)));
            }
            checked += 2;
        }
        for (i, (incl, e)) in self.restrictions.iter().enumerate() {
            let n = i as u32 + 1;
            let p = induced_ext_map_perturbed(
                incl,
                &self.stage(n + 1).resolution,
                &self.stage(n).resolution,
                seed.wrapping_mul(31).wrapping_add(n as u64),
            )?;
            if &p != e {
                return Err(Error::Internal(format!("r_{n} depends on the lift")));
            }
            checked += 1;
        }
        Ok(checked)
    }
}

/// Exponents of `h0^a h1^b h2^c h3^e`.
pub type HMonomial = [u32; 4];

pub fn monomial_name(m: &HMonomial) -> String {
    let mut out = String::new();
    for (i, &e) in m.iter().enumerate() {
        match e {
            0 => {}
            1 => out.push_str(&format!("h{i}")),
            _ => out.push_str(&format!("h{i}^{e}")),
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// Parses names like `h0^2h3`, `h2^3`, `h0 h2`, `h0*h2`, `h1·h1` or `1`.
pub fn parse_monomial(name: &str) -> Result<HMonomial> {
    let bad = || Error::Parse(format!("cannot read {name:?} as a product of h0, h1, h2, h3"));
    let cleaned: String = name
        .chars()
        .filter(|c| !matches!(c, ' ' | '*' | '.' | '·'))
        .collect();
    let mut exps = [0u32; 4];
    if cleaned == "1" {
        return Ok(exps);
    }
    let chars: Vec<char> = cleaned.chars().collect();
    if chars.is_empty() {
        return Err(bad());
    }
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != 'h' || i + 1 >= chars.len() {
            return Err(bad());
        }
        let idx = chars[i + 1].to_digit(10).ok_or_else(bad)? as usize;
        if idx > 3 {
            return Err(bad());
        }
        i += 2;
        let mut e = 1u32;
        if i < chars.len() && chars[i] == '^' {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            if end == start {
                return Err(bad());
            }
            let digits: String = chars[start..end].iter().collect();
            e = digits.parse().map_err(|_| bad())?;
            i = end;
        }
        exps[idx] += e;
    }
    Ok(exps)
}

fn monomial_bidegree(m: &HMonomial) -> (u32, i32) {
    let s = m.iter().sum();
    let t = m.iter().enumerate().map(|(i, &e)| (e as i32) << i).sum();
    (s, t)
}

/// Named classes of the sphere: `h0, h1, h2, h3` and their products, each
/// computed as an iterated Yoneda product.
pub struct ClassRegistry<'a> {
    sphere: &'a FreeResolution,
    cache: Mutex<HashMap<HMonomial, ExtClass>>,
}

impl<'a> ClassRegistry<'a> {
    pub fn new(sphere: &'a FreeResolution) -> Self {
        Self {
            sphere,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn sphere(&self) -> &FreeResolution {
        self.sphere
    }

    pub fn monomial(&self, m: &HMonomial) -> Result<ExtClass> {
        if let Some(c) = self.cache.lock().unwrap().get(m) {
            return Ok(c.clone());
        }
        let (s, t) = monomial_bidegree(m);
        if !self.sphere.contains(s, t) {
            return Err(Error::Window {
                message: format!("{} lies at ({s}, {t}), outside the sphere's window", monomial_name(m)),
                safe_bound: self.sphere.t_max() as i64,
            });
        }
        let class = match m.iter().position(|&e| e > 0) {
            None => self.sphere.basis_class(0, 0, 0)?,
            Some(i) => {
                let mut rest = *m;
                rest[i] -= 1;
                let rest_class = self.monomial(&rest)?;
                let h = self.sphere.basis_class(1, 1 << i, 0)?;
                ClassLift::new(self.sphere, &rest_class, self.sphere, 1)?.multiply(&h)?
            }
        };
        self.cache.lock().unwrap().insert(*m, class.clone());
        Ok(class)
    }

    /// Resolves a name to its canonical spelling and class. Zero products
    /// and malformed names are errors.
    pub fn resolve(&self, name: &str) -> Result<(String, ExtClass)> {
        let m = parse_monomial(name)?;
        let c = self.monomial(&m)?;
        if c.is_zero() {
            return Err(Error::Parse(format!("{} is zero in Ext", monomial_name(&m))));
        }
        Ok((monomial_name(&m), c))
    }

    /// All monomials in bidegree `(s, t)` with their classes (zero ones included).
    pub fn monomials_at(&self, s: u32, t: i32) -> Result<Vec<(HMonomial, ExtClass)>> {
        let mut out = Vec::new();
        for a in 0..=s {
            for b in 0..=s - a {
                for c in 0..=s - a - b {
                    let e = s - a - b - c;
                    let m = [a, b, c, e];
                    if monomial_bidegree(&m).1 == t {
                        out.push((m, self.monomial(&m)?));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Names of the monomials equal to `c`.
    pub fn names_of(&self, c: &ExtClass) -> Result<Vec<String>> {
        Ok(self
            .monomials_at(c.s, c.t)?
            .into_iter()
            .filter(|(_, k)| k == c)
            .map(|(m, _)| monomial_name(&m))
            .collect())
    }

    /// Canonical names of every nonzero monomial with `s <= s_max`, `t <= t_max`.
    pub fn names_in_window(&self, s_max: u32, t_max: i32) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for s in 0..=s_max.min(self.sphere.s_max()) {
            for t in 0..=t_max.min(self.sphere.t_max()) {
                for (m, c) in self.monomials_at(s, t)? {
                    if !c.is_zero() {
                        out.push(monomial_name(&m));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The pr-class of `α` at each stage.
#[derive(Clone, Debug)]
pub struct PrClasses {
    /// `α · ι_N` for `N = 1..=N_max`.
    pub per_stage: Vec<ExtClass>,
    /// A particular solution of `q(ξ) = α · ι_1` at `N_max`.
    pub p_particular: ExtClass,
    /// Basis of the solution space's directions (the kernel of `q` there).
    pub p_kernel: Vec<BitVector>,
}

impl PrClasses {
    /// Whether `ξ` at stage `N_max` lies in `P = {ξ : q(ξ) = α · ι_1}`.
    pub fn in_p(&self, xi: &ExtClass, tower: &Tower) -> Result<bool> {
        let q = tower.stage(tower.n_max).q.apply(xi)?;
        let target = tower.stage(tower.n_max).q.apply(&self.p_particular)?;
        Ok(q == target)
    }
}

/// Computes `α · ι_N` for every stage, checks that the stages are related
/// by the restriction maps, and describes the set `P` at the top stage.
pub fn pr_classes(tower: &Tower, alpha: &ExtClass) -> Result<PrClasses> {
    tower.sphere.check_class(alpha)?;
    let d = tower.field.dim();
    let stem = alpha.stem() - d;
    if stem > tower.window.stem_max {
        return Err(Error::Window {
            message: format!("pr-class lives in stem {stem}"),
            safe_bound: tower.window.stem_max as i64,
        });
    }
    if alpha.s > tower.window.s_max {
        return Err(Error::Window {
            message: format!("alpha has filtration {}", alpha.s),
            safe_bound: tower.window.s_max as i64,
        });
    }
    let per_stage = (1..=tower.n_max)
        .into_par_iter()
        .map(|n| {
            let iota = tower.iota(n)?;
            ClassLift::new(&tower.stage(n).resolution, &iota, &tower.sphere, alpha.s)?.multiply(alpha)
        })
        .collect::<Result<Vec<_>>>()?;
    for n in 1..tower.n_max {
        let pushed = tower.restriction(n).apply(&per_stage[n as usize])?;
        if pushed != per_stage[n as usize - 1] {
            return Err(Error::Internal(format!("pr-classes at N = {} and {n} disagree", n + 1)));
        }
    }
    let top = tower.stage(tower.n_max);
    let (s, t) = (alpha.s, alpha.t - d);
    let q = top
        .q
        .block(s, t)
        .ok_or_else(|| Error::Internal(format!("q not computed at ({s}, {t})")))?;
    let particular = solve(q, &per_stage[0].coords)?
        .ok_or_else(|| Error::Internal("alpha on the -1 cell does not lift to the top stage".into()))?;
    let p_kernel = kernel_basis(q);
    let pr = PrClasses {
        per_stage,
        p_particular: ExtClass {
            s,
            t,
            coords: particular,
        },
        p_kernel,
    };
    if !pr.in_p(&pr.per_stage[tower.n_max as usize - 1], tower)? {
        return Err(Error::Internal("canonical pr-class is not in P".into()));
    }
    Ok(pr)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Definitive,
    FiltrationExceedsNMax,
    NoE2Completion,
    Degenerate,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Definitive => "definitive",
            Outcome::FiltrationExceedsNMax => "filtration exceeds N_max",
            Outcome::NoE2Completion => "no E2 completion",
            Outcome::Degenerate => "degenerate (unit class)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetRep {
    pub names: Vec<String>,
    pub s: u32,
    /// Internal degree as a class of the sphere in degree 0.
    pub t: i32,
    pub coords: BitVector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interference {
    /// "sphere" or "X_N".
    pub chart: String,
    /// The class whose survival is at stake.
    pub class: String,
    /// "enter" (a source of a differential hitting the class) or "leave".
    pub direction: String,
    pub r: u32,
    pub s: u32,
    pub t: i32,
    pub dim: usize,
    /// Rank of the known permanent cycles in that group.
    pub certified_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MahowaldResult {
    #[serde(rename = "K")]
    pub field: Field,
    pub alpha: String,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub outcome: Outcome,
    pub stem: Option<i32>,
    pub coset: Vec<CosetRep>,
    pub coset_truncated: bool,
    pub indeterminacy_dim: usize,
    pub indeterminacy: Vec<BitVector>,
    pub interference: Vec<Interference>,
    /// Nonzero positions whose classes are all known permanent cycles, so
    /// they cannot support a differential into a used class.
    pub certified_room: Vec<Interference>,
    pub window: TowerWindow,
    pub n_max: u32,
    /// Whether `α · ι_N` is nonzero, for `N = 1..=N_max`.
    pub pushed_nonzero: Vec<bool>,
}

impl MahowaldResult {
    pub fn coset_contains(&self, name: &str) -> bool {
        let canonical = parse_monomial(name).map(|m| monomial_name(&m));
        match canonical {
            Ok(c) => self.coset.iter().any(|r| r.names.contains(&c)),
            Err(_) => false,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization cannot fail")
    }
}

/// A window suited to `α`: enough stems for the pr-class and the sources of
/// differentials into it, and `margin` filtrations above `α`.
pub fn window_for(field: Field, alpha: &HMonomial, margin: u32) -> TowerWindow {
    let (s, t) = monomial_bidegree(alpha);
    TowerWindow {
        s_max: (s + margin).max(1),
        stem_max: t - s as i32 - field.dim() + 1,
    }
}

/// Span rank of `classes` inside a group of dimension `dim`.
fn span_rank(dim: usize, classes: &[BitVector]) -> usize {
    if classes.is_empty() || dim == 0 {
        return 0;
    }
    crate::f2linalg::rref(&BitMatrix::from_rows(dim, classes.to_vec()).expect("lengths agree")).rank
}

struct Certifier<'a, 'b> {
    tower: &'a Tower,
    registry: &'b ClassRegistry<'a>,
}

impl Certifier<'_, '_> {
    /// Known permanent cycles of the sphere in `(s, t)`: products of h_i.
    fn sphere_cycles(&self, s: u32, t: i32) -> Result<Vec<BitVector>> {
        Ok(self
            .registry
            .monomials_at(s, t)?
            .into_iter()
            .map(|(_, c)| c.coords)
            .collect())
    }

    /// Known permanent cycles of `X_n` in `(s, t)`: products of h_i with
    /// `ι_n`, and their images from the bottom cell.
    fn stage_cycles(&self, n: u32, lift: &ClassLift<'_>, s: u32, t: i32) -> Result<Vec<BitVector>> {
        let d = self.tower.field.dim();
        let mut out = Vec::new();
        if s <= self.tower.window.s_max && self.tower.sphere.contains(s, t + d) {
            for (_, c) in self.registry.monomials_at(s, t + d)? {
                out.push(lift.multiply(&c)?.coords);
            }
        }
        let st = self.tower.stage(n);
        let shift = d * n as i32;
        if self.tower.sphere.contains(s, t + shift) {
            for (_, c) in self.registry.monomials_at(s, t + shift)? {
                let on_bottom = ExtClass {
                    s,
                    t,
                    coords: c.coords,
                };
                out.push(st.j.apply(&on_bottom)?.coords);
            }
        }
        Ok(out)
    }
}

fn scan_sphere(
    cert: &Certifier<'_, '_>,
    label: &str,
    c: &ExtClass,
    certified: bool,
    out: &mut Vec<Interference>,
    room: &mut Vec<Interference>,
) -> Result<()> {
    let sphere = &cert.tower.sphere;
    for r in 2..=c.s {
        let (s, t) = (c.s - r, c.t - r as i32 + 1);
        let dim = sphere.num_gens(s, t);
        if dim == 0 {
            continue;
        }
        let rank = span_rank(dim, &cert.sphere_cycles(s, t)?);
        let entry = Interference {
            chart: "sphere".into(),
            class: label.into(),
            direction: "enter".into(),
            r,
            s,
            t,
            dim,
            certified_rank: rank,
        };
        if rank < dim {
            out.push(entry);
        } else {
            room.push(entry);
        }
    }
    if !certified {
        for r in 2..=sphere.s_max().saturating_sub(c.s) {
            let (s, t) = (c.s + r, c.t + r as i32 - 1);
            let dim = sphere.num_gens(s, t);
            if dim > 0 {
                out.push(Interference {
                    chart: "sphere".into(),
                    class: label.into(),
                    direction: "leave".into(),
                    r,
                    s,
                    t,
                    dim,
                    certified_rank: 0,
                });
            }
        }
    }
    Ok(())
}

fn is_certified_sphere(registry: &ClassRegistry<'_>, c: &ExtClass) -> Result<bool> {
    let cycles: Vec<BitVector> = registry.monomials_at(c.s, c.t)?.into_iter().map(|(_, k)| k.coords).collect();
    let dim = c.coords.len();
    let with = {
        let mut v = cycles.clone();
        v.push(c.coords.clone());
        span_rank(dim, &v)
    };
    Ok(with == span_rank(dim, &cycles))
}

/// Runs the driver on a prebuilt tower.
pub fn mahowald_in_tower(tower: &Tower, registry: &ClassRegistry<'_>, alpha_name: &str) -> Result<MahowaldResult> {
    let (name, alpha) = registry.resolve(alpha_name)?;
    let d = tower.field.dim();
    let mut result = MahowaldResult {
        field: tower.field,
        alpha: name.clone(),
        n: None,
        outcome: Outcome::Degenerate,
        stem: None,
        coset: Vec::new(),
        coset_truncated: false,
        indeterminacy_dim: 0,
        indeterminacy: Vec::new(),
        interference: Vec::new(),
        certified_room: Vec::new(),
        window: tower.window,
        n_max: tower.n_max,
        pushed_nonzero: Vec::new(),
    };
    if alpha.s == 0 {
        return Ok(result);
    }
    let pr = pr_classes(tower, &alpha)?;
    result.pushed_nonzero = pr.per_stage.iter().map(|c| !c.is_zero()).collect();
    let Some(idx) = pr.per_stage.iter().position(|c| !c.is_zero()) else {
        result.outcome = Outcome::FiltrationExceedsNMax;
        return Ok(result);
    };
    let n = idx as u32 + 1;
    if n > 1 && !pr.per_stage[idx - 1].is_zero() {
        return Err(Error::Internal("minimal stage is not minimal".into()));
    }
    result.n = Some(n);
    result.stem = Some(alpha.stem() + d * (n as i32 - 1));
    let pushed = &pr.per_stage[idx];
    let st = tower.stage(n);
    let (s, t) = (pushed.s, pushed.t);
    let j = st
        .j
        .block(s, t)
        .ok_or_else(|| Error::Internal(format!("j_{n} not computed at ({s}, {t})")))?;
    let kernel = kernel_basis(j);
    result.indeterminacy_dim = kernel.len();
    result.indeterminacy = kernel.clone();
    let Some(x0) = solve(j, &pushed.coords)? else {
        result.outcome = Outcome::NoE2Completion;
        return Ok(result);
    };
    result.outcome = Outcome::Definitive;

    let sphere_t = t + d * n as i32;
    let enumerate_all = kernel.len() <= 16 && (1usize << kernel.len()) <= MAX_COSET;
    let count = if enumerate_all { 1usize << kernel.len() } else { 1 };
    result.coset_truncated = !enumerate_all;
    for mask in 0..count {
        let mut v = x0.clone();
        for (i, k) in kernel.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v.xor_assign(k);
            }
        }
        let class = ExtClass {
            s,
            t: sphere_t,
            coords: v,
        };
        result.coset.push(CosetRep {
            names: registry.names_of(&class)?,
            s,
            t: sphere_t,
            coords: class.coords,
        });
    }

    let cert = Certifier { tower, registry };
    let mut report = Vec::new();
    let mut room = Vec::new();
    scan_sphere(&cert, &name, &alpha, is_certified_sphere(registry, &alpha)?, &mut report, &mut room)?;
    for rep in &result.coset {
        let c = ExtClass {
            s: rep.s,
            t: rep.t,
            coords: rep.coords.clone(),
        };
        let label = rep.names.first().cloned().unwrap_or_else(|| format!("[{}]", rep.coords));
        scan_sphere(&cert, &label, &c, is_certified_sphere(registry, &c)?, &mut report, &mut room)?;
    }
    // The pr-class is alpha times the class of the -1 cell; it is a permanent
    // cycle, so only differentials entering it matter.
    let iota = tower.iota(n)?;
    let lift = ClassLift::new(&st.resolution, &iota, &tower.sphere, tower.window.s_max)?;
    let label = format!("{name}[-{d}]");
    for r in 2..=s {
        let (ss, tt) = (s - r, t - r as i32 + 1);
        let dim = st.resolution.num_gens(ss, tt);
        if dim == 0 {
            continue;
        }
        let rank = span_rank(dim, &cert.stage_cycles(n, &lift, ss, tt)?);
        let entry = Interference {
            chart: format!("X_{n}"),
            class: label.clone(),
            direction: "enter".into(),
            r,
            s: ss,
            t: tt,
            dim,
            certified_rank: rank,
        };
        if rank < dim {
            report.push(entry);
        } else {
            room.push(entry);
        }
    }
    result.interference = report;
    result.certified_room = room;
    Ok(result)
}

/// Request for a single invariant.
#[derive(Clone, Debug)]
pub struct MahowaldQuery {
    pub field: Field,
    pub alpha: String,
    pub n_max: u32,
    /// Filtrations computed above `α`.
    pub s_margin: u32,
    /// Overrides `α`'s filtration plus `s_margin`.
    pub s_max: Option<u32>,
    pub top: Option<i32>,
    pub budget: usize,
}

impl MahowaldQuery {
    pub fn new(field: Field, alpha: &str) -> Self {
        Self {
            field,
            alpha: alpha.to_string(),
            n_max: default_n_max(field),
            s_margin: 3,
            s_max: None,
            top: None,
            budget: DEFAULT_BIDEGREE_BUDGET,
        }
    }
}

pub fn algebraic_mahowald(q: &MahowaldQuery) -> Result<MahowaldResult> {
    algebraic_mahowald_with(q, &minimal_resolution)
}

pub fn algebraic_mahowald_with(q: &MahowaldQuery, resolve: Resolver<'_>) -> Result<MahowaldResult> {
    let m = parse_monomial(&q.alpha)?;
    let mut window = window_for(q.field, &m, q.s_margin);
    if let Some(s_max) = q.s_max {
        let s = monomial_bidegree(&m).0;
        if s_max <= s {
            return Err(Error::Window {
                message: format!("s_max {s_max} leaves no room above {} in filtration {s}", q.alpha),
                safe_bound: s as i64 + 1,
            });
        }
        window.s_max = s_max;
    }
    let tower = build_tower_with(q.field, q.n_max, window, q.top, q.budget, resolve)?;
    let registry = ClassRegistry::new(&tower.sphere);
    mahowald_in_tower(&tower, &registry, &q.alpha)
}

/// One expected membership `β ∈ M_K(α)` at stage `N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableLine {
    pub alpha: String,
    pub beta: String,
    pub expected_n: u32,
    pub found_n: Option<u32>,
    pub outcome: Outcome,
    pub contains_beta: bool,
    pub interference_free: bool,
    pub pass: bool,
}

pub fn expected_table(field: Field) -> Vec<(&'static str, &'static str, u32)> {
    match field {
        Field::C => vec![
            ("h1", "h2", 2),
            ("h1^2", "h2^2", 3),
            ("h2", "h3", 3),
            ("h1^3", "h2^3", 4),
            ("h2^2", "h3^2", 5),
            ("h2^3", "h3^3", 7),
        ],
        Field::H => vec![
            ("h2", "h3", 2),
            ("h0h2", "h0h3", 2),
            ("h0^2h2", "h0^2h3", 2),
            ("h2^2", "h3^2", 3),
            ("h2^3", "h3^3", 4),
        ],
        Field::R => vec![("h0", "h1", 2)],
    }
}

/// Runs the driver on each line, sharing one tower, and reports per line.
pub fn verify_lines(field: Field, lines: &[(&str, &str, u32)], n_max: u32) -> Result<(Vec<TableLine>, Vec<MahowaldResult>)> {
    if lines.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let tower = build_tower(field, n_max, table_window(field, lines)?)?;
    verify_lines_in_tower(&tower, lines)
}

/// Smallest window covering every `α` of `lines`.
pub fn table_window(field: Field, lines: &[(&str, &str, u32)]) -> Result<TowerWindow> {
    let mut window = TowerWindow { s_max: 1, stem_max: i32::MIN };
    for (a, _, _) in lines {
        let w = window_for(field, &parse_monomial(a)?, 3);
        window.s_max = window.s_max.max(w.s_max);
        window.stem_max = window.stem_max.max(w.stem_max);
    }
    Ok(window)
}

pub fn verify_lines_in_tower(tower: &Tower, lines: &[(&str, &str, u32)]) -> Result<(Vec<TableLine>, Vec<MahowaldResult>)> {
    let registry = ClassRegistry::new(&tower.sphere);
    let mut report = Vec::new();
    let mut results = Vec::new();
    for &(alpha, beta, n) in lines {
        let res = mahowald_in_tower(tower, &registry, alpha)?;
        let contains_beta = res.coset_contains(beta);
        let interference_free = res.interference.is_empty();
        report.push(TableLine {
            alpha: res.alpha.clone(),
            beta: monomial_name(&parse_monomial(beta)?),
            expected_n: n,
            found_n: res.n,
            outcome: res.outcome,
            contains_beta,
            interference_free,
            pass: res.outcome == Outcome::Definitive && res.n == Some(n) && contains_beta,
        });
        results.push(res);
    }
    Ok((report, results))
}

/// The known table for `field`.
pub fn verify_table(field: Field) -> Result<Vec<TableLine>> {
    Ok(verify_lines(field, &expected_table(field), default_n_max(field))?.0)
}

/// `dim Ext` of every stage of a tower in its window, keyed by `(N, s, t)`.
pub fn tower_dims(tower: &Tower) -> BTreeMap<(u32, u32, i32), usize> {
    let mut out = BTreeMap::new();
    for st in tower.stages() {
        let r = &st.resolution;
        for s in 0..=r.s_max() {
            for t in r.t_min()..=r.t_max() {
                let n = r.num_gens(s, t);
                if n > 0 {
                    out.insert((st.n, s, t), n);
                }
            }
        }
    }
    out
}
