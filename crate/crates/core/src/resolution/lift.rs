//! Chain maps between resolutions, the Ext maps they induce, and Yoneda
//! products with classes of the sphere.
//!
//! A lift is a family of A-linear maps `φ_k: P_{s0+k} -> Q_k` lowering the
//! internal degree by `delta` and commuting with the differentials. It is
//! built one level at a time by solving `d_Q(φ_k(p)) = φ_{k-1}(d_P(p))` with
//! the target's stored solvers; free choices are zero unless a perturbation
//! seed is given.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{ExtClass, FreeResolution};
use crate::error::{arg_err, Error, Result};
use crate::f2linalg::{BitMatrix, BitVector};
use crate::gradedmod::ModuleMap;

struct ChainLift<'a> {
    p: &'a FreeResolution,
    q: &'a FreeResolution,
    s0: u32,
    delta: i32,
    t_limit: i32,
    // maps[k][g]: image of generator g of P_{s0+k} in Q_k, degree t_g - delta
    maps: Vec<Vec<BitVector>>,
    rng: Option<StdRng>,
}

impl<'a> ChainLift<'a> {
    fn new(p: &'a FreeResolution, q: &'a FreeResolution, s0: u32, delta: i32, seed: Option<u64>) -> Self {
        Self {
            p,
            q,
            s0,
            delta,
            t_limit: p.t_max().min(q.t_max() + delta),
            maps: Vec::new(),
            rng: seed.map(StdRng::seed_from_u64),
        }
    }

    fn levels(&self) -> u32 {
        self.maps.len() as u32
    }

    fn max_levels(&self) -> u32 {
        (self.p.s_max() - self.s0).min(self.q.s_max()) + 1
    }

    fn p_gens(&self, k: u32) -> impl Iterator<Item = (usize, i32)> + '_ {
        let limit = self.t_limit;
        self.p
            .gen_degrees(self.s0 + k)
            .iter()
            .copied()
            .enumerate()
            .take_while(move |&(_, t)| t <= limit)
    }

    /// Adds `d_Q(z)` for a random `z` in `Q_{k+1}` when perturbing.
    fn perturb(&mut self, k: u32, t: i32, y: &mut BitVector) -> Result<()> {
        let Some(rng) = self.rng.as_mut() else {
            return Ok(());
        };
        if k + 1 > self.q.s_max() || t < self.q.t_min() {
            return Ok(());
        }
        let dim = self.q.free_dim(k + 1, t);
        let z = BitVector::from_bools((0..dim).map(|_| rng.gen_bool(0.5)));
        y.xor_assign(&self.q.apply_differential(k + 1, t, &z)?);
        Ok(())
    }

    /// Level 0 for a class `x` of `Ext^{s0, *}(P)` mapped onto the bottom
    /// generator of a resolution of a sphere.
    fn start_from_class(&mut self, x: &ExtClass) -> Result<()> {
        let range = self.p.gen_range(x.s, x.t);
        let q_bottom = self.q.t_min();
        let mut level = Vec::new();
        for (g, t) in self.p_gens(0).collect::<Vec<_>>() {
            let tq = t - self.delta;
            let mut y = if tq < q_bottom {
                BitVector::zeros(0)
            } else {
                BitVector::zeros(self.q.free_dim(0, tq))
            };
            if range.contains(&g) && x.coords.get(g - range.start) {
                y.set(0, true);
            }
            if tq >= q_bottom {
                self.perturb(0, tq, &mut y)?;
            }
            level.push(y);
        }
        self.maps.push(level);
        Ok(())
    }

    /// Level 0 covering a module map `f: P.module -> Q.module`.
    fn start_from_map(&mut self, f: &ModuleMap) -> Result<()> {
        let mut level = Vec::new();
        for (g, t) in self.p_gens(0).collect::<Vec<_>>() {
            let image = f.apply(t, self.p.differential(0, g))?;
            let tq = t - self.delta;
            if tq < self.q.t_min() {
                if !image.is_zero() {
                    return Err(Error::Internal("module map leaves the target's range".into()));
                }
                level.push(BitVector::zeros(0));
                continue;
            }
            let mut y = self
                .q
                .preimage(0, tq, &image)?
                .ok_or_else(|| Error::Internal("augmentation is not onto".into()))?;
            self.perturb(0, tq, &mut y)?;
            level.push(y);
        }
        self.maps.push(level);
        Ok(())
    }

    /// `φ_k(x)` for `x` in `P_{s0+k}` of degree `t`.
    fn apply(&self, k: u32, t: i32, x: &BitVector) -> BitVector {
        let tq = t - self.delta;
        let mut out = if tq < self.q.t_min() {
            BitVector::zeros(0)
        } else {
            BitVector::zeros(self.q.free_dim(k, tq))
        };
        if out.is_empty() {
            return out;
        }
        let ps = self.s0 + k;
        let offsets = self.p.offsets(ps, t);
        let degrees = self.p.gen_degrees(ps);
        for bit in x.iter_ones() {
            let (g, theta) = super::locate(offsets, bit);
            let e = (t - degrees[g]) as u32;
            let img = &self.maps[k as usize][g];
            self.q.act_on_free(k, e, theta, img, degrees[g] - self.delta, &mut out);
        }
        out
    }

    fn extend(&mut self) -> Result<()> {
        let k = self.levels();
        let mut level = Vec::new();
        for (g, t) in self.p_gens(k).collect::<Vec<_>>() {
            let dp = self.p.differential(self.s0 + k, g);
            let target = self.apply(k - 1, t, dp);
            let tq = t - self.delta;
            if tq < self.q.t_min() {
                level.push(BitVector::zeros(0));
                continue;
            }
            let mut y = self.q.preimage(k, tq, &target)?.ok_or_else(|| {
                Error::Internal(format!("chain map does not lift at level {k}, degree {t}"))
            })?;
            self.perturb(k, tq, &mut y)?;
            level.push(y);
        }
        self.maps.push(level);
        Ok(())
    }

    fn extend_to(&mut self, levels: u32) -> Result<()> {
        if levels > self.max_levels() {
            return Err(Error::Window {
                message: format!("lift needs {levels} levels"),
                safe_bound: self.max_levels() as i64,
            });
        }
        while self.levels() < levels {
            self.extend()?;
        }
        Ok(())
    }

    /// Matrix of unit coefficients at level `k`: rows are generators of
    /// `P_{s0+k}` in degree `tq + delta`, columns generators of `Q_k` in degree `tq`.
    fn readout(&self, k: u32, tq: i32) -> BitMatrix {
        let tp = tq + self.delta;
        let prange = self.p.gen_range(self.s0 + k, tp);
        let qrange = self.q.gen_range(k, tq);
        let offsets = self.q.offsets(k, tq);
        let mut m = BitMatrix::zeros(prange.len(), qrange.len());
        for (row, g) in prange.enumerate() {
            let img = &self.maps[k as usize][g];
            for (col, h) in qrange.clone().enumerate() {
                if img.get(offsets[h]) {
                    m.set(row, col, true);
                }
            }
        }
        m
    }
}

/// A linear map on Ext, stored per source bidegree. A class at `(s, t)` goes
/// to `(s + s_shift, t + t_shift)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtMap {
    pub s_shift: u32,
    pub t_shift: i32,
    // Ext of the target vanishes for t below this.
    target_t_min: i32,
    blocks: BTreeMap<(u32, i32), BitMatrix>,
}

impl ExtMap {
    pub fn block(&self, s: u32, t: i32) -> Option<&BitMatrix> {
        self.blocks.get(&(s, t))
    }

    pub fn blocks(&self) -> &BTreeMap<(u32, i32), BitMatrix> {
        &self.blocks
    }

    pub fn apply(&self, c: &ExtClass) -> Result<ExtClass> {
        let Some(m) = self.blocks.get(&(c.s, c.t)) else {
            if c.coords.is_empty() && c.t + self.t_shift < self.target_t_min {
                return Ok(ExtClass {
                    s: c.s + self.s_shift,
                    t: c.t + self.t_shift,
                    coords: BitVector::zeros(0),
                });
            }
            return Err(Error::Window {
                message: format!("Ext map not computed at ({}, {})", c.s, c.t),
                safe_bound: self.blocks.keys().map(|k| k.1).max().unwrap_or(i32::MIN) as i64,
            });
        };
        Ok(ExtClass {
            s: c.s + self.s_shift,
            t: c.t + self.t_shift,
            coords: m.mul_vec(&c.coords)?,
        })
    }

    /// `other ∘ self` on the bidegrees where both are known.
    pub fn then(&self, other: &ExtMap) -> Result<ExtMap> {
        let mut blocks = BTreeMap::new();
        for (&(s, t), m) in &self.blocks {
            let (ms, mt) = (s + self.s_shift, t + self.t_shift);
            if let Some(n) = other.blocks.get(&(ms, mt)) {
                blocks.insert((s, t), n.mul(m)?);
            } else if m.num_rows() == 0 && mt + other.t_shift < other.target_t_min {
                blocks.insert((s, t), BitMatrix::zeros(0, m.num_cols()));
            }
        }
        Ok(ExtMap {
            s_shift: self.s_shift + other.s_shift,
            t_shift: self.t_shift + other.t_shift,
            target_t_min: other.target_t_min,
            blocks,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.s_shift == 0
            && self.t_shift == 0
            && self
                .blocks
                .values()
                .all(|m| m.num_rows() == m.num_cols() && *m == BitMatrix::identity(m.num_rows()))
    }
}

/// The map `Ext(rs) -> Ext(rt)` induced by `f`, where `f` goes from the
/// module of `rt` to the module of `rs`.
pub fn induced_ext_map(f: &ModuleMap, rs: &FreeResolution, rt: &FreeResolution) -> Result<ExtMap> {
    induced(f, rs, rt, None)
}

/// Same as [`induced_ext_map`], built from a lift that adds random
/// boundaries at every level. The result must not depend on the seed.
pub fn induced_ext_map_perturbed(
    f: &ModuleMap,
    rs: &FreeResolution,
    rt: &FreeResolution,
    seed: u64,
) -> Result<ExtMap> {
    induced(f, rs, rt, Some(seed))
}

fn induced(f: &ModuleMap, rs: &FreeResolution, rt: &FreeResolution, seed: Option<u64>) -> Result<ExtMap> {
    if !f.source.same_structure(rt.module()) || !f.target.same_structure(rs.module()) {
        return arg_err("module map does not match the resolutions' modules");
    }
    let delta = -f.shift;
    let mut lift = ChainLift::new(rt, rs, 0, delta, seed);
    lift.start_from_map(f)?;
    let levels = lift.max_levels();
    lift.extend_to(levels)?;
    let mut blocks = BTreeMap::new();
    for k in 0..levels {
        for tq in rs.t_min().min(rt.t_min() - delta)..=rs.t_max() {
            if tq + delta > rt.t_max() {
                break;
            }
            blocks.insert((k, tq), lift.readout(k, tq));
        }
    }
    Ok(ExtMap {
        s_shift: 0,
        t_shift: delta,
        target_t_min: rt.t_min(),
        blocks,
    })
}

fn check_sphere(sphere: &FreeResolution) -> Result<()> {
    let m = sphere.module();
    if m.len() != 1 || m.cells()[0].degree != 0 {
        return arg_err("products need a resolution of the sphere in degree 0");
    }
    Ok(())
}

/// A class `x` lifted to a chain map into the sphere's resolution, so that
/// products `a · x` can be read off for many `a`.
pub struct ClassLift<'a> {
    lift: ChainLift<'a>,
    x: ExtClass,
}

impl<'a> ClassLift<'a> {
    /// Lifts `x` through `levels` homological degrees of the sphere.
    pub fn new(rx: &'a FreeResolution, x: &ExtClass, sphere: &'a FreeResolution, levels: u32) -> Result<Self> {
        Self::with_seed(rx, x, sphere, levels, None)
    }

    pub fn with_seed(
        rx: &'a FreeResolution,
        x: &ExtClass,
        sphere: &'a FreeResolution,
        levels: u32,
        seed: Option<u64>,
    ) -> Result<Self> {
        check_sphere(sphere)?;
        rx.check_class(x)?;
        if x.s + levels > rx.s_max() {
            return Err(Error::Window {
                message: format!("product would land in s = {}", x.s + levels),
                safe_bound: rx.s_max() as i64,
            });
        }
        let mut lift = ChainLift::new(rx, sphere, x.s, x.t, seed);
        lift.start_from_class(x)?;
        lift.extend_to(levels + 1)?;
        Ok(Self { lift, x: x.clone() })
    }

    /// `a · x` for a class `a` of the sphere.
    pub fn multiply(&self, a: &ExtClass) -> Result<ExtClass> {
        self.lift.q.check_class(a)?;
        if a.s >= self.lift.levels() {
            return Err(Error::Window {
                message: format!("lift only covers s <= {}", self.lift.levels() - 1),
                safe_bound: (self.lift.levels() - 1) as i64,
            });
        }
        let t = self.x.t + a.t;
        if t > self.lift.t_limit {
            return Err(Error::Window {
                message: format!("product would land in t = {t}"),
                safe_bound: self.lift.t_limit as i64,
            });
        }
        let m = self.lift.readout(a.s, a.t);
        Ok(ExtClass {
            s: self.x.s + a.s,
            t,
            coords: m.mul_vec(&a.coords)?,
        })
    }
}

/// The Yoneda product `a · x` of a sphere class `a` with a class `x` of the
/// module resolved by `rx`.
pub fn yoneda_product(sphere: &FreeResolution, a: &ExtClass, rx: &FreeResolution, x: &ExtClass) -> Result<ExtClass> {
    ClassLift::new(rx, x, sphere, a.s)?.multiply(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedmod::{skeletal_maps, sphere_module, stunted_module, Field, ModuleMap};
    use crate::resolution::minimal_resolution;

    fn sphere(s: u32, t: i32) -> FreeResolution {
        minimal_resolution(&sphere_module(0), s, t).unwrap()
    }

    #[test]
    fn identity_induces_identity() {
        let m = stunted_module(Field::C, -2, 3, 6).unwrap();
        let r = minimal_resolution(&m, 3, 6).unwrap();
        let e = induced_ext_map(&ModuleMap::identity(&m), &r, &r).unwrap();
        assert!(e.is_identity());
    }

    #[test]
    fn unit_acts_trivially() {
        let r = sphere(4, 12);
        let one = r.basis_class(0, 0, 0).unwrap();
        let h1 = r.basis_class(1, 2, 0).unwrap();
        assert_eq!(yoneda_product(&r, &one, &r, &h1).unwrap(), h1);
        assert_eq!(yoneda_product(&r, &h1, &r, &one).unwrap(), h1);
    }

    #[test]
    fn products_of_hopf_classes() {
        let r = sphere(4, 20);
        let h = |i: i32| r.basis_class(1, 1 << i, 0).unwrap();
        let h1h1 = yoneda_product(&r, &h(1), &r, &h(1)).unwrap();
        assert_eq!((h1h1.s, h1h1.t), (2, 4));
        assert!(!h1h1.is_zero());
        assert!(yoneda_product(&r, &h(0), &r, &h(1)).unwrap().is_zero());
        let h2h2 = yoneda_product(&r, &h(2), &r, &h(2)).unwrap();
        let h2_cubed = yoneda_product(&r, &h(2), &r, &h2h2).unwrap();
        let h1h3 = yoneda_product(&r, &h(1), &r, &h(3)).unwrap();
        let h1h1h3 = yoneda_product(&r, &h(1), &r, &h1h3).unwrap();
        assert!(!h2_cubed.is_zero());
        assert_eq!(h2_cubed, h1h1h3);
    }

    #[test]
    fn bottom_cell_of_two_cell_complex() {
        // In the cofiber of eta shifted down, nu on the bottom cell is eta on the top cell.
        let m = stunted_module(Field::C, -2, -1, -2).unwrap();
        let (_, quot) = skeletal_maps(&m, 1).unwrap();
        let t_max = 10;
        let rm = minimal_resolution(&m, 2, t_max).unwrap();
        let rb = minimal_resolution(&quot.target, 2, t_max).unwrap();
        let j = induced_ext_map(&quot, &rb, &rm).unwrap();
        let s = sphere(2, t_max + 4);
        let bottom = rb.basis_class(0, -4, 0).unwrap();
        let h2 = s.basis_class(1, 4, 0).unwrap();
        let nu_bottom = yoneda_product(&s, &h2, &rb, &bottom).unwrap();
        let image = j.apply(&nu_bottom).unwrap();
        assert!(!image.is_zero());
    }

    #[test]
    fn perturbed_lift_gives_same_map() {
        let m = stunted_module(Field::R, -3, 5, 5).unwrap();
        let (incl, _) = skeletal_maps(&m, 2).unwrap();
        let rs = minimal_resolution(&m, 4, 5).unwrap();
        let rt = minimal_resolution(&incl.source, 4, 5).unwrap();
        let a = induced_ext_map(&incl, &rs, &rt).unwrap();
        for seed in 0..4 {
            assert_eq!(induced_ext_map_perturbed(&incl, &rs, &rt, seed).unwrap(), a);
        }
    }

    #[test]
    fn functoriality() {
        let m = stunted_module(Field::R, -4, 4, 4).unwrap();
        let (i1, _) = skeletal_maps(&m, 1).unwrap();
        let (i2, _) = skeletal_maps(&i1.source, 1).unwrap();
        let composite = i2.then(&i1).unwrap();
        let r0 = minimal_resolution(&m, 3, 4).unwrap();
        let r1 = minimal_resolution(&i1.source, 3, 4).unwrap();
        let r2 = minimal_resolution(&i2.source, 3, 4).unwrap();
        let e1 = induced_ext_map(&i1, &r0, &r1).unwrap();
        let e2 = induced_ext_map(&i2, &r1, &r2).unwrap();
        let e = induced_ext_map(&composite, &r0, &r2).unwrap();
        assert_eq!(e1.then(&e2).unwrap(), e);
    }

    #[test]
    fn mismatched_modules_are_rejected() {
        let m = stunted_module(Field::R, -2, 2, 2).unwrap();
        let r = minimal_resolution(&m, 2, 2).unwrap();
        let s = sphere(2, 2);
        assert!(induced_ext_map(&ModuleMap::identity(&m), &s, &r).is_err());
    }
}
