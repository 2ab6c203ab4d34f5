//! End-to-end verification: the known tables, the Ext oracle and the
//! algebraic invariants of every computed object. The report holds no timings,
//! so it is byte-identical across runs and thread counts.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gradedmod::{sphere_module, stunted_module, Field};
use crate::lambda::LambdaAlgebra;
use crate::mahowald::{
    build_tower_with, default_n_max, expected_table, table_window, verify_lines_in_tower, MahowaldResult, Outcome,
    Resolver, TableLine, Tower, DEFAULT_BIDEGREE_BUDGET,
};
use crate::steenrod::{basis, multiply, SteenrodElement};

pub const ORACLE_S_MAX: u32 = 8;
pub const ORACLE_STEM_MAX: u32 = 14;
pub const ASSOCIATIVITY_TRIPLES: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub pass: bool,
    pub checks: Vec<Check>,
    pub complex_table: Vec<TableLine>,
    pub quaternionic_table: Vec<TableLine>,
    pub real_table: Vec<TableLine>,
    pub results: Vec<MahowaldResult>,
}

impl SelftestReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{} {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail));
        }
        out
    }
}

fn check(name: &str, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail: detail.into(),
    }
}

fn from_result(name: &str, r: Result<String>) -> Check {
    match r {
        Ok(detail) => check(name, true, detail),
        Err(e) => check(name, false, e.to_string()),
    }
}

fn table_check(name: &str, lines: &[TableLine], expected: usize) -> Check {
    let passed = lines.iter().filter(|l| l.pass).count();
    let failed: Vec<String> = lines
        .iter()
        .filter(|l| !l.pass)
        .map(|l| format!("{} -> {} (N = {:?}, {:?})", l.alpha, l.beta, l.found_n, l.outcome))
        .collect();
    let detail = if failed.is_empty() {
        format!("{passed}/{expected} memberships")
    } else {
        format!("{passed}/{expected} memberships; failing: {}", failed.join(", "))
    };
    check(name, passed == expected && lines.len() == expected, detail)
}

/// Runs every check. Resolutions come from `resolve` so callers can cache them.
pub fn run_selftest(resolve: Resolver<'_>) -> Result<SelftestReport> {
    let mut checks = Vec::new();
    let mut towers: Vec<Tower> = Vec::new();
    let mut tables = Vec::new();
    let mut results = Vec::new();
    for field in [Field::C, Field::H, Field::R] {
        let lines = expected_table(field);
        let window = table_window(field, &lines)?;
        let tower = build_tower_with(field, default_n_max(field), window, None, DEFAULT_BIDEGREE_BUDGET, resolve)?;
        let (report, res) = verify_lines_in_tower(&tower, &lines)?;
        tables.push(report);
        results.extend(res);
        towers.push(tower);
    }
    let real_table = tables.pop().unwrap_or_default();
    let quaternionic_table = tables.pop().unwrap_or_default();
    let complex_table = tables.pop().unwrap_or_default();

    checks.push(table_check("complex_table", &complex_table, 6));
    checks.push(table_check("quaternionic_table", &quaternionic_table, 5));

    let noisy: Vec<String> = results
        .iter()
        .filter(|r| r.field != Field::R && !r.interference.is_empty())
        .map(|r| format!("{} over {}", r.alpha, r.field))
        .collect();
    let certified: usize = results.iter().map(|r| r.certified_room.len()).sum();
    checks.push(check(
        "interference",
        noisy.is_empty(),
        if noisy.is_empty() {
            format!("no interference in any window ({certified} positions spanned by permanent cycles)")
        } else {
            format!("possible interference for {}", noisy.join(", "))
        },
    ));

    checks.push(table_check("real_sanity", &real_table, 1));
    checks.push(from_result("ext_oracle", ext_oracle(resolve)));
    checks.push(from_result("james_periodicity", james_periodicity()));
    checks.push(from_result("adem_associativity", associativity(ASSOCIATIVITY_TRIPLES, 20, 7)));
    checks.push(from_result(
        "d_squared",
        towers.iter().try_fold(0, |acc, t| {
            t.check_resolutions()?;
            Ok(acc + 1 + t.stages().len())
        })
        .map(|n: usize| format!("d∘d = 0, minimal and exact on {n} resolutions")),
    ));
    checks.push(from_result(
        "lift_independence",
        towers
            .iter()
            .try_fold(0, |acc, t| {
                t.check_ladder()?;
                Ok(acc + t.check_lift_independence(0x5eed)?)
            })
            .map(|n: usize| format!("{n} induced maps agree under a perturbed lift")),
    ));

    let degenerate = results.iter().filter(|r| r.outcome != Outcome::Definitive).count();
    checks.push(check(
        "outcomes",
        degenerate == 0,
        format!("{} definitive of {}", results.len() - degenerate, results.len()),
    ));

    Ok(SelftestReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
        complex_table,
        quaternionic_table,
        real_table,
        results,
    })
}

/// Compares `dim Ext^{s,t}` of the sphere from the minimal resolution with the
/// Lambda algebra, and checks the h0 tower in stem 0.
pub fn ext_oracle(resolve: Resolver<'_>) -> Result<String> {
    let s_max = ORACLE_S_MAX;
    let stem_max = ORACLE_STEM_MAX;
    let r = resolve(&sphere_module(0), s_max, (stem_max + s_max) as i32)?;
    let mut lambda = LambdaAlgebra::new();
    let mut nonzero = 0;
    for s in 0..=s_max {
        for n in 0..=stem_max {
            let a = r.num_gens(s, (s + n) as i32);
            let b = lambda.ext_dim(s, n);
            if a != b {
                return Err(crate::Error::Internal(format!(
                    "dim Ext^({s},{}) is {a} by resolution, {b} by the Lambda algebra",
                    s + n
                )));
            }
            nonzero += usize::from(a > 0);
        }
        if r.num_gens(s, s as i32) != 1 {
            return Err(crate::Error::Internal(format!("h0 tower broken at s = {s}")));
        }
    }
    Ok(format!(
        "agree on s <= {s_max}, stem <= {stem_max} ({nonzero} nonzero bidegrees); h0 tower present"
    ))
}

/// Stunted modules `a..a+p` and `a+2^L..a+2^L+p` have the same action table
/// for `a` in `-8..=8`, `p <= 6` and `p < 2^L <= 32`.
pub fn james_periodicity() -> Result<String> {
    let mut checked = 0;
    for field in Field::ALL {
        let d = field.dim();
        for a in -8..=8 {
            for p in 0..=6 {
                for period in (0..=5).map(|l| 1 << l).filter(|&q| q > p) {
                    let lo = stunted_module(field, a, a + p, d * (a + p))?;
                    let top = a + period + p;
                    let hi = stunted_module(field, a + period, top, d * top)?;
                    if !lo.isomorphic_with_shift(&hi, d * period) {
                        return Err(crate::Error::Internal(format!(
                            "{field}: a = {a}, p = {p}, period {period} breaks periodicity"
                        )));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} module pairs isomorphic"))
}

fn random_element(rng: &mut StdRng, degree: u32) -> SteenrodElement {
    let mut e = SteenrodElement::zero(degree);
    for m in basis(degree) {
        if rng.gen_bool(0.5) {
            e = e
                .add(&SteenrodElement::from_monomial(m))
                .expect("same degree");
        }
    }
    e
}

/// `(xy)z == x(yz)` on random triples of total degree at most `max_degree`.
pub fn associativity(triples: usize, max_degree: u32, seed: u64) -> Result<String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..triples {
        let a = rng.gen_range(0..=max_degree);
        let b = rng.gen_range(0..=max_degree - a);
        let c = rng.gen_range(0..=max_degree - a - b);
        let (x, y, z) = (
            random_element(&mut rng, a),
            random_element(&mut rng, b),
            random_element(&mut rng, c),
        );
        if multiply(&multiply(&x, &y), &z) != multiply(&x, &multiply(&y, &z)) {
            return Err(crate::Error::Internal(format!("({x})({y})({z}) is not associative")));
        }
    }
    Ok(format!("{triples} random triples of degree <= {max_degree}"))
}
