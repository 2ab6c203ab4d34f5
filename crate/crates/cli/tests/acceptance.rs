//! Acceptance criteria, one PASS/FAIL line each. Run with `--nocapture` to see them.

use std::process::Command;
use std::time::{Duration, Instant};

use mahowald_core::gradedmod::Field;
use mahowald_core::mahowald::{
    algebraic_mahowald, build_tower, default_n_max, expected_table, table_window, verify_lines_in_tower,
    MahowaldQuery, MahowaldResult, Outcome, TableLine,
};
use mahowald_core::resolution::minimal_resolution;
use mahowald_core::selftest::{associativity, ext_oracle, james_periodicity, run_selftest};

const COMPLEX_BUDGET: Duration = Duration::from_secs(5 * 60);
const QUATERNIONIC_BUDGET: Duration = Duration::from_secs(2 * 60);
const ASSOCIATIVITY_TRIPLES: usize = 1000;
const ASSOCIATIVITY_DEGREE: u32 = 20;
const THREAD_COUNTS: [usize; 3] = [1, 2, 8];

type Verdict = Result<String, String>;

fn table(field: Field) -> Result<(Vec<TableLine>, Vec<MahowaldResult>, Duration), String> {
    let start = Instant::now();
    let lines = expected_table(field);
    let window = table_window(field, &lines).map_err(|e| e.to_string())?;
    let tower = build_tower(field, default_n_max(field), window).map_err(|e| e.to_string())?;
    let (report, results) = verify_lines_in_tower(&tower, &lines).map_err(|e| e.to_string())?;
    Ok((report, results, start.elapsed()))
}

fn table_criterion(field: Field, want: &[(&str, &str, u32)], budget: Duration) -> (Verdict, Vec<MahowaldResult>) {
    let (report, results, elapsed) = match table(field) {
        Ok(x) => x,
        Err(e) => return (Err(e), Vec::new()),
    };
    let mut bad = Vec::new();
    for &(alpha, beta, n) in want {
        let hit = report
            .iter()
            .any(|l| l.alpha == alpha && l.beta == beta && l.expected_n == n && l.found_n == Some(n) && l.pass);
        if !hit {
            bad.push(format!("{beta} in M({alpha}) at N={n}"));
        }
    }
    let detail = format!(
        "{}/{} memberships exact, {:.2}s (limit {}s)",
        want.len() - bad.len(),
        want.len(),
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    let out = if bad.is_empty() && report.len() == want.len() && elapsed < budget {
        Ok(detail)
    } else {
        Err(format!("{detail}; missing: {}", bad.join(", ")))
    };
    (out, results)
}

fn interference(results: &[MahowaldResult]) -> Verdict {
    if results.is_empty() {
        return Err("no results to certify".into());
    }
    let noisy: Vec<String> = results
        .iter()
        .filter(|r| !r.interference.is_empty())
        .map(|r| format!("{} over {}: {:?}", r.alpha, r.field, r.interference))
        .collect();
    if noisy.is_empty() {
        Ok(format!("{} cases, every interference report empty", results.len()))
    } else {
        Err(noisy.join("; "))
    }
}

fn real_sanity() -> Verdict {
    let r = algebraic_mahowald(&MahowaldQuery::new(Field::R, "h0")).map_err(|e| e.to_string())?;
    let detail = format!("N = {:?}, coset contains h1: {}", r.n, r.coset_contains("h1"));
    if r.n == Some(2) && r.outcome == Outcome::Definitive && r.coset_contains("h1") {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn algebra_suite() -> Verdict {
    let assoc = associativity(ASSOCIATIVITY_TRIPLES, ASSOCIATIVITY_DEGREE, 0xa55).map_err(|e| e.to_string())?;
    let mut resolutions = 0;
    let mut maps = 0;
    for field in [Field::C, Field::H, Field::R] {
        let window = table_window(field, &expected_table(field)).map_err(|e| e.to_string())?;
        let tower = build_tower(field, default_n_max(field), window).map_err(|e| e.to_string())?;
        tower.check_resolutions().map_err(|e| e.to_string())?;
        for st in tower.stages() {
            st.bottom.check_d_squared().map_err(|e| e.to_string())?;
        }
        resolutions += 1 + 2 * tower.stages().len();
        tower.check_ladder().map_err(|e| e.to_string())?;
        maps += tower.check_lift_independence(0xfeed).map_err(|e| e.to_string())?;
    }
    Ok(format!(
        "{assoc}; d∘d = 0 on {resolutions} resolutions; {maps} tower maps independent of the lift"
    ))
}

fn determinism() -> Verdict {
    let mut library = Vec::new();
    let mut binary = Vec::new();
    let dir = std::env::temp_dir().join(format!("mahowald-acceptance-{}", std::process::id()));
    for n in THREAD_COUNTS {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| e.to_string())?;
        let report = pool.install(|| run_selftest(&minimal_resolution)).map_err(|e| e.to_string())?;
        library.push(report.to_json());

        // fresh cache per run so each artifact is computed, not loaded
        let cache = dir.join(format!("cache{n}"));
        let artifact = dir.join(format!("report{n}.json"));
        let out = Command::new(env!("CARGO_BIN_EXE_mahowald"))
            .args(["selftest", "--threads", &n.to_string(), "--out"])
            .arg(&artifact)
            .env("MAHOWALD_CACHE_DIR", &cache)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("selftest with {n} threads exited with {:?}", out.status.code()));
        }
        binary.push(std::fs::read(&artifact).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    let same_lib = library.windows(2).all(|w| w[0] == w[1]);
    let same_bin = binary.windows(2).all(|w| w[0] == w[1]);
    let detail = format!(
        "threads {THREAD_COUNTS:?}: library reports identical {same_lib}, selftest artifacts identical {same_bin} ({} bytes)",
        binary[0].len()
    );
    if same_lib && same_bin {
        Ok(detail)
    } else {
        Err(detail)
    }
}

#[test]
fn acceptance() {
    let mut lines = Vec::new();
    let mut record = |n: u32, name: &str, r: Verdict| {
        let line = match &r {
            Ok(d) => format!("criterion {n} PASS {name}: {d}"),
            Err(d) => format!("criterion {n} FAIL {name}: {d}"),
        };
        println!("{line}");
        lines.push((r.is_ok(), line));
    };

    let (c, mut results) = table_criterion(
        Field::C,
        &[
            ("h1", "h2", 2),
            ("h1^2", "h2^2", 3),
            ("h2", "h3", 3),
            ("h1^3", "h2^3", 4),
            ("h2^2", "h3^2", 5),
            ("h2^3", "h3^3", 7),
        ],
        COMPLEX_BUDGET,
    );
    record(1, "complex table", c);
    let (h, hr) = table_criterion(
        Field::H,
        &[
            ("h2", "h3", 2),
            ("h0h2", "h0h3", 2),
            ("h0^2h2", "h0^2h3", 2),
            ("h2^2", "h3^2", 3),
            ("h2^3", "h3^3", 4),
        ],
        QUATERNIONIC_BUDGET,
    );
    record(2, "quaternionic table", h);
    results.extend(hr);
    record(3, "interference certification", interference(&results));
    record(4, "Ext oracle and h0 tower", ext_oracle(&minimal_resolution).map_err(|e| e.to_string()));
    record(5, "real case h0 -> h1", real_sanity());
    record(6, "James periodicity", james_periodicity().map_err(|e| e.to_string()));
    record(7, "algebra properties", algebra_suite());
    record(8, "determinism across thread counts", determinism());

    let failed: Vec<&String> = lines.iter().filter(|(ok, _)| !ok).map(|(_, l)| l).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}
