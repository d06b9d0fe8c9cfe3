//! Quick built-in consistency checks, printed one line per check.

use occert_core::certifier::{check_bhl, refute_p, RefuteConfig};
use occert_core::curvature::{kulkarni_nomizu_square, ricci, ricci_star, curvature_operator};
use occert_core::hermitian::{random_orthogonal_complex_structure, EuclideanSpace};
use occert_core::sphere::{nabla_j, riemann, sample_points, AcsField, FdConfig, MetricField};
use occert_core::{linalg, Matrix};

type Outcome = Result<String, String>;

fn round_anchor() -> Outcome {
    let fd = FdConfig::default();
    let mut worst = 0.0_f64;
    for p in sample_points(3, 1).map_err(|e| e.to_string())? {
        let r = riemann(&MetricField::round(), &p, &fd).map_err(|e| e.to_string())?;
        let op = curvature_operator(&r).map_err(|e| e.to_string())?;
        worst = op.spectrum().iter().fold(worst, |w, v| w.max((v - 1.0).abs()));
    }
    if worst < 1e-4 {
        Ok(format!("max |lambda - 1| = {worst:.2e}"))
    } else {
        Err(format!("max |lambda - 1| = {worst:.2e}"))
    }
}

fn constant_curvature() -> Outcome {
    let space = EuclideanSpace::standard(6);
    let id = Matrix::identity(6, 6);
    let r = kulkarni_nomizu_square(&id).scaled(2.0);
    let j = random_orthogonal_complex_structure(&space, 3, true);
    let d1 = linalg::max_abs(&(ricci(&r) - &id * 10.0));
    let d2 = linalg::max_abs(&(ricci_star(&r, &j) - &id * 2.0));
    let d = d1.max(d2);
    if d < 1e-12 {
        Ok(format!("deviation {d:.1e}"))
    } else {
        Err(format!("deviation {d:.1e}"))
    }
}

fn refutation() -> Outcome {
    let space = EuclideanSpace::standard(6);
    let r = kulkarni_nomizu_square(&Matrix::identity(6, 6)).scaled(-1.0);
    let out = refute_p(&r, &space, &RefuteConfig::default()).map_err(|e| e.to_string())?;
    match out.witness {
        Some(w) if (w.value + 1.0).abs() < 1e-6 => Ok(format!("witness value {:.12}", w.value)),
        Some(w) => Err(format!("witness value {}", w.value)),
        None => Err("no witness".into()),
    }
}

fn nearly_kahler() -> Outcome {
    let fd = FdConfig::default();
    let mut worst = 0.0_f64;
    for p in sample_points(2, 2).map_err(|e| e.to_string())? {
        let data = nabla_j(&MetricField::round(), &AcsField::G2Octonionic, &p, &fd).map_err(|e| e.to_string())?;
        for (k, a) in data.nabla.components().iter().enumerate() {
            worst = worst.max(a.column(k).norm());
        }
    }
    if worst < 1e-3 {
        Ok(format!("max |(nabla_e J) e| = {worst:.2e}"))
    } else {
        Err(format!("max |(nabla_e J) e| = {worst:.2e}"))
    }
}

fn pinching() -> Outcome {
    let pass = check_bhl(&[1.0; 15]).map_err(|e| e.to_string())?;
    let mut wide = [1.0; 15];
    wide[14] = 1.5;
    let fail = check_bhl(&wide).map_err(|e| e.to_string())?;
    if pass.pass && !fail.pass {
        Ok("round passes, 1.5 spread fails".into())
    } else {
        Err("unexpected pinching verdicts".into())
    }
}

/// Runs every check, printing `[PASS]` or `[FAIL]` lines; true if all pass.
pub fn run_selftest(out: &mut impl std::io::Write) -> bool {
    let checks: [(&str, fn() -> Outcome); 5] = [
        ("round-metric spectrum", round_anchor),
        ("constant-curvature Ricci identities", constant_curvature),
        ("refutation of negative curvature", refutation),
        ("octonionic structure is nearly Kähler", nearly_kahler),
        ("pinching test", pinching),
    ];
    let mut all = true;
    for (name, f) in checks {
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                all = false;
                ("FAIL", d)
            }
        };
        let _ = writeln!(out, "[{tag}] {name}: {detail}");
    }
    all
}
