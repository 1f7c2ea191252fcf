//! Acceptance criteria, one PASS/FAIL line each. Comparisons are exact
//! rational equality. Criteria run on separate threads; lines are printed in
//! criterion order with wall-clock time next to the runtime target, which is
//! reported but not enforced.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use vlplus_cli::report::{EntryStatus, Report};
use vlplus_cli::{certify_checks, run};
use vlplus_core::checks::{all_pass, Check, Status};
use vlplus_core::exact::{int, pow2, rat, PolynomialQ, Rational};
use vlplus_core::fock::schur_p;
use vlplus_core::lattice::{build_generators, LatticeState};
use vlplus_core::suites::{commutator_suite, Space, SuiteConfig};
use vlplus_core::zhu::{
    certify_in_ov, classify, e_star_e_check, fit_structure_polynomials, leading_residue_check,
    lemma51_check, polynomial_checks, verify_relations, zhu_basis_certificate, CertifyOutcome,
    ERelation, SquareClass, ZhuContext,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn failing(checks: &[Check]) -> String {
    checks
        .iter()
        .filter(|c| c.status.is_failure())
        .map(|c| format!("{}: expected {} got {}", c.name, c.expected, c.actual))
        .collect::<Vec<_>>()
        .join("; ")
}

fn named<'a>(checks: &'a [Check], prefix: &str) -> Result<&'a Check, String> {
    checks
        .iter()
        .find(|c| c.name.starts_with(prefix))
        .ok_or_else(|| format!("no check named '{prefix}'"))
}

fn c1_table() -> Outcome {
    for k in [2u32, 3, 4, 5, 6, 9] {
        let out = run(["vlplus", "table", "--k", &k.to_string(), "--json"]);
        let report = Report::from_json(&out.stdout).map_err(|e| format!("k={k}: bad JSON: {e}"))?;
        ensure(out.code == 0 && report.all_pass, || {
            format!("k={k}: exit {} with failing entries", out.code)
        })?;
        let rows = k as usize + 7;
        ensure(report.entries.len() == 4 * rows + 2, || {
            format!("k={k}: {} entries", report.entries.len())
        })?;
        // independent twisted closed forms
        let kk = k as i64;
        let e_plus = pow2(1 - 2 * kk);
        let e_minus = -pow2(1 - 2 * kk) * int(4 * kk - 1);
        let want = [
            ("T1+ omega", rat(1, 16)),
            ("T1- omega", rat(9, 16)),
            ("T1+ J", rat(3, 128)),
            ("T1- J", rat(-45, 128)),
            ("T2+ J", rat(3, 128)),
            ("T2- J", rat(-45, 128)),
            ("T1+ E", e_plus.clone()),
            ("T1- E", e_minus.clone()),
            ("T2+ E", -e_plus),
            ("T2- E", -e_minus),
            ("VLhalf+ J", rat(kk * kk - kk, 4)),
            ("VLhalf- J", rat(kk * kk - kk, 4)),
        ];
        for (name, value) in want {
            let e = report
                .entries
                .iter()
                .find(|e| e.name == name)
                .ok_or_else(|| format!("k={k}: missing {name}"))?;
            ensure(e.actual == value.to_string() && e.status == EntryStatus::Pass, || {
                format!("k={k}: {name} computed {} want {value}", e.actual)
            })?;
        }
        let r_entry = report
            .entries
            .iter()
            .find(|e| e.name == "VLhalf+ J = r(k/4)")
            .ok_or("missing r(k/4) entry")?;
        ensure(r_entry.status == EntryStatus::Pass, || format!("k={k}: lambda_J != r(k/4)"))?;
    }
    Ok("k in {2,3,4,5,6,9}: all k+7 triples match; VLhalf J = k^2/4 - k/4 = r(k/4)".into())
}

fn c2_matrix_determinant() -> Outcome {
    for k in 2..=6u32 {
        let l = lemma51_check(k).map_err(|e| e.to_string())?;
        ensure(l.matrix_matches(), || format!("k={k}: matrix\n{}\nexpected\n{}", l.matrix, l.expected))?;
        let kk = k as i64;
        let det = int(6144 * (1 - kk) * kk * kk);
        ensure(l.determinant == det, || format!("k={k}: det {} want {det}", l.determinant))?;
    }
    Ok("k = 2..6: 11x11 matrix entry-for-entry, det = 6144(1-k)k^2".into())
}

fn binom(n: i64, j: i64) -> Rational {
    (0..j).fold(int(1), |acc, i| acc * int(n - i) / int(i + 1))
}

fn c3_e_star_e() -> Outcome {
    for k in 2..=4u32 {
        let kk = k as i64;
        // q_j(alpha) 1 = p_j(alpha) 1 + p_j(-alpha) 1
        let mut want = LatticeState::zero(k);
        for j in 0..=kk {
            let d = (2 * kk - j) as u32;
            let q = schur_p(d, &int(1), k).add(&schur_p(d, &int(-1), k));
            want.add_scaled_assign(&LatticeState::from_fock(&q, 0, k), &binom(kk, j));
        }
        let e = build_generators(k).e;
        let got = ZhuContext::new(k).star(&e, &e).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("k={k}: E*E = {got}, want {want}"))?;
        ensure(e_star_e_check(k).map_err(|e| e.to_string())?.pass(), || format!("k={k}: library check"))?;
    }
    Ok("k = 2,3,4: E*E = sum_j C(k,j) q_{2k-j}(alpha) 1".into())
}

fn r_oracle(k: i64) -> PolynomialQ {
    let d = int((4 * k - 1) * (4 * k - 9));
    PolynomialQ::new(vec![
        int(27 * k * (k - 1)) / (int(8) * &d),
        int(9 + 80 * k - 104 * k * k) / (int(2) * &d),
        int(2 * (32 * k * k - 8 * k - 9)) / &d,
    ])
}

fn c4_polynomials() -> Outcome {
    for k in 2..=10u32 {
        let kk = k as i64;
        let z = fit_structure_polynomials(k).map_err(|e| e.to_string())?;
        ensure(z.r == r_oracle(kk), || format!("k={k}: r = {} want {}", z.r, r_oracle(kk)))?;
        let fact = (1..=2 * kk).fold(int(1), |a, i| a * int(i));
        let a0 = (0..kk).fold(int(2), |a, _| a * int(4 * kk)) / fact;
        ensure(z.a0 == a0, || format!("k={k}: a0 = {} want {a0}", z.a0))?;
        let checks = polynomial_checks(&z).map_err(|e| e.to_string())?;
        for name in [
            "-p - q(4x^2-x) + (4x^2-x)^2 = 0",
            "q - r + x - 4x^2 closed form",
            "b(1) = ",
            "r - 4x^2 + x closed form",
        ] {
            let c = named(&checks, name)?;
            ensure(c.status == Status::Pass, || format!("k={k}: {}", failing(std::slice::from_ref(c))))?;
        }
    }
    Ok("k = 2..10: r coefficient-wise, a0, four polynomial identities".into())
}

fn c5_relations() -> Outcome {
    for k in 2..=10u32 {
        let rep = verify_relations(k).map_err(|e| e.to_string())?;
        for rel in ["B1 ", "B2 ", "L1 ", "L2 "] {
            let c = named(&rep.checks, rel)?;
            ensure(c.status == Status::Pass, || format!("k={k}: {}", failing(std::slice::from_ref(c))))?;
        }
        let zeros = rep
            .residuals
            .iter()
            .filter(|r| ["B1", "B2", "L1", "L2"].contains(&r.relation))
            .all(|r| r.value == int(0));
        ensure(zeros, || format!("k={k}: nonzero residual"))?;
        ensure(rep.all_pass(), || format!("k={k}: {}", failing(&rep.checks)))?;
    }
    for k in 2..=16u32 {
        let z = fit_structure_polynomials(k).map_err(|e| e.to_string())?;
        let checks = polynomial_checks(&z).map_err(|e| e.to_string())?;
        let tri = named(&checks, "b(1), b(1/16), b(9/16) pattern")?;
        let phi = named(&checks, "phi((3k-3)/(32k-12)) != 0")?;
        ensure(tri.status == Status::Pass && phi.status == Status::Pass, || {
            format!("k={k}: {}", failing(&[tri.clone(), phi.clone()]))
        })?;
        ensure(tri.name.contains(SquareClass::of(k).as_str()), || format!("k={k}: class"))?;
    }
    Ok("B1,B2,L1,L2 vanish on all tops for k = 2..10; trichotomy and phi for k = 2..16".into())
}

fn c6_basis() -> Outcome {
    let classes = [
        (2, SquareClass::NonSquare),
        (3, SquareClass::NonSquare),
        (5, SquareClass::NonSquare),
        (6, SquareClass::NonSquare),
        (7, SquareClass::NonSquare),
        (8, SquareClass::NonSquare),
        (4, SquareClass::EvenSquare),
        (16, SquareClass::EvenSquare),
        (9, SquareClass::OddSquare),
        (25, SquareClass::OddSquare),
    ];
    for (k, class) in classes {
        let b = zhu_basis_certificate(k).map_err(|e| e.to_string())?;
        ensure(b.class == class, || format!("k={k}: class {}", b.class.as_str()))?;
        ensure(b.determinant != int(0) && b.characters_distinct && b.pass(), || {
            format!("k={k}: det {} distinct {}", b.determinant, b.characters_distinct)
        })?;
        let c = classify(k).map_err(|e| e.to_string())?;
        ensure(c.dimension == k as usize + 7 && c.commutative_semisimple, || {
            format!("k={k}: dim {}", c.dimension)
        })?;
        if k <= 9 {
            let out = run(["vlplus", "classify", "--k", &k.to_string()]);
            let line = format!("dim A(V_L^+) = {}", k + 7);
            ensure(out.code == 0 && out.stdout.contains(&line), || {
                format!("k={k}: classify printed {}", out.stdout)
            })?;
        }
    }
    Ok("10 values of k over all square classes: nonsingular, dim A(V_L^+) = k+7".into())
}

fn c7_commutators() -> Outcome {
    let mut total = 0;
    for k in [2u32, 3] {
        for space in [Space::Fock, Space::Lattice, Space::Twisted] {
            let cfg = SuiteConfig::new(k);
            let checks = commutator_suite(space, &cfg).map_err(|e| e.to_string())?;
            ensure(all_pass(&checks), || format!("k={k} {}: {}", space.as_str(), failing(&checks)))?;
            for c in &checks {
                ensure(c.actual.starts_with("100/100"), || {
                    format!("k={k} {} {}: {}", space.as_str(), c.name, c.actual)
                })?;
            }
            total += checks.len();
        }
    }
    Ok(format!("{total} relation suites x 100 samples, weight <= 10, k = 2,3"))
}

fn c8_leading_residue() -> Outcome {
    for k in [2u32, 3] {
        for m in [1i64, 2] {
            let r = leading_residue_check(m, k).map_err(|e| e.to_string())?;
            ensure(r.pass(), || format!("m={m} k={k}: remainder outside M(1)^+"))?;
        }
    }
    Ok("m = 1,2, k = 2,3: leading residue = E^{2m} + M(1)^+ terms".into())
}

fn c9_certificates() -> Outcome {
    let k = 2;
    let zero = certify_in_ov(&LatticeState::zero(k), 4).map_err(|e| e.to_string())?;
    let cert = zero.certificate().ok_or("zero target not certified")?;
    ensure(cert.generators.is_empty() && cert.replays().map_err(|e| e.to_string())?, || {
        "trivial certificate".into()
    })?;
    let g = build_generators(k);
    let single = ZhuContext::new(k)
        .circ(&g.omega, &LatticeState::vacuum(k))
        .map_err(|e| e.to_string())?;
    let out = certify_in_ov(&single, 4).map_err(|e| e.to_string())?;
    let cert = out.certificate().ok_or("single generator not certified")?;
    ensure(cert.generators.len() == 1 && cert.replays().map_err(|e| e.to_string())?, || {
        "single-generator certificate".into()
    })?;

    let mut notes = Vec::new();
    for k in [2u32, 3, 4] {
        for rel in [ERelation::L1, ERelation::L2] {
            let checks = certify_checks(k, rel, k as i64 + 8).map_err(|e| e.to_string())?;
            ensure(checks[0].status == Status::Pass, || format!("k={k} {rel:?}: oracle {}", checks[0].actual))?;
            match checks[1].status {
                Status::Pass => notes.push(format!("{rel:?}@{k} certified")),
                Status::Inconclusive => notes.push(format!("{rel:?}@{k} inconclusive")),
                Status::Fail => return Err(format!("k={k} {rel:?}: certificate did not replay")),
            }
        }
    }
    // replay of a returned deep certificate, independent of the search
    if let CertifyOutcome::Certified(c) = certify_in_ov(
        &vlplus_core::zhu::relation_target(2, ERelation::L2).map_err(|e| e.to_string())?,
        10,
    )
    .map_err(|e| e.to_string())?
    {
        ensure(c.evaluate().map_err(|e| e.to_string())? == c.target, || "L2 replay".into())?;
    }
    Ok(format!("trivial + single-generator replay; oracle passes; {}", notes.join(", ")))
}

struct Criterion {
    id: u32,
    title: &'static str,
    target: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, title: "scalar table", target: Duration::from_secs(30), run: c1_table },
        Criterion { id: 2, title: "11x11 matrix and determinant", target: Duration::from_secs(10), run: c2_matrix_determinant },
        Criterion { id: 3, title: "E*E closed form", target: Duration::from_secs(30), run: c3_e_star_e },
        Criterion { id: 4, title: "structure polynomials", target: Duration::from_secs(5), run: c4_polynomials },
        Criterion { id: 5, title: "relation suite", target: Duration::from_secs(5), run: c5_relations },
        Criterion { id: 6, title: "basis certificates", target: Duration::from_secs(10), run: c6_basis },
        Criterion { id: 7, title: "commutator suites", target: Duration::from_secs(60), run: c7_commutators },
        Criterion { id: 8, title: "leading residue instance", target: Duration::from_secs(30), run: c8_leading_residue },
        Criterion { id: 9, title: "certificate engine", target: Duration::from_secs(300), run: c9_certificates },
    ];
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|c| {
                s.spawn(move || {
                    let start = Instant::now();
                    let out = std::panic::catch_unwind(c.run)
                        .unwrap_or_else(|_| Err("panicked".to_string()));
                    (out, start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    let mut failed = 0;
    for (c, (out, took)) in criteria.iter().zip(&results) {
        let timing = format!(
            "{:.2}s, target < {}s{}",
            took.as_secs_f64(),
            c.target.as_secs(),
            if *took > c.target { ", over target" } else { "" }
        );
        match out {
            Ok(detail) => println!("PASS criterion {} ({}) [{timing}]: {detail}", c.id, c.title),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({}) [{timing}]: {why}", c.id, c.title);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
