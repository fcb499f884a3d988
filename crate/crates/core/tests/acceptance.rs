//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::Instant;

use itertools::Itertools;
use lalg::constructions::{enumerate_all, fixture, fixtures, for_each_algebra};
use lalg::io::{parse_algebra, serialize_algebra, AlgebraDocument};
use lalg::laws::{law, product_oracle, run_suite, Corpus, Verdict};
use lalg::spectrum::{attach_prime_ideal, prime_elements, prime_ideals, quasi_prime_elements};
use lalg::{enumerate_ideals, FiniteLAlgebra, Subset};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Every algebra with at most three elements plus every fixture.
fn corpus() -> Vec<Corpus> {
    let mut out: Vec<Corpus> = (1..=3)
        .map(|n| Corpus {
            id: format!("n{n}"),
            algebras: enumerate_all(n, false).unwrap(),
        })
        .collect();
    out.push(Corpus {
        id: "fixtures".into(),
        algebras: fixtures().unwrap().into_iter().map(|f| f.algebra).collect(),
    });
    out
}

fn run_law(id: &str, corpora: &[Corpus]) -> Outcome {
    let rows = run_suite(corpora, &[law(id).expect("registered law")], None);
    let instances: usize = rows.iter().map(|r| r.instances).sum();
    match rows.iter().find(|r| r.verdict == Verdict::Fail) {
        Some(r) => Err(format!(
            "{} on {}: {}",
            r.corpus,
            id,
            r.witness
                .as_ref()
                .map(|w| w.to_string())
                .unwrap_or_default()
        )),
        None => Ok(format!("{instances} algebras, zero counterexamples")),
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let detail = run_law("thm3.distributivity", &corpus())?;
    let secs = start.elapsed().as_secs_f64();
    if secs > 10.0 {
        return Err(format!("took {secs:.1}s"));
    }
    Ok(format!("{detail} in {secs:.2}s"))
}

fn c2() -> Outcome {
    run_law("prop2.join", &corpus())
}

fn c3() -> Outcome {
    run_law("prop6.iff", &corpus())
}

fn c4() -> Outcome {
    run_law("prop3.sober", &corpus())
}

fn c5() -> Outcome {
    let fx = Corpus {
        id: "fixtures".into(),
        algebras: fixtures().unwrap().into_iter().map(|f| f.algebra).collect(),
    };
    run_law("thm4.bijection", &[fx])
}

fn c6() -> Outcome {
    let names = ["B2", "diamond", "chain3"];
    let mut checked = Vec::new();
    for (a, b) in names.iter().cartesian_product(names) {
        let s = product_oracle(&fixture(a).unwrap(), &fixture(b).unwrap())
            .map_err(|e| format!("{a}×{b}: {e}"))?;
        if s.ideals.2 != s.ideals.0 * s.ideals.1 || s.points.2 != s.points.0 + s.points.1 {
            return Err(format!("{a}×{b}: {s:?}"));
        }
        checked.push(format!("{a}×{b} {}/{}", s.ideals.2, s.points.2));
    }
    Ok(format!("ideals/points {}", checked.join(", ")))
}

fn c7() -> Outcome {
    let x = fixture("diamond").unwrap();
    let l = enumerate_ideals(&x).map_err(|e| e.to_string())?;
    let s = prime_ideals(&l).map_err(|e| e.to_string())?;
    let (p, q) = (x.index_of("p").unwrap(), x.index_of("q").unwrap());
    let top = l.ideal(l.principal(p));
    if top != x.carrier() || l.ideal(l.principal(q)) != x.carrier() {
        return Err(format!("⟨p⟩ = {}", x.format_subset(top)));
    }
    let unit = Subset::singleton(x.unit());
    for e in [p, q] {
        let at = attach_prime_ideal(&l, &s, e).map_err(|e| e.to_string())?;
        if at.maximal.len() != 1 || l.ideal(at.maximal[0]) != unit {
            return Err(format!("P_{} is not {{1}}", x.label(e)));
        }
    }
    Ok("⟨p⟩ = ⟨q⟩ = X, P_p = P_q = {1}".into())
}

fn c8() -> Outcome {
    run_law("prime.subset.quasiprime", &corpus())?;
    let x = fixture("diamond").unwrap();
    let l = enumerate_ideals(&x).map_err(|e| e.to_string())?;
    let qp = quasi_prime_elements(&l).map_err(|e| e.to_string())?;
    let primes = prime_elements(&x);
    let want_qp: Subset = ["p", "q", "0"]
        .iter()
        .map(|l| x.index_of(l).unwrap())
        .collect();
    let want_p: Subset = ["p", "q"].iter().map(|l| x.index_of(l).unwrap()).collect();
    let got = format!(
        "QP = {}, P(X) = {}",
        x.format_subset(qp),
        x.format_subset(primes)
    );
    if qp == want_qp && primes == want_p {
        Ok(format!("P ⊆ QP on the corpus; diamond {got}"))
    } else {
        Err(format!(
            "diamond {got}, expected QP = {{p, q, 0}} ⊋ P(X) = {{p, q}}"
        ))
    }
}

fn c9() -> Outcome {
    let detail = run_law("map17.iff-brouwerian", &corpus())?;
    run_law("eq20.principal", &corpus())?;
    Ok(detail)
}

/// Direct axiom check on a raw table over `0..n` with unit `u`.
fn is_l_algebra(n: usize, u: usize, t: &[usize]) -> bool {
    let op = |x: usize, y: usize| t[x * n + y];
    (0..n).all(|x| op(x, x) == u && op(x, u) == u && op(u, x) == x)
        && (0..n).all(|x| (0..n).all(|y| op(x, y) != u || op(y, x) != u || x == y))
        && (0..n)
            .cartesian_product(0..n)
            .cartesian_product(0..n)
            .all(|((x, y), z)| op(op(x, y), op(x, z)) == op(op(y, x), op(y, z)))
}

fn c10() -> Outcome {
    let n = 3;
    let mut per_unit = [0usize; 3];
    for t in (0..n * n).map(|_| 0..n).multi_cartesian_product() {
        for (u, count) in per_unit.iter_mut().enumerate() {
            if is_l_algebra(n, u, &t) {
                *count += 1;
            }
        }
    }
    let mut backtracked = 0;
    for_each_algebra(3, false, |_| backtracked += 1).map_err(|e| e.to_string())?;
    let mut two = 0;
    for_each_algebra(2, false, |_| two += 1).map_err(|e| e.to_string())?;
    let mut two_iso = 0;
    for_each_algebra(2, true, |_| two_iso += 1).map_err(|e| e.to_string())?;
    if per_unit[0] != backtracked
        || per_unit.iter().any(|&c| c != per_unit[0])
        || two != 1
        || two_iso != 1
    {
        return Err(format!(
            "naive {per_unit:?} vs backtracking {backtracked}; n=2 gives {two} ({two_iso} up to iso)"
        ));
    }
    Ok(format!(
        "n=3: {backtracked} tables with unit 0 ({} over all units of 3^9); n=2: 1",
        per_unit.iter().sum::<usize>()
    ))
}

fn c11() -> Outcome {
    for f in fixtures().unwrap() {
        let doc = AlgebraDocument::from_algebra(&f.algebra);
        let text = serialize_algebra(&doc);
        let back = parse_algebra(&text).map_err(|e| format!("{}: {e}", f.name))?;
        if back != doc || serialize_algebra(&back) != text {
            return Err(format!("{} does not round-trip", f.name));
        }
        let json = serde_json::to_string(&doc).unwrap();
        let back: AlgebraDocument = serde_json::from_str(&json).map_err(|e| e.to_string())?;
        let x: FiniteLAlgebra = back.to_algebra().map_err(|e| e.to_string())?;
        if x != f.algebra {
            return Err(format!("{} does not round-trip through JSON", f.name));
        }
    }
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_lalg"))
            .args(["laws", "--enumerate", "3", "--json", "--no-timing"])
            .output()
            .expect("runs the binary")
    };
    let (a, b) = (run(), run());
    if !a.status.success() {
        return Err(format!("laws --enumerate 3 exited with {}", a.status));
    }
    if a.stdout != b.stdout {
        return Err("two runs differ".into());
    }
    Ok(format!(
        "fixtures round-trip; two runs identical ({} bytes)",
        a.stdout.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("ideal lattices are distributive", c1),
        ("join by closure equals join by congruence", c2),
        ("P prime iff X/P subdirectly irreducible", c3),
        ("spectra are T0 and sober", c4),
        ("Spec I ↔ U_I and Spec X/I ↔ A_I on fixtures", c5),
        ("products split ideals and spectra", c6),
        ("diamond attachments", c7),
        ("prime ⊆ quasi-prime; diamond P and QP", c8),
        ("x ↦ U_⟨x⟩ on ∧-closed algebras", c9),
        ("enumerator matches the naive filter", c10),
        ("round trip and determinism", c11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
