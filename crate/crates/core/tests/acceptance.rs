//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//!
//! Criteria run on separate threads and are reported in order.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use vaforms::adjoint::{verify_antihom, verify_involution, verify_adjoint_dstar_image};
use vaforms::config::{FunctionalSource, ModelConfig};
use vaforms::fock::FockModel;
use vaforms::forms::{
    check_degree_one_form_plus_sign, forms_dimension, quotient_model, radical, verify_rad0, verify_radical_zero,
    verify_symmetry_and_bijection, Exactness, Form, RadicalKind, ScalarFunctional,
};
use vaforms::free_va::{compare_dims, dmin, make_free_model};
use vaforms::heisenberg::{generator, make_heisenberg, omega};
use vaforms::lattice::{make_corrupted_lattice_model, make_lattice_model, LocalityMatrix};
use vaforms::model::{dstar, product};
use vaforms::report::{radical_report, to_json, VerifyRun};
use vaforms::verify::{verify_assoc, verify_axioms, verify_dstar_surjective_negative, verify_quasisym, verify_sl2, Report, VerifyOptions};
use vaforms::{BlockKey, Cutoffs, Element, Rational, Scalar, VertexAlgebra, Weight};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

const SAMPLES: usize = 200;
const SEED: u64 = 20240917;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn heis(k: Rational, max_degree: i64) -> FockModel<Rational> {
    make_heisenberg(k, max_degree)
}

fn lattice(n: i64, max_degree: i64, len: usize) -> FockModel<Rational> {
    make_lattice_model(&LocalityMatrix::anonymous(vec![vec![n]]).unwrap(), Cutoffs::new(max_degree, len)).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(r: &Report) -> Result<u64, String> {
    ensure(r.passed, || format!("{} on {}: {}", r.suite, r.model, r.witness.clone().unwrap_or_default()))?;
    Ok(r.checks)
}

fn all_passed(reports: &[Report]) -> Result<u64, String> {
    reports.iter().map(passed).sum()
}

/// Number of partitions of `n`, by direct enumeration of non-increasing parts.
fn partitions(n: u32, largest: u32) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=largest.min(n)).map(|p| partitions(n - p, p)).sum()
}

fn heisenberg_dimensions() -> Outcome {
    let m = heis(q(0, 1), 8);
    let dims: Vec<usize> = (0..=8).map(|d| m.basis(&BlockKey::new(Weight(vec![0]), d)).len()).collect();
    let oracle: Vec<usize> = (0..=8).map(|d| partitions(d, d) as usize).collect();
    ensure(oracle == [1, 1, 2, 3, 5, 7, 11, 15, 22], || format!("partition oracle gave {oracle:?}"))?;
    ensure(dims == oracle, || format!("dims {dims:?} != {oracle:?}"))?;
    Ok(format!("dims {dims:?}"))
}

fn heisenberg_sl2() -> Outcome {
    let a = Element::basis(generator());
    for k in [q(0, 1), q(1, 1), q(1, 2)] {
        let m = heis(k.clone(), 3);
        let via_omega = product(&m, &omega(&k), 2, &a).map_err(|e| e.to_string())?;
        let ds = dstar(&m, &a).map_err(|e| e.to_string())?;
        let expect = m.unit_element().scaled(&(Rational::from_int(-2) * k.clone()));
        ensure(via_omega == ds, || format!("omega_k(2) != D* at k = {k}"))?;
        ensure(ds == expect, || format!("D*a != -2k 1 at k = {k}"))?;
    }
    Ok("D*a = -2k·1 for k in {0, 1, 1/2}".into())
}

fn forms_dichotomy() -> Outcome {
    let zero = heis(q(0, 1), 6);
    let fd = forms_dimension(&zero).map_err(|e| e.to_string())?;
    ensure(fd == BTreeMap::from([(Weight(vec![0]), 1)]), || format!("k=0 forms_dimension {fd:?}"))?;
    let rad = radical(&zero, &Form::canonical(&zero).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(rad.blocks.len() == 7, || format!("k=0 scanned {} blocks", rad.blocks.len()))?;
    ensure(rad.kind() == RadicalKind::Zero, || "k=0 radical is nonzero".into())?;
    ensure(rad.blocks.iter().all(|b| b.exactness == Exactness::Exact), || "k=0 radical not exact".into())?;

    let one = heis(q(1, 1), 6);
    let fd = forms_dimension(&one).map_err(|e| e.to_string())?;
    ensure(fd.values().all(|&v| v == 0), || format!("k=1 forms_dimension {fd:?}"))?;
    let rad = radical(&one, &Form::canonical(&one).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(rad.kind() == RadicalKind::Full, || "k=1 radical is not the whole algebra".into())?;
    Ok("k=0: one form, radical 0 to degree 6; k=1: no form, radical full".into())
}

fn symmetry() -> Outcome {
    let mut checks = 0;
    for (m, cutoff) in [(heis(q(0, 1), 6), 6), (lattice(-2, 3, 2), 3)] {
        let opts = VerifyOptions::new(cutoff, SAMPLES, SEED);
        let canonical = Form::canonical(&m).map_err(|e| e.to_string())?;
        checks += passed(&verify_symmetry_and_bijection(&m, &canonical, opts))?;
        let f = ScalarFunctional::unit_dual(&m).map_err(|e| e.to_string())?;
        checks += passed(&verify_symmetry_and_bijection(&m, &Form::Functional(f), opts))?;
    }
    Ok(format!("{checks} checks"))
}

fn adjoint_identities() -> Outcome {
    let mut checks = 0;
    for (m, cutoff) in [(heis(q(0, 1), 5), 5), (heis(q(1, 2), 5), 5), (lattice(-2, 3, 2), 3)] {
        let opts = VerifyOptions::new(cutoff, SAMPLES, SEED);
        checks += all_passed(&[verify_involution(&m, opts), verify_antihom(&m, opts)])?;
    }
    Ok(format!("{checks} checks"))
}

fn dstar_image() -> Outcome {
    let mut checks = 0;
    for (m, cutoff) in [(heis(q(0, 1), 5), 5), (heis(q(1, 2), 5), 5), (lattice(-2, 3, 2), 3)] {
        let r = verify_adjoint_dstar_image(&m, cutoff);
        ensure(r.skipped == 0, || format!("{} checks skipped", r.skipped))?;
        checks += passed(&r)?;
    }
    Ok(format!("{checks} checks"))
}

fn axioms() -> Outcome {
    let mut checks = 0;
    for (m, cutoff) in [(heis(q(1, 2), 4), 4), (lattice(-2, 3, 2), 3), (lattice(2, 1, 1), 1)] {
        let opts = VerifyOptions::new(cutoff, SAMPLES, SEED);
        checks += all_passed(&[
            verify_axioms(&m, opts),
            verify_assoc(&m, opts),
            verify_quasisym(&m, opts),
            verify_sl2(&m, cutoff),
        ])?;
    }
    let n = LocalityMatrix::anonymous(vec![vec![-2]]).unwrap();
    let bad = make_corrupted_lattice_model::<Rational>(&n, Cutoffs::new(2, 2), vec![1], vec![-1]).unwrap();
    let r = verify_axioms(&bad, VerifyOptions::new(2, SAMPLES, SEED));
    ensure(!r.passed && r.witness.is_some(), || "corrupted cocycle passed the axioms".into())?;
    Ok(format!("{checks} checks; corrupted cocycle rejected: {}", r.witness.unwrap()))
}

fn free_dimensions() -> Outcome {
    let configs: [(Vec<Vec<i64>>, i64, usize); 3] =
        [(vec![vec![-2]], 13, 3), (vec![vec![2]], 4, 3), (vec![vec![-2, 1], vec![1, -2]], 8, 2)];
    let mut rows_checked = 0;
    for (n, max_degree, len) in configs {
        let lm = LocalityMatrix::anonymous(n.clone()).unwrap();
        let m = make_free_model::<Rational>(&lm, Cutoffs::new(max_degree, len)).map_err(|e| e.to_string())?;
        let (rep, rows) = compare_dims(&m);
        passed(&rep)?;
        for r in &rows {
            let lo = dmin(&r.weight.0, &n);
            if r.degree < lo {
                ensure(r.generated == 0, || format!("{n:?}: nonzero block below d_min at {r:?}"))?;
            }
            if r.degree == lo {
                ensure(r.generated == 1, || format!("{n:?}: dim at d_min is {} for {:?}", r.generated, r.weight))?;
            }
        }
        // Every weight is covered up to d_min + 4.
        for w in rows.iter().map(|r| r.weight.clone()).collect::<std::collections::BTreeSet<_>>() {
            let lo = dmin(&w.0, &n);
            let top = rows.iter().filter(|r| r.weight == w).map(|r| r.degree).max().unwrap();
            ensure(top >= (lo + 4).min(max_degree) && max_degree >= lo.min(max_degree), || format!("{w:?} stops at {top}"))?;
        }
        rows_checked += rows.len();
    }
    Ok(format!("{rows_checked} blocks match the colored partition count"))
}

fn dstar_surjective() -> Outcome {
    let mut checks = 0;
    let lat = lattice(2, 0, 2);
    let free = make_free_model::<Rational>(&LocalityMatrix::anonymous(vec![vec![2]]).unwrap(), Cutoffs::new(0, 2))
        .map_err(|e| e.to_string())?;
    for l in -2..=2 {
        let w = Weight(vec![l]);
        checks += passed(&verify_dstar_surjective_negative(&lat, &w, 0))?;
        if l >= 0 {
            checks += passed(&verify_dstar_surjective_negative(&free, &w, 0))?;
        }
    }
    ensure(checks > 0, || "no blocks checked".into())?;
    Ok(format!("{checks} rank checks"))
}

fn rad0<M: VertexAlgebra<Rational>>(model: Arc<M>, cutoff: i64) -> Result<(u64, Report), String> {
    let rad = radical(model.as_ref(), &Form::canonical(model.as_ref()).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let quot = quotient_model(model, &rad).map_err(|e| e.to_string())?;
    let checks = all_passed(&[verify_radical_zero(&quot), verify_rad0(&quot, VerifyOptions::new(cutoff, SAMPLES, SEED))])?;
    Ok((checks, check_degree_one_form_plus_sign(&quot, cutoff)))
}

fn radical_quotients() -> Outcome {
    let (c1, plus1) = rad0(Arc::new(heis(q(0, 1), 4)), 4)?;
    let n = LocalityMatrix::anonymous(vec![vec![4]]).unwrap();
    let free = Arc::new(make_free_model::<Rational>(&n, Cutoffs::new(2, 2)).map_err(|e| e.to_string())?);
    let (c2, plus2) = rad0(free, 2)?;
    // <a,b> = f(a(-1)* b) with a(-1)* = -a(1) on degree one, so the literal
    // reading <a,b> = a(1)b must fail wherever the degree-one pairing is nonzero.
    ensure(!plus1.passed, || "the '+' reading unexpectedly holds on Heisenberg k=0".into())?;
    Ok(format!(
        "{} checks with <a,b> = -a(1)b; literal '<a,b> = a(1)b' fails as expected ({}); free quotient has {} degree-one checks",
        c1 + c2,
        plus1.witness.unwrap_or_default(),
        plus2.checks
    ))
}

fn determinism() -> Outcome {
    let cfg = ModelConfig::from_json(r#"{"type":"lattice","generators":["g"],"N":[[-2]],"max_degree":2,"max_weight_len":2}"#)
        .map_err(|e| e.to_string())?;
    let run = VerifyRun { suite: "all".into(), seed: 11, samples: 40, cutoff: None, functional: FunctionalSource::Canonical };
    let once = || -> Result<(String, String), String> {
        let m = cfg.build().map_err(|e| e.to_string())?;
        let v = m.visit(&run).map_err(|e| e.to_string())?;
        let vaforms::config::BuiltModel::Fock(f) = &m else { unreachable!() };
        let form = Form::canonical(f.as_ref()).map_err(|e| e.to_string())?;
        let r = radical_report(f.as_ref(), &form).map_err(|e| e.to_string())?;
        Ok((to_json(&v), to_json(&r)))
    };
    let (a, b) = (once()?, once()?);
    ensure(a == b, || "reports differ between runs".into())?;
    Ok(format!("{} bytes identical across runs", a.0.len() + a.1.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("Heisenberg dimensions", heisenberg_dimensions, Duration::from_secs(5)),
        ("Heisenberg sl2", heisenberg_sl2, Duration::from_secs(1)),
        ("forms dichotomy", forms_dichotomy, Duration::from_secs(30)),
        ("symmetry and round trip", symmetry, Duration::from_secs(60)),
        ("adjoint involution and anti-homomorphism", adjoint_identities, Duration::from_secs(120)),
        ("adjoint modes land in D*A", dstar_image, Duration::from_secs(60)),
        ("axiom suite", axioms, Duration::from_secs(120)),
        ("free dimension formula", free_dimensions, Duration::from_secs(300)),
        ("D* surjective in negative degrees", dstar_surjective, Duration::from_secs(60)),
        ("quotient by the radical", radical_quotients, Duration::from_secs(300)),
        ("determinism", determinism, Duration::from_secs(120)),
    ];
    // Numeric arguments select criteria; anything else (harness flags) is ignored.
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let selected = |i: usize| only.is_empty() || only.contains(&(i + 1));
    let results: Vec<Option<(Outcome, Duration)>> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .map(|(i, (_, f, _))| {
                if !selected(i) {
                    return None;
                }
                let f = *f;
                Some(s.spawn(move || {
                    let t = Instant::now();
                    let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
                        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
                    });
                    (r, t.elapsed())
                }))
            })
            .collect();
        handles.into_iter().map(|h| h.map(|h| h.join().unwrap())).collect()
    });
    let mut failed = 0;
    for (i, ((name, _, limit), res)) in criteria.iter().zip(results).enumerate() {
        let Some((r, t)) = res else { continue };
        let over = if t > *limit { format!(" (over the {}s budget)", limit.as_secs()) } else { String::new() };
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.1}s{over}]", i + 1, t.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{:.1}s{over}]", i + 1, t.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
