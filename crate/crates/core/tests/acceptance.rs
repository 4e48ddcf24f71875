//! One line per acceptance criterion; exits non-zero if any fails.

use std::time::{Duration, Instant};

use rug::float::Constant;
use rug::Float;

use eulersum::closedform::{linear_closed, ClosedFormOutcome, LinearVariant};
use eulersum::seqkit::{combinator, combinator_closed, CombinatorKind, SequenceId};
use eulersum::summator::{eval_direct, SumKind, SumSpec};
use eulersum::verifier::{
    corollary_cases, corollary_crosscheck, lemma_expansion_residual, sample_point, theorem_residual,
    LemmaId, TheoremInstance,
};
use eulersum::{Budget, Precision};

struct Outcome {
    pass: bool,
    detail: String,
}

fn prec() -> Precision {
    Precision::new(30).unwrap()
}

fn abs_diff(a: &Float, b: &Float) -> Float {
    Float::with_val(a.prec().max(b.prec()), a - b).abs()
}

fn sci(x: &Float) -> String {
    format!("{:.2e}", x.to_f64())
}

/// pi^2 log 2 - (7/2) zeta(3) from MPFR primitives.
fn t12_oracle(bits: u32) -> Float {
    let pi = Float::with_val(bits, Constant::Pi);
    let log2 = Float::with_val(bits, Constant::Log2);
    let zeta3 = Float::with_val(bits, 3u32).zeta();
    Float::with_val(bits, &pi * &pi) * log2 - zeta3 * 3.5f64
}

fn linear_weight_three(limit: Duration) -> Outcome {
    let p = prec();
    let start = Instant::now();
    let spec = SumSpec::from_lists(SumKind::T, &[1], &[], 2, false).unwrap();
    let direct = eval_direct(&spec, &p, &Budget::default()).unwrap();
    let closed = match linear_closed(SumKind::T, 1, 2, LinearVariant::Plain).unwrap() {
        ClosedFormOutcome::Determined(e) => e,
        other => panic!("unexpected outcome {other:?}"),
    };
    let closed_value = closed.eval(&p).unwrap();
    let elapsed = start.elapsed();
    let d = abs_diff(&direct.value, &closed_value.value);
    let o = abs_diff(&direct.value, &t12_oracle(p.bits()));
    Outcome {
        pass: d < 1e-10 && o < 1e-10 && elapsed < limit,
        detail: format!(
            "T(1;2) = {} vs {closed}: |diff| {}, vs oracle {}, {:.2?}",
            eulersum::precision::format_float(&direct.value, 12),
            sci(&d),
            sci(&o),
            elapsed
        ),
    }
}

fn linear_s_weight_three() -> Outcome {
    let p = prec();
    let spec = SumSpec::from_lists(SumKind::S, &[1], &[], 2, false).unwrap();
    let direct = eval_direct(&spec, &p, &Budget::default()).unwrap();
    let oracle = Float::with_val(p.bits(), 3u32).zeta() * 3.5f64;
    let d = abs_diff(&direct.value, &oracle);
    Outcome {
        pass: d < 1e-10,
        detail: format!("S(1;2) vs 7/2 zeta(3): |diff| {}", sci(&d)),
    }
}

fn corollary_sweep(limit: Duration) -> Outcome {
    let p = prec();
    let budget = Budget::default();
    let start = Instant::now();
    let (mut checked, mut failed, mut worst) = (0, Vec::new(), Float::new(64));
    for (kind, v, pp, q) in corollary_cases(8) {
        if !linear_closed(kind, pp, q, v).unwrap().is_determined() {
            continue;
        }
        checked += 1;
        match corollary_crosscheck(kind, v, pp, q, &p, &budget) {
            Ok(r) => {
                worst = worst.max(&r.difference);
                if !r.pass {
                    failed.push(format!("{kind} {v} p={pp} q={q}"));
                }
            }
            Err(e) => failed.push(format!("{kind} {v} p={pp} q={q}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failed.is_empty() && checked > 0 && elapsed < limit,
        detail: format!(
            "{checked} determined cases, worst |diff| {}, {:.2?}{}",
            sci(&worst),
            elapsed,
            failures(&failed)
        ),
    }
}

fn parity_vanishing() -> Outcome {
    let p = prec();
    let (mut checked, mut failed, mut worst) = (0, Vec::new(), Float::new(64));
    for (kind, v, pp, q) in corollary_cases(10) {
        let outcome = linear_closed(kind, pp, q, v).unwrap();
        if outcome.is_determined() {
            continue;
        }
        checked += 1;
        let value = outcome.expr().eval(&p).unwrap().value.abs();
        worst = worst.max(&value);
        if value >= 1e-20 {
            failed.push(format!("{kind} {v} p={pp} q={q}"));
        }
    }
    Outcome {
        pass: failed.is_empty() && checked > 0,
        detail: format!("{checked} vanishing identities, worst {}{}", sci(&worst), failures(&failed)),
    }
}

fn sequences() -> [SequenceId; 2] {
    [SequenceId::A1, SequenceId::A2]
}

fn theorem_sweep(instances: Vec<TheoremInstance>, tolerance: f64, limit: Option<Duration>) -> Outcome {
    let p = prec();
    let budget = Budget::default();
    let start = Instant::now();
    let (mut failed, mut worst) = (Vec::new(), 0.0f64);
    let count = instances.len();
    for inst in instances {
        match theorem_residual(&inst, &p, &budget) {
            Ok(r) => {
                let size = r.value.to_f64().abs();
                worst = worst.max(size);
                if size.is_nan() || size >= tolerance {
                    failed.push(format!("{inst}: {size:.2e}"));
                }
            }
            Err(e) => failed.push(format!("{inst}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failed.is_empty() && limit.is_none_or(|l| elapsed < l),
        detail: format!("{count} instances, worst |residual| {worst:.2e}, {elapsed:.2?}{}", failures(&failed)),
    }
}

fn linear_theorems() -> Outcome {
    let mut instances = Vec::new();
    for thm in ["3.1", "3.2"] {
        for a in sequences() {
            for b in sequences() {
                for p in 1..=3 {
                    for q in 2..=4 {
                        instances.push(TheoremInstance::linear(thm, p, q, a.clone(), b.clone()).unwrap());
                    }
                }
            }
        }
    }
    theorem_sweep(instances, 1e-6, None)
}

fn quadratic_theorems(limit: Duration) -> Outcome {
    let mut instances = Vec::new();
    for thm in ["3.5", "3.6", "3.7"] {
        for a in sequences() {
            for b in sequences() {
                for c in sequences() {
                    for p in 1..=2 {
                        for m in 1..=2 {
                            for q in 2..=3 {
                                instances.push(
                                    TheoremInstance::quadratic(thm, p, m, q, a.clone(), b.clone(), c.clone())
                                        .unwrap(),
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    theorem_sweep(instances, 1e-5, Some(limit))
}

fn combinator_specializations() -> Outcome {
    let p = prec();
    let (mut checked, mut failed, mut worst) = (0, Vec::new(), Float::new(64));
    for kind in CombinatorKind::SPECIALIZED {
        for seq in sequences() {
            let indices = if kind.takes_index() { kind.min_index()..=20 } else { 0..=0 };
            for n in indices {
                for j in 1..=5 {
                    checked += 1;
                    let closed = combinator_closed(kind, &seq, n, j, &p).unwrap();
                    match combinator(kind, &seq, n, j, &p) {
                        Ok(def) => {
                            let d = abs_diff(&closed.value, &def.value);
                            if d >= 1e-12 {
                                failed.push(format!("{kind} {seq} n={n} j={j}: {}", sci(&d)));
                            }
                            worst = worst.max(&d);
                        }
                        Err(e) => failed.push(format!("{kind} {seq} n={n} j={j}: {e}")),
                    }
                }
            }
        }
    }
    Outcome {
        pass: failed.is_empty(),
        detail: format!("{checked} (kind, sequence, n, j) cases, worst |diff| {}{}", sci(&worst), failures(&failed)),
    }
}

fn lemma_expansions() -> Outcome {
    let p = prec();
    let (mut checked, mut failed) = (0, Vec::new());
    for lemma in LemmaId::ALL {
        let centres: &[i64] = match lemma {
            LemmaId::B1 => &[1, 3],
            LemmaId::B2 | LemmaId::L2_1 => &[-2, 0, 2],
            LemmaId::L2_2 | LemmaId::L2_3 => &[2, 3],
            LemmaId::HalfPoleExp => &[1],
        };
        for seq in sequences() {
            for order in 1..=3 {
                for &n in centres {
                    checked += 1;
                    let s = sample_point(lemma, n, 0.25, p.bits());
                    let mut residuals = Vec::new();
                    for terms in [6, 8, 10, 12] {
                        match lemma_expansion_residual(lemma, &seq, order, n, &s, terms, &p) {
                            Ok(r) => {
                                if terms == 12 && !r.pass {
                                    failed.push(format!("{lemma} {seq} order={order} n={n}: over bound"));
                                }
                                residuals.push(r.residual);
                            }
                            Err(e) => failed.push(format!("{lemma} {seq} order={order} n={n}: {e}")),
                        }
                    }
                    if residuals.windows(2).any(|w| w[1] > w[0]) {
                        failed.push(format!("{lemma} {seq} order={order} n={n}: residual grew"));
                    }
                }
            }
        }
    }
    Outcome {
        pass: failed.is_empty(),
        detail: format!("{checked} expansions at radius 0.25, J = 6..12{}", failures(&failed)),
    }
}

fn alternating_q_one() -> Outcome {
    let p = prec();
    let budget = Budget::default();
    let (mut checked, mut failed) = (0, Vec::new());
    for kind in [SumKind::T, SumKind::S] {
        for v in [LinearVariant::BarPBarQ, LinearVariant::BarQ] {
            for pp in 1..=4 {
                checked += 1;
                match corollary_crosscheck(kind, v, pp, 1, &p, &budget) {
                    Ok(r) if r.pass && r.difference < 1e-8 => {}
                    Ok(r) => failed.push(format!("{kind} {v} p={pp}: {}", sci(&r.difference))),
                    Err(e) => failed.push(format!("{kind} {v} p={pp}: {e}")),
                }
            }
        }
    }
    Outcome {
        pass: failed.is_empty(),
        detail: format!("{checked} q = 1 alternating cases{}", failures(&failed)),
    }
}

type Criterion = (u32, &'static str, Box<dyn Fn() -> Outcome>);

fn failures(list: &[String]) -> String {
    if list.is_empty() {
        String::new()
    } else {
        format!("; failed: {}", list.join(", "))
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "linear T closed form, weight 3", Box::new(|| linear_weight_three(Duration::from_secs(30)))),
        (2, "linear S closed form, weight 3", Box::new(linear_s_weight_three)),
        (3, "corollary sweep, weight <= 8", Box::new(|| corollary_sweep(Duration::from_secs(600)))),
        (4, "parity-vanishing sweep, weight <= 10", Box::new(parity_vanishing)),
        (5, "linear residue identities", Box::new(linear_theorems)),
        (6, "quadratic residue identities", Box::new(|| quadratic_theorems(Duration::from_secs(1800)))),
        (7, "combinator specializations", Box::new(combinator_specializations)),
        (8, "kernel expansions", Box::new(lemma_expansions)),
        (9, "q = 1 alternating corollaries", Box::new(alternating_q_one)),
    ];
    let mut all = true;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {id} {}: {name}: {} [{:.2?}]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
