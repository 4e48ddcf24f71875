use serde_json::Value;

use eulersum::closedform::{linear_closed, LinearVariant};
use eulersum::precision::{format_float, parse_float};
use eulersum::seqkit::SequenceId;
use eulersum::summator::eval_with;
use eulersum::verifier::{
    corollary_crosscheck, determined_cases, lemma_expansion_residual, sample_point, verify_theorem, LemmaId,
    TheoremInstance,
};
use eulersum::{Budget, Error, EvalResult, Float, Precision, Result, SumKind, SumSpec};

use crate::report::{text, Report, Table};
use crate::{Cli, Command, EvalArgs, LemmaArgs, LinearArgs, TableArgs, TheoremArgs};

/// Digits shown for error bounds and residuals.
const BOUND_DIGITS: usize = 3;

/// Quarter of the unit disk, matching the library's own expansion checks.
const DEFAULT_OFFSET: f64 = 0.25;

struct Context {
    prec: Precision,
    budget: Budget,
    digits: usize,
}

impl Context {
    fn value(&self, x: &Float) -> Value {
        text(format_float(x, self.digits))
    }

    fn bound(&self, x: &Float) -> Value {
        text(format_float(x, BOUND_DIGITS))
    }

    fn common(&self, report: &mut Report) {
        report.params.push(("digits", text(self.prec.decimal_digits().to_string())));
        report.params.push(("max_terms", text(self.budget.max_terms.to_string())));
    }

    fn eval_fields(&self, r: &EvalResult) -> Vec<(&'static str, Value)> {
        vec![("value", self.value(&r.value)), ("error_bound", self.bound(&r.error_bound))]
    }
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let ctx = Context {
        prec: Precision::new(cli.digits)?,
        budget: Budget::new(cli.max_terms, Budget::DEFAULT_DEPTH)?,
        digits: cli.digits as usize,
    };
    let mut report = match &cli.command {
        Command::Eval(a) => eval(&ctx, a)?,
        Command::Closed(a) => closed(&ctx, a)?,
        Command::Crosscheck(a) => crosscheck(&ctx, a)?,
        Command::VerifyTheorem(a) => theorem(&ctx, a)?,
        Command::LemmaCheck(a) => lemma(&ctx, a)?,
        Command::Table(a) => table(&ctx, a)?,
    };
    ctx.common(&mut report);
    Ok(report)
}

fn bars(flags: &[u8], count: usize) -> Result<Vec<bool>> {
    if flags.is_empty() {
        return Ok(vec![false; count]);
    }
    if flags.len() != count {
        return Err(Error::InvalidParameter(format!(
            "--bars has {} entries for {count} exponents",
            flags.len()
        )));
    }
    flags
        .iter()
        .map(|&b| match b {
            0 => Ok(false),
            1 => Ok(true),
            _ => Err(Error::InvalidParameter(format!("--bars entries are 0 or 1, got {b}"))),
        })
        .collect()
}

fn eval(ctx: &Context, a: &EvalArgs) -> Result<Report> {
    let kind: SumKind = a.kind.parse()?;
    let spec = SumSpec::from_lists(kind, &a.exps, &bars(&a.bars, a.exps.len())?, a.q, a.qbar)?;
    let r = eval_with(&spec, &a.method, &ctx.prec, &ctx.budget)?;
    let mut report = Report::new("eval");
    report.params = vec![("spec", text(spec.to_string())), ("method", text(a.method.as_str()))];
    report.result = ctx.eval_fields(&r);
    report.result.push(("method", text(r.method.as_str())));
    report.result.push(("terms_used", text(r.terms_used.to_string())));
    Ok(report)
}

fn linear_params(kind: SumKind, variant: LinearVariant, a: &LinearArgs) -> Vec<(&'static str, Value)> {
    vec![
        ("kind", text(kind.to_string())),
        ("variant", text(variant.name())),
        ("p", text(a.p.to_string())),
        ("q", text(a.q.to_string())),
    ]
}

fn closed(ctx: &Context, a: &LinearArgs) -> Result<Report> {
    let kind: SumKind = a.kind.parse()?;
    let variant: LinearVariant = a.variant.parse()?;
    let outcome = linear_closed(kind, a.p, a.q, variant)?;
    let r = outcome.expr().eval(&ctx.prec)?;
    let mut report = Report::new("closed");
    report.params = linear_params(kind, variant, a);
    report.result = ctx.eval_fields(&r);
    report.result.push(("expression", text(outcome.expr().to_string())));
    report.result.push(("outcome", text(outcome.label())));
    Ok(report)
}

fn crosscheck(ctx: &Context, a: &LinearArgs) -> Result<Report> {
    let kind: SumKind = a.kind.parse()?;
    let variant: LinearVariant = a.variant.parse()?;
    let r = corollary_crosscheck(kind, variant, a.p, a.q, &ctx.prec, &ctx.budget)?;
    let mut report = Report::new("crosscheck");
    report.params = linear_params(kind, variant, a);
    // A vanishing identity has no direct sum; its value is the closed form itself.
    let shown = r.direct.as_ref().unwrap_or(&r.closed);
    report.result = ctx.eval_fields(shown);
    report.result.push(("closed", ctx.value(&r.closed.value)));
    report.result.push(("difference", ctx.bound(&r.difference)));
    report.result.push(("tolerance", text(format!("{:e}", r.tolerance))));
    report.result.push(("expression", text(r.outcome.expr().to_string())));
    report.result.push(("outcome", text(r.outcome.label())));
    report.pass = Some(r.pass);
    Ok(report)
}

fn sequence(name: &str) -> Result<SequenceId> {
    name.parse()
}

fn theorem(ctx: &Context, a: &TheoremArgs) -> Result<Report> {
    let inst = match a.m {
        Some(m) => TheoremInstance::quadratic(
            &a.thm,
            a.p,
            m,
            a.q,
            sequence(&a.a)?,
            sequence(&a.b)?,
            sequence(&a.c)?,
        )?,
        None => TheoremInstance::linear(&a.thm, a.p, a.q, sequence(&a.a)?, sequence(&a.b)?)?,
    };
    let r = verify_theorem(&inst, &ctx.prec, &ctx.budget)?;
    let mut report = Report::new("verify-theorem");
    report.params = vec![("instance", text(r.instance.as_str()))];
    report.result = vec![
        ("value", ctx.bound(&r.residual.value)),
        ("error_bound", ctx.bound(&r.residual.error_bound)),
        ("tolerance", text(format!("{:e}", r.tolerance))),
        ("conclusive", Value::Bool(r.conclusive)),
    ];
    report.pass = Some(r.pass);
    Ok(report)
}

fn lemma(ctx: &Context, a: &LemmaArgs) -> Result<Report> {
    let id: LemmaId = a.lemma.parse()?;
    let seq = sequence(&a.seq)?;
    let bits = ctx.prec.bits();
    let s = match &a.s {
        Some(s) => parse_float(s, bits)?,
        None => sample_point(id, a.n, DEFAULT_OFFSET, bits),
    };
    let r = lemma_expansion_residual(id, &seq, a.order, a.n, &s, a.terms, &ctx.prec)?;
    let mut report = Report::new("lemma-check");
    report.params = vec![
        ("lemma", text(id.name())),
        ("seq", text(seq.name())),
        ("order", text(a.order.to_string())),
        ("n", text(a.n.to_string())),
        ("s", ctx.value(&s)),
        ("terms", text(a.terms.to_string())),
    ];
    report.result = vec![
        ("value", ctx.bound(&r.residual)),
        ("error_bound", ctx.bound(&r.bound)),
        ("center", ctx.value(&r.center)),
        ("radius", ctx.value(&r.radius)),
    ];
    report.pass = Some(r.pass);
    Ok(report)
}

fn table(ctx: &Context, a: &TableArgs) -> Result<Report> {
    if a.max_weight < 2 {
        return Err(Error::InvalidParameter(format!(
            "--max-weight must be at least 2, got {}",
            a.max_weight
        )));
    }
    let mut rows = Vec::new();
    for (kind, variant, p, q) in determined_cases(a.max_weight) {
        let outcome = linear_closed(kind, p, q, variant)?;
        let r = outcome.expr().eval(&ctx.prec)?;
        rows.push(vec![
            text(kind.to_string()),
            text(variant.name()),
            text(p.to_string()),
            text(q.to_string()),
            text((p + q).to_string()),
            text(outcome.expr().to_string()),
            ctx.value(&r.value),
        ]);
    }
    let mut report = Report::new("table");
    report.params = vec![("max_weight", text(a.max_weight.to_string()))];
    report.result = vec![("count", text(rows.len().to_string()))];
    report.table = Some(Table {
        columns: &["family", "variant", "p", "q", "weight", "expression", "value"],
        rows,
    });
    Ok(report)
}
