//! Generalized Richardson extrapolation for series whose tails expand in
//! `(log N)^i / N^k`.
//!
//! Summands built from harmonic-type numbers behave like
//! `P(log n) / n^q + (-1)^n Q(log n) / n^q` with full asymptotic expansions in `1/n`.
//! Sampling partial sums only at even `N` folds the oscillating part into the
//! smooth one, so
//!
//! ```text
//! S_N = S + sum_{k >= k0} sum_{i <= r} c_{k,i} (log N)^i N^-k
//! ```
//!
//! and `S` is recovered by solving for the leading `K` orders exactly. Orders are
//! raised two at a time; the reported bound is ten times the change between the
//! last two orders.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{format_float, Budget, EvalResult};

/// Leading tail power `k0` and the highest power of `log N` in the tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailShape {
    pub leading_power: u32,
    pub log_degree: u32,
}

impl TailShape {
    pub fn new(leading_power: u32, log_degree: u32) -> Self {
        TailShape {
            leading_power: leading_power.max(1),
            log_degree,
        }
    }
}

const FIRST_ORDER: u32 = 4;
const EXTRA_BITS: u32 = 160;
pub const SAFETY_FACTOR: u32 = 10;

struct Nodes {
    base: u64,
    step: u64,
    count: usize,
}

impl Nodes {
    fn for_order(order: u32, shape: TailShape) -> Nodes {
        let count = 1 + order as usize * (shape.log_degree as usize + 1);
        let base = ((34 * order as u64).max(40) + 1) & !1;
        let step = (order as u64).saturating_sub(2).max(2);
        Nodes { base, step, count }
    }

    fn at(&self, i: usize) -> u64 {
        self.base + 2 * self.step * i as u64
    }

    fn last(&self) -> u64 {
        self.at(self.count - 1)
    }
}

/// Incrementally grown partial sums `S_0 = 0, S_1, ...`.
pub struct PartialSums<F> {
    term: F,
    sums: Vec<Float>,
    bits: u32,
}

impl<F> PartialSums<F>
where
    F: FnMut(u64) -> Result<Float>,
{
    pub fn new(bits: u32, term: F) -> Self {
        PartialSums {
            term,
            sums: vec![Float::new(bits)],
            bits,
        }
    }

    pub fn get(&mut self, n: u64) -> Result<&Float> {
        while (self.sums.len() as u64) <= n {
            let k = self.sums.len() as u64;
            let t = (self.term)(k)?;
            let next = Float::with_val(self.bits, self.sums.last().unwrap() + &t);
            self.sums.push(next);
        }
        Ok(&self.sums[n as usize])
    }

    pub fn len(&self) -> u64 {
        self.sums.len() as u64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.sums.len() <= 1
    }
}

/// Precision at which `term` should produce its values.
pub fn working_bits(bits: u32) -> u32 {
    bits + EXTRA_BITS
}

/// The most accurate estimate found and whether it met the target.
#[derive(Debug, Clone)]
pub struct Extrapolation {
    pub result: EvalResult,
    pub reached: bool,
}

/// Sum `sum_{n>=1} term(n)` to absolute accuracy `target`.
pub fn extrapolate_series<F>(
    term: F,
    shape: TailShape,
    bits: u32,
    budget: &Budget,
    target: &Float,
) -> Result<EvalResult>
where
    F: FnMut(u64) -> Result<Float>,
{
    let best = extrapolate_best(term, shape, bits, budget, target)?;
    if best.reached {
        return Ok(best.result);
    }
    let r = best.result;
    Err(Error::BudgetExhausted(format!(
        "best estimate {} with bound {} ({}, {} terms); target {}",
        format_float(&r.value, 25),
        format_float(&r.error_bound, 3),
        r.method,
        r.terms_used,
        format_float(target, 3)
    )))
}

/// Like `extrapolate_series`, but a missed target still returns the best estimate.
pub fn extrapolate_best<F>(
    term: F,
    shape: TailShape,
    bits: u32,
    budget: &Budget,
    target: &Float,
) -> Result<Extrapolation>
where
    F: FnMut(u64) -> Result<Float>,
{
    let wp = working_bits(bits);
    let mut sums = PartialSums::new(wp, term);
    let mut previous: Option<Float> = None;
    let mut best: Option<(Float, Float, u32)> = None;
    let max_order = budget.extrapolation_depth.max(FIRST_ORDER + 2);
    let mut order = FIRST_ORDER;
    while order <= max_order {
        let nodes = Nodes::for_order(order, shape);
        if nodes.last() > budget.max_terms {
            break;
        }
        let estimate = solve_level(&mut sums, &nodes, shape, order, wp)?;
        if let Some(prev) = previous.take() {
            let mut err = Float::with_val(wp, &estimate - &prev).abs();
            err *= SAFETY_FACTOR;
            if best.as_ref().is_none_or(|(_, e, _)| err < *e) {
                best = Some((estimate.clone(), err.clone(), order));
            }
            if err <= *target {
                break;
            }
        }
        previous = Some(estimate);
        order += 2;
    }
    let Some((value, err, order)) = best else {
        return Err(Error::BudgetExhausted(format!(
            "max_terms {} too small for extrapolation",
            budget.max_terms
        )));
    };
    let value = Float::with_val(bits, &value);
    let err = Float::with_val(bits, &err) + crate::precision::rounding_bound(&value);
    let reached = err <= *target;
    Ok(Extrapolation {
        result: EvalResult::new(
            value,
            err,
            format!("richardson-log(order={order})"),
            sums.len(),
        ),
        reached,
    })
}

fn solve_level<F>(
    sums: &mut PartialSums<F>,
    nodes: &Nodes,
    shape: TailShape,
    order: u32,
    wp: u32,
) -> Result<Float>
where
    F: FnMut(u64) -> Result<Float>,
{
    let base = Float::with_val(wp, nodes.base);
    let mut matrix = Vec::with_capacity(nodes.count);
    let mut rhs = Vec::with_capacity(nodes.count);
    for i in 0..nodes.count {
        let n = nodes.at(i);
        rhs.push(sums.get(n)?.clone());
        let log_n = Float::with_val(wp, n).ln();
        let ratio = Float::with_val(wp, &base / n);
        let mut row = Vec::with_capacity(nodes.count);
        row.push(Float::with_val(wp, 1));
        let mut scale = Float::with_val(wp, 1);
        for _ in 0..shape.leading_power {
            scale *= &ratio;
        }
        for _ in 0..order {
            let mut entry = scale.clone();
            for _ in 0..=shape.log_degree {
                row.push(entry.clone());
                entry *= &log_n;
            }
            scale *= &ratio;
        }
        matrix.push(row);
    }
    let solution = solve_linear(matrix, rhs)
        .ok_or_else(|| Error::BudgetExhausted("singular extrapolation system".into()))?;
    Ok(solution.into_iter().next().unwrap())
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve_linear(mut a: Vec<Vec<Float>>, mut b: Vec<Float>) -> Option<Vec<Float>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col]
                .clone()
                .abs()
                .partial_cmp(&a[j][col].clone().abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[pivot][col].is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let (upper, lower) = a.split_at_mut(col + 1);
        let prow = &upper[col];
        let pb = b[col].clone();
        for (offset, row) in lower.iter_mut().enumerate() {
            let r = col + 1 + offset;
            if row[col].is_zero() {
                continue;
            }
            let factor = Float::with_val(row[col].prec(), &row[col] / &prow[col]);
            for k in col..n {
                let delta = Float::with_val(row[k].prec(), &factor * &prow[k]);
                row[k] -= delta;
            }
            let delta = Float::with_val(b[r].prec(), &factor * &pb);
            b[r] -= delta;
        }
    }
    let mut x: Vec<Float> = b.iter().map(|v| Float::new(v.prec())).collect();
    for i in (0..n).rev() {
        let mut acc = b[i].clone();
        for k in i + 1..n {
            acc -= Float::with_val(acc.prec(), &a[i][k] * &x[k]);
        }
        x[i] = Float::with_val(acc.prec(), &acc / &a[i][i]);
    }
    Some(x)
}
