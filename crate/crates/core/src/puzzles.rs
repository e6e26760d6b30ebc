//! Integer partitions and multiplicative puzzles: vectors `(2l₁, …, 2lₖ)`
//! with `∏ 2lᵣ = a`, stored as exponents summing to 4.5.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::constants::A_EXPONENT;
use crate::error::{LabError, Result};
use crate::prime::remainder_integral;
use crate::verification::{FormulaId, Lab, Params, RatioReport};

/// Largest `k` accepted by [`partitions`].
pub const MAX_ENUMERATED: usize = 100;
/// Largest `k` accepted by [`partition_count`].
pub const MAX_COUNTED: usize = 10_000;

/// Tolerance on `Σ exponents − 4.5` for a stored vector.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// A quoted value of `p(200)` whose second digit group is wrong; reported
/// next to the computed value whenever `p(200)` is printed.
pub const QUOTED_P200: u64 = 3_372_999_029_388;

/// Parts in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join("+"))
    }
}

/// Lexicographic enumeration of partitions, starting from `1+1+…+1`.
#[derive(Debug, Clone)]
pub struct Partitions {
    next: Option<Vec<usize>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        // Bump the rightmost part that can grow while staying non-increasing,
        // paying with one unit from the tail, and refill the tail with ones.
        let mut suffix = 0;
        for i in (0..cur.len()).rev() {
            if suffix >= 1 && (i == 0 || cur[i] < cur[i - 1]) {
                let mut succ = cur[..i].to_vec();
                succ.push(cur[i] + 1);
                succ.extend(std::iter::repeat_n(1, suffix - 1));
                self.next = Some(succ);
                break;
            }
            suffix += cur[i];
        }
        Some(Partition { parts: cur })
    }
}

/// All partitions of `k` in lexicographic order of their part sequences,
/// e.g. `1+1+1+1, 2+1+1, 2+2, 3+1, 4`.
pub fn partitions(k: usize) -> Result<Partitions> {
    if !(1..=MAX_ENUMERATED).contains(&k) {
        return Err(LabError::invalid(format!("partitions need 1 <= k <= {MAX_ENUMERATED}, got {k}")));
    }
    Ok(Partitions { next: Some(vec![1; k]) })
}

/// `p(k)` by Euler's pentagonal recurrence in exact arithmetic.
pub fn partition_count(k: usize) -> Result<BigUint> {
    if !(1..=MAX_COUNTED).contains(&k) {
        return Err(LabError::invalid(format!("partition_count needs 1 <= k <= {MAX_COUNTED}, got {k}")));
    }
    let mut p: Vec<BigUint> = Vec::with_capacity(k + 1);
    p.push(BigUint::from(1u32));
    for n in 1..=k {
        let (mut plus, mut minus) = (BigUint::zero(), BigUint::zero());
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > n {
                break;
            }
            let acc = if j % 2 == 1 { &mut plus } else { &mut minus };
            *acc += &p[n - g1];
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= n {
                *acc += &p[n - g2];
            }
        }
        p.push(plus - minus);
    }
    Ok(p.swap_remove(k))
}

/// `p(200)` with the quoted-value discrepancy spelled out.
pub fn p200_note() -> String {
    let p = partition_count(200).expect("200 is in range");
    format!(
        "p(200) = {p} (computed); the quoted value {QUOTED_P200} differs in the second digit group"
    )
}

/// A solution of `∏ 2lᵣ = a` stored by exponents `2lᵣ = e^{xᵣ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PuzzleVector {
    exponents: Vec<f64>,
}

impl PuzzleVector {
    pub fn new(exponents: Vec<f64>) -> Result<Self> {
        if exponents.len() < 2 {
            return Err(LabError::invalid(format!("a puzzle vector needs k >= 2 entries, got {}", exponents.len())));
        }
        if exponents.iter().any(|x| !x.is_finite()) {
            return Err(LabError::invalid("puzzle exponents must be finite"));
        }
        let sum: f64 = exponents.iter().sum();
        if (sum - A_EXPONENT).abs() > SUM_TOLERANCE {
            return Err(LabError::invalid(format!("exponents sum to {sum}, not {A_EXPONENT}")));
        }
        Ok(PuzzleVector { exponents })
    }

    /// Fills the single `None` slot so the exponents sum to 4.5.
    pub fn complete(slots: &[Option<f64>]) -> Result<Self> {
        let free = slots.iter().filter(|s| s.is_none()).count();
        if free != 1 {
            return Err(LabError::invalid(format!("exactly one free component is required, got {free}")));
        }
        let known: f64 = slots.iter().flatten().sum();
        PuzzleVector::new(slots.iter().map(|s| s.unwrap_or(A_EXPONENT - known)).collect())
    }

    /// Accepts exponents whose sum is within `tol` of 4.5 and moves the
    /// residual onto the largest entry.
    pub fn absorb_residual(mut exponents: Vec<f64>, tol: f64) -> Result<Self> {
        let sum: f64 = exponents.iter().sum();
        if !((sum - A_EXPONENT).abs() <= tol) {
            return Err(LabError::invalid(format!(
                "exponents sum to {sum}, not {A_EXPONENT} (tolerance {tol:e})"
            )));
        }
        if let Some(i) = (0..exponents.len()).max_by(|&i, &j| exponents[i].total_cmp(&exponents[j])) {
            exponents[i] -= sum - A_EXPONENT;
        }
        PuzzleVector::new(exponents)
    }

    pub fn k(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    /// `2lᵣ = e^{xᵣ}`.
    pub fn factors(&self) -> Vec<f64> {
        self.exponents.iter().map(|x| x.exp()).collect()
    }

    /// Built-in vector `s` (1-based) when `s` is given, otherwise the
    /// exponents `e1, e2, …`.
    pub(crate) fn from_params(p: &Params) -> Result<Self> {
        if let Some(s) = p.get("s") {
            let vectors = builtin_vectors_k4();
            if s.fract() != 0.0 || !(1.0..=vectors.len() as f64).contains(&s) {
                return Err(LabError::invalid(format!("built-in vector s must be 1..={}, got {s}", vectors.len())));
            }
            return Ok(vectors[s as usize - 1].clone());
        }
        let exps: Vec<f64> = (1..).map_while(|i| p.get(&format!("e{i}"))).collect();
        if exps.is_empty() {
            return Ok(builtin_vectors_k4().swap_remove(0));
        }
        PuzzleVector::new(exps)
    }
}

/// The five solutions for `k = 4`, one per partition of 4 in the order
/// `1+1+1+1, 2+1+1, 2+2, 3+1, 4`.
pub fn builtin_vectors_k4() -> Vec<PuzzleVector> {
    [
        [0.0, 1.0, 1.5, 2.0],
        [0.25, 0.25, 1.0, 3.0],
        [0.25, 0.25, 2.0, 2.0],
        [1.5, 1.5, 1.5, 0.0],
        [1.125, 1.125, 1.125, 1.125],
    ]
    .iter()
    .map(|e| PuzzleVector { exponents: e.to_vec() })
    .collect()
}

/// Completes `k − 1` given factors `2l₂ … 2lₖ` with `2l₁ = a/∏ 2lᵣ`.
pub fn solve_free_component(partial: &[f64]) -> Result<PuzzleVector> {
    if partial.is_empty() {
        return Err(LabError::invalid("at least one given factor is required"));
    }
    if let Some(f) = partial.iter().find(|&&f| !(f > 0.0) || !f.is_finite()) {
        return Err(LabError::invalid(format!("factors must be positive and finite, got {f}")));
    }
    let mut slots = vec![None];
    slots.extend(partial.iter().map(|f| Some(f.ln())));
    PuzzleVector::complete(&slots)
}

/// `∫_2^{N₃ᵏ(lnᵏT)} {−P}` against `∏ᵣ ∫_{[T]¹}^{[T+2lᵣ]¹} |ζ|²`.
pub fn evaluate_puzzle(lab: &Lab, t: f64, v: &PuzzleVector) -> Result<RatioReport> {
    let start = std::time::Instant::now();
    let k = v.k();
    let n3 = lab.n1(t.ln().powi(k as i32))?;
    let lhs = remainder_integral(lab.store(), 2.0, n3)?;
    let mut rhs = 1.0;
    for f in v.factors() {
        rhs *= lab.shifted_integral(t, f)?;
    }
    let mut params = Params::new().with("T", t).with("k", k as f64);
    for (i, e) in v.exponents().iter().enumerate() {
        params.set(&format!("e{}", i + 1), *e);
    }
    RatioReport::new(FormulaId::E6_14, params, lhs, rhs, start.elapsed())
}

/// `{∫_{[T]¹}^{[T+e^x]¹} |ζ|²}^m`, the repeated-factor form.
pub fn power_form(lab: &Lab, t: f64, exponent: f64, m: u32) -> Result<f64> {
    Ok(lab.shifted_integral(t, exponent.exp())?.powi(m as i32))
}
