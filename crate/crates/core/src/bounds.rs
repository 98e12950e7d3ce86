//! Closed-form upper bounds on the protected-state deviation.
//!
//! For total time `τ`, `M` equally spaced measurements, Hamiltonian scales
//! `J₀ = 2‖H₀‖`, `J₁ = 2‖H_SB‖`, `Q` non-identity stabilizer elements of which
//! `q` anticommute with any detectable error, and `ζ = sech ε`:
//!
//! ```text
//! β  = e^{τJ₀/M} (Q e^{−τJ₁/M} + e^{τJ₁Q/M})/(Q+1) − 1
//! γ± = ½(1+β+(1+Qβ)ζ^q) ± ½√((1+β−(1+Qβ)ζ^q)² + 4Qβ²ζ^q)
//! A± = [Qβζ^q(γ±+β) + (1+β)(1+β−γ∓)]/(γ± − γ∓)
//! B  = A₊γ₊^{M−1} + A₋γ₋^{M−1} − e^{J₀τ}
//! ```
//!
//! The generator protocol uses the same expressions with `q = 1`. At `ζ = 0`
//! both collapse to `e^{J₀τ}[((Q e^{−τJ₁/M} + e^{τJ₁Q/M})/(Q+1))^M − 1]`.
//!
//! Everything is evaluated through `exp_m1`/`ln_1p` rearrangements because
//! `β → 0` as `M` grows and the final subtraction of `e^{J₀τ}` cancels almost
//! all significant digits of the naive formula.

use num_traits::Float;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Root gap below which the two-root form is replaced by its confluent limit.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Negative results no further below zero than this are reported as zero.
pub const NEGATIVE_ZERO_SLACK: f64 = 1e-12;

fn cst<T: Float>(x: f64) -> T {
    T::from(x).expect("f64 constant fits the scalar type")
}

fn count<T: Float>(k: usize) -> T {
    T::from(k).expect("integer fits the scalar type")
}

/// Parameters of a single bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs<T = f64> {
    pub j0: T,
    pub j1: T,
    pub tau: T,
    pub m: usize,
    /// `Q`, the number of non-identity stabilizer elements.
    pub q_cap: usize,
    /// `q`, the number of measured elements anticommuting with an error.
    pub q_small: usize,
    pub zeta: T,
}

impl<T: Float> BoundInputs<T> {
    /// Group protocol over `qbar` generators: `Q = 2^qbar − 1`, `q = (Q+1)/2`.
    pub fn group(j0: T, j1: T, tau: T, m: usize, qbar: usize, zeta: T) -> Self {
        let q_cap = (1usize << qbar) - 1;
        BoundInputs {
            j0,
            j1,
            tau,
            m,
            q_cap,
            q_small: q_cap.div_ceil(2),
            zeta,
        }
    }

    /// Generator protocol: same `Q`, `q = 1`.
    pub fn generators(j0: T, j1: T, tau: T, m: usize, qbar: usize, zeta: T) -> Self {
        BoundInputs {
            q_small: 1,
            ..Self::group(j0, j1, tau, m, qbar, zeta)
        }
    }

    /// `λ = J₁/J₀`, undefined for `J₀ = 0`.
    pub fn lambda(&self) -> Option<T> {
        (self.j0 > T::zero()).then(|| self.j1 / self.j0)
    }

    pub fn validate(&self) -> Result<()> {
        let finite_nonneg = |x: T| x.is_finite() && x >= T::zero();
        if !finite_nonneg(self.j0) || !finite_nonneg(self.j1) || !finite_nonneg(self.tau) {
            return Err(Error::InvalidArgument(
                "J0, J1 and tau must be finite and non-negative".into(),
            ));
        }
        if self.m == 0 || self.m > i32::MAX as usize {
            return Err(Error::InvalidArgument(format!("M = {} out of range", self.m)));
        }
        if self.q_cap == 0 || self.q_small == 0 || self.q_small > self.q_cap.max(1) {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= q <= Q, got q = {}, Q = {}",
                self.q_small, self.q_cap
            )));
        }
        if !(self.zeta >= T::zero() && self.zeta <= T::one()) {
            return Err(Error::InvalidArgument("zeta must lie in [0, 1]".into()));
        }
        Ok(())
    }

    fn zeta_q(&self) -> T {
        self.zeta.powi(self.q_small as i32)
    }

    /// `(Q e^{−b} + e^{bQ})/(Q+1) − 1` with `b = τJ₁/M`.
    fn bracket_m1(&self) -> Result<T> {
        let q = count::<T>(self.q_cap);
        let b = self.tau * self.j1 / count(self.m);
        let c = (q * (-b).exp_m1() + (b * q).exp_m1()) / (q + T::one());
        if !c.is_finite() {
            return Err(Error::Range(format!("coupling bracket overflows at tau*J1/M = {:?}", b.to_f64())));
        }
        Ok(c)
    }
}

/// Intermediate quantities and the three bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult<T = f64> {
    pub beta: T,
    pub gamma_plus: T,
    pub gamma_minus: T,
    /// `None` when the roots are degenerate and the confluent limit was used.
    pub a_plus: Option<T>,
    pub a_minus: Option<T>,
    pub b_exact: T,
    /// `None` when `ζ^q = 1`, where the first-order coefficient diverges.
    pub b_first_order: Option<T>,
    pub b_strong: T,
}

/// `β`.
pub fn beta<T: Float>(inputs: &BoundInputs<T>) -> Result<T> {
    inputs.validate()?;
    let a = inputs.tau * inputs.j0 / count(inputs.m);
    let c = inputs.bracket_m1()?;
    let beta = a.exp_m1() + a.exp() * c;
    if !beta.is_finite() {
        return Err(Error::Range(format!("beta overflows at tau*J0/M = {:?}", a.to_f64())));
    }
    Ok(beta)
}

/// Shared pieces of the root computation.
#[derive(Debug, Clone, Copy)]
struct Roots<T> {
    /// `1 + β`
    u: T,
    /// `(1 + Qβ)ζ^q`
    w: T,
    /// `u − w`
    s: T,
    /// `γ₊ − u ≥ 0`
    delta: T,
}

impl<T: Float> Roots<T> {
    fn new(beta: T, zeta_q: T, q_cap: usize) -> Result<Self> {
        let q = count::<T>(q_cap);
        let u = T::one() + beta;
        let w = (T::one() + q * beta) * zeta_q;
        let s = u - w;
        let d = cst::<T>(4.0) * q * beta * beta * zeta_q;
        let disc = s * s + d;
        if disc < cst(-1e-14) {
            return Err(Error::Numerical(format!("negative discriminant {:?}", disc.to_f64())));
        }
        let root = disc.max(T::zero()).sqrt();
        if !root.is_finite() {
            return Err(Error::Range("root discriminant overflows".into()));
        }
        // Pick the branch free of cancellation.
        let delta = if s > T::zero() {
            (d / cst(2.0)) / (s + root)
        } else {
            (root - s) / cst(2.0)
        };
        Ok(Roots { u, w, s, delta })
    }

    fn plus(&self) -> T {
        self.u + self.delta
    }

    fn minus(&self) -> T {
        self.w - self.delta
    }

    fn gap(&self) -> T {
        self.s + cst::<T>(2.0) * self.delta
    }
}

/// `(γ₊, γ₋)`, with `γ₊ ≥ γ₋`.
pub fn gamma_pair<T: Float>(beta: T, zeta: T, q: usize, q_cap: usize) -> Result<(T, T)> {
    let r = Roots::new(beta, zeta.powi(q as i32), q_cap)?;
    Ok((r.plus(), r.minus()))
}

/// `(A₊, A₋)`. Fails with [`Error::DegenerateRoots`] when the root gap is below
/// [`DEGENERACY_THRESHOLD`]; [`bound_exact`] then switches to the confluent limit.
pub fn coefficient_pair<T: Float>(beta: T, zeta: T, q: usize, q_cap: usize) -> Result<(T, T)> {
    let zq = zeta.powi(q as i32);
    let r = Roots::new(beta, zq, q_cap)?;
    let (ap_offset, am) = coefficient_offsets(&r, beta, zq, q_cap)?;
    Ok((r.u + ap_offset, am))
}

/// `(A₊ − (1 + β), A₋)`; both vanish exactly at `ζ = 0`.
fn coefficient_offsets<T: Float>(r: &Roots<T>, beta: T, zeta_q: T, q_cap: usize) -> Result<(T, T)> {
    let gap = r.gap();
    if gap < cst(DEGENERACY_THRESHOLD) {
        return Err(Error::DegenerateRoots(gap.to_f64().unwrap_or(f64::NAN)));
    }
    let qbz = count::<T>(q_cap) * beta * zeta_q;
    let ud = r.u * r.delta;
    let ap_offset = (qbz * (r.plus() + beta) - ud) / gap;
    let am = (ud - qbz * (r.minus() + beta)) / gap;
    Ok((ap_offset, am))
}

/// Confluent limit of `A₊γ₊^m + A₋γ₋^m` as the roots merge.
fn confluent_sum<T: Float>(r: &Roots<T>, beta: T, zeta_q: T, q_cap: usize, m: usize) -> T {
    let qbz = count::<T>(q_cap) * beta * zeta_q;
    if m == 0 {
        return qbz + r.u;
    }
    let g = (r.plus() + r.minus()) / cst(2.0);
    let prod = r.plus() * r.minus();
    // (γ₊^k − γ₋^k)/(γ₊ − γ₋) → k ḡ^{k−1}
    let s = |k: usize| -> T {
        if k == 0 {
            T::zero()
        } else {
            count::<T>(k) * g.powi(k as i32 - 1)
        }
    };
    qbz * s(m + 1) + (qbz * beta + r.u * r.u) * s(m) - r.u * prod * s(m - 1)
}

fn clamp_negative_zero<T: Float>(b: T) -> Result<T> {
    if b >= T::zero() {
        Ok(b)
    } else if b >= -cst::<T>(NEGATIVE_ZERO_SLACK) {
        Ok(T::zero())
    } else {
        Err(Error::Numerical(format!("bound evaluated to {:?}", b.to_f64())))
    }
}

/// `B`, the full bound.
pub fn bound_exact<T: Float>(inputs: &BoundInputs<T>) -> Result<T> {
    evaluate(inputs).map(|r| r.b_exact)
}

fn exact_parts<T: Float>(inputs: &BoundInputs<T>) -> Result<(T, Roots<T>, Option<(T, T)>, T)> {
    inputs.validate()?;
    let a = inputs.tau * inputs.j0 / count(inputs.m);
    let c = inputs.bracket_m1()?;
    let beta = a.exp_m1() + a.exp() * c;
    if !beta.is_finite() {
        return Err(Error::Range(format!("beta overflows at tau*J0/M = {:?}", a.to_f64())));
    }
    let zq = inputs.zeta_q();
    let r = Roots::new(beta, zq, inputs.q_cap)?;
    let j0tau = inputs.j0 * inputs.tau;
    let m = inputs.m - 1;
    let offsets = match coefficient_offsets(&r, beta, zq, inputs.q_cap) {
        Ok(o) => Some(o),
        Err(Error::DegenerateRoots(_)) => None,
        Err(e) => return Err(e),
    };
    let b = match offsets {
        Some((ap_offset, am)) => {
            let ap_rel = ap_offset / r.u;
            let leading = if ap_rel > -T::one() {
                // With 1 + β = e^{τJ₀/M}(1 + c), the factor e^{J₀τ} cancels exactly:
                // A₊γ₊^m − e^{J₀τ} = e^{J₀τ}·expm1(M ln(1+c) + ln(A₊/u) + m ln(γ₊/u)).
                let log = count::<T>(inputs.m) * c.ln_1p()
                    + ap_rel.ln_1p()
                    + count::<T>(m) * (r.delta / r.u).ln_1p();
                j0tau.exp() * log.exp_m1()
            } else {
                (r.u + ap_offset) * r.plus().powi(m as i32) - j0tau.exp()
            };
            leading + am * r.minus().powi(m as i32)
        }
        None => confluent_sum(&r, beta, zq, inputs.q_cap, m) - j0tau.exp(),
    };
    if !b.is_finite() {
        return Err(Error::Range("bound overflows".into()));
    }
    let coeffs = offsets.map(|(ap_offset, am)| (r.u + ap_offset, am));
    Ok((beta, r, coeffs, clamp_negative_zero(b)?))
}

/// Leading large-`M` behaviour of [`bound_exact`]:
/// `Q e^{τJ₀}[τ²J₁²/2 + (τJ₀ + τ²J₀²) ζ^q/(1 − ζ^q)] / M`.
///
/// The coefficient `Q` (rather than `Q/2`) is the one that makes the remainder
/// against [`bound_exact`] decay as `1/M²`; it also matches the large-`M`
/// expansion of [`bound_strong`] at `ζ = 0`.
pub fn bound_first_order<T: Float>(inputs: &BoundInputs<T>) -> Result<T> {
    inputs.validate()?;
    let zq = inputs.zeta_q();
    if zq >= T::one() {
        return Err(Error::DivergentFirstOrder);
    }
    let t = inputs.tau;
    let half = cst::<T>(0.5);
    let coupling = half * t * t * inputs.j1 * inputs.j1;
    let drift = (t * inputs.j0 + t * t * inputs.j0 * inputs.j0) * zq / (T::one() - zq);
    let value = count::<T>(inputs.q_cap) * (t * inputs.j0).exp() * (coupling + drift) / count(inputs.m);
    if !value.is_finite() {
        return Err(Error::Range("first-order bound overflows".into()));
    }
    Ok(value)
}

/// Strong-measurement limit `e^{J₀τ}[((Q e^{−τJ₁/M} + e^{τJ₁Q/M})/(Q+1))^M − 1]`;
/// independent of `ζ` and `q`.
pub fn bound_strong<T: Float>(inputs: &BoundInputs<T>) -> Result<T> {
    inputs.validate()?;
    let c = inputs.bracket_m1()?;
    let value = (inputs.j0 * inputs.tau).exp() * (count::<T>(inputs.m) * c.ln_1p()).exp_m1();
    if !value.is_finite() {
        return Err(Error::Range("strong bound overflows".into()));
    }
    clamp_negative_zero(value)
}

/// Evaluates every intermediate and all three bounds.
pub fn evaluate<T: Float>(inputs: &BoundInputs<T>) -> Result<BoundResult<T>> {
    let (beta, r, coeffs, b_exact) = exact_parts(inputs)?;
    let b_first_order = match bound_first_order(inputs) {
        Ok(v) => Some(v),
        Err(Error::DivergentFirstOrder) => None,
        Err(e) => return Err(e),
    };
    Ok(BoundResult {
        beta,
        gamma_plus: r.plus(),
        gamma_minus: r.minus(),
        a_plus: coeffs.map(|c| c.0),
        a_minus: coeffs.map(|c| c.1),
        b_exact,
        b_first_order,
        b_strong: bound_strong(inputs)?,
    })
}

/// Which bound surface a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    Generators,
    Group,
    Strong,
}

impl BoundVariant {
    pub const ALL: [BoundVariant; 3] = [BoundVariant::Generators, BoundVariant::Group, BoundVariant::Strong];

    pub fn name(self) -> &'static str {
        match self {
            BoundVariant::Generators => "generators",
            BoundVariant::Group => "group",
            BoundVariant::Strong => "strong",
        }
    }
}

/// Parameter grid for a bound sweep. Rows are produced for the Cartesian
/// product `m_values × lambdas × zetas`, in that nesting order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub j0tau: f64,
    pub qbar: usize,
    pub m_values: Vec<usize>,
    pub lambdas: Vec<f64>,
    pub zetas: Vec<f64>,
}

fn steps(start: f64, step: f64, count: usize) -> Vec<f64> {
    // Round to kill the accumulated representation error of `k * step`.
    (0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect()
}

impl SweepGrid {
    /// `J₀τ = 1`, `Q̄ = 4`, `ζ = 0.5`, `λ ∈ {0, 0.05, …, 1}`, `M ∈ {1, …, 60}`.
    pub fn left_panel() -> Self {
        SweepGrid {
            j0tau: 1.0,
            qbar: 4,
            m_values: (1..=60).collect(),
            lambdas: steps(0.0, 0.05, 21),
            zetas: vec![0.5],
        }
    }

    /// `J₀τ = 1`, `Q̄ = 4`, `λ = 0.1`, `ζ ∈ {0, 0.05, …, 0.95}`, `M ∈ {1, …, 60}`.
    pub fn right_panel() -> Self {
        SweepGrid {
            j0tau: 1.0,
            qbar: 4,
            m_values: (1..=60).collect(),
            lambdas: vec![0.1],
            zetas: steps(0.0, 0.05, 20),
        }
    }

    pub fn len(&self) -> usize {
        self.m_values.len() * self.lambdas.len() * self.zetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn points(&self) -> Vec<(usize, f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for &m in &self.m_values {
            for &lambda in &self.lambdas {
                for &zeta in &self.zetas {
                    out.push((m, lambda, zeta));
                }
            }
        }
        out
    }
}

/// All three bounds at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: usize,
    pub lambda: f64,
    pub zeta: f64,
    pub j0tau: f64,
    pub qbar: usize,
    pub generators: f64,
    pub group: f64,
    pub strong: f64,
}

/// One line of the long-format sweep CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub variant: BoundVariant,
    #[serde(rename = "M")]
    pub m: usize,
    pub lambda: f64,
    pub zeta: f64,
    #[serde(rename = "J0tau")]
    pub j0tau: f64,
    #[serde(rename = "Qbar")]
    pub qbar: usize,
    #[serde(rename = "B")]
    pub b: f64,
}

impl SweepRow {
    pub fn value(&self, variant: BoundVariant) -> f64 {
        match variant {
            BoundVariant::Generators => self.generators,
            BoundVariant::Group => self.group,
            BoundVariant::Strong => self.strong,
        }
    }

    /// Records in `generators, group, strong` order.
    pub fn records(&self) -> [SweepRecord; 3] {
        BoundVariant::ALL.map(|variant| SweepRecord {
            variant,
            m: self.m,
            lambda: self.lambda,
            zeta: self.zeta,
            j0tau: self.j0tau,
            qbar: self.qbar,
            b: self.value(variant),
        })
    }

    /// `generators ≥ group ≥ strong` within `slack`.
    pub fn ordered(&self, slack: f64) -> bool {
        self.generators >= self.group - slack && self.group >= self.strong - slack
    }
}

/// Evaluates the grid (in parallel, output in grid order) with `τ = 1`, `J₀ = J₀τ`
/// and `J₁ = λ J₀`.
pub fn sweep_bounds(grid: &SweepGrid) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("sweep grid is empty".into()));
    }
    if !(grid.j0tau.is_finite() && grid.j0tau >= 0.0) || grid.qbar == 0 || grid.qbar > 20 {
        return Err(Error::InvalidArgument(format!(
            "need J0tau >= 0 and 1 <= Qbar <= 20, got {} and {}",
            grid.j0tau, grid.qbar
        )));
    }
    grid.points()
        .into_par_iter()
        .map(|(m, lambda, zeta)| {
            let (j0, j1) = (grid.j0tau, lambda * grid.j0tau);
            let gen = BoundInputs::generators(j0, j1, 1.0, m, grid.qbar, zeta);
            let grp = BoundInputs::group(j0, j1, 1.0, m, grid.qbar, zeta);
            Ok(SweepRow {
                m,
                lambda,
                zeta,
                j0tau: grid.j0tau,
                qbar: grid.qbar,
                generators: bound_exact(&gen)?,
                group: bound_exact(&grp)?,
                strong: bound_strong(&grp)?,
            })
        })
        .collect()
}
