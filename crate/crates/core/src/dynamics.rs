//! Coherent states, the resolution of the identity, and heat kernels of
//! Hamiltonians diagonal in the ladder basis.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::integration::{inverse_factorials, measure_poly, pairing_integral, unit, IntegralNormalization};
use crate::multimode::{PGAlgebra, PGPolynomial, Symbol};
use crate::qarith::{CycloContext, Field};
use crate::report::Report;
use crate::scalar::max_abs_diff;
use crate::single_mode::{SingleModeRep, Which};
use crate::{ComplexMatrix, ExactMatrix};

/// Tolerance for algebraic identities evaluated in floating point.
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-12;

/// H = Σ h_n q^(n(1-n)/4) θ^n g^(-n/2) ∂^n.
#[derive(Clone, Debug)]
pub struct PGHamiltonian {
    ctx: Arc<CycloContext>,
    h: Vec<Complex64>,
    matrix: ComplexMatrix,
    energies: Vec<Complex64>,
}

impl PGHamiltonian {
    pub fn new(ctx: &Arc<CycloContext>, h: &[f64]) -> Result<Self> {
        let h: Vec<_> = h.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self::with_complex(ctx, &h)
    }

    /// Complex coefficients are accepted so that non-hermitian operators can
    /// be built as controls.
    pub fn with_complex(ctx: &Arc<CycloContext>, h: &[Complex64]) -> Result<Self> {
        let p = ctx.p();
        if h.len() > p + 1 {
            return Err(Error::WrongLength {
                expected: p + 1,
                got: h.len(),
            });
        }
        let mut h = h.to_vec();
        h.resize(p + 1, Complex64::zero());
        let rep = SingleModeRep::new(ctx, None)?;
        let terms: Vec<ExactMatrix> = (0..=p as u32)
            .map(|n| {
                let k = n as i64;
                rep.theta
                    .pow(n)
                    .matmul(&rep.g_power_half(-k))
                    .matmul(&rep.partial.pow(n))
                    .scale(&ctx.q_quarter_power(k * (1 - k)))
            })
            .collect();
        let mut matrix = ComplexMatrix::zeros(p + 1);
        for (c, term) in h.iter().zip(&terms) {
            matrix = &matrix + &term.map(|z| ctx.embed(z)).scale(c);
        }
        let energies = matrix.diagonal_entries();
        Ok(PGHamiltonian {
            ctx: ctx.clone(),
            h,
            matrix,
            energies,
        })
    }

    pub fn ctx(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn p(&self) -> usize {
        self.ctx.p()
    }

    pub fn h(&self) -> &[Complex64] {
        &self.h
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Diagonal entries E_0..E_p of H.
    pub fn energies(&self) -> &[Complex64] {
        &self.energies
    }

    /// (m)_q! Σ_(n<=m) h_n q^(n(n+1-2m)/4) / (m-n)_q!, the exponent of the
    /// short-time kernel.
    pub fn kernel_exponents(&self) -> Vec<Complex64> {
        let ctx = &self.ctx;
        (0..=self.p())
            .map(|m| {
                (0..=m).fold(Complex64::zero(), |acc, n| {
                    let (mi, ni) = (m as i64, n as i64);
                    let w = ctx.q_quarter_power(ni * (ni + 1 - 2 * mi)) * ctx.q_factorial(m)
                        / ctx.q_factorial(m - n);
                    acc + self.h[n] * ctx.embed(&w)
                })
            })
            .collect()
    }
}

/// Sign of i in the exponent of the short-time kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeSign {
    /// exp(-iΔ…).
    Minus,
    /// exp(+iΔ…), matching U(t) = exp(itH).
    Plus,
}

impl TimeSign {
    fn factor(self) -> f64 {
        match self {
            TimeSign::Minus => -1.0,
            TimeSign::Plus => 1.0,
        }
    }
}

/// How one time step is turned into kernel coefficients t_m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelRule {
    /// t_m = exp(±iΔ·exponent_m) with the displayed exponent.
    Displayed(TimeSign),
    /// ⟨θ|θ̄⟩ exp(iΔ ⟨θ|H|θ̄⟩/⟨θ|θ̄⟩) expanded in z = θθ̄.
    NormalSymbol,
}

/// t_0..t_p of ⟨θ_i|U(Δ)|θ̄_(i+1)⟩ = Σ_m t_m θ_i^m θ̄_(i+1)^m / (m)_q!.
pub fn step_kernel(ham: &PGHamiltonian, delta: f64, sign: TimeSign) -> Vec<Complex64> {
    let i = Complex64::new(0.0, sign.factor() * delta);
    ham.kernel_exponents().into_iter().map(|e| (i * e).exp()).collect()
}

/// Truncated product in C[z]/z^len.
fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    (0..n)
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}

fn series_div(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); a.len()];
    for k in 0..a.len() {
        let acc: Complex64 = (1..=k).map(|j| b[j] * out[k - j]).sum();
        out[k] = (a[k] - acc) / b[0];
    }
    out
}

fn series_exp(s: &[Complex64]) -> Vec<Complex64> {
    let n = s.len();
    let mut nilpotent = s.to_vec();
    nilpotent[0] = Complex64::zero();
    let mut out = vec![Complex64::zero(); n];
    out[0] = Complex64::new(1.0, 0.0);
    let mut power = out.clone();
    let mut fact = 1.0;
    for k in 1..n {
        power = series_mul(&power, &nilpotent);
        fact *= k as f64;
        for (o, v) in out.iter_mut().zip(&power) {
            *o += v / fact;
        }
    }
    let scale = s[0].exp();
    out.iter().map(|v| v * scale).collect()
}

/// The normal-symbol short-time kernel.
///
/// With z = θθ̄, θ^m θ̄^m = q^(-m(m-1)/2) z^m, so ⟨θ|θ̄⟩ = Σ A_m z^m and
/// ⟨θ|H|θ̄⟩ = Σ E_m A_m z^m with A_m = q^(-m(m-1)/2)/(m)_q!. The kernel is
/// A·exp(iΔ·(EA)/A) in C[z]/z^(p+1), read back as t_m = K_m / A_m. It is
/// exact when all E_m are equal and first order in Δ otherwise.
pub fn short_time_kernel(ham: &PGHamiltonian, delta: f64) -> Vec<Complex64> {
    let ctx = ham.ctx();
    let a: Vec<Complex64> = (0..=ham.p())
        .map(|m| {
            let m = m as i64;
            ctx.embed(&(ctx.q_pow(-m * (m - 1) / 2) / ctx.q_factorial(m as usize)))
        })
        .collect();
    let b: Vec<Complex64> = a.iter().zip(ham.energies()).map(|(x, e)| x * e).collect();
    let symbol = series_div(&b, &a);
    let i_delta = Complex64::new(0.0, delta);
    let scaled: Vec<_> = symbol.iter().map(|s| s * i_delta).collect();
    let k = series_mul(&a, &series_exp(&scaled));
    k.iter().zip(&a).map(|(k, a)| k / a).collect()
}

pub fn kernel(ham: &PGHamiltonian, delta: f64, rule: KernelRule) -> Vec<Complex64> {
    match rule {
        KernelRule::Displayed(sign) => step_kernel(ham, delta, sign),
        KernelRule::NormalSymbol => short_time_kernel(ham, delta),
    }
}

/// Composes `steps` kernels of duration t/steps. The pairing integral turns
/// the composition of Σ_m t_m θ^m θ̄^m/(m)_q! kernels into the per-level
/// product, so the result is t_m^steps.
pub fn discretized_propagator_with(ham: &PGHamiltonian, t: f64, steps: usize, rule: KernelRule) -> Result<Vec<Complex64>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let k = kernel(ham, t / steps as f64, rule);
    Ok(k.iter().map(|v| v.powu(steps as u32)).collect())
}

pub fn discretized_propagator(ham: &PGHamiltonian, t: f64, steps: usize) -> Result<Vec<Complex64>> {
    discretized_propagator_with(ham, t, steps, KernelRule::NormalSymbol)
}

/// The same composition carried out literally: modes 0..=steps carry θ_i,
/// θ̄_i, the interior modes 1..steps-1 are integrated against their
/// measures, and t_m is read off the coefficient of θ_0^m θ̄_steps^m.
pub fn compose_via_integral(kernel: &[Complex64], steps: usize, ctx: &Arc<CycloContext>) -> Result<Vec<Complex64>> {
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be at least 1".into()));
    }
    let p = ctx.p();
    let modes = steps + 1;
    let alg = PGAlgebra::embedded(ctx, modes);
    let inv: Vec<Complex64> = inverse_factorials(ctx).iter().map(|c| ctx.embed(c)).collect();
    let weight = ctx.embed(&IntegralNormalization::default_split(ctx).mode_weight(ctx));

    let mut factors: Vec<PGPolynomial<Complex64>> = Vec::new();
    for i in 1..steps {
        factors.push(measure_poly(&alg, i, &inv)?);
    }
    for i in 0..steps {
        let mut k = alg.zero();
        for m in 0..=p {
            let term = alg.mul(
                &alg.power_of(Symbol::theta(i), m as u32)?,
                &alg.power_of(Symbol::theta_bar(i + 1), m as u32)?,
            );
            k = k.add(&term.scale(&(kernel[m] * inv[m])));
        }
        factors.push(k);
    }
    let interior: Vec<usize> = (1..steps).collect();
    let reduced = alg.integrate_product(&factors, &interior, &weight, 1 << 20)?;
    Ok((0..=p)
        .map(|m| {
            let mut e = vec![0u32; 2 * modes];
            e[0] = m as u32;
            e[2 * steps + 1] = m as u32;
            reduced.coeff(&e) * ctx.embed(&ctx.q_factorial(m))
        })
        .collect())
}

/// e^(itE_m)
pub fn exact_propagator(ham: &PGHamiltonian, t: f64) -> Vec<Complex64> {
    ham.energies()
        .iter()
        .map(|e| (Complex64::new(0.0, t) * e).exp())
        .collect()
}

/// Max-entry error of the discretized propagator for each step count.
pub fn convergence_study(ham: &PGHamiltonian, t: f64, steps: &[usize]) -> Result<Vec<(usize, f64)>> {
    let exact = exact_propagator(ham, t);
    steps
        .iter()
        .map(|&n| Ok((n, max_abs_diff(&discretized_propagator(ham, t, n)?, &exact))))
        .collect()
}

/// H† from the conjugation rules θ† = g^(-1/2)∂, ∂† = θg^(-1/2),
/// (g^(1/2))† = g^(-1/2), applied term by term, compared with H; the
/// Gram adjoint is checked alongside as an independent route.
pub fn hermiticity_check(ham: &PGHamiltonian) -> Result<Report> {
    let ctx = ham.ctx();
    let rep = SingleModeRep::new(ctx, None)?;
    let theta_dag = rep.conjugate(Which::Theta)?;
    let partial_dag = rep.conjugate(Which::Partial)?;
    let mut dagger = ComplexMatrix::zeros(ham.p() + 1);
    for (n, c) in ham.h().iter().enumerate() {
        let k = n as i64;
        let exact = partial_dag
            .pow(n as u32)
            .matmul(&rep.g_power_half(k))
            .matmul(&theta_dag.pow(n as u32))
            .scale(&ctx.q_quarter_power(k * (1 - k)).conj());
        dagger = &dagger + &exact.map(|z| ctx.embed(z)).scale(&c.conj());
    }
    let rules = ham.matrix().max_abs_diff(&dagger);

    let gram: Vec<Complex64> = rep.gram()?.iter().map(|g| ctx.embed(g)).collect();
    let gram_adjoint = ComplexMatrix::from_entries(
        ham.p() + 1,
        ham.matrix()
            .entries()
            .map(|(i, j, v)| (j, i, v.conj() * gram[i] / gram[j]))
            .collect::<Vec<_>>(),
    );
    let gram_diff = ham.matrix().max_abs_diff(&gram_adjoint);

    let mut report = Report::new();
    report.push(
        "hermitian-by-rules",
        rules <= ALGEBRAIC_TOLERANCE,
        format!("max |H - H†| = {rules:e}"),
    );
    report.push(
        "hermitian-by-gram",
        gram_diff <= ALGEBRAIC_TOLERANCE,
        format!("max |H - G⁻¹H^HG| = {gram_diff:e}"),
    );
    Ok(report)
}

/// Σ_k θ^k |0⟩⟨0| ∂^k / (k)_q! = 1, directly and through the pairing
/// integral of |θ̄⟩⟨θ| against the measure.
pub fn resolution_of_identity(rep: &SingleModeRep) -> Result<Report> {
    let ctx = rep.ctx();
    let p = rep.p();
    let vacuum = ExactMatrix::from_entries(p + 1, [(0, 0, ctx.one())]);
    let ket = |k: usize| rep.theta.pow(k as u32).matmul(&vacuum);
    let bra = |k: usize| rep.partial.pow(k as u32);

    let mut direct = ExactMatrix::zeros(p + 1);
    for k in 0..=p {
        let term = ket(k).matmul(&bra(k)).scale(&ctx.q_factorial(k).inv());
        direct = &direct + &term;
    }

    let norm = IntegralNormalization::default_split(ctx);
    let mut via_integral = ExactMatrix::zeros(p + 1);
    for k in 0..=p {
        for j in 0..=p {
            let weight = pairing_integral(ctx, &unit(ctx, k), &unit(ctx, j), &norm)?
                / (ctx.q_factorial(k) * ctx.q_factorial(j));
            via_integral = &via_integral + &ket(k).matmul(&bra(j)).scale(&weight);
        }
    }

    let mut report = Report::new();
    report.push("resolution-direct", direct == rep.identity(), format!("p = {p}"));
    report.push(
        "resolution-integral",
        via_integral == rep.identity(),
        format!("p = {p}"),
    );
    report.push(
        "vacuum-term",
        ket(0).matmul(&bra(0)) == vacuum,
        "k = 0 term is |0⟩⟨0|",
    );
    Ok(report)
}

/// Checks the coherent-state properties ∂̂^k|θ̄⟩ = |θ̄⟩θ̄^k and
/// ⟨θ|θ̂^k = θ^k⟨θ| on (C^(p+1))^⊗3.
///
/// The first factor carries the state space, the other two a plane mode
/// (θ = 1 ⊗ θ ⊗ 1, θ̄ = 1 ⊗ g ⊗ θ). The hat operators are
/// θ̂ = θ ⊗ g^ξ ⊗ g^(-ξ) and ∂̂ = ∂ ⊗ g^(-ξ) ⊗ g^ξ, which satisfy the
/// hat/number commutation rules with parameter ξ.
pub fn coherent_state_check(ctx: &Arc<CycloContext>, xi: i64) -> Result<Report> {
    let p = ctx.p();
    let single = SingleModeRep::new(ctx, None)?;
    let one = single.identity();
    let theta_hat = single
        .theta
        .kron(&single.g_power(xi))
        .kron(&single.g_power(-xi));
    let partial_hat = single
        .partial
        .kron(&single.g_power(-xi))
        .kron(&single.g_power(xi));
    let theta = one.kron(&single.theta).kron(&one);
    let theta_bar = one.kron(&single.g).kron(&single.theta);
    let vacuum = ExactMatrix::from_entries(p + 1, [(0, 0, ctx.one())])
        .kron(&one)
        .kron(&one);

    let q_xi = ctx.q_pow(xi);
    let q_mxi = ctx.q_pow(-xi);
    let mut report = Report::new();
    let rules = [
        ("θ̂θ = q^ξ θθ̂", theta_hat.matmul(&theta) == theta.matmul(&theta_hat).scale(&q_xi)),
        ("∂̂θ = q^-ξ θ∂̂", partial_hat.matmul(&theta) == theta.matmul(&partial_hat).scale(&q_mxi)),
        ("θ̂θ̄ = q^-ξ θ̄θ̂", theta_hat.matmul(&theta_bar) == theta_bar.matmul(&theta_hat).scale(&q_mxi)),
        ("∂̂θ̄ = q^ξ θ̄∂̂", partial_hat.matmul(&theta_bar) == theta_bar.matmul(&partial_hat).scale(&q_xi)),
    ];
    let violations = rules
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| name.to_string())
        .collect();
    report.push_violations("hat-number-rules", violations);
    let id = one.kron(&one).kron(&one);
    report.push(
        "hat-oscillator",
        partial_hat.matmul(&theta_hat) == &id + &theta_hat.matmul(&partial_hat).scale(&ctx.q()),
        "∂̂θ̂ = 1 + qθ̂∂̂",
    );

    let mut ket = ExactMatrix::zeros(id.dim());
    let mut bra = ExactMatrix::zeros(id.dim());
    for k in 0..=p as u32 {
        let w = ctx.q_factorial(k as usize).inv();
        ket = &ket + &theta_hat.pow(k).matmul(&vacuum).matmul(&theta_bar.pow(k)).scale(&w);
        bra = &bra + &theta.pow(k).matmul(&vacuum).matmul(&partial_hat.pow(k)).scale(&w);
    }

    let mut ket_violations = Vec::new();
    let mut bra_violations = Vec::new();
    for k in 0..=p as u32 + 1 {
        if partial_hat.pow(k).matmul(&ket) != ket.matmul(&theta_bar.pow(k)) {
            ket_violations.push(format!("k = {k}"));
        }
        if bra.matmul(&theta_hat.pow(k)) != theta.pow(k).matmul(&bra) {
            bra_violations.push(format!("k = {k}"));
        }
    }
    report.push_violations("ket-eigenstate", ket_violations);
    report.push_violations("bra-eigenstate", bra_violations);
    report.push("ket-nonzero", !ket.is_zero(), format!("ξ = {xi}"));
    Ok(report)
}
