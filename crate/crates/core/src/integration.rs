//! Berezin integration over paragrassmann variables.
//!
//! Holomorphic functions g(θ) = Σ g_n θ^n are plain coefficient slices of
//! length at most p+1. Two-sided functions carry the weight of
//! f(θ, θ̄) = Σ f_nm θ^n θ̄^m / (n)_q! and live in [`CoeffMatrix`].

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multimode::{MultiModeRep, PGAlgebra, PGPolynomial, Symbol};
use crate::poly::QPoly;
use crate::qarith::{CycloContext, CycloElement, Field};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::ExactMatrix;

/// Coefficients f_nm of a two-sided function, indexed `[n][m]`.
#[derive(Clone, Debug)]
pub struct CoeffMatrix {
    ctx: Arc<CycloContext>,
    f: Vec<Vec<CycloElement>>,
}

impl CoeffMatrix {
    pub fn new(ctx: &Arc<CycloContext>, f: Vec<Vec<CycloElement>>) -> Result<Self> {
        let dim = ctx.p() + 1;
        if f.len() != dim {
            return Err(Error::WrongLength {
                expected: dim,
                got: f.len(),
            });
        }
        if let Some(row) = f.iter().find(|r| r.len() != dim) {
            return Err(Error::WrongLength {
                expected: dim,
                got: row.len(),
            });
        }
        Ok(CoeffMatrix { ctx: ctx.clone(), f })
    }

    pub fn from_fn(ctx: &Arc<CycloContext>, mut entry: impl FnMut(usize, usize) -> CycloElement) -> Self {
        let dim = ctx.p() + 1;
        let f = (0..dim)
            .map(|n| (0..dim).map(|m| entry(n, m)).collect())
            .collect();
        CoeffMatrix { ctx: ctx.clone(), f }
    }

    pub fn zeros(ctx: &Arc<CycloContext>) -> Self {
        Self::from_fn(ctx, |_, _| ctx.zero())
    }

    pub fn identity(ctx: &Arc<CycloContext>) -> Self {
        Self::from_fn(ctx, |n, m| if n == m { ctx.one() } else { ctx.zero() })
    }

    pub fn ctx(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn get(&self, n: usize, m: usize) -> &CycloElement {
        &self.f[n][m]
    }

    pub fn rows(&self) -> &[Vec<CycloElement>] {
        &self.f
    }

    pub fn matmul(&self, other: &CoeffMatrix) -> CoeffMatrix {
        let dim = self.f.len();
        Self::from_fn(&self.ctx, |i, j| {
            (0..dim).fold(self.ctx.zero(), |acc, k| acc + &self.f[i][k] * &other.f[k][j])
        })
    }

    /// Σ f_nm θ^n θ̄^m / (n)_q! with θ and θ̄ taken from the given symbols,
    /// which may belong to different modes.
    pub fn to_polynomial(
        &self,
        alg: &PGAlgebra<CycloElement>,
        theta: Symbol,
        theta_bar: Symbol,
    ) -> Result<PGPolynomial<CycloElement>> {
        let mut out = alg.zero();
        for (n, row) in self.f.iter().enumerate() {
            let left = alg.power_of(theta, n as u32)?;
            let weight = self.ctx.q_factorial(n).inv();
            for (m, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = alg.mul(&left, &alg.power_of(theta_bar, m as u32)?);
                out = out.add(&term.scale(&(c.clone() * weight.clone())));
            }
        }
        Ok(out)
    }
}

impl PartialEq for CoeffMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.f == other.f
    }
}

/// The constants of ∫dθ θ^p = x_p and ∫dθ̄ θ̄^p = x̄_p.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralNormalization {
    pub x_p: CycloElement,
    pub xbar_p: CycloElement,
}

impl IntegralNormalization {
    pub fn new(ctx: &Arc<CycloContext>, x_p: CycloElement, xbar_p: CycloElement) -> Result<Self> {
        let norm = IntegralNormalization { x_p, xbar_p };
        norm.validate(ctx)?;
        Ok(norm)
    }

    /// x_p = (p)_q!, x̄_p = 1.
    pub fn default_split(ctx: &Arc<CycloContext>) -> Self {
        IntegralNormalization {
            x_p: ctx.q_factorial(ctx.p()),
            xbar_p: ctx.one(),
        }
    }

    fn validate(&self, ctx: &Arc<CycloContext>) -> Result<()> {
        if self.x_p.clone() * self.xbar_p.clone() == ctx.q_factorial(ctx.p()) {
            Ok(())
        } else {
            Err(Error::BadNormalization)
        }
    }

    /// The value of ∫∫ dθ dθ̄ on the canonical block θ^p θ̄^p of one mode:
    /// θ^p θ̄^p = q^(-p²) θ̄^p θ^p, then x̄_p from the inner and x_p from the
    /// outer integral.
    pub fn mode_weight(&self, ctx: &Arc<CycloContext>) -> CycloElement {
        let p = ctx.p() as i64;
        ctx.q_pow(-p * p) * self.x_p.clone() * self.xbar_p.clone()
    }
}

fn check_length(ctx: &Arc<CycloContext>, coeffs: &[CycloElement]) -> Result<()> {
    if coeffs.len() > ctx.p() + 1 {
        return Err(Error::WrongLength {
            expected: ctx.p() + 1,
            got: coeffs.len(),
        });
    }
    Ok(())
}

/// ∫dθ g(θ) = x_p g_p.
pub fn berezin(ctx: &Arc<CycloContext>, g: &[CycloElement], norm: &IntegralNormalization) -> Result<CycloElement> {
    check_length(ctx, g)?;
    Ok(g.get(ctx.p())
        .map(|c| c.clone() * norm.x_p.clone())
        .unwrap_or_else(|| ctx.zero()))
}

/// ∫dθ̄ f(θ̄) = x̄_p f_p.
pub fn berezin_bar(ctx: &Arc<CycloContext>, f: &[CycloElement], norm: &IntegralNormalization) -> Result<CycloElement> {
    check_length(ctx, f)?;
    Ok(f.get(ctx.p())
        .map(|c| c.clone() * norm.xbar_p.clone())
        .unwrap_or_else(|| ctx.zero()))
}

/// ∂▷g = Σ (n)_q g_n θ^(n-1).
pub fn derivative(ctx: &Arc<CycloContext>, g: &[CycloElement]) -> Vec<CycloElement> {
    g.iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| ctx.q_number(n) * c.clone())
        .collect()
}

/// exp_q(-θθ̄) as coefficients: f_nn = (-1)^n q^(n(n-1)/2), from
/// (θθ̄)^n = q^(n(n-1)/2) θ^n θ̄^n.
pub fn measure(ctx: &Arc<CycloContext>) -> CoeffMatrix {
    CoeffMatrix::from_fn(ctx, |n, m| {
        if n != m {
            return ctx.zero();
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        ctx.q_pow((n * n.saturating_sub(1) / 2) as i64) * ctx.int(sign)
    })
}

/// Σ_n (-θθ̄)^n / (n)_q! for one mode, expanded by repeated multiplication.
pub fn measure_poly<S: Scalar>(
    alg: &PGAlgebra<S>,
    mode: usize,
    inv_factorials: &[S],
) -> Result<PGPolynomial<S>> {
    let pair = alg.mul(
        &alg.generator(Symbol::theta(mode))?,
        &alg.generator(Symbol::theta_bar(mode))?,
    );
    let minus_pair = pair.scale(&-S::one());
    let mut out = alg.zero();
    let mut power = alg.one();
    for w in inv_factorials {
        out = out.add(&power.scale(w));
        power = alg.mul(&power, &minus_pair);
    }
    Ok(out)
}

/// 1/(n)_q! for n = 0..=p.
pub fn inverse_factorials(ctx: &Arc<CycloContext>) -> Vec<CycloElement> {
    (0..=ctx.p()).map(|n| ctx.q_factorial(n).inv()).collect()
}

fn holomorphic<S: Scalar>(alg: &PGAlgebra<S>, symbol: Symbol, coeffs: &[S]) -> Result<PGPolynomial<S>> {
    let mut out = alg.zero();
    for (n, c) in coeffs.iter().enumerate() {
        out = out.add(&alg.power_of(symbol, n as u32)?.scale(c));
    }
    Ok(out)
}

/// ∫∫ dθ dθ̄ f(θ̄) g(θ) exp_q(-θθ̄), evaluated as the iterated integral
/// ∫dθ (∫dθ̄ …) after moving every θ̄ to the left of every θ.
pub fn pairing_integral(
    ctx: &Arc<CycloContext>,
    f: &[CycloElement],
    g: &[CycloElement],
    norm: &IntegralNormalization,
) -> Result<CycloElement> {
    check_length(ctx, f)?;
    check_length(ctx, g)?;
    norm.validate(ctx)?;
    let alg = PGAlgebra::exact(ctx, 1);
    let integrand = alg.product([
        &holomorphic(&alg, Symbol::theta_bar(0), f)?,
        &holomorphic(&alg, Symbol::theta(0), g)?,
        &measure_poly(&alg, 0, &inverse_factorials(ctx))?,
    ]);
    integrate_single(ctx, &integrand, norm)
}

/// ∫∫ dθ dθ̄ of a single-mode polynomial; each canonical θ^a θ̄^b becomes
/// q^(-ab) θ̄^b θ^a before the inner θ̄ integral.
pub fn integrate_single(
    ctx: &Arc<CycloContext>,
    poly: &PGPolynomial<CycloElement>,
    norm: &IntegralNormalization,
) -> Result<CycloElement> {
    let p = ctx.p();
    let mut total = ctx.zero();
    for (e, c) in poly.terms() {
        let (a, b) = (e[0] as usize, e[1] as usize);
        let phase = ctx.q_pow(-((a * b) as i64));
        let mut bar = vec![ctx.zero(); p + 1];
        bar[b] = c.clone() * phase;
        let inner = berezin_bar(ctx, &bar, norm)?;
        let mut outer = vec![ctx.zero(); p + 1];
        outer[a] = inner;
        total += berezin(ctx, &outer, norm)?;
    }
    Ok(total)
}

fn holomorphic_matrix(rep: &MultiModeRep, symbol: Symbol, coeffs: &[CycloElement]) -> ExactMatrix {
    holomorphic_matrix_from(&rep.identity(), rep.generator(symbol), coeffs)
}

fn measure_matrix(rep: &MultiModeRep) -> ExactMatrix {
    let ctx = rep.ctx();
    let pair = rep
        .generator(Symbol::theta(0))
        .matmul(rep.generator(Symbol::theta_bar(0)))
        .scale(&ctx.int(-1));
    holomorphic_matrix_from(&rep.identity(), &pair, &inverse_factorials(ctx))
}

fn holomorphic_matrix_from(identity: &ExactMatrix, x: &ExactMatrix, coeffs: &[CycloElement]) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(identity.dim());
    let mut power = identity.clone();
    for c in coeffs {
        out = &out + &power.scale(c);
        power = power.matmul(x);
    }
    out
}

/// (1/(p)_q!) ⟨0| ∂^p ∂̄^p F |0⟩ with F = f(θ̄) g(θ) μ realized on the
/// one-mode plane representation.
pub fn integral_via_derivatives(
    ctx: &Arc<CycloContext>,
    f: &[CycloElement],
    g: &[CycloElement],
) -> Result<CycloElement> {
    check_length(ctx, f)?;
    check_length(ctx, g)?;
    let rep = MultiModeRep::new(ctx, 1)?;
    let p = ctx.p() as u32;
    let integrand = holomorphic_matrix(&rep, Symbol::theta_bar(0), f)
        .matmul(&holomorphic_matrix(&rep, Symbol::theta(0), g))
        .matmul(&measure_matrix(&rep));
    let op = rep
        .generator(Symbol::partial(0))
        .pow(p)
        .matmul(&rep.generator(Symbol::partial_bar(0)).pow(p));
    Ok(op.matmul(&integrand).get(0, 0) / ctx.q_factorial(ctx.p()))
}

/// Reads a state F|0⟩ of the one-mode plane representation back as a
/// polynomial Σ c_ab θ^a θ̄^b.
fn state_to_polynomial(
    rep: &MultiModeRep,
    alg: &PGAlgebra<CycloElement>,
    op: &ExactMatrix,
) -> PGPolynomial<CycloElement> {
    let p = rep.ctx().p() as u32;
    let one = rep.ctx().one();
    let mut out = alg.zero();
    for a in 0..=p {
        for b in 0..=p {
            let basis = crate::multimode::monomial_matrix(rep, &[a, b], &one);
            // θ^a θ̄^b |0⟩ is a single basis vector with a nonzero weight.
            let (row, _, w) = basis
                .entries()
                .find(|(_, c, _)| *c == 0)
                .expect("monomial state is nonzero");
            let c = op.get(row, 0) / w.clone();
            out = out.add(&alg.monomial(vec![a, b], c));
        }
    }
    out
}

/// Both conditions ∫∫ f(θ̄) ∂▷(g(θ)μ) = 0 = ∫∫ ∂̄▷(f(θ̄)g(θ)μ).
pub fn derivative_conditions(
    ctx: &Arc<CycloContext>,
    f: &[CycloElement],
    g: &[CycloElement],
    norm: &IntegralNormalization,
) -> Result<Report> {
    let rep = MultiModeRep::new(ctx, 1)?;
    let alg = PGAlgebra::exact(ctx, 1);
    let fm = holomorphic_matrix(&rep, Symbol::theta_bar(0), f);
    let gm = holomorphic_matrix(&rep, Symbol::theta(0), g);
    let mu = measure_matrix(&rep);

    let d_g_mu = rep.generator(Symbol::partial(0)).matmul(&gm.matmul(&mu));
    let first = alg.mul(
        &holomorphic(&alg, Symbol::theta_bar(0), f)?,
        &state_to_polynomial(&rep, &alg, &d_g_mu),
    );
    let first = integrate_single(ctx, &first, norm)?;

    let d_all = rep
        .generator(Symbol::partial_bar(0))
        .matmul(&fm.matmul(&gm).matmul(&mu));
    let second = integrate_single(ctx, &state_to_polynomial(&rep, &alg, &d_all), norm)?;

    let mut report = Report::new();
    report.push("integral-of-partial", first.is_zero(), format!("{first}"));
    report.push("integral-of-partial-bar", second.is_zero(), format!("{second}"));
    Ok(report)
}

/// f³ = f¹ f² as coefficient matrices.
pub fn convolve(f1: &CoeffMatrix, f2: &CoeffMatrix) -> CoeffMatrix {
    f1.matmul(f2)
}

/// f³(θ₁, θ̄₃) = ∫∫ dθ₂ dθ̄₂ f¹(θ₁, θ̄₂) f²(θ₂, θ̄₃) μ(θ₂, θ̄₂), computed in the
/// three-mode engine.
pub fn convolve_via_integral(
    f1: &CoeffMatrix,
    f2: &CoeffMatrix,
    norm: &IntegralNormalization,
) -> Result<CoeffMatrix> {
    let ctx = f1.ctx();
    norm.validate(ctx)?;
    let alg = PGAlgebra::exact(ctx, 3);
    let integrand = alg.product([
        &f1.to_polynomial(&alg, Symbol::theta(0), Symbol::theta_bar(1))?,
        &f2.to_polynomial(&alg, Symbol::theta(1), Symbol::theta_bar(2))?,
        &measure_poly(&alg, 1, &inverse_factorials(ctx))?,
    ]);
    let reduced = alg.integrate_mode(&integrand, 1, &norm.mode_weight(ctx));
    let mut out = CoeffMatrix::zeros(ctx);
    for (e, c) in reduced.terms() {
        if e[1] != 0 || e[4] != 0 {
            return Err(Error::InvalidParameter(format!(
                "unexpected monomial {e:?} in the convolution"
            )));
        }
        let (n, m) = (e[0] as usize, e[5] as usize);
        out.f[n][m] = c.clone() * ctx.q_factorial(n);
    }
    Ok(out)
}

/// (p)_q! = (-1)^n q^(-n(n+1)/2) (n)_q! (p-n)_q! for every 0 <= n <= p.
pub fn factorial_identity_check(ctx: &Arc<CycloContext>) -> Report {
    let p = ctx.p();
    let lhs = ctx.q_factorial(p);
    let violations = (0..=p)
        .filter(|&n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let rhs = ctx.int(sign)
                * ctx.q_pow(-((n * (n + 1) / 2) as i64))
                * ctx.q_factorial(n)
                * ctx.q_factorial(p - n);
            rhs != lhs
        })
        .map(|n| format!("n = {n}"))
        .collect();
    let mut report = Report::new();
    report.push_violations("factorial-reflection", violations);
    report
}

/// Σ_k (θ̄^k/(k)_q!) θ^k paired as in ⟨0|∂^n θ^m|0⟩ = δ_nm (n)_q!, for every
/// n, m <= p.
pub fn pairing_table_check(ctx: &Arc<CycloContext>, norm: &IntegralNormalization) -> Result<Report> {
    let p = ctx.p();
    let mut violations = Vec::new();
    for n in 0..=p {
        for m in 0..=p {
            let got = pairing_integral(ctx, &unit(ctx, n), &unit(ctx, m), norm)?;
            let expected = if n == m { ctx.q_factorial(n) } else { ctx.zero() };
            if got != expected {
                violations.push(format!("n={n},m={m}: {got}"));
            }
        }
    }
    let mut report = Report::new();
    report.push_violations("pairing-table", violations);
    Ok(report)
}

/// The coefficient vector of θ^n.
pub fn unit(ctx: &Arc<CycloContext>, n: usize) -> Vec<CycloElement> {
    let mut v = vec![ctx.zero(); ctx.p() + 1];
    v[n] = ctx.one();
    v
}

/// Evaluates a polynomial in Q[q] at the context's q.
fn eval_at_q(ctx: &Arc<CycloContext>, poly: &QPoly) -> CycloElement {
    let q = ctx.q();
    poly.coeffs()
        .iter()
        .rev()
        .fold(ctx.zero(), |acc, c| acc * q.clone() + ctx.rational(c.clone()))
}

/// (n)_q! as a polynomial in an indeterminate q.
fn generic_factorial(n: usize) -> QPoly {
    (1..=n).fold(QPoly::one(), |acc, k| acc.mul(&QPoly::from_i64(&vec![1; k])))
}

/// Coefficient of A^k B^(n-k) in (A+B)^n when BA = qAB, as a polynomial in
/// q: each B standing before an A costs one q when the A moves left.
fn generic_word_coefficients(n: usize) -> Vec<QPoly> {
    let mut out = vec![QPoly::zero(); n + 1];
    for word in 0u32..(1 << n) {
        // bit set = A
        let mut inversions = 0;
        let mut bs_seen = 0;
        for pos in 0..n {
            if word & (1 << pos) != 0 {
                inversions += bs_seen;
            } else {
                bs_seen += 1;
            }
        }
        let k = word.count_ones() as usize;
        out[k] = out[k].add(&QPoly::monomial(inversions));
    }
    out
}

/// exp_q(θ₂) exp_q(θ₁) = exp_q(θ₂ + θ₁) with θ₁θ₂ = qθ₂θ₁.
///
/// θ₁ is realized as θ̄ and θ₂ as θ of one plane mode, since θ̄θ = qθθ̄. The
/// truncated series exp_q(z) = Σ_(n<=p) z^n/(n)_q! only sees total degree up
/// to p, where the two sides are compared directly. Above p, (θ₂+θ₁)^n/(n)_q!
/// is read as the generic-q expansion Σ_k [coefficient of θ₂^k θ₁^(n-k)] /
/// (n)_q!, reduced in Q(q) before specializing to the root of unity.
pub fn expq_addition_check(ctx: &Arc<CycloContext>) -> Result<Report> {
    let p = ctx.p();
    let alg = PGAlgebra::exact(ctx, 1);
    let inv = inverse_factorials(ctx);
    let t2 = alg.generator(Symbol::theta(0))?;
    let t1 = alg.generator(Symbol::theta_bar(0))?;
    let exp_of = |x: &PGPolynomial<CycloElement>| {
        (0..=p).fold(alg.zero(), |acc, n| acc.add(&alg.pow(x, n as u32).scale(&inv[n])))
    };
    let lhs = alg.mul(&exp_of(&t2), &exp_of(&t1));
    let sum = t2.add(&t1);
    let rhs_truncated = exp_of(&sum);

    let mut report = Report::new();
    let mut violations = Vec::new();
    for n in 0..=p as u32 {
        if lhs.homogeneous_part(n) != rhs_truncated.homogeneous_part(n) {
            violations.push(format!("degree {n}"));
        }
    }
    report.push_violations("truncated-series", violations);

    report.push(
        "sum-nilpotency",
        alg.pow(&sum, p as u32 + 1).is_zero(),
        "(θ₂+θ₁)^(p+1) = 0",
    );

    let mut violations = Vec::new();
    for n in 0..=2 * p {
        let fact = generic_factorial(n);
        let mut expected = alg.zero();
        for (k, coeff) in generic_word_coefficients(n).into_iter().enumerate() {
            if k > p || n - k > p {
                continue;
            }
            let common = coeff.gcd(&fact);
            let num = eval_at_q(ctx, &coeff.exact_div(&common));
            let den = eval_at_q(ctx, &fact.exact_div(&common));
            if den.is_zero() {
                violations.push(format!("degree {n}: singular coefficient for k = {k}"));
                continue;
            }
            expected = expected.add(&alg.monomial(vec![k as u32, (n - k) as u32], num / den));
        }
        if lhs.homogeneous_part(n as u32) != expected {
            violations.push(format!("degree {n}"));
        }
    }
    report.push_violations("generic-expansion", violations);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(ctx: &Arc<CycloContext>, v: &[i64]) -> Vec<CycloElement> {
        v.iter().map(|&k| ctx.int(k)).collect()
    }

    #[test]
    fn berezin_examples() {
        let ctx = CycloContext::new(2).unwrap();
        let norm = IntegralNormalization::default_split(&ctx);
        assert!(berezin(&ctx, &ints(&ctx, &[0, 1]), &norm).unwrap().is_zero());
        assert_eq!(berezin(&ctx, &ints(&ctx, &[0, 0, 1]), &norm).unwrap(), norm.x_p);
        let g = ints(&ctx, &[3, -1, 4]);
        assert!(berezin(&ctx, &derivative(&ctx, &g), &norm).unwrap().is_zero());
    }

    #[test]
    fn normalization_is_validated() {
        let ctx = CycloContext::new(2).unwrap();
        assert_eq!(
            IntegralNormalization::new(&ctx, ctx.one(), ctx.one()).unwrap_err(),
            Error::BadNormalization
        );
        let split = IntegralNormalization::new(&ctx, ctx.q(), ctx.q_factorial(2) / ctx.q());
        assert!(split.is_ok());
    }

    #[test]
    fn measure_examples() {
        let ctx = CycloContext::new(1).unwrap();
        let mu = measure(&ctx);
        assert_eq!(mu.get(0, 0), &ctx.one());
        assert_eq!(mu.get(1, 1), &ctx.int(-1));
        assert!(mu.get(0, 1).is_zero());
    }

    #[test]
    fn measure_matches_series() {
        for p in 1..=4 {
            let ctx = CycloContext::new(p).unwrap();
            let alg = PGAlgebra::exact(&ctx, 1);
            let closed = measure(&ctx)
                .to_polynomial(&alg, Symbol::theta(0), Symbol::theta_bar(0))
                .unwrap();
            let series = measure_poly(&alg, 0, &inverse_factorials(&ctx)).unwrap();
            assert_eq!(closed, series, "p = {p}");
        }
    }

    #[test]
    fn pairing_examples() {
        let ctx = CycloContext::new(2).unwrap();
        let norm = IntegralNormalization::default_split(&ctx);
        let pair = |n, m| pairing_integral(&ctx, &unit(&ctx, n), &unit(&ctx, m), &norm).unwrap();
        assert!(pair(1, 2).is_zero());
        assert_eq!(pair(2, 2), ctx.one() + ctx.q());
        assert_eq!(pair(0, 0), ctx.one());
        let rep = crate::SingleModeRep::new(&ctx, None).unwrap();
        assert_eq!(pair(2, 2), rep.vacuum_pairing(2, 2).unwrap());
    }

    #[test]
    fn pairing_table_and_split_independence() {
        for p in 1..=4 {
            let ctx = CycloContext::new(p).unwrap();
            let fact = ctx.q_factorial(p);
            let splits = [
                IntegralNormalization::default_split(&ctx),
                IntegralNormalization::new(&ctx, ctx.one(), fact.clone()).unwrap(),
                IntegralNormalization::new(&ctx, ctx.omega_pow(3), fact / ctx.omega_pow(3)).unwrap(),
            ];
            for norm in &splits {
                let report = pairing_table_check(&ctx, norm).unwrap();
                assert!(report.all_passed(), "p = {p}: {report:?}");
            }
        }
    }

    #[test]
    fn derivative_route_examples() {
        let ctx = CycloContext::new(1).unwrap();
        assert_eq!(
            integral_via_derivatives(&ctx, &unit(&ctx, 1), &unit(&ctx, 1)).unwrap(),
            ctx.one()
        );
        let ctx = CycloContext::new(2).unwrap();
        assert!(integral_via_derivatives(&ctx, &unit(&ctx, 2), &unit(&ctx, 1))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn derivative_route_matches_pairing_on_monomials() {
        for p in 1..=3 {
            let ctx = CycloContext::new(p).unwrap();
            let norm = IntegralNormalization::default_split(&ctx);
            for n in 0..=p {
                for m in 0..=p {
                    let (f, g) = (unit(&ctx, n), unit(&ctx, m));
                    assert_eq!(
                        integral_via_derivatives(&ctx, &f, &g).unwrap(),
                        pairing_integral(&ctx, &f, &g, &norm).unwrap(),
                        "p={p} n={n} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let ctx = CycloContext::new(2).unwrap();
        let norm = IntegralNormalization::default_split(&ctx);
        let f = CoeffMatrix::from_fn(&ctx, |n, m| ctx.int((n * 3 + m) as i64 - 2));
        let id = CoeffMatrix::identity(&ctx);
        assert_eq!(convolve(&f, &id), f);
        assert_eq!(convolve_via_integral(&f, &id, &norm).unwrap(), f);
        assert_eq!(convolve_via_integral(&id, &id, &norm).unwrap(), id);
    }

    #[test]
    fn factorial_identity() {
        for p in 1..=6 {
            let ctx = CycloContext::new(p).unwrap();
            assert!(factorial_identity_check(&ctx).all_passed());
        }
    }

    #[test]
    fn gaussian_binomials() {
        // (A+B)^3 = A^3 + (1+q+q²) A²B + (1+q+q²) AB² + B^3
        let c = generic_word_coefficients(3);
        assert_eq!(c[2], QPoly::from_i64(&[1, 1, 1]));
        assert_eq!(c[1], QPoly::from_i64(&[1, 1, 1]));
        assert_eq!(c[0], QPoly::one());
    }

    #[test]
    fn expq_addition() {
        for p in 1..=3 {
            let ctx = CycloContext::new(p).unwrap();
            let report = expq_addition_check(&ctx).unwrap();
            assert!(report.all_passed(), "p = {p}: {report:?}");
        }
    }

    fn small(ctx: &Arc<CycloContext>, raw: &[(i64, i64)]) -> Vec<CycloElement> {
        raw.iter()
            .map(|&(a, b)| ctx.int(a) + ctx.omega_pow(b))
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn routes_agree_on_random_functions(p in 1usize..=3,
                                            raw_f in proptest::collection::vec((-3i64..4, 0i64..16), 4),
                                            raw_g in proptest::collection::vec((-3i64..4, 0i64..16), 4)) {
            let ctx = CycloContext::new(p).unwrap();
            let norm = IntegralNormalization::default_split(&ctx);
            let f = small(&ctx, &raw_f[..=p]);
            let g = small(&ctx, &raw_g[..=p]);
            let direct = pairing_integral(&ctx, &f, &g, &norm).unwrap();
            prop_assert_eq!(integral_via_derivatives(&ctx, &f, &g).unwrap(), direct.clone());
            let expected = (0..=p).fold(ctx.zero(), |acc, n| acc + f[n].clone() * g[n].clone() * ctx.q_factorial(n));
            prop_assert_eq!(direct, expected);
            prop_assert!(derivative_conditions(&ctx, &f, &g, &norm).unwrap().all_passed());
        }

        #[test]
        fn convolution_routes_agree(p in 1usize..=2,
                                    raw in proptest::collection::vec((-2i64..3, 0i64..12), 18)) {
            let ctx = CycloContext::new(p).unwrap();
            let norm = IntegralNormalization::default_split(&ctx);
            let d = p + 1;
            let f1 = CoeffMatrix::from_fn(&ctx, |n, m| small(&ctx, &raw[n * d + m..n * d + m + 1])[0].clone());
            let f2 = CoeffMatrix::from_fn(&ctx, |n, m| small(&ctx, &raw[9 + n * d + m..9 + n * d + m + 1])[0].clone());
            prop_assert_eq!(convolve_via_integral(&f1, &f2, &norm).unwrap(), convolve(&f1, &f2));
        }

        #[test]
        fn convolution_is_associative(raw in proptest::collection::vec(-3i64..4, 27)) {
            let ctx = CycloContext::new(2).unwrap();
            let m = |k: usize| CoeffMatrix::from_fn(&ctx, |n, j| ctx.int(raw[9 * k + 3 * n + j]) + ctx.q_pow(raw[9 * k + 3 * n + j]));
            let (a, b, c) = (m(0), m(1), m(2));
            prop_assert_eq!(convolve(&convolve(&a, &b), &c), convolve(&a, &convolve(&b, &c)));
        }
    }
}
