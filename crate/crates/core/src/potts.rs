//! The closed Z_(p+1) Potts chain with Boltzmann factor x = e^K.
//!
//! Four independent evaluations of the partition function: the closed form,
//! the trace of the transfer matrix, the spin sum, and the 2N-fold
//! paragrassmann integral.

use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::integration::{inverse_factorials, measure_poly, IntegralNormalization};
use crate::matrix::OpMatrix;
use crate::multimode::{PGAlgebra, Symbol};
use crate::qarith::{CycloContext, CycloElement, Field};
use crate::report::Report;
use crate::scalar::{FieldScalar, Scalar};

/// Largest number of spin configurations the brute-force sum will visit.
pub const BRUTE_FORCE_CAP: u128 = 10_000_000;

/// Largest number of terms the symbolic integrand may hold at any point.
pub const DEFAULT_TERM_CAP: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct PottsInstance<S> {
    pub p: usize,
    pub sites: usize,
    pub x: S,
}

impl<S: Scalar> PottsInstance<S> {
    pub fn new(p: usize, sites: usize, x: S) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("p must be at least 1".into()));
        }
        if sites < 2 {
            return Err(Error::InvalidParameter("the chain needs at least 2 sites".into()));
        }
        Ok(PottsInstance { p, sites, x })
    }
}

/// t_0 = (p+x)/(p+1) and t_n = (x-1)/(p+1) for n >= 1.
pub fn transfer_coefficients<S: FieldScalar>(p: usize, x: &S) -> Vec<S> {
    let n = S::from_i64(p as i64 + 1);
    let t0 = (x.clone() + S::from_i64(p as i64)) / n.clone();
    let t1 = (x.clone() - S::one()) / n;
    std::iter::once(t0)
        .chain(std::iter::repeat_n(t1, p))
        .collect()
}

/// (x+p)^N + p (x-1)^N
pub fn z_closed<S: Scalar>(inst: &PottsInstance<S>) -> S {
    let p = S::from_i64(inst.p as i64);
    let n = inst.sites as u32;
    (inst.x.clone() + p.clone()).pow(n) + p * (inst.x.clone() - S::one()).pow(n)
}

/// V with x on the diagonal and 1 elsewhere.
pub fn transfer_matrix<S: Scalar>(p: usize, x: &S) -> OpMatrix<S> {
    OpMatrix::from_dense(
        (0..=p)
            .map(|i| {
                (0..=p)
                    .map(|j| if i == j { x.clone() } else { S::one() })
                    .collect()
            })
            .collect(),
    )
}

/// Tr V^N
pub fn z_transfer<S: Scalar>(inst: &PottsInstance<S>) -> S {
    let v = transfer_matrix(inst.p, &inst.x).pow(inst.sites as u32);
    v.diagonal_entries()
        .into_iter()
        .fold(S::zero(), |acc, d| acc + d)
}

/// Σ_σ x^(number of equal neighbouring pairs) over all periodic
/// configurations.
pub fn z_bruteforce<S: Scalar>(inst: &PottsInstance<S>) -> Result<S> {
    let states = inst.p + 1;
    let configs = (states as u128)
        .checked_pow(inst.sites as u32)
        .unwrap_or(u128::MAX);
    if configs > BRUTE_FORCE_CAP {
        return Err(Error::TooLarge {
            configs,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut histogram = vec![0u64; inst.sites + 1];
    let mut spins = vec![0usize; inst.sites];
    loop {
        let equal = (0..inst.sites)
            .filter(|&i| spins[i] == spins[(i + 1) % inst.sites])
            .count();
        histogram[equal] += 1;
        // odometer increment
        let mut k = 0;
        loop {
            if k == inst.sites {
                return Ok(histogram
                    .iter()
                    .enumerate()
                    .fold(S::zero(), |acc, (e, &count)| {
                        acc + S::from_i64(count as i64) * inst.x.pow(e as u32)
                    }));
            }
            spins[k] += 1;
            if spins[k] < states {
                break;
            }
            spins[k] = 0;
            k += 1;
        }
    }
}

/// The integrand and integral of the paragrassmann representation, with
/// site i carried by mode (i + shift) mod N.
///
/// For each m_N the integrand is
/// μ_1 ⋯ μ_N · (t/(m_N)_q!) θ̄_1^(m_N) · S_1 ⋯ S_(N-1) · θ_N^(m_N), with
/// S_i = Σ_m (t_m/(m)_q!) θ_i^m θ̄_(i+1)^m.
pub fn z_paragrassmann_with<S: Scalar>(
    alg: &PGAlgebra<S>,
    t: &[S],
    inv_factorials: &[S],
    weight: &S,
    shift: usize,
    term_cap: usize,
) -> Result<S> {
    let n = alg.modes();
    let p = alg.p();
    let mode = |site: usize| (site + shift) % n;
    let mut measures = Vec::with_capacity(n);
    for site in 0..n {
        measures.push(measure_poly(alg, mode(site), inv_factorials)?);
    }
    let mut links = Vec::with_capacity(n.saturating_sub(1));
    for site in 0..n - 1 {
        let mut link = alg.zero();
        for m in 0..=p {
            let term = alg.mul(
                &alg.power_of(Symbol::theta(mode(site)), m as u32)?,
                &alg.power_of(Symbol::theta_bar(mode(site + 1)), m as u32)?,
            );
            link = link.add(&term.scale(&(t[m].clone() * inv_factorials[m].clone())));
        }
        links.push(link);
    }

    let mut total = S::zero();
    for m in 0..=p {
        let head = alg
            .power_of(Symbol::theta_bar(mode(0)), m as u32)?
            .scale(&(t[m].clone() * inv_factorials[m].clone()));
        let tail = alg.power_of(Symbol::theta(mode(n - 1)), m as u32)?;
        let factors: Vec<_> = measures
            .iter()
            .cloned()
            .chain(std::iter::once(head))
            .chain(links.iter().cloned())
            .chain(std::iter::once(tail))
            .collect();
        let all: Vec<usize> = (0..n).collect();
        let reduced = alg.integrate_product(&factors, &all, weight, term_cap)?;
        total = total + reduced.coeff(&vec![0; 2 * n]);
    }
    Ok(S::from_i64(p as i64 + 1).pow(n as u32) * total)
}

/// Exact paragrassmann route for rational x.
pub fn z_paragrassmann(inst: &PottsInstance<BigRational>, shift: usize, term_cap: usize) -> Result<CycloElement> {
    let ctx = CycloContext::new(inst.p)?;
    let alg = PGAlgebra::exact(&ctx, inst.sites);
    let x = ctx.rational(inst.x.clone());
    let t = transfer_coefficients(inst.p, &x);
    let weight = IntegralNormalization::default_split(&ctx).mode_weight(&ctx);
    z_paragrassmann_with(&alg, &t, &inverse_factorials(&ctx), &weight, shift, term_cap)
}

/// Paragrassmann route in complex floats, for real x.
pub fn z_paragrassmann_embedded(inst: &PottsInstance<f64>, shift: usize, term_cap: usize) -> Result<Complex64> {
    let ctx = CycloContext::new(inst.p)?;
    let alg = PGAlgebra::embedded(&ctx, inst.sites);
    let t = transfer_coefficients(inst.p, &Complex64::new(inst.x, 0.0));
    let inv: Vec<_> = inverse_factorials(&ctx).iter().map(|c| ctx.embed(c)).collect();
    let weight = ctx.embed(&IntegralNormalization::default_split(&ctx).mode_weight(&ctx));
    z_paragrassmann_with(&alg, &t, &inv, &weight, shift, term_cap)
}

/// δ(σ, σ') = (1/(p+1)) Σ_m q^(m(σ-σ')) and Σ_σ q^(kσ) = (p+1) δ_(k,0).
pub fn delta_expansion_check(ctx: &Arc<CycloContext>) -> Report {
    let p = ctx.p() as i64;
    let mut report = Report::new();
    let mut violations = Vec::new();
    for s in 0..=p {
        for s2 in 0..=p {
            let sum = (0..=p).fold(ctx.zero(), |acc, m| acc + ctx.q_pow(m * (s - s2)));
            let expected = if s == s2 { ctx.int(p + 1) } else { ctx.zero() };
            if sum != expected {
                violations.push(format!("σ={s},σ'={s2}"));
            }
        }
    }
    report.push_violations("delta-expansion", violations);
    let violations = (0..=p)
        .filter(|&k| {
            let sum = (0..=p).fold(ctx.zero(), |acc, s| acc + ctx.q_pow(k * s));
            sum != if k == 0 { ctx.int(p + 1) } else { ctx.zero() }
        })
        .map(|k| format!("k={k}"))
        .collect();
    report.push_violations("root-sum", violations);
    report
}

/// The all-ones vector has eigenvalue x+p and each e_0 - e_k has x-1.
pub fn eigenvector_check<S: Scalar>(p: usize, x: &S) -> Report {
    let v = transfer_matrix(p, x);
    let apply = |vec: &[S]| -> Vec<S> {
        (0..=p)
            .map(|i| (0..=p).fold(S::zero(), |acc, j| acc + v.get(i, j) * vec[j].clone()))
            .collect()
    };
    let scale = |vec: &[S], c: &S| -> Vec<S> { vec.iter().map(|a| a.clone() * c.clone()).collect() };
    let mut report = Report::new();
    let ones = vec![S::one(); p + 1];
    let top = x.clone() + S::from_i64(p as i64);
    report.push("eigen-x-plus-p", apply(&ones) == scale(&ones, &top), "V·1 = (x+p)·1");
    let low = x.clone() - S::one();
    let violations = (1..=p)
        .filter(|&k| {
            let mut e = vec![S::zero(); p + 1];
            e[0] = S::one();
            e[k] = -S::one();
            apply(&e) != scale(&e, &low)
        })
        .map(|k| format!("k={k}"))
        .collect();
    report.push_violations("eigen-x-minus-1", violations);
    report
}

/// Values of the four routes; `paragrassmann` is exact and real for
/// rational x.
#[derive(Clone, Debug, PartialEq)]
pub struct FourRoutes {
    pub closed: BigRational,
    pub transfer: BigRational,
    pub bruteforce: BigRational,
    pub paragrassmann: CycloElement,
}

impl FourRoutes {
    pub fn agree(&self) -> bool {
        self.closed == self.transfer
            && self.closed == self.bruteforce
            && self.paragrassmann.to_rational().as_ref() == Some(&self.closed)
    }
}

pub fn four_routes(inst: &PottsInstance<BigRational>) -> Result<FourRoutes> {
    Ok(FourRoutes {
        closed: z_closed(inst),
        transfer: z_transfer(inst),
        bruteforce: z_bruteforce(inst)?,
        paragrassmann: z_paragrassmann(inst, 0, DEFAULT_TERM_CAP)?,
    })
}

/// (p+1)^N Σ_m t_m^N, the middle expression of the closed form.
pub fn z_from_coefficients<S: FieldScalar>(inst: &PottsInstance<S>) -> S {
    let n = inst.sites as u32;
    let sum = transfer_coefficients(inst.p, &inst.x)
        .iter()
        .fold(S::zero(), |acc, t| acc + t.pow(n));
    S::from_i64(inst.p as i64 + 1).pow(n) * sum
}

/// Relative difference helper for the float routes.
pub fn relative_error(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale.is_zero() {
        0.0
    } else {
        (a - b).norm() / scale
    }
}
